#pragma once

#include "tcfwm/basis.hpp"
#include "tcfwm/common.hpp"
#include "tcfwm/config.hpp"
#include "tcfwm/detuning.hpp"
#include "tcfwm/hamiltonian.hpp"
#include "tcfwm/io.hpp"
#include "tcfwm/lm.hpp"
#include "tcfwm/operators.hpp"
#include "tcfwm/oracle.hpp"
#include "tcfwm/params.hpp"
#include "tcfwm/plfit.hpp"
#include "tcfwm/pulses.hpp"
#include "tcfwm/response.hpp"
#include "tcfwm/signal.hpp"
#include "tcfwm/spectrum.hpp"
#include "tcfwm/superoperator.hpp"
