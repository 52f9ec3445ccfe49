#pragma once

#include <vector>

#include "tcfwm/common.hpp"

namespace tcfwm {

// One exciton-photon product state |n_x1,...,n_xN; n_c>.
struct BasisState {
  std::vector<int> n_x;  // 0 or 1 each
  int n_c = 0;           // 0, 1 or 2

  int excitons() const {
    int s = 0;
    for (int v : n_x) s += v;
    return s;
  }
  int rung() const { return excitons() + n_c; }

  bool operator==(const BasisState& other) const = default;
};

// Product basis truncated at two total excitations (ground state, first rung,
// second rung), in the fixed order: ground; photon, excitons; two-photon,
// photon+exciton, exciton pairs (lexicographic).
struct LadderBasis {
  int n_emitters = 0;
  std::vector<BasisState> states;

  int n1() const { return 1 + n_emitters; }
  int n2() const { return 1 + n_emitters * (n_emitters + 1) / 2; }
  int dim() const { return static_cast<int>(states.size()); }

  // Number of ground<->rung1 plus rung1<->rung2 transitions.
  int n_transitions() const { return n1() * (1 + n2()); }

  // First basis index of a rung: ground = 0, rung1 starts at 1,
  // rung2 starts at 1 + n1().
  int rung_offset(int rung) const {
    if (rung == 0) return 0;
    if (rung == 1) return 1;
    return 1 + n1();
  }

  int index_of(const BasisState& s) const {
    for (int i = 0; i < dim(); ++i)
      if (states[static_cast<std::size_t>(i)] == s) return i;
    return -1;
  }
};

inline LadderBasis build_basis(int n_emitters) {
  if (n_emitters < 1) throw ConfigError("build_basis: N must be >= 1");
  const auto n = static_cast<std::size_t>(n_emitters);
  LadderBasis basis;
  basis.n_emitters = n_emitters;
  auto add = [&](std::vector<int> nx, int nc) {
    basis.states.push_back(BasisState{std::move(nx), nc});
  };
  // Ground state.
  add(std::vector<int>(n, 0), 0);
  // First rung: photon, then single excitons in index order.
  add(std::vector<int>(n, 0), 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> nx(n, 0);
    nx[i] = 1;
    add(std::move(nx), 0);
  }
  // Second rung: two photons, photon + exciton, exciton pairs.
  add(std::vector<int>(n, 0), 2);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> nx(n, 0);
    nx[i] = 1;
    add(std::move(nx), 1);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<int> nx(n, 0);
      nx[i] = 1;
      nx[j] = 1;
      add(std::move(nx), 0);
    }
  }
  return basis;
}

}  // namespace tcfwm
