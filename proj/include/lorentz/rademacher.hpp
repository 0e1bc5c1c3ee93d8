#pragma once

#include <cstdint>

#include "lorentz/stepfun.hpp"

namespace lorentz {

// i-th Rademacher step function at the given dyadic level: 2^i alternating
// blocks of +-1 starting with +1; block j of R_i has length 2^{level-i}.
// Requires 1 <= i <= level.
DyadicStep rademacher_fn(int i, int level);

// Discrete Rademacher sequence r_{i,n}: the same +-1 pattern as entries
// 1..2^n of a Seq.  Requires 1 <= i <= n <= 22.
Seq rademacher_seq(int i, int n);

// Coefficients of sum_i a(i) R_i at level N = a.size() (2^N values).
Eigen::ArrayXd rademacher_sum(const Eigen::VectorXd& a);

enum class KhMethod { exhaustive_signs, seeded_search };

// Empirical size of the constants in
//   (1/C_low) ||a||_2 <= || sum a_i R_i ||_{L^{p,q}} <= C_up ||a||_2.
// c_low_witness = max ||a||_2 / ||F||, c_up_witness = max ||F|| / ||a||_2
// over the searched candidate set (always includes the axis vectors).
struct KhintchineEstimate {
  double p, q;             // q may be inf
  int dim;                 // N: number of Rademacher functions
  double c_low_witness;
  double c_up_witness;
  KhMethod method;
  std::uint64_t seed;
  int budget;
};

// exhaustive_signs: all sign vectors a in {+-1}^N (2^{N-1} up to symmetry)
// plus axis vectors; requires N <= 20, budget ignored.  seeded_search:
// coordinate-wise golden-section ascent from `budget` random restarts.
KhintchineEstimate khintchine_estimate(double p, double q, int N, KhMethod method,
                                       std::uint64_t seed = 1, int budget = 32);

// Evaluates both ratios at a specific coefficient vector (dim <= est.dim) and
// raises the witnesses if it beats them.
void absorb_candidate(KhintchineEstimate& est, const Eigen::VectorXd& a);

}  // namespace lorentz
