#pragma once

#include <cstdint>
#include <vector>

#include "lorentz/rademacher.hpp"

namespace lorentz {

// Finite-dimensional subspace given by explicit basis sequences.
struct SubspaceBasis {
  std::vector<Seq> vectors;

  // {r_{1,n}, ..., r_{n,n}}: the Rademacher subspace of dimension n
  static SubspaceBasis rademacher(int n);

  int dim() const { return static_cast<int>(vectors.size()); }
  // Coefficient matrix on {1..max length}, one column per basis vector.
  Eigen::MatrixXd matrix() const;
  // Throws std::invalid_argument unless the rank at tolerance 1e-10 is dim().
  void validate_independent() const;
};

struct OptimConfig {
  std::uint64_t seed = 42;
  int restarts = 64;
  int max_iters = 400;
};

struct WidthReport {
  int n;
  double value;             // min over the unit coefficient sphere
  Eigen::VectorXd argmin;   // normalized, first nonzero component positive
  double alpha_bound;       // NaN unless attached by bernstein_lower_curve
  std::uint64_t seed;
  int restarts;
  long evals;
};

// min over coefficient vectors a != 0 of
//   || sum_i a_i v_i ||_{p,r} / || sum_i a_i v_i ||_{p,q}
// via multi-start simplex descent; deterministic for fixed inputs (restart
// results are merged by (value, restart index)).  Requires q < r.
WidthReport min_ratio_on_subspace(const SubspaceBasis& basis, double p, double q,
                                  double r, const OptimConfig& config);

// alpha = L(p,q) / (U(p,r) C_q C_r) with
//   L(p,q) = min{(p/q)^{1/q}, 2^{1/q-1/p}, 1}   (transfer lower constant),
//   U(p,r) = max{(p/r)^{1/r}, 2^{1/r-1/p}, 1}   (transfer upper constant;
//            1 when r = inf, where 2^{n/p}||A||_{p,inf} = ||a||_{p,inf} exactly),
// and C_s the two-sided Khintchine witness max(c_low, c_up) for exponents
// (p, s).  Validates that the estimates carry exponents (p,q) and (p,r).
double alpha_bound(double p, double q, double r,
                   const KhintchineEstimate& kh_q, const KhintchineEstimate& kh_r);

struct BernsteinCurve {
  std::vector<WidthReport> reports;
  KhintchineEstimate kh_q, kh_r;
  double alpha;
};

// Width lower-bound curve over the Rademacher subspaces n = 1..n_max.  The
// session Khintchine witnesses (exhaustive signs at dimension n_max) absorb
// every width argmin before alpha is computed, so value >= alpha holds by the
// transfer chain for each n.
BernsteinCurve bernstein_lower_curve(int n_max, double p, double q, double r,
                                     const OptimConfig& config);

}  // namespace lorentz
