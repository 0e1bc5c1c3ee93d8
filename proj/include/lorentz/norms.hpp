#pragma once

#include <cstdint>
#include <vector>

#include "lorentz/exponents.hpp"
#include "lorentz/seq.hpp"

namespace lorentz {

// j^s computed as exp(s ln j); j = 1 returns exactly 1.
double power_weight(Index j, double s);

// ||u||_{p,q} = (sum_j j^{q/p-1} u*(j)^q)^{1/q} for q < inf,
// sup_j j^{1/p} u*(j) for q = inf.  Zero sequence -> 0.
// Summation runs over descending j in an extended-precision accumulator.
double quasi_norm(const Seq& u, const Exponents& e);

// Same norm on a raw coefficient array (moduli taken, zeros skipped); the
// array is interpreted as entries 1..size.
double quasi_norm_raw(const Eigen::ArrayXd& values, const Exponents& e);

// (sum_{j<=n} j^{q/p-1}) / ((p/q) n^{q/p}).  Tends to 1 as n -> inf.
// Requires q < inf and n >= 1.
double partial_sum_ratio(Index n, const Exponents& e);

// Smallest documented C with n^{1/p} u*(n) <= C ||u||_{p,q} delivered here:
//   C(p,q) = max(1, (q/p)^{1/q})   for q < inf   (1 for q = inf).
// q >= p: sum_{j<=n} j^{q/p-1} >= integral_0^n t^{q/p-1} dt = (p/q) n^{q/p}.
// q <  p: every term of the sum is >= n^{q/p-1}, so the sum is >= n^{q/p}.
double weak_type_constant(const Exponents& e);

// Analytic bound D with ||u||_{p,r} <= D ||u||_{p,q} for q < r:
//   D = C(p,q)^{1 - q/r}  (r < inf),   D = C(p,q)  (r = inf),
// from ||u||_{p,r}^r <= ||u||_{p,inf}^{r-q} ||u||_{p,q}^q.
double embedding_bound(double p, double q, double r);

struct QuasiConstant {
  double value;            // constant T with ||u+v|| <= T (||u|| + ||v||)
  bool analytic;           // true: proved bound; false: empirical witness max
  std::uint64_t seed;      // witness search seed (0 for analytic)
  int trials;              // witness search trials (0 for analytic)
};

// Analytic quasi-triangle constant from the odd/even split
// (u+v)*(m) <= u*(ceil(m/2)) + v*(floor(m/2)) for m >= 2:
//   T(p,q)   = [3 max(1,2^{q-1}) max(1,3^{q/p-1})]^{1/q} max(1,2^{1/q-1})
//   T(p,inf) = 3^{1/p}
QuasiConstant quasi_triangle_constant(const Exponents& e);

// Largest ||u+v|| / (||u|| + ||v||) found over seeded random and structured
// pairs.  Never exceeds the analytic constant.
QuasiConstant quasi_triangle_witness(const Exponents& e, std::uint64_t seed, int trials);

struct EmbeddingConstant {
  double p, q, r;
  double d_lower;          // best witness ratio ||a||_{p,r->} ... >= 1 for q < r
  Seq witness;
  std::uint64_t seed;
  int budget;
};

// Lower witness for the embedding constant: max ||a||_{p,r} / ||a||_{p,q} over
// e_1, flat, geometric and seeded random candidates.  Candidates are visited
// in a fixed order, so d_lower is nondecreasing in budget for a fixed seed.
// Requires 0 < q < r <= inf.
EmbeddingConstant estimate_embedding_norm(double p, double q, double r,
                                          int budget, std::uint64_t seed);

// ||R_n u||_{p,q} for each cutoff n.  Requires q < inf; cutoffs >= 0.
std::vector<double> tail_norm_profile(const Seq& u, const Exponents& e,
                                      const std::vector<Index>& cutoffs);

}  // namespace lorentz
