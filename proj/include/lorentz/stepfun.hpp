#pragma once

#include "lorentz/exponents.hpp"
#include "lorentz/seq.hpp"

namespace lorentz {

// Dyadic step function on [0,1]: constant a_i on ((i-1)/2^n, i/2^n] for
// i = 1..2^n.  The default level cap keeps coefficient arrays at <= 2^20.
class DyadicStep {
 public:
  static constexpr int kDefaultMaxLevel = 20;

  DyadicStep(int level, Eigen::ArrayXd coeffs, int max_level = kDefaultMaxLevel);

  // Step function with a_i = a(i): requires supp(a) within {1..2^n}.
  static DyadicStep from_seq(const Seq& a, int level, int max_level = kDefaultMaxLevel);

  int level() const { return level_; }
  const Eigen::ArrayXd& coeffs() const { return coeffs_; }

 private:
  int level_;
  Eigen::ArrayXd coeffs_;
};

// L^{p,q} norm for q < inf, via the exact antiderivative on each flat piece of
// the decreasing rearrangement:
//   ||A||^q = (p/q) 2^{-nq/p} sum_i (a*_i)^q (i^{q/p} - (i-1)^{q/p}).
// No quadrature is involved.
double fn_norm(const DyadicStep& A, const Exponents& e);

// L^{p,inf} norm: max_i (i/2^n)^{1/p} a*_i.
double fn_norm_inf(const DyadicStep& A, double p);

struct TransferReport {
  double seq_norm;        // ||a||_{p,q}
  double scaled_fn_norm;  // 2^{n/p} ||A||_{L^{p,q}}
  double lower_const;     // min{(p/q)^{1/q}, 2^{1/q-1/p}, 1}
  double upper_const;     // max{(p/q)^{1/q}, 2^{1/q-1/p}, 1}
  bool lower_ok;          // lower_const * seq_norm <= scaled_fn_norm (with slack)
  bool upper_ok;          // scaled_fn_norm <= upper_const * seq_norm (with slack)
  double lower_slack;     // (scaled_fn_norm - lower_const*seq_norm) / scale
  double upper_slack;     // (upper_const*seq_norm - scaled_fn_norm) / scale
};

// Two-sided transfer between the sequence norm of a and the function norm of
// its dyadic step function at the given level:
//   min{C_1, C_2, 1} ||a||_{p,q} <= 2^{n/p} ||A||_{L^{p,q}} <= max{C_1, C_2, 1} ||a||_{p,q}
// with C_1 = (p/q)^{1/q}, C_2 = 2^{1/q-1/p}.  For q >= p both constants are
// <= 1 and this is the familiar bracket min{C_1,C_2} ||a|| <= ... <= ||a||.
//
// Conformance note.  The unqualified upper bound 2^{n/p}||A|| <= ||a|| fails
// for q < p, where t^{q/p-1} is decreasing and the endpoint comparison under
// the integral reverses: a = (4,1,2,3) with p=2, q=1 has
// 2^{n/p}||A|| = 12.29... > 7.77... = ||a||.  The bracket above is the version
// that holds for all 0 < p, q < inf (per-interval mean value of t^{q/p-1}).
// Slack is relative to the magnitude of the compared quantities.
TransferReport transfer_check(const Seq& a, int level, const Exponents& e);

}  // namespace lorentz
