#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace lorentz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Exponent pair (p, q) for the sequence quasi-norm
//   ||u||_{p,q} = (sum_j j^{q/p-1} u*(j)^q)^{1/q}     (q < inf)
//   ||u||_{p,inf} = sup_j j^{1/p} u*(j)
// p must be finite and positive; q positive, possibly infinite.
struct Exponents {
  double p;
  double q;

  Exponents(double p_, double q_) : p(p_), q(q_) {
    if (!(p > 0.0) || p == kInf)
      throw std::invalid_argument("Exponents: p must be finite and > 0, got " + std::to_string(p));
    if (!(q > 0.0))
      throw std::invalid_argument("Exponents: q must be > 0, got " + std::to_string(q));
  }

  bool q_finite() const { return q != kInf; }
};

}  // namespace lorentz
