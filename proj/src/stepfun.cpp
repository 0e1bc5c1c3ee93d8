#include "lorentz/stepfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "lorentz/norms.hpp"

namespace lorentz {

DyadicStep::DyadicStep(int level, Eigen::ArrayXd coeffs, int max_level) : level_(level) {
  if (level < 0) throw std::domain_error("DyadicStep: level must be >= 0");
  if (level > max_level)
    throw std::domain_error("DyadicStep: level " + std::to_string(level) +
                            " exceeds cap " + std::to_string(max_level));
  const Index n = Index(1) << level;
  if (coeffs.size() != n)
    throw std::invalid_argument("DyadicStep: expected 2^level coefficients");
  for (Index i = 0; i < n; ++i)
    if (!std::isfinite(coeffs[i]))
      throw std::invalid_argument("DyadicStep: coefficients must be finite");
  coeffs_ = std::move(coeffs);
}

DyadicStep DyadicStep::from_seq(const Seq& a, int level, int max_level) {
  if (level < 0 || level > max_level)
    throw std::domain_error("DyadicStep::from_seq: level out of range");
  const Index n = Index(1) << level;
  if (a.length() > n)
    throw std::domain_error("DyadicStep::from_seq: support exceeds {1..2^level}");
  Eigen::ArrayXd c = Eigen::ArrayXd::Zero(n);
  c.head(a.length()) = a.values();
  return DyadicStep(level, std::move(c), max_level);
}

namespace {

// i^e - (i-1)^e for e > 0, stable for large i
double pow_gap(Index i, double e) {
  if (i == 1) return 1.0;
  double x = static_cast<double>(i);
  return -std::pow(x, e) * std::expm1(e * std::log1p(-1.0 / x));
}

std::vector<double> sorted_abs(const Eigen::ArrayXd& c) {
  std::vector<double> m(c.size());
  for (Index i = 0; i < c.size(); ++i) m[i] = std::abs(c[i]);
  std::sort(m.begin(), m.end(), std::greater<double>());
  return m;
}

}  // namespace

double fn_norm(const DyadicStep& A, const Exponents& e) {
  if (!e.q_finite()) throw std::domain_error("fn_norm: requires q < inf (use fn_norm_inf)");
  const std::vector<double> m = sorted_abs(A.coeffs());
  const double ratio = e.q / e.p;
  long double acc = 0.0L;
  for (Index i = static_cast<Index>(m.size()); i >= 1; --i) {
    if (m[i - 1] == 0.0) continue;
    acc += static_cast<long double>(std::pow(m[i - 1], e.q)) *
           static_cast<long double>(pow_gap(i, ratio));
  }
  double sum = static_cast<double>(acc) * (e.p / e.q);
  return std::pow(sum, 1.0 / e.q) * std::pow(2.0, -A.level() / e.p);
}

double fn_norm_inf(const DyadicStep& A, double p) {
  if (!(p > 0.0) || p == kInf) throw std::domain_error("fn_norm_inf: p must be finite and > 0");
  const std::vector<double> m = sorted_abs(A.coeffs());
  const double scale = std::pow(2.0, -static_cast<double>(A.level()));
  double best = 0.0;
  for (Index i = 1; i <= static_cast<Index>(m.size()); ++i) {
    if (m[i - 1] == 0.0) continue;
    best = std::max(best, std::pow(static_cast<double>(i) * scale, 1.0 / p) * m[i - 1]);
  }
  return best;
}

TransferReport transfer_check(const Seq& a, int level, const Exponents& e) {
  if (!e.q_finite()) throw std::domain_error("transfer_check: requires q < inf");
  DyadicStep A = DyadicStep::from_seq(a, level);
  TransferReport r;
  r.seq_norm = quasi_norm(a, e);
  r.scaled_fn_norm = std::pow(2.0, level / e.p) * fn_norm(A, e);
  const double c1 = std::pow(e.p / e.q, 1.0 / e.q);
  const double c2 = std::pow(2.0, 1.0 / e.q - 1.0 / e.p);
  r.lower_const = std::min({c1, c2, 1.0});
  r.upper_const = std::max({c1, c2, 1.0});
  const double lower = r.lower_const * r.seq_norm;
  const double upper = r.upper_const * r.seq_norm;
  const double scale_lo = std::max({1.0, lower, r.scaled_fn_norm});
  const double scale_up = std::max({1.0, upper, r.scaled_fn_norm});
  r.lower_slack = (r.scaled_fn_norm - lower) / scale_lo;
  r.upper_slack = (upper - r.scaled_fn_norm) / scale_up;
  r.lower_ok = r.lower_slack >= -1e-12;
  r.upper_ok = r.upper_slack >= -1e-12;
  return r;
}

}  // namespace lorentz
