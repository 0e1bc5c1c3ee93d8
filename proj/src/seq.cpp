#include "lorentz/seq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lorentz {

namespace {
Index last_nonzero(const Eigen::ArrayXd& v) {
  Index n = v.size();
  while (n > 0 && v[n - 1] == 0.0) --n;
  return n;
}
}  // namespace

Seq::Seq(Eigen::ArrayXd values) {
  for (Index i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]))
      throw std::invalid_argument("Seq: entries must be finite");
  values.conservativeResize(last_nonzero(values));
  values_ = std::move(values);
}

Seq::Seq(const std::vector<double>& values)
    : Seq(Eigen::Map<const Eigen::ArrayXd>(values.data(), static_cast<Index>(values.size()))) {}

Seq Seq::unit(Index i) {
  if (i < 1) throw std::domain_error("Seq::unit: index must be >= 1");
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(i);
  v[i - 1] = 1.0;
  return Seq(std::move(v));
}

Seq Seq::ones(Index n) {
  if (n < 0) throw std::domain_error("Seq::ones: length must be >= 0");
  return Seq(Eigen::ArrayXd::Ones(n));
}

Seq Seq::flat_block(Index first, Index len, double value) {
  if (first < 1) throw std::domain_error("Seq::flat_block: first must be >= 1");
  if (len < 0) throw std::domain_error("Seq::flat_block: len must be >= 0");
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(first - 1 + len);
  v.segment(first - 1, len) = value;
  return Seq(std::move(v));
}

double Seq::coeff(Index i) const {
  if (i < 1) throw std::domain_error("Seq::coeff: index must be >= 1");
  return i <= values_.size() ? values_[i - 1] : 0.0;
}

std::vector<Index> Seq::support() const {
  std::vector<Index> s;
  for (Index i = 0; i < values_.size(); ++i)
    if (values_[i] != 0.0) s.push_back(i + 1);
  return s;
}

Index Seq::support_size() const {
  return (values_ != 0.0).count();
}

Index Seq::support_min() const {
  for (Index i = 0; i < values_.size(); ++i)
    if (values_[i] != 0.0) return i + 1;
  return 0;
}

Seq operator+(const Seq& a, const Seq& b) {
  Index n = std::max(a.values_.size(), b.values_.size());
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(n);
  v.head(a.values_.size()) = a.values_;
  v.head(b.values_.size()) += b.values_;
  return Seq(std::move(v));
}

Seq operator*(double c, const Seq& a) {
  if (!std::isfinite(c)) throw std::invalid_argument("Seq scaling: factor must be finite");
  return Seq(Eigen::ArrayXd(c * a.values_));
}

bool operator==(const Seq& a, const Seq& b) {
  if (a.values_.size() != b.values_.size()) return false;
  return (a.values_ == b.values_).all();
}

Index distribution(const Seq& u, double lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("distribution: lambda must be > 0");
  return (u.values().abs() > lambda).count();
}

Seq rearrange(const Seq& u) {
  std::vector<double> m;
  m.reserve(u.length());
  const auto& v = u.values();
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) m.push_back(std::abs(v[i]));
  std::sort(m.begin(), m.end(), std::greater<double>());
  return Seq(m);
}

Seq rearrange_on_support(const Seq& u) {
  Seq sorted = rearrange(u);
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(u.length());
  Index pos = 0;
  const auto& v = u.values();
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) out[i] = sorted.values()[pos++];
  return Seq(std::move(out));
}

Seq project_head(const Seq& u, Index m) {
  if (m < 0) throw std::domain_error("project_head: m must be >= 0");
  Index keep = std::min(m, u.length());
  return Seq(Eigen::ArrayXd(u.values().head(keep)));
}

Seq project_tail(const Seq& u, Index m) {
  if (m < 0) throw std::domain_error("project_tail: m must be >= 0");
  if (m >= u.length()) return Seq();
  Eigen::ArrayXd v = u.values();
  v.head(m) = 0.0;
  return Seq(std::move(v));
}

}  // namespace lorentz
