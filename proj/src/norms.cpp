#include "lorentz/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lorentz/rng.hpp"

namespace lorentz {

double power_weight(Index j, double s) {
  if (j < 1) throw std::domain_error("power_weight: j must be >= 1");
  if (j == 1) return 1.0;
  return std::exp(s * std::log(static_cast<double>(j)));
}

namespace {

// norm of already-sorted descending moduli (no zeros)
double norm_of_sorted(const std::vector<double>& m, const Exponents& e) {
  if (m.empty()) return 0.0;
  const Index n = static_cast<Index>(m.size());
  if (!e.q_finite()) {
    double best = 0.0;
    for (Index j = n; j >= 1; --j)
      best = std::max(best, power_weight(j, 1.0 / e.p) * m[j - 1]);
    return best;
  }
  const double s = e.q / e.p - 1.0;
  long double acc = 0.0L;
  for (Index j = n; j >= 1; --j)
    acc += static_cast<long double>(power_weight(j, s)) *
           static_cast<long double>(std::pow(m[j - 1], e.q));
  return std::pow(static_cast<double>(acc), 1.0 / e.q);
}

std::vector<double> sorted_moduli(const Eigen::ArrayXd& values) {
  std::vector<double> m;
  m.reserve(values.size());
  for (Index i = 0; i < values.size(); ++i)
    if (values[i] != 0.0) m.push_back(std::abs(values[i]));
  std::sort(m.begin(), m.end(), std::greater<double>());
  return m;
}

}  // namespace

double quasi_norm(const Seq& u, const Exponents& e) {
  return norm_of_sorted(sorted_moduli(u.values()), e);
}

double quasi_norm_raw(const Eigen::ArrayXd& values, const Exponents& e) {
  return norm_of_sorted(sorted_moduli(values), e);
}

double partial_sum_ratio(Index n, const Exponents& e) {
  if (!e.q_finite()) throw std::domain_error("partial_sum_ratio: requires q < inf");
  if (n < 1) throw std::domain_error("partial_sum_ratio: n must be >= 1");
  const double s = e.q / e.p - 1.0;
  long double acc = 0.0L;
  for (Index j = n; j >= 1; --j) acc += power_weight(j, s);
  double denom = (e.p / e.q) * power_weight(n, e.q / e.p);
  return static_cast<double>(acc) / denom;
}

double weak_type_constant(const Exponents& e) {
  if (!e.q_finite()) return 1.0;
  return std::max(1.0, std::pow(e.q / e.p, 1.0 / e.q));
}

double embedding_bound(double p, double q, double r) {
  Exponents pq(p, q);
  if (!(r > q)) throw std::domain_error("embedding_bound: requires q < r");
  double c = weak_type_constant(pq);
  if (r == kInf) return c;
  return std::pow(c, 1.0 - q / r);
}

QuasiConstant quasi_triangle_constant(const Exponents& e) {
  double t;
  if (!e.q_finite()) {
    t = std::pow(3.0, 1.0 / e.p);
  } else {
    double inner = 3.0 * std::max(1.0, std::pow(2.0, e.q - 1.0)) *
                   std::max(1.0, std::pow(3.0, e.q / e.p - 1.0));
    t = std::pow(inner, 1.0 / e.q) * std::max(1.0, std::pow(2.0, 1.0 / e.q - 1.0));
  }
  return {t, true, 0, 0};
}

QuasiConstant quasi_triangle_witness(const Exponents& e, std::uint64_t seed, int trials) {
  if (trials < 0) throw std::domain_error("quasi_triangle_witness: trials must be >= 0");
  double best = 0.0;
  auto consider = [&](const Seq& u, const Seq& v) {
    double nu = quasi_norm(u, e), nv = quasi_norm(v, e);
    if (nu + nv == 0.0) return;
    best = std::max(best, quasi_norm(u + v, e) / (nu + nv));
  };

  // structured extremal candidates: disjoint flats of assorted lengths
  for (Index lu : {1, 2, 3, 5, 8, 16}) {
    for (Index lv : {1, 2, 3, 5, 8, 16}) {
      consider(Seq::flat_block(1, lu, 1.0), Seq::flat_block(lu + 1, lv, 1.0));
      consider(Seq::ones(lu), Seq::ones(lv));  // aligned flats
    }
  }

  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    Index lu = 1 + static_cast<Index>(rng.below(40));
    Index lv = 1 + static_cast<Index>(rng.below(40));
    Eigen::ArrayXd a(lu), b(lv);
    bool heavy = rng.uniform() < 0.5;
    for (Index i = 0; i < lu; ++i)
      a[i] = heavy ? std::exp(3.0 * rng.normal()) : rng.normal();
    for (Index i = 0; i < lv; ++i)
      b[i] = heavy ? std::exp(3.0 * rng.normal()) : rng.normal();
    if (rng.uniform() < 0.3) {  // sparsify
      for (Index i = 0; i < lu; ++i)
        if (rng.uniform() < 0.5) a[i] = 0.0;
      for (Index i = 0; i < lv; ++i)
        if (rng.uniform() < 0.5) b[i] = 0.0;
    }
    consider(Seq(std::move(a)), Seq(std::move(b)));
  }
  return {best, false, seed, trials};
}

EmbeddingConstant estimate_embedding_norm(double p, double q, double r,
                                          int budget, std::uint64_t seed) {
  Exponents pq(p, q);
  if (!(r > q)) throw std::domain_error("estimate_embedding_norm: requires q < r");
  Exponents pr(p, r);
  if (budget < 0) throw std::domain_error("estimate_embedding_norm: budget must be >= 0");

  EmbeddingConstant out{p, q, r, 0.0, Seq(), seed, budget};
  auto consider = [&](const Seq& a) {
    double denom = quasi_norm(a, pq);
    if (denom == 0.0) return;
    double ratio = quasi_norm(a, pr) / denom;
    if (ratio > out.d_lower) {
      out.d_lower = ratio;
      out.witness = a;
    }
  };

  consider(Seq::unit(1));  // ratio exactly 1: floor for q < r
  for (Index n : {2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096})
    consider(Seq::ones(n));
  for (double rho : {0.9, 0.7, 0.5, 0.3, 0.1}) {
    Eigen::ArrayXd g(64);
    double v = 1.0;
    for (Index i = 0; i < 64; ++i, v *= rho) g[i] = v;
    consider(Seq(std::move(g)));
  }

  Rng rng(seed);
  for (int t = 0; t < budget; ++t) {
    Index n = 1 + static_cast<Index>(rng.below(512));
    std::vector<double> v(n);
    bool pareto = rng.uniform() < 0.5;
    for (Index i = 0; i < n; ++i) {
      double x = rng.uniform();
      while (x == 0.0) x = rng.uniform();
      v[i] = pareto ? std::pow(x, -rng.uniform(0.2, 2.0)) : std::abs(rng.normal());
    }
    std::sort(v.begin(), v.end(), std::greater<double>());
    consider(Seq(v));
  }
  return out;
}

std::vector<double> tail_norm_profile(const Seq& u, const Exponents& e,
                                      const std::vector<Index>& cutoffs) {
  if (!e.q_finite()) throw std::domain_error("tail_norm_profile: requires q < inf");
  std::vector<double> out;
  out.reserve(cutoffs.size());
  for (Index n : cutoffs) out.push_back(quasi_norm(project_tail(u, n), e));
  return out;
}

}  // namespace lorentz
