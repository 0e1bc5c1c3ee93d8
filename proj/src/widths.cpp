#include "lorentz/widths.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lorentz/norms.hpp"
#include "lorentz/optim.hpp"
#include "lorentz/parallel.hpp"
#include "lorentz/rng.hpp"

namespace lorentz {

SubspaceBasis SubspaceBasis::rademacher(int n) {
  SubspaceBasis b;
  for (int i = 1; i <= n; ++i) b.vectors.push_back(rademacher_seq(i, n));
  return b;
}

Eigen::MatrixXd SubspaceBasis::matrix() const {
  Index rows = 0;
  for (const Seq& v : vectors) rows = std::max(rows, v.length());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, static_cast<Index>(vectors.size()));
  for (Index c = 0; c < static_cast<Index>(vectors.size()); ++c)
    m.col(c).head(vectors[c].length()) = vectors[c].values().matrix();
  return m;
}

void SubspaceBasis::validate_independent() const {
  if (vectors.empty())
    throw std::invalid_argument("SubspaceBasis: empty basis");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(matrix());
  qr.setThreshold(1e-10);
  if (qr.rank() < dim())
    throw std::invalid_argument("SubspaceBasis: vectors are linearly dependent (rank " +
                                std::to_string(qr.rank()) + " < " + std::to_string(dim()) + ")");
}

namespace {

void canonicalize_sign(Eigen::VectorXd& a) {
  for (Index i = 0; i < a.size(); ++i) {
    if (a[i] != 0.0) {
      if (a[i] < 0.0) a = -a;
      return;
    }
  }
}

}  // namespace

WidthReport min_ratio_on_subspace(const SubspaceBasis& basis, double p, double q,
                                  double r, const OptimConfig& config) {
  Exponents pq(p, q);
  if (!(r > q)) throw std::domain_error("min_ratio_on_subspace: requires q < r");
  Exponents pr(p, r);
  if (config.restarts < 1) throw std::domain_error("min_ratio_on_subspace: restarts must be >= 1");
  basis.validate_independent();

  const Eigen::MatrixXd B = basis.matrix();
  const int n = basis.dim();
  auto ratio = [&](const Eigen::VectorXd& a) -> double {
    double scale = a.norm();
    if (scale < 1e-14) return std::numeric_limits<double>::max();
    Eigen::ArrayXd u = (B * (a / scale)).array();
    double denom = quasi_norm_raw(u, pq);
    if (denom == 0.0) return std::numeric_limits<double>::max();
    return quasi_norm_raw(u, pr) / denom;
  };

  struct Restart {
    double value;
    Eigen::VectorXd x;
    long evals;
  };
  std::vector<Restart> results(config.restarts);
  parallel_for(config.restarts, [&](long long t) {
    Rng rng(Rng::derive(config.seed, static_cast<std::uint64_t>(t)));
    Eigen::VectorXd x0(n);
    for (int i = 0; i < n; ++i) x0[i] = rng.normal();
    x0.normalize();
    NelderMeadResult nm = nelder_mead(ratio, x0, 0.5, config.max_iters, 1e-12);
    results[t] = {nm.value, nm.x, nm.evals};
  });

  int best = 0;
  long evals = 0;
  for (int t = 0; t < config.restarts; ++t) {
    evals += results[t].evals;
    if (results[t].value < results[best].value) best = t;  // ties keep lower index
  }
  Eigen::VectorXd argmin = results[best].x;
  argmin.normalize();
  canonicalize_sign(argmin);
  return {n, results[best].value, argmin,
          std::numeric_limits<double>::quiet_NaN(),
          config.seed, config.restarts, evals};
}

double alpha_bound(double p, double q, double r,
                   const KhintchineEstimate& kh_q, const KhintchineEstimate& kh_r) {
  Exponents pq(p, q);
  if (!(r > q)) throw std::domain_error("alpha_bound: requires q < r");
  if (kh_q.p != p || kh_q.q != q)
    throw std::invalid_argument("alpha_bound: kh_q exponents do not match (p,q)");
  if (kh_r.p != p || kh_r.q != r)
    throw std::invalid_argument("alpha_bound: kh_r exponents do not match (p,r)");
  double lower_q = std::min({std::pow(p / q, 1.0 / q),
                             std::pow(2.0, 1.0 / q - 1.0 / p), 1.0});
  double upper_r = std::isinf(r)
                       ? 1.0
                       : std::max({std::pow(p / r, 1.0 / r),
                                   std::pow(2.0, 1.0 / r - 1.0 / p), 1.0});
  double cq = std::max(kh_q.c_low_witness, kh_q.c_up_witness);
  double cr = std::max(kh_r.c_low_witness, kh_r.c_up_witness);
  if (!(cq > 0.0) || !(cr > 0.0))
    throw std::invalid_argument("alpha_bound: witnesses must be positive");
  return lower_q / (upper_r * cq * cr);
}

BernsteinCurve bernstein_lower_curve(int n_max, double p, double q, double r,
                                     const OptimConfig& config) {
  if (n_max < 1) throw std::domain_error("bernstein_lower_curve: n_max must be >= 1");
  BernsteinCurve curve{
      {},
      khintchine_estimate(p, q, n_max, KhMethod::exhaustive_signs, Rng::derive(config.seed, 1001)),
      khintchine_estimate(p, r, n_max, KhMethod::exhaustive_signs, Rng::derive(config.seed, 1002)),
      0.0};
  for (int n = 1; n <= n_max; ++n) {
    OptimConfig c = config;
    c.seed = Rng::derive(config.seed, static_cast<std::uint64_t>(n));
    WidthReport rep = min_ratio_on_subspace(SubspaceBasis::rademacher(n), p, q, r, c);
    absorb_candidate(curve.kh_q, rep.argmin);
    absorb_candidate(curve.kh_r, rep.argmin);
    curve.reports.push_back(std::move(rep));
  }
  curve.alpha = alpha_bound(p, q, r, curve.kh_q, curve.kh_r);
  for (WidthReport& rep : curve.reports) rep.alpha_bound = curve.alpha;
  return curve;
}

}  // namespace lorentz
