#include "lorentz/rademacher.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "lorentz/norms.hpp"
#include "lorentz/parallel.hpp"
#include "lorentz/rng.hpp"

namespace lorentz {

namespace {

Eigen::ArrayXd rademacher_pattern(int i, int level) {
  const Index n = Index(1) << level;
  Eigen::ArrayXd v(n);
  const int shift = level - i;
  for (Index k = 0; k < n; ++k)
    v[k] = ((k >> shift) & 1) ? -1.0 : 1.0;
  return v;
}

}  // namespace

DyadicStep rademacher_fn(int i, int level) {
  if (i < 1 || i > level)
    throw std::domain_error("rademacher_fn: requires 1 <= i <= level");
  return DyadicStep(level, rademacher_pattern(i, level));
}

Seq rademacher_seq(int i, int n) {
  if (n > 22) throw std::domain_error("rademacher_seq: level cap is 22");
  if (i < 1 || i > n)
    throw std::domain_error("rademacher_seq: requires 1 <= i <= n");
  return Seq(rademacher_pattern(i, n));
}

Eigen::ArrayXd rademacher_sum(const Eigen::VectorXd& a) {
  const int N = static_cast<int>(a.size());
  if (N < 1 || N > 22) throw std::domain_error("rademacher_sum: requires 1 <= size <= 22");
  const Index len = Index(1) << N;
  Eigen::ArrayXd f = Eigen::ArrayXd::Zero(len);
  for (int i = 1; i <= N; ++i) {
    const int shift = N - i;
    const double c = a[i - 1];
    for (Index k = 0; k < len; ++k)
      f[k] += ((k >> shift) & 1) ? -c : c;
  }
  return f;
}

namespace {

double fnorm(const Eigen::ArrayXd& coeffs, int level, double p, double q) {
  DyadicStep A(level, coeffs);
  return q == kInf ? fn_norm_inf(A, p) : fn_norm(A, Exponents(p, q));
}

struct Pair {
  double low = 0.0, up = 0.0;
  void absorb(double l2, double fn) {
    if (fn > 0.0 && l2 > 0.0) {
      low = std::max(low, l2 / fn);
      up = std::max(up, fn / l2);
    }
  }
};

Pair scan_exhaustive(double p, double q, int N) {
  // first coordinate pinned to +1: a and -a give the same ratios
  const std::uint64_t count = N == 1 ? 1 : (1ull << (N - 1));
  const double l2 = std::sqrt(static_cast<double>(N));
  const int chunks = N >= 6 ? 64 : 1;
  std::vector<Pair> part(chunks);
  const std::uint64_t per = (count + chunks - 1) / chunks;

  parallel_for(chunks, [&](long long c) {
    const std::uint64_t lo = c * per, hi = std::min<std::uint64_t>(count, lo + per);
    if (lo >= hi) return;
    Eigen::VectorXd a = Eigen::VectorXd::Ones(N);
    std::uint64_t gray = lo ^ (lo >> 1);
    for (int b = 0; b < N - 1; ++b)
      if ((gray >> b) & 1) a[b + 1] = -1.0;
    Eigen::ArrayXd f = rademacher_sum(a);
    const Index len = f.size();
    for (std::uint64_t idx = lo;;) {
      part[c].absorb(l2, fnorm(f, N, p, q));
      if (++idx >= hi) break;
      // Gray step: flip the sign whose bit changes, update f in place
      std::uint64_t g2 = idx ^ (idx >> 1);
      int bit = __builtin_ctzll(gray ^ g2);
      gray = g2;
      const int i = bit + 2;  // flipped Rademacher index
      const int shift = N - i;
      const double delta = -2.0 * a[i - 1];
      a[i - 1] += delta;
      for (Index k = 0; k < len; ++k)
        f[k] += ((k >> shift) & 1) ? -delta : delta;
    }
  });

  Pair best;
  for (const Pair& pr : part) {
    best.low = std::max(best.low, pr.low);
    best.up = std::max(best.up, pr.up);
  }
  return best;
}

}  // namespace

void absorb_candidate(KhintchineEstimate& est, const Eigen::VectorXd& a) {
  if (a.size() < 1 || a.size() > est.dim)
    throw std::invalid_argument("absorb_candidate: coefficient count must be in 1..dim");
  double l2 = a.norm();
  if (l2 == 0.0) return;
  double fn = fnorm(rademacher_sum(a), static_cast<int>(a.size()), est.p, est.q);
  est.c_low_witness = std::max(est.c_low_witness, l2 / fn);
  est.c_up_witness = std::max(est.c_up_witness, fn / l2);
}

KhintchineEstimate khintchine_estimate(double p, double q, int N, KhMethod method,
                                       std::uint64_t seed, int budget) {
  if (!(p > 0.0) || p == kInf) throw std::domain_error("khintchine_estimate: bad p");
  if (!(q > 0.0)) throw std::domain_error("khintchine_estimate: bad q");
  if (N < 1) throw std::domain_error("khintchine_estimate: N must be >= 1");

  KhintchineEstimate est{p, q, N, 0.0, 0.0, method, seed, budget};
  for (int i = 1; i <= N; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(N);
    e[i - 1] = 1.0;
    absorb_candidate(est, e);
  }

  if (method == KhMethod::exhaustive_signs) {
    if (N > 20)
      throw std::domain_error("khintchine_estimate: exhaustive budget exceeded (N > 20)");
    Pair best = scan_exhaustive(p, q, N);
    est.c_low_witness = std::max(est.c_low_witness, best.low);
    est.c_up_witness = std::max(est.c_up_witness, best.up);
    return est;
  }

  // seeded search: golden-section coordinate ascent on each ratio
  const double phi = 0.6180339887498949;
  auto ratio = [&](const Eigen::VectorXd& a, bool up) -> double {
    double l2 = a.norm();
    if (l2 < 1e-12) return 0.0;
    double fn = fnorm(rademacher_sum(a), N, p, q);
    return up ? fn / l2 : l2 / fn;
  };
  std::vector<Pair> found(std::max(budget, 0));
  parallel_for(std::max(budget, 0), [&](long long t) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(t)));
    for (bool up : {false, true}) {
      Eigen::VectorXd a(N);
      for (int i = 0; i < N; ++i) a[i] = rng.normal();
      a.normalize();
      for (int pass = 0; pass < 3; ++pass) {
        for (int i = 0; i < N; ++i) {
          double lo = -2.5, hi = 2.5;
          for (int it = 0; it < 28; ++it) {
            double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
            Eigen::VectorXd a1 = a, a2 = a;
            a1[i] = m1;
            a2[i] = m2;
            if (ratio(a1, up) >= ratio(a2, up)) hi = m2; else lo = m1;
          }
          a[i] = 0.5 * (lo + hi);
        }
      }
      double r = ratio(a, up);
      (up ? found[t].up : found[t].low) = r;
    }
  });
  for (const Pair& pr : found) {
    est.c_low_witness = std::max(est.c_low_witness, pr.low);
    est.c_up_witness = std::max(est.c_up_witness, pr.up);
  }
  return est;
}

}  // namespace lorentz
