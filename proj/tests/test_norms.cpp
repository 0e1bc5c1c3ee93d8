#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lorentz/norms.hpp"
#include "lorentz/rng.hpp"

using namespace lorentz;

namespace {

Seq random_seq(Rng& rng, Index max_len) {
  Index len = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(max_len)));
  Eigen::ArrayXd v(len);
  for (Index i = 0; i < len; ++i)
    v[i] = rng.normal() * std::pow(10.0, rng.uniform(-2.0, 2.0));
  return Seq(v);
}

const std::vector<double> kPs{0.5, 1.0, 2.0, 3.0};
const std::vector<double> kQs{0.5, 1.0, 2.0, kInf};

}  // namespace

TEST_CASE("quasi_norm frozen value at p=2 q=1") {
  Seq a(std::vector<double>{4.0, 1.0, 2.0, 3.0});
  double expect = 4.0 + 3.0 / std::sqrt(2.0) + 2.0 / std::sqrt(3.0) + 1.0 / 2.0;
  CHECK(quasi_norm(a, Exponents(2.0, 1.0)) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("quasi_norm q=inf is the weak-type supremum") {
  Seq a(std::vector<double>{4.0, 1.0, 2.0, 3.0});
  // sup_j j^{1/2} a*(j): max{4, 3 sqrt 2, 2 sqrt 3, 1 * 2} = 3 sqrt 2
  CHECK(quasi_norm(a, Exponents(2.0, kInf)) ==
        doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(quasi_norm(Seq::ones(16), Exponents(2.0, kInf)) == doctest::Approx(4.0));
}

TEST_CASE("p=q collapses to the classical lp norm") {
  Rng rng(3);
  for (double p : kPs) {
    for (int t = 0; t < 50; ++t) {
      Seq u = random_seq(rng, 30);
      double direct = std::pow(u.values().abs().pow(p).sum(), 1.0 / p);
      CHECK(quasi_norm(u, Exponents(p, p)) ==
            doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("quasi_norm is scale equivariant and rearrangement invariant") {
  Rng rng(5);
  for (double p : kPs) {
    for (double q : kQs) {
      Exponents e(p, q);
      for (int t = 0; t < 30; ++t) {
        Seq u = random_seq(rng, 40);
        double c = rng.uniform(-5.0, 5.0);
        CHECK(quasi_norm(c * u, e) ==
              doctest::Approx(std::abs(c) * quasi_norm(u, e)).epsilon(1e-12));
        // same moduli multiset, same norm, bit for bit
        CHECK(quasi_norm(rearrange(u), e) == quasi_norm(u, e));
        CHECK(quasi_norm(rearrange_on_support(u), e) == quasi_norm(u, e));
      }
    }
  }
  CHECK(quasi_norm(Seq::zero(), Exponents(2.0, 1.0)) == 0.0);
}

TEST_CASE("quasi_norm is lattice monotone") {
  Rng rng(9);
  for (double p : kPs) {
    for (double q : kQs) {
      Exponents e(p, q);
      for (int t = 0; t < 30; ++t) {
        Seq v = random_seq(rng, 30);
        Eigen::ArrayXd shrunk = v.values();
        for (Index i = 0; i < shrunk.size(); ++i) shrunk[i] *= rng.uniform();
        CHECK(quasi_norm(Seq(shrunk), e) <= quasi_norm(v, e) * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("quasi_norm_raw matches quasi_norm") {
  Rng rng(13);
  Seq u = random_seq(rng, 25);
  for (double p : kPs)
    for (double q : kQs)
      CHECK(quasi_norm_raw(u.values(), Exponents(p, q)) == quasi_norm(u, Exponents(p, q)));
}

TEST_CASE("partial_sum_ratio endpoints") {
  CHECK(partial_sum_ratio(1, Exponents(2.0, 1.0)) == doctest::Approx(0.5));
  CHECK(partial_sum_ratio(1000000, Exponents(2.0, 1.0)) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(partial_sum_ratio(1000000, Exponents(1.0, 2.0)) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(partial_sum_ratio(1, Exponents(1.0, 1.0)) == doctest::Approx(1.0));
}

TEST_CASE("weak_type_constant values and bound") {
  CHECK(weak_type_constant(Exponents(2.0, 1.0)) == 1.0);
  CHECK(weak_type_constant(Exponents(1.0, 2.0)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(weak_type_constant(Exponents(2.0, kInf)) == 1.0);
  Rng rng(17);
  for (double p : kPs) {
    for (double q : kQs) {
      Exponents e(p, q);
      double C = weak_type_constant(e);
      for (int t = 0; t < 40; ++t) {
        Seq u = random_seq(rng, 50);
        Seq star = rearrange(u);
        double nu = quasi_norm(u, e);
        for (Index n = 1; n <= star.length(); ++n)
          CHECK(power_weight(n, 1.0 / p) * star.coeff(n) <= C * nu * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("embedding_bound dominates random ratios") {
  Rng rng(19);
  const std::vector<std::pair<double, double>> qr{{0.5, 1.0}, {1.0, 2.0}, {1.0, kInf}, {2.0, kInf}};
  for (double p : kPs) {
    for (auto [q, r] : qr) {
      double D = embedding_bound(p, q, r);
      CHECK(D >= 1.0);
      for (int t = 0; t < 40; ++t) {
        Seq u = random_seq(rng, 50);
        CHECK(quasi_norm(u, Exponents(p, r)) <=
              D * quasi_norm(u, Exponents(p, q)) * (1.0 + 1e-12));
      }
    }
  }
  CHECK_THROWS_AS(embedding_bound(2.0, 2.0, 1.0), std::domain_error);
}

TEST_CASE("quasi_triangle_constant closed forms") {
  QuasiConstant t21 = quasi_triangle_constant(Exponents(2.0, 1.0));
  CHECK(t21.analytic);
  CHECK(t21.value == doctest::Approx(3.0));
  CHECK(quasi_triangle_constant(Exponents(1.0, 2.0)).value ==
        doctest::Approx(std::sqrt(18.0)));
  CHECK(quasi_triangle_constant(Exponents(2.0, kInf)).value ==
        doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("quasi-triangle inequality holds with the analytic constant") {
  Rng rng(23);
  for (double p : kPs) {
    for (double q : kQs) {
      Exponents e(p, q);
      double T = quasi_triangle_constant(e).value;
      for (int t = 0; t < 60; ++t) {
        Seq u = random_seq(rng, 40), v = random_seq(rng, 40);
        CHECK(quasi_norm(u + v, e) <=
              T * (quasi_norm(u, e) + quasi_norm(v, e)) * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("quasi_triangle_witness stays below analytic and is deterministic") {
  for (double p : {0.5, 2.0}) {
    for (double q : {1.0, kInf}) {
      Exponents e(p, q);
      QuasiConstant w1 = quasi_triangle_witness(e, 42, 500);
      QuasiConstant w2 = quasi_triangle_witness(e, 42, 500);
      CHECK(!w1.analytic);
      CHECK(w1.value == w2.value);
      CHECK(w1.value >= 1.0);
      CHECK(w1.value <= quasi_triangle_constant(e).value);
    }
  }
}

TEST_CASE("rearrangement subadditivity on random pairs") {
  Rng rng(29);
  for (int t = 0; t < 100; ++t) {
    Seq u = random_seq(rng, 25), v = random_seq(rng, 25);
    Seq su = rearrange(u), sv = rearrange(v), s = rearrange(u + v);
    for (Index i = 1; i <= s.length(); ++i)
      for (Index j = 1; i + j <= s.length(); ++j)
        CHECK(s.coeff(i + j) <= su.coeff(i) + sv.coeff(j) + 1e-12);
  }
}

TEST_CASE("estimate_embedding_norm witness is sound and monotone in budget") {
  EmbeddingConstant small = estimate_embedding_norm(2.0, 1.0, kInf, 50, 42);
  EmbeddingConstant large = estimate_embedding_norm(2.0, 1.0, kInf, 400, 42);
  CHECK(small.d_lower >= 1.0 - 1e-12);
  CHECK(large.d_lower >= small.d_lower);
  CHECK(large.d_lower <= embedding_bound(2.0, 1.0, kInf) * (1.0 + 1e-12));
  double ratio = quasi_norm(large.witness, Exponents(2.0, kInf)) /
                 quasi_norm(large.witness, Exponents(2.0, 1.0));
  CHECK(ratio == doctest::Approx(large.d_lower).epsilon(1e-12));
}

TEST_CASE("tail_norm_profile is nonincreasing and anchored at the full norm") {
  Rng rng(31);
  Seq u = random_seq(rng, 60);
  Exponents e(2.0, 1.0);
  std::vector<Index> cuts{0, 1, 5, 20, 60, 100};
  std::vector<double> prof = tail_norm_profile(u, e, cuts);
  CHECK(prof[0] == quasi_norm(u, e));
  for (std::size_t i = 1; i < prof.size(); ++i) CHECK(prof[i] <= prof[i - 1] * (1.0 + 1e-12));
  CHECK(prof.back() == 0.0);
}
