#include <doctest.h>

#include <cmath>
#include <vector>

#include "lorentz/norms.hpp"
#include "lorentz/rng.hpp"
#include "lorentz/stepfun.hpp"

using namespace lorentz;

namespace {

Seq random_seq(Rng& rng, Index max_len) {
  Index len = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(max_len)));
  Eigen::ArrayXd v(len);
  for (Index i = 0; i < len; ++i)
    v[i] = rng.normal() * std::pow(10.0, rng.uniform(-2.0, 2.0));
  return Seq(v);
}

}  // namespace

TEST_CASE("DyadicStep validation") {
  CHECK_THROWS_AS(DyadicStep(2, Eigen::ArrayXd::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(DyadicStep(25, Eigen::ArrayXd::Zero(4)), std::domain_error);
  CHECK_THROWS_AS(DyadicStep::from_seq(Seq::ones(5), 2), std::domain_error);
  DyadicStep A = DyadicStep::from_seq(Seq::ones(3), 2);
  CHECK(A.level() == 2);
  CHECK(A.coeffs().size() == 4);
  CHECK(A.coeffs()[3] == 0.0);
}

TEST_CASE("fn_norm of the constant function") {
  // A == 1 on [0,1]: ||A||_{p,q} = (p/q)^{1/q}
  for (double p : {0.5, 1.0, 2.0, 3.0})
    for (double q : {0.5, 1.0, 2.0})
      CHECK(fn_norm(DyadicStep(3, Eigen::ArrayXd::Ones(8)), Exponents(p, q)) ==
            doctest::Approx(std::pow(p / q, 1.0 / q)).epsilon(1e-13));
}

TEST_CASE("fn_norm at p=q is the classical Lp norm") {
  Rng rng(41);
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    Eigen::ArrayXd c(8);
    for (int i = 0; i < 8; ++i) c[i] = rng.normal();
    DyadicStep A(3, c);
    double direct = std::pow((c.abs().pow(p) / 8.0).sum(), 1.0 / p);
    CHECK(fn_norm(A, Exponents(p, p)) == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("fn_norm_inf closed forms") {
  // indicator of one cell: ||A||_{p,inf} = (1/2^n)^{1/p}
  for (double p : {0.5, 1.0, 2.0})
    CHECK(fn_norm_inf(DyadicStep::from_seq(Seq::unit(1), 3), p) ==
          doctest::Approx(std::pow(0.125, 1.0 / p)).epsilon(1e-14));
  CHECK(fn_norm_inf(DyadicStep(1, Eigen::ArrayXd::Ones(2)), 2.0) == doctest::Approx(1.0));
}

TEST_CASE("weak-type transfer is an identity") {
  Rng rng(43);
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    for (int t = 0; t < 50; ++t) {
      int level = 1 + static_cast<int>(rng.below(8));
      Seq a = random_seq(rng, Index(1) << level);
      double lhs = quasi_norm(a, Exponents(p, kInf));
      double rhs = std::pow(2.0, level / p) * fn_norm_inf(DyadicStep::from_seq(a, level), p);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("transfer bracket frozen counterexamples at q < p") {
  // The pinched bracket with upper constant 1 fails here; the corrected upper
  // constant max{(p/q)^{1/q}, 2^{1/q-1/p}, 1} = 2 absorbs it.
  Exponents e(2.0, 1.0);
  TransferReport r = transfer_check(Seq(std::vector<double>{4.0, 1.0, 2.0, 3.0}), 2, e);
  CHECK(r.lower_const == 1.0);
  CHECK(r.upper_const == 2.0);
  CHECK(r.scaled_fn_norm == doctest::Approx(12.292528739883945).epsilon(1e-13));
  CHECK(r.scaled_fn_norm > r.seq_norm * 1.05);  // naive upper bound violated
  CHECK(r.lower_ok);
  CHECK(r.upper_ok);

  // The naive lower constant min{(p/q)^{1/q}, 2^{1/q-1/p}} = sqrt 2 also fails.
  TransferReport s = transfer_check(Seq::ones(16), 4, e);
  CHECK(s.scaled_fn_norm == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(s.scaled_fn_norm < std::sqrt(2.0) * s.seq_norm * 0.99);
  CHECK(s.lower_ok);
  CHECK(s.upper_ok);
}

TEST_CASE("transfer bracket collapses to the classical one for q >= p") {
  TransferReport r = transfer_check(Seq(std::vector<double>{4.0, 1.0, 2.0, 3.0}), 2,
                                    Exponents(1.0, 2.0));
  CHECK(r.upper_const == 1.0);
  CHECK(r.lower_const == doctest::Approx(std::sqrt(0.5)));
  CHECK(r.lower_ok);
  CHECK(r.upper_ok);
}

TEST_CASE("transfer bracket holds on random draws across the grid") {
  Rng rng(47);
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    for (double q : {0.5, 1.0, 2.0}) {
      for (int t = 0; t < 40; ++t) {
        int level = 1 + static_cast<int>(rng.below(7));
        Seq a = random_seq(rng, Index(1) << level);
        TransferReport r = transfer_check(a, level, Exponents(p, q));
        CHECK(r.lower_ok);
        CHECK(r.upper_ok);
      }
    }
  }
}

TEST_CASE("transfer_check rejects q = inf") {
  CHECK_THROWS_AS(transfer_check(Seq::ones(2), 1, Exponents(2.0, kInf)), std::domain_error);
}
