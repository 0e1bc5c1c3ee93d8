#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lorentz/construction.hpp"

using namespace lorentz;

namespace {

bool has_check(const std::vector<CheckResult>& cs, const std::string& name) {
  return std::any_of(cs.begin(), cs.end(),
                     [&](const CheckResult& c) { return c.condition == name; });
}

}  // namespace

TEST_CASE("Window round-trips through Seq") {
  Seq u(std::vector<double>{0.0, 0.0, 1.5, 0.0, -2.0});
  Window w = Window::from_seq(u);
  CHECK(w.start == 3);
  CHECK(w.values.size() == 3);
  CHECK(w.to_seq() == u);
  CHECK(w.at(3) == 1.5);
  CHECK(w.at(1) == 0.0);
  CHECK(w.at(6) == 0.0);
  CHECK(Window::from_seq(Seq::zero()).empty());
}

TEST_CASE("block specs produce the documented windows") {
  BlockSubspaceSpec dy = BlockSubspaceSpec::dyadic_blocks();
  Window g3 = dy.generator(3);
  CHECK(g3.start == 8);
  CHECK(g3.values.size() == 8);
  CHECK((g3.values == 1.0).all());

  BlockSubspaceSpec demo = BlockSubspaceSpec::demo_blocks(16, 1.25, 100);
  Index expect_start = 1;
  for (int k = 1; k <= 20; ++k) {
    Window g = demo.generator(k);
    CHECK(g.start == expect_start);  // consecutive tiling, no gaps
    CHECK((g.values == 1.0).all());
    expect_start = g.last() + 1;
  }

  BlockSubspaceSpec geo = BlockSubspaceSpec::geometric_tails(0.5, 4);
  Window t2 = geo.generator(2);
  CHECK(t2.start == 5);
  CHECK(t2.at(5) == 1.0);
  CHECK(t2.at(7) == doctest::Approx(0.25));
}

TEST_CASE("atilde envelopes are normalized as requested") {
  Exponents e(2.0, 1.0);
  AtildeSpec geo = AtildeSpec::geometric(e, 0.5);
  CHECK(geo.norm == doctest::Approx(0.5).epsilon(1e-9));
  for (Index j : {1, 2, 5, 50}) CHECK(geo.value(j) > geo.value(j + 1));

  AtildeSpec st = AtildeSpec::staircase(e, {{4, 0.1}, {16, 0.05}});
  CHECK(st.value(1) == 0.1);
  CHECK(st.value(4) == 0.1);
  CHECK(st.value(5) == 0.05);
  CHECK(st.value(16) == 0.05);
  CHECK(st.value(17) < 0.05);  // geometric continuation
  CHECK(st.norm <= 1.0);

  // norm field matches a long direct truncation
  Eigen::ArrayXd head(4096);
  for (Index j = 1; j <= 4096; ++j) head[j - 1] = st.value(j);
  CHECK(st.norm == doctest::Approx(quasi_norm_raw(head, e)).epsilon(1e-6));

  CHECK_THROWS_AS(AtildeSpec::staircase(e, {{4, 0.1}, {16, 0.2}}), std::domain_error);
  CHECK_THROWS_AS(AtildeSpec::staircase(e, {{4, 0.1}, {2, 0.05}}), std::domain_error);
}

TEST_CASE("gliding hump on exactly disjoint blocks uses one generator") {
  Exponents e(2.0, 1.0);
  HumpResult h = gliding_hump_step(BlockSubspaceSpec::dyadic_blocks(), e, 3.0,
                                   /*n=*/4, /*n_floor=*/9, /*eps=*/0.5, /*delta_k=*/0.05);
  CHECK(h.terms == 1);
  CHECK(h.w.is_zero());
  CHECK(quasi_norm(h.u, e) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h.u.support_min() > 4);
  CHECK(h.m >= 9);
  CHECK(h.u.support_max() <= h.m);
}

TEST_CASE("gliding hump with overlapping tails cuts at the minimal index") {
  Exponents e(2.0, 1.0);
  BlockSubspaceSpec geo = BlockSubspaceSpec::geometric_tails(0.75, 2);
  const double T = 3.0, delta_k = 0.02;
  const Index n = 6;
  HumpResult h = gliding_hump_step(geo, e, T, n, 2 * n + 1, 0.35, delta_k);
  double s = 1.0;  // u is already normalized
  CHECK(quasi_norm(h.u, e) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h.u.support_min() > n);
  CHECK(h.m >= 2 * n + 1);
  CHECK(quasi_norm(h.w, e) <= delta_k * s * (1.0 + 1e-12));
  CHECK(quasi_norm(h.v, e) >= 1.0 / T - delta_k - 1e-12);
  // minimality: one index earlier the tail still exceeds delta_k
  if (h.m > 2 * n + 1)
    CHECK(quasi_norm(project_tail(h.u, h.m - 1), e) > delta_k * s);
  // entry bound
  CHECK(rearrange(h.v).coeff(1) <= 0.35 * (1.0 + 1e-12));
}

TEST_CASE("gliding hump honest failure when eps forces blocks past the cap") {
  Exponents e(2.0, 1.0);
  try {
    gliding_hump_step(BlockSubspaceSpec::dyadic_blocks(), e, 3.0, 4, 9, 1e-9, 0.05);
    FAIL("expected construction_error");
  } catch (const construction_error& err) {
    CHECK(err.condition == "index_cap");
  }
}

TEST_CASE("full dyadic build at p=2 q=1 passes at N=2 and fails honestly at N=8") {
  Exponents e(2.0, 1.0);
  AtildeSpec atilde = AtildeSpec::geometric(e);
  double delta = 1.0 / 12.0;  // 1/(4T) with T = 3
  ConstructionState st = build_construction(BlockSubspaceSpec::dyadic_blocks(), e, 2,
                                            delta, atilde);
  CHECK(st.stage_count() == 2);
  CHECK(all_ok(verify_construction(st)));
  CHECK(st.n(1) < st.n(2));
  CHECK(st.stages[0].lambda == 1.0);

  try {
    build_construction(BlockSubspaceSpec::dyadic_blocks(), e, 8, delta, atilde);
    FAIL("expected construction_error");
  } catch (const construction_error& err) {
    CHECK(err.condition == "index_cap");
  }
}

TEST_CASE("build_construction validates its inputs") {
  Exponents e(2.0, 1.0);
  AtildeSpec atilde = AtildeSpec::geometric(e);
  BlockSubspaceSpec dy = BlockSubspaceSpec::dyadic_blocks();
  CHECK_THROWS_AS(build_construction(dy, e, 0, 0.05, atilde), construction_error);
  CHECK_THROWS_AS(build_construction(dy, e, 2, 0.5, atilde), construction_error);  // delta >= 1/T
  CHECK_THROWS_AS(build_construction(dy, e, 2, -0.1, atilde), construction_error);
  CHECK_THROWS_AS(build_construction(dy, Exponents(2.0, kInf), 2, 0.05, atilde),
                  std::domain_error);
}

TEST_CASE("planned inputs run the full condition set") {
  Exponents e(1.0, 2.0);
  double delta = 1.0 / (4.0 * quasi_triangle_constant(e).value);
  PlannedInputs plan = plan_construction_inputs(e, 5, delta);
  ConstructionState st = build_construction(plan.spec, e, 5, delta, plan.atilde);
  CHECK(st.stage_count() == 5);
  CHECK(st.n(5) <= kIndexCap);
  auto checks = verify_construction(st);
  CHECK(all_ok(checks));
  // the full-mode check list is present
  for (const char* name :
       {"unit_norm", "support_window", "head_tail_split", "index_growth", "epsilon_cap",
        "epsilon_scale", "entry_bound", "head_mass_low", "head_mass_high", "tail_decay",
        "c_value", "b_value", "lambda_cap", "weight_sized", "envelope_bound", "a_monotone",
        "a_positive_at_cuts", "boundary_drop", "chain_monotone", "rearrangement_identity"})
    CHECK_MESSAGE(has_check(checks, name), name);
}

TEST_CASE("verify_construction flags a corrupted state") {
  Exponents e(1.0, 2.0);
  double delta = 1.0 / (4.0 * quasi_triangle_constant(e).value);
  PlannedInputs plan = plan_construction_inputs(e, 3, delta);
  ConstructionState st = build_construction(plan.spec, e, 3, delta, plan.atilde);
  st.stages[1].v.values *= 3.0;  // breaks the head/tail split and head mass bound
  auto checks = verify_construction(st);
  CHECK(!all_ok(checks));
}

TEST_CASE("block demo stages are disjoint normalized windows") {
  Exponents e(2.0, 1.0);
  ConstructionState st = build_block_demo(BlockSubspaceSpec::demo_blocks(32, 1.1, 600), e, 40);
  CHECK(st.mode == ConstructionMode::blocks);
  CHECK(st.stage_count() == 40);
  Index prev_end = 0;
  for (const StageRecord& rec : st.stages) {
    CHECK(rec.u.start == prev_end + 1);
    CHECK(quasi_norm(rec.u.to_seq(), e) == doctest::Approx(1.0).epsilon(1e-12));
    prev_end = rec.u.last();
    CHECK(rec.n == prev_end);
  }
  CHECK(all_ok(verify_construction(st)));
}

TEST_CASE("growth curve starts at 1 and accumulates monotonically") {
  Exponents e(2.0, 1.0);
  ConstructionState st = build_block_demo(BlockSubspaceSpec::demo_blocks(16, 1.02, 400), e, 128);
  GrowthCurve curve = growth_curve(st, 2.0, {1, 2, 4, 8, 16, 32, 64, 128}, 4);
  CHECK(curve.rows.size() == 8);
  CHECK(curve.rows[0].norm_pq == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 1; i < curve.rows.size(); ++i)
    CHECK(curve.rows[i].norm_pq >= curve.rows[i - 1].norm_pq * (1.0 - 1e-12));
  CHECK(curve.fit.points == 6);  // counts >= 4
  CHECK(curve.fit.a > 0.0);
  CHECK(curve.r == 2.0);
}

TEST_CASE("construction state JSON round-trip re-verifies and is stable") {
  Exponents e(1.0, 2.0);
  double delta = 1.0 / (4.0 * quasi_triangle_constant(e).value);
  PlannedInputs plan = plan_construction_inputs(e, 4, delta);
  ConstructionState st = build_construction(plan.spec, e, 4, delta, plan.atilde);

  std::string text = to_json(st);
  ConstructionState back = state_from_json(text);
  CHECK(back.stage_count() == st.stage_count());
  CHECK(back.p == st.p);
  CHECK(back.q == st.q);
  for (int k = 1; k <= 4; ++k) CHECK(back.n(k) == st.n(k));
  CHECK(all_ok(verify_construction(back)));
  CHECK(to_json(back) == text);

  CHECK_THROWS_AS(state_from_json("{\"format\":\"bogus/9\"}"), std::exception);
  CHECK_THROWS_AS(state_from_json("not json"), std::exception);
}

TEST_CASE("blocks-mode JSON round-trip") {
  Exponents e(2.0, 1.0);
  ConstructionState st = build_block_demo(BlockSubspaceSpec::demo_blocks(16, 1.3, 200), e, 25);
  ConstructionState back = state_from_json(to_json(st));
  CHECK(back.mode == ConstructionMode::blocks);
  CHECK(back.stage_count() == 25);
  CHECK(all_ok(verify_construction(back)));
  CHECK(to_json(back) == to_json(st));
}
