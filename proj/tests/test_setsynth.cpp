#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "stc/errors.hpp"
#include "stc/models.hpp"
#include "stc/setsynth.hpp"

using namespace stc;

namespace {

Box box2(double lo, double hi) {
  return Box(std::vector<std::array<double, 2>>{{lo, hi}, {lo, hi}});
}

}  // namespace

TEST_CASE("reachable box for the error-norm trigger dilates the sampling box") {
  // phi_tilde = |e|^2 - eps_bar^2 w^2 <= 0 bounds |e| by eps_bar w_hi, so the
  // exact projection is Z fattened by 0.5 * 0.2 = 0.1 per axis
  auto trig = make_lebesgue_trigger(2, 0.5);
  SetSystem sets = build_sets(*trig, box2(-1.0, 1.0), 0.01, 0.2);

  for (int i = 0; i < 2; ++i) {
    CHECK(sets.phi_box.lo(i) <= -1.095);  // contains the exact set up to grid slop
    CHECK(sets.phi_box.hi(i) >= 1.095);
    CHECK(sets.phi_box.hi(i) <= 1.1 * 1.05 + 0.02);  // and is not much larger
    CHECK(sets.phi_box.lo(i) >= -(1.1 * 1.05 + 0.02));

    // error box is the per-axis interval difference Z - phi_box
    CHECK(sets.e_box.lo(i) == doctest::Approx(-1.0 - sets.phi_box.hi(i)).epsilon(1e-14));
    CHECK(sets.e_box.hi(i) == doctest::Approx(1.0 - sets.phi_box.lo(i)).epsilon(1e-14));
  }
}

TEST_CASE("non-compact reachable sets are rejected") {
  // with sigma = 1 the trigger |e|^2 - |zeta|^2 - 16 w^2 admits every state
  // (take the held sample at the origin), so the projection is unbounded
  auto trig = make_mixed_trigger(2, 1.0, 4.0);
  CHECK_THROWS_AS(build_sets(*trig, box2(-0.1, 0.1), 1e-6, 0.1), SynthesisError);
}

TEST_CASE("one-row fit lands on the hand-enumerated vertex") {
  ConstraintRow row;
  row.phi = -1.0;
  row.L = 1.0;
  row.z = {0.0, 0.0};
  row.w = 1.0;

  // minimize delta1 + kappa*delta0 (kappa = mean |phi| = 1) subject to
  // -delta0 + delta1 >= 1, delta0 >= 0, delta1 >= 1e-3: optimum (0, 1)
  std::vector<ConstraintRow> rows = {row};
  DeltaCoefficients c = fit_delta(rows, {}, 1e-3);
  CHECK(c.delta0 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(c.delta1 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("boundary levels force the floor when rows are slack") {
  ConstraintRow row;
  row.phi = -2.0;
  row.L = -5.0;  // decay rows satisfied by any nonnegative coefficients
  row.z = {0.0, 0.0};
  row.w = 1.0;
  std::vector<ConstraintRow> rows = {row};
  std::vector<double> boundary = {-0.5};

  // active constraints are delta0*(-0.5) + delta1 >= eps and delta1 >= eps;
  // the cheapest point is delta0 = 0, delta1 = eps
  DeltaCoefficients c = fit_delta(rows, boundary, 1e-3);
  CHECK(c.delta0 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(c.delta1 == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("sampled constraint rows satisfy the region's defining inequalities") {
  auto plant = make_uncertain2d();
  auto trig = make_mixed_trigger(2, 0.0049, 4.0);
  SetSystem sets = build_sets(*trig, box2(-0.1, 0.1), 1e-6, 0.1);

  auto rows = sample_constraints(*plant, *trig, sets, 500, 42);
  REQUIRE(rows.size() == 500);
  const auto& dbox = plant->disturbances();
  for (const auto& row : rows) {
    REQUIRE(row.z.size() == 4);
    std::span<const double> x(row.z.data(), 2), e(row.z.data() + 2, 2);
    CHECK(row.w >= sets.w_lo);
    CHECK(row.w <= sets.w_hi);
    CHECK(sets.phi_box.contains(x, 1e-12));
    CHECK(sets.e_box.contains(e, 1e-12));
    double held[2] = {x[0] + e[0], x[1] + e[1]};
    CHECK(sets.Z.contains(held, 1e-9));  // x + e is the held sample
    CHECK(row.phi <= 1e-9);              // trigger non-positive on the region
    CHECK(row.phi == doctest::Approx(trig->hom_value(row.z, row.w)).epsilon(1e-12));
    CHECK(dbox.contains(row.d, 1e-12));
  }
}

TEST_CASE("boundary levels are negative trigger values on the sampling set") {
  auto trig = make_mixed_trigger(2, 0.0049, 4.0);
  SetSystem sets = build_sets(*trig, box2(-0.1, 0.1), 1e-6, 0.1);
  // a deterministic lattice seeds the sample, then random points top it up,
  // so the result has at least the requested count
  auto levels = sample_boundary_levels(*trig, sets, 200, 3);
  REQUIRE(levels.size() >= 200);
  for (double phi : levels) CHECK(phi < 0.0);
}

TEST_CASE("a dominating delta1 verifies with exactly unit margin") {
  auto plant = make_uncertain2d();
  auto trig = make_mixed_trigger(2, 0.0049, 4.0);
  SetSystem sets = build_sets(*trig, box2(-0.1, 0.1), 1e-6, 0.1);

  DeltaCoefficients zero;
  zero.delta0 = 0.0;
  zero.delta1 = 0.0;
  zero.eps_delta = 0.0;
  VerifyReport base = verify_delta(*plant, *trig, sets, zero, 3000, 77);
  double max_L = -base.margin;  // margin of (0,0) is -max L over the samples

  DeltaCoefficients dom = zero;
  dom.delta1 = max_L + 1.0;
  VerifyReport rep = verify_delta(*plant, *trig, sets, dom, 3000, 77);
  CHECK(rep.points == base.points);
  CHECK(rep.margin == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("drift-free plants need only the boundary floor") {
  auto plant = make_zero_plant(2);
  auto trig = make_lebesgue_trigger(2, 1.0);
  SetSystem sets = build_sets(*trig, box2(-1.0, 1.0), 0.1, 0.5);

  SynthesisOptions opts;
  opts.rows = 500;
  opts.boundary_rows = 100;
  opts.verify_points = 2000;
  opts.eps_delta = 1e-3;
  opts.max_refits = 5;
  opts.seed = 9;
  opts.safety = 1.05;

  DeltaCoefficients c = synthesize_delta(*plant, *trig, sets, opts);
  CHECK(c.delta0 == 0.0);
  CHECK(c.delta1 == doctest::Approx(1.05e-3).epsilon(1e-12));  // floor times safety
  CHECK(c.margin == doctest::Approx(1.05e-3).epsilon(1e-9));   // L is identically zero
  CHECK(c.refits == 0);
  CHECK_FALSE(c.inflated_fallback);
}

TEST_CASE("synthesized coefficients survive an independent re-verification") {
  auto plant = make_uncertain2d();
  auto trig = make_mixed_trigger(2, 0.0049, 4.0);
  SetSystem sets = build_sets(*trig, box2(-0.1, 0.1), 1e-6, 0.1);

  SynthesisOptions opts;
  opts.rows = 2000;
  opts.boundary_rows = 200;
  opts.verify_points = 5000;
  opts.max_refits = 10;
  opts.seed = 1;
  opts.safety = 1.1;

  VerifyReport last;
  DeltaCoefficients c = synthesize_delta(*plant, *trig, sets, opts, &last);
  CHECK(c.margin >= 0.0);
  CHECK(c.delta1 > 0.0);
  CHECK(c.delta0 >= 0.0);

  // fresh sample set, different seed: the safety multiplier absorbs the
  // sampled-max versus true-sup gap
  VerifyReport fresh = verify_delta(*plant, *trig, sets, c, 8000, 31337);
  CHECK(fresh.margin > 0.0);
}
