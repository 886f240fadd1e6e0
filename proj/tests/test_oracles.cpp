#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "stc/errors.hpp"
#include "stc/isochron.hpp"
#include "stc/models.hpp"
#include "stc/oracles.hpp"
#include "stc/rng.hpp"
#include "stc/setsynth.hpp"

using namespace stc;

namespace {

Box box2(double lo, double hi) {
  return Box(std::vector<std::array<double, 2>>{{lo, hi}, {lo, hi}});
}

}  // namespace

TEST_CASE("scalar comparison integration matches the closed forms") {
  // psi' = psi + 2 from -1 crosses zero at ln 2
  CHECK(psi_numeric(-1.0, 1.0, 2.0, std::log(2.0), 1e-4) == doctest::Approx(0.0).epsilon(1e-12));

  // zero dynamics: constant solution, exactly
  CHECK(psi_numeric(3.25, 0.0, 0.0, 5.0) == 3.25);

  // benchmark coefficients against the closed form
  double num = psi_numeric(-16.0, 0.0353, 0.344, 1.0);
  double cf = psi(-16.0, 0.0353, 0.344, 1.0);
  CHECK(std::abs(num - cf) <= 1e-10);

  // linear limit; the quadrature is exact for a constant slope, so a coarse
  // step keeps summation roundoff below the tolerance
  CHECK(psi_numeric(-16.0, 0.0, 0.344, 1.0, 1e-3) ==
        doctest::Approx(-15.656).epsilon(1e-12));
}

TEST_CASE("bisection root matches the closed-form bound at the ln 2 point") {
  auto trig = make_lebesgue_trigger(2, 2.0);
  IsochronEngine engine(trig.get(), 1.0, 2.0, 1.0, 0.1, 1.0, 1.0);
  std::vector<double> x = {std::sqrt(3.0) / 2.0, 0.0};
  double w = 0.5;

  double tau = engine.tau_down(x, w);
  REQUIRE(tau == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  double root = mu_root_bisect(engine, x, w, 2.0 * tau);
  CHECK(std::abs(root - std::log(2.0)) <= 1e-10);
}

TEST_CASE("bisection agrees with the closed form across the cone") {
  auto trig = make_mixed_trigger(2, 0.0049, 4.0);
  IsochronEngine engine(trig.get(), 0.0353, 0.344, 0.099, 1e-6, 0.1, 1.0);

  Rng rng(41);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> x(2);
    rng.in_ball(2.0, x);
    double w = 1.0;
    double tau = engine.tau_down(x, w);
    double root = mu_root_bisect(engine, x, w, 2.0 * tau);
    CHECK(std::abs(tau - root) <= 1e-9 * (1.0 + tau));
    // doubling the root always brackets: the bound is increasing in time
    CHECK(engine.mu(x, w, 2.0 * tau) >= 0.0);
  }
}

TEST_CASE("bisection rejects an invalid bracket") {
  auto trig = make_mixed_trigger(2, 0.0049, 4.0);
  IsochronEngine engine(trig.get(), 0.0353, 0.344, 0.099, 1e-6, 0.1, 1.0);
  std::vector<double> x = {1.0, -0.5};
  double tau = engine.tau_down(x, 1.0);
  CHECK_THROWS_AS(mu_root_bisect(engine, x, 1.0, 0.5 * tau), ContractViolation);
}

TEST_CASE("membership box contains every exact member") {
  auto trig = make_mixed_trigger(2, 0.0049, 4.0);
  SetSystem sets = build_sets(*trig, box2(-0.1, 0.1), 1e-6, 0.1);

  MembershipStats stats = membership_reject(*trig, sets, 20000, 4242);
  CHECK(stats.samples == 20000);
  CHECK(stats.box_misses == 0);
  CHECK(stats.unbounded_rays == 0);
}

TEST_CASE("cone-slice radius formula agrees with the direct test") {
  auto trig = make_mixed_trigger(2, 0.0049, 4.0);
  IsochronEngine engine(trig.get(), 0.0353, 0.344, 0.099, 1e-6, 0.1, 1.0);

  ConeAgreement ca = b1_agreement(engine, 2, 10000, 777);
  CHECK(ca.samples > 0);
  CHECK(ca.mismatches == 0);
}
