#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "stc/errors.hpp"
#include "stc/models.hpp"
#include "stc/rng.hpp"

using namespace stc;

namespace {

// The damping feedback documented for the two-state benchmark plant.
double benchmark_control(double held1, double held2) {
  double v = held2 + 2.1 * held1;
  return -(7.02 * std::abs(v) + 25.515) * v;
}

}  // namespace

TEST_CASE("extended field: error rows negate the state rows") {
  auto plant = make_uncertain2d();
  std::vector<double> xi = {0.3, -0.7, 0.2, 0.5};
  std::vector<double> d = {1.5, 0.3, -0.8};
  std::vector<double> out(4);
  assemble_extended_field(*plant, xi, d, out);

  CHECK(out[2] == -out[0]);
  CHECK(out[3] == -out[1]);

  // held sample = zeta + eps drives the input; state rows by hand
  double u = benchmark_control(0.3 + 0.2, -0.7 + 0.5);
  CHECK(out[0] == doctest::Approx(-0.7 + 0.1 * 0.3 * 0.3 + 0.1 * 1.5).epsilon(1e-14));
  CHECK(out[1] == doctest::Approx(u + 0.2 * (-0.8) * 0.49).epsilon(1e-14));
}

TEST_CASE("extended field at zero error reduces to the nominal loop") {
  auto plant = make_uncertain2d();
  std::vector<double> xi = {0.9, -0.4, 0.0, 0.0};
  std::vector<double> d = {0.0, 0.0, 0.0};
  std::vector<double> out(4);
  assemble_extended_field(*plant, xi, d, out);

  double u = benchmark_control(0.9, -0.4);
  CHECK(out[0] == doctest::Approx(-0.4).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(u).epsilon(1e-15));
  CHECK(out[2] == -out[0]);
  CHECK(out[3] == -out[1]);
}

TEST_CASE("analysis drive differs from the loop drive by the documented gain offset") {
  auto plant = make_uncertain2d();
  Rng rng(7);
  for (int k = 0; k < 50; ++k) {
    std::vector<double> held = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    std::vector<double> u_loop(1), u_analysis(1);
    plant->controller(held, u_loop);
    plant->analysis_controller(held, u_analysis);
    double v = held[1] + 2.1 * held[0];
    CHECK(u_loop[0] - u_analysis[0] == doctest::Approx(-2.0 * 25.515 * v).epsilon(1e-12));
  }
}

TEST_CASE("homogenized field at w = 1 equals the extended field with a zero last row") {
  auto plant = make_uncertain2d();
  Rng rng(11);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> xi(4), d = {rng.uniform(-4, 4), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    for (auto& c : xi) c = rng.uniform(-2, 2);
    std::vector<double> fe(4), fh(5);
    assemble_extended_field(*plant, xi, d, fe);
    homogenize_field(*plant, xi, 1.0, d, fh);
    for (int i = 0; i < 4; ++i) CHECK(fh[i] == doctest::Approx(fe[i]).epsilon(1e-15));
    CHECK(fh[4] == 0.0);
  }
}

TEST_CASE("homogenized field scales with degree alpha + 1 along dilations") {
  auto plant = make_uncertain2d();
  const double alpha = plant->degree();
  const double lam = 2.0;
  Rng rng(13);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> xi(4), d = {rng.uniform(-4, 4), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    for (auto& c : xi) c = rng.uniform(-2, 2);
    double w = rng.uniform(0.2, 1.5);
    std::vector<double> lxi(4);
    for (int i = 0; i < 4; ++i) lxi[i] = lam * xi[i];

    std::vector<double> f1(5), f2(5);
    homogenize_field(*plant, xi, w, d, f1);
    homogenize_field(*plant, lxi, lam * w, d, f2);
    double scale = std::pow(lam, alpha + 1.0);
    for (int i = 0; i < 5; ++i)
      CHECK(f2[i] == doctest::Approx(scale * f1[i]).epsilon(1e-12));
  }
}

TEST_CASE("homogenization rejects non-positive scaling variables") {
  auto plant = make_uncertain2d();
  std::vector<double> xi = {0.1, 0.2, 0.0, 0.0}, d = {0, 0, 0}, out(5);
  CHECK_THROWS_AS(homogenize_field(*plant, xi, 0.0, d, out), DomainError);
  CHECK_THROWS_AS(homogenize_field(*plant, xi, -0.5, d, out), DomainError);
}

TEST_CASE("mixed trigger: frozen value and exact homogenized polynomial") {
  auto trig = make_mixed_trigger(2, 0.0049, 4.0);
  CHECK(trig->degree() == 1.0);
  CHECK(trig->exact_continuation());

  std::vector<double> xi = {1.0, 0.0, 0.0, 0.0};
  CHECK(trig->value(xi) == doctest::Approx(-16.0049).epsilon(1e-15));

  Rng rng(17);
  for (int k = 0; k < 50; ++k) {
    std::vector<double> z(4);
    for (auto& c : z) c = rng.uniform(-2, 2);
    double w = (k % 5 == 0) ? 0.0 : rng.uniform(0.0, 1.5);  // exact at w = 0 too
    double expect = z[2] * z[2] + z[3] * z[3] - 0.0049 * (z[0] * z[0] + z[1] * z[1]) -
                    16.0 * w * w;
    CHECK(trig->hom_value(z, w) == doctest::Approx(expect).epsilon(1e-14));
  }
  CHECK(trig->hom_value(xi, 1.0) == doctest::Approx(trig->value(xi)).epsilon(1e-15));
}

TEST_CASE("error-norm trigger ignores the plant state") {
  auto trig = make_lebesgue_trigger(2, 0.25);
  std::vector<double> a = {5.0, -3.0, 0.1, 0.2}, b = {0.0, 0.0, 0.1, 0.2};
  CHECK(trig->value(a) == trig->value(b));
  CHECK(trig->value(b) == doctest::Approx(0.01 + 0.04 - 0.0625).epsilon(1e-15));
}

TEST_CASE("trigger gradients agree with central differences") {
  auto trig = make_mixed_trigger(2, 0.0049, 4.0);
  Rng rng(19);
  std::vector<double> xi(4), grad(4), num(4);
  for (auto& c : xi) c = rng.uniform(-1.5, 1.5);

  trig->gradient(xi, grad);
  const double h = 1e-6;
  for (int i = 0; i < 4; ++i) {
    auto xp = xi, xm = xi;
    xp[i] += h;
    xm[i] -= h;
    num[i] = (trig->value(xp) - trig->value(xm)) / (2 * h);
    CHECK(grad[i] == doctest::Approx(num[i]).epsilon(1e-6));
  }

  double w = 0.7;
  std::vector<double> hg(4);
  trig->hom_gradient(xi, w, hg);
  for (int i = 0; i < 4; ++i) {
    auto xp = xi, xm = xi;
    xp[i] += h;
    xm[i] -= h;
    double d = (trig->hom_value(xp, w) - trig->hom_value(xm, w)) / (2 * h);
    CHECK(hg[i] == doctest::Approx(d).epsilon(1e-6));
  }
}

TEST_CASE("zero plant has an identically zero field") {
  auto plant = make_zero_plant(3);
  CHECK(plant->state_dim() == 3);
  std::vector<double> xi = {0.5, -1.0, 2.0, 0.1, 0.2, 0.3}, out(6);
  assemble_extended_field(*plant, xi, {}, out);
  for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("plant registry rejects unknown names") {
  CHECK(make_plant("uncertain2d") != nullptr);
  CHECK(make_plant("zero2d") != nullptr);
  CHECK_THROWS_AS(make_plant("no-such-plant"), ConfigError);
}
