#include "stc/isochron.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stc/errors.hpp"
#include "stc/rng.hpp"

namespace stc {

double psi(double phi0, double delta0, double delta1, double t) {
  if (std::abs(delta0 * t) < 1e-12) return phi0 + delta1 * t;
  double g = std::exp(delta0 * t);
  return g * phi0 + std::expm1(delta0 * t) / delta0 * delta1;
}

double pick_radius(const Box& Z, double w_lo, double w_hi, double safety) {
  if (!(w_lo > 0.0) || !(w_hi >= w_lo)) throw ConfigError("pick_radius: bad scaling interval");
  if (!(safety > 0.0) || safety > 1.0) throw ConfigError("pick_radius: safety must be in (0,1]");
  double inr = Z.inradius();
  double r = safety * std::sqrt(inr * inr + w_lo * w_lo);
  // the reference slice needs w-projections inside [w_lo, w_hi]
  r = std::min(r, w_hi);
  if (!(r > w_lo))
    throw ConfigError("pick_radius: no feasible radius above w_lo (inner set too small)");
  return r;
}

TimeGrid build_time_grid(double tau1, double ratio, int q) {
  if (!(tau1 > 0.0)) throw ConfigError("time grid: tau1 must be positive");
  if (!(ratio > 1.0)) throw ConfigError("time grid: ratio must exceed 1");
  if (q < 1) throw ConfigError("time grid: need at least one region");
  TimeGrid g;
  g.tau1 = tau1;
  g.ratio = ratio;
  g.q = q;
  g.taus.resize(q);
  for (int i = 0; i < q; ++i) g.taus[i] = tau1 * std::pow(ratio, i);
  return g;
}

// ── IsochronEngine ─────────────────────────────────────────────────────────

IsochronEngine::IsochronEngine(const TriggerSpec* trigger, double delta0, double delta1,
                               double r, double w_lo, double w_hi, double alpha)
    : trigger_(trigger),
      delta0_(delta0),
      delta1_(delta1),
      r_(r),
      w_lo_(w_lo),
      w_hi_(w_hi),
      alpha_(alpha) {
  if (trigger == nullptr) throw ContractViolation("isochron engine: null trigger");
  if (delta0 < 0.0 || !(delta1 > 0.0))
    throw ConfigError("isochron engine: need delta0 >= 0 and delta1 > 0");
  if (!(r > w_lo) || !(w_lo > 0.0))
    throw ConfigError("isochron engine: need 0 < w_lo < r");
}

namespace {

double point_norm(std::span<const double> x, double w) {
  return std::sqrt(norm2(x) + w * w);
}

}  // namespace

double IsochronEngine::projection_level(std::span<const double> x, double w) const {
  if (!(w > 0.0)) throw DomainError("projection_level: w must be positive");
  const int n = trigger_->state_dim();
  if (static_cast<int>(x.size()) != n)
    throw ContractViolation("projection_level: state dimension mismatch");
  double rho = point_norm(x, w);
  if (rho == 0.0) throw DomainError("projection_level: zero point has no projection");
  double scale = r_ / rho;
  double xi[16] = {0.0};
  for (int i = 0; i < n; ++i) xi[i] = scale * x[i];  // error slots stay zero
  return trigger_->hom_value(std::span<const double>(xi, 2 * n), scale * w);
}

double IsochronEngine::mu(std::span<const double> x, double w, double t) const {
  double rho = point_norm(x, w);
  if (rho == 0.0) throw DomainError("mu: zero point");
  double level = projection_level(x, w);
  double lam = rho / r_;
  double s = std::pow(lam, alpha_) * t;
  return std::pow(lam, trigger_->degree() + 1.0) * psi(level, delta0_, delta1_, s);
}

double IsochronEngine::tau_down(std::span<const double> x, double w) const {
  double rho = point_norm(x, w);
  if (rho == 0.0) throw DomainError("tau_down: zero point");
  double level = projection_level(x, w);
  double denom = delta0_ * level + delta1_;
  if (!(denom > 0.0))
    throw VerificationError(
        "tau_down: delta0 * level + delta1 <= 0 at the projection; coefficients "
        "inconsistent with the boundary positivity condition");
  // delta0 * s = ln(delta1/denom); below 1e-12 the linear-limit root matches
  // the psi branch switch.
  double s;
  if (delta0_ == 0.0 || std::abs(std::log(delta1_ / denom)) < 1e-12) {
    s = -level / delta1_;
  } else {
    s = std::log(delta1_ / denom) / delta0_;
  }
  if (s < 0.0) s = 0.0;  // level >= 0 projections trigger immediately
  return s * std::pow(r_ / rho, alpha_);
}

bool IsochronEngine::in_cone(std::span<const double> x, double w) const {
  if (!(w > 0.0)) return false;
  double q = w / w_lo_;
  return norm2(x) + w * w <= q * q * r_ * r_;
}

// ── RegionPartition ────────────────────────────────────────────────────────

RegionPartition::RegionPartition(IsochronEngine engine, TimeGrid grid)
    : engine_(std::move(engine)), grid_(std::move(grid)) {
  if (grid_.taus.empty()) throw ConfigError("region partition: empty time grid");
}

int RegionPartition::region_index(std::span<const double> x) const {
  if (!engine_.in_cone(x, 1.0))
    throw CoverageError(true, "state outside the cone section (B1 coverage failed): |x| = " +
                                  std::to_string(norm(x)));
  double tau = engine_.tau_down(x, 1.0);
  if (tau < grid_.taus.front())
    throw CoverageError(false,
                        "certified bound below the first dwell (B2 coverage failed): tau = " +
                            std::to_string(tau));
  // last grid entry <= tau; ties take the lower region boundary inclusively
  auto it = std::upper_bound(grid_.taus.begin(), grid_.taus.end(), tau);
  return static_cast<int>(it - grid_.taus.begin());
}

double RegionPartition::dwell(std::span<const double> x) const {
  return grid_.taus[static_cast<std::size_t>(region_index(x)) - 1];
}

// ── Coverage diagnostics ───────────────────────────────────────────────────

CoverageReport coverage_report(const RegionPartition& partition, double query_radius,
                               int n_samples, std::uint64_t seed) {
  const auto& eng = partition.engine();
  CoverageReport rep;
  rep.b1_radius_sq = (eng.radius() * eng.radius() - eng.w_lo() * eng.w_lo()) /
                     (eng.w_lo() * eng.w_lo());
  rep.query_radius = query_radius;
  rep.samples = n_samples;

  const int n = eng.trigger().state_dim();
  Rng rng = Rng::derive(seed, 0x434f5645u);  // stream tag: coverage
  std::vector<double> x(n);
  int covered = 0;
  for (int k = 0; k < n_samples; ++k) {
    rng.in_ball(query_radius, x);
    if (!eng.in_cone(x, 1.0)) continue;
    if (eng.tau_down(x, 1.0) >= partition.grid().tau1) ++covered;
  }
  rep.covered_fraction = n_samples > 0 ? static_cast<double>(covered) / n_samples : 0.0;
  return rep;
}

}  // namespace stc
