#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stc/geometry.hpp"
#include "stc/models.hpp"

namespace stc {

/// psi(phi0, t): solution of the scalar comparison dynamics
/// psi' = delta0 psi + delta1, psi(0) = phi0:
///   e^(delta0 t) phi0 + (e^(delta0 t) - 1)/delta0 * delta1,
/// with the linear limit phi0 + delta1 t used when |delta0 t| < 1e-12.
double psi(double phi0, double delta0, double delta1, double t);

/// Largest scaled-sphere radius r (times `safety`) such that the reference
/// slice {|(x,w)| = r, w in [w_lo, w_hi]} stays inside Z x W:
/// sqrt(r^2 - w_lo^2) <= inradius(Z), capped at w_hi.  Throws ConfigError
/// when no radius above w_lo exists.
double pick_radius(const Box& Z, double w_lo, double w_hi, double safety);

/// Geometric dwell grid tau_i = tau1 * ratio^(i-1), i = 1..q.
struct TimeGrid {
  double tau1 = 0.0;
  double ratio = 0.0;
  int q = 0;
  std::vector<double> taus;  // size q, ascending
};

TimeGrid build_time_grid(double tau1, double ratio, int q);

/// Evaluator of the homogeneous lower bound on inter-sample times.  All
/// queries take a point (x, w) with w > 0; the trigger supplies the
/// homogenized level function.
class IsochronEngine {
 public:
  IsochronEngine(const TriggerSpec* trigger, double delta0, double delta1, double r,
                 double w_lo, double w_hi, double alpha);

  double delta0() const { return delta0_; }
  double delta1() const { return delta1_; }
  double radius() const { return r_; }
  double w_lo() const { return w_lo_; }
  double w_hi() const { return w_hi_; }
  double alpha() const { return alpha_; }
  const TriggerSpec& trigger() const { return *trigger_; }

  /// Trigger level at the radial projection of (x, w) onto the reference
  /// slice, with zero error:  phi_tilde((r x/|(x,w)|, 0, r w/|(x,w)|)).
  double projection_level(std::span<const double> x, double w) const;

  /// mu((x,w), t) = (|(x,w)|/r)^(theta+1) psi(level, (|(x,w)|/r)^alpha t):
  /// upper bound on the trigger along all disturbance realizations started
  /// at (x, 0, w).  Throws DomainError at the origin or for w <= 0.
  double mu(std::span<const double> x, double w, double t) const;

  /// Positive root of mu((x,w), .): the certified lower bound on the
  /// inter-sample time.  Closed form
  ///   s* = ln(delta1 / (delta0 level + delta1)) / delta0,
  ///   tau = s* (r/|(x,w)|)^alpha,
  /// with s* = -level/delta1 in the delta0 -> 0 limit.  Throws
  /// VerificationError when delta0 level + delta1 <= 0 (coefficients
  /// inconsistent with the boundary condition at the projection).
  double tau_down(std::span<const double> x, double w) const;

  /// Scaling cone membership: w > 0 and |x|^2 + w^2 <= (w/w_lo)^2 r^2.
  bool in_cone(std::span<const double> x, double w) const;

 private:
  const TriggerSpec* trigger_;
  double delta0_, delta1_, r_, w_lo_, w_hi_, alpha_;
};

/// Dwell regions: R_i collects the states on the w = 1 slice whose certified
/// bound lies in [tau_i, tau_(i+1)), with the last region unbounded above.
/// Lookup is closed-form: index = max { i : tau_i <= tau_down((x,1)) }.
class RegionPartition {
 public:
  RegionPartition(IsochronEngine engine, TimeGrid grid);

  const IsochronEngine& engine() const { return engine_; }
  const TimeGrid& grid() const { return grid_; }

  /// Region index (1-based) of plant state x lifted to (x, 1).  Throws
  /// CoverageError when (x,1) is outside the cone (B1 fails) or its bound
  /// is below tau_1 (B2 fails).
  int region_index(std::span<const double> x) const;

  /// Dwell assigned to state x: tau_(region_index(x)).
  double dwell(std::span<const double> x) const;

 private:
  IsochronEngine engine_;
  TimeGrid grid_;
};

/// Coverage diagnostics for the guaranteed ball B = B1 cap B2 on the w = 1
/// slice: B1 is the cone section (radius^2 = (r^2 - w_lo^2)/w_lo^2), B2 the
/// set where the certified bound reaches tau_1.
struct CoverageReport {
  double b1_radius_sq = 0.0;
  double covered_fraction = 0.0;  // Monte-Carlo fraction of the query ball in B
  double query_radius = 0.0;
  int samples = 0;
};

CoverageReport coverage_report(const RegionPartition& partition, double query_radius,
                               int n_samples, std::uint64_t seed);

}  // namespace stc
