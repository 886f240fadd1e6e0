#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "stc/geometry.hpp"

namespace stc {

/// Bounded disturbance set: a compact box in R^md (md may be 0 for
/// disturbance-free plants).
struct DisturbanceBox {
  Box box;

  int dim() const { return box.dim(); }
  bool contains(std::span<const double> d, double tol = 0.0) const {
    return box.contains(d, tol);
  }
  /// Vertex k of the box, k in [0, 2^md).
  void vertex(unsigned k, std::span<double> out) const {
    for (int i = 0; i < dim(); ++i) out[i] = box.iv[i][(k >> i) & 1u];
  }
  unsigned vertex_count() const { return dim() == 0 ? 1u : (1u << dim()); }
};

/// A sampled-data plant: state dynamics f(zeta, u, d), a static feedback law
/// evaluated on the held (last-sampled) state, the disturbance bounds, and
/// the homogenization degree of the extended closed loop.
class PlantModel {
 public:
  virtual ~PlantModel() = default;

  virtual int state_dim() const = 0;        // n
  virtual int input_dim() const = 0;        // dim of u
  virtual double degree() const = 0;        // alpha
  virtual const DisturbanceBox& disturbances() const = 0;

  virtual void field(std::span<const double> zeta, std::span<const double> u,
                     std::span<const double> d, std::span<double> out) const = 0;
  virtual void controller(std::span<const double> zeta_held, std::span<double> u_out) const = 0;

  /// Drive model assumed by the decay-rate analysis (constraint rows and
  /// residual checks).  Defaults to the closed-loop law.  A plant may
  /// substitute a weaker drive when its decay envelope is calibrated
  /// against one; bounds synthesized under a non-default analysis law are
  /// validated against the actual loop by the simulation-based suites
  /// (trigger dominance, emulation bound, safety).
  virtual void analysis_controller(std::span<const double> zeta_held,
                                   std::span<double> u_out) const {
    controller(zeta_held, u_out);
  }

  virtual std::string name() const = 0;
};

/// Triggering function phi on the extended state xi = (zeta, eps) in R^{2n},
/// with its homogenized extension phi_tilde(xi, w) = w^(theta+1) phi(xi / w).
/// Built-in quadratic triggers override the homogenized forms with exact
/// polynomials valid at w = 0; the generic fallback requires w > 0.
class TriggerSpec {
 public:
  virtual ~TriggerSpec() = default;

  virtual int state_dim() const = 0;  // n; xi lives in R^{2n}
  virtual double degree() const = 0;  // theta
  virtual double value(std::span<const double> xi) const = 0;

  /// Gradient of phi w.r.t. xi.  Default: central finite differences.
  virtual void gradient(std::span<const double> xi, std::span<double> out) const;

  /// w^(theta+1) phi(xi / w).  Default requires w > 0.
  virtual double hom_value(std::span<const double> xi, double w) const;

  /// Gradient of phi_tilde w.r.t. the extended state z at fixed w;
  /// generically w^theta * grad phi(z / w).
  virtual void hom_gradient(std::span<const double> z, double w, std::span<double> out) const;

  /// True when hom_value/hom_gradient are exact closed forms that extend
  /// continuously to w = 0 (all built-ins).  The generic limit fallback is
  /// flagged in synthesis reports.
  virtual bool exact_continuation() const { return false; }

  virtual std::string name() const = 0;
};

// ── Extended closed-loop assembly ──────────────────────────────────────────

/// Which control law closes the loop when assembling f_e:
///   loop     - the plant's actual feedback (simulation, event detection,
///              worst-case oracles);
///   analysis - the drive model assumed by the decay-rate analysis
///              (constraint rows and residual verification).
enum class FieldRole { loop, analysis };

/// f_e(xi, d) = (f(zeta, k(zeta+eps), d), -f(zeta, k(zeta+eps), d)): the
/// sample-and-hold loop in (state, error) coordinates, where the error rows
/// are exactly the negated state rows.
void assemble_extended_field(const PlantModel& plant, std::span<const double> xi,
                             std::span<const double> d, std::span<double> out,
                             FieldRole role = FieldRole::loop);

/// Homogenized loop on R^{2n+1}: (w^(alpha+1) f_e(xi / w, d), 0).
/// Throws DomainError for w <= 0.
void homogenize_field(const PlantModel& plant, std::span<const double> xi, double w,
                      std::span<const double> d, std::span<double> out,
                      FieldRole role = FieldRole::loop);

/// Generic homogenized trigger value (w > 0); built-ins bypass this with
/// exact polynomials.
double homogenize_trigger(const TriggerSpec& trig, std::span<const double> xi, double w);

// ── Built-ins ──────────────────────────────────────────────────────────────

/// Two-state plant with matched uncertainty channels:
///   zeta1' = zeta2 + 0.1 d2 zeta1 + 0.1 d1
///   zeta2' = u + 0.2 d3 zeta2^2
/// under the damping feedback
///   u = -(7.02 |v| + 25.515) v,  v = held2 + 2.1 held1,
/// with d in [-4,4] x [-1,1] x [-1,1] and degree alpha = 1.  The decay
/// analysis assumes the offset-gain drive -(7.02 |v| - 25.515) v (see
/// analysis_controller).
std::unique_ptr<PlantModel> make_uncertain2d();

/// Drift-free plant of dimension n (f = 0, no disturbances); degree alpha.
std::unique_ptr<PlantModel> make_zero_plant(int n, double alpha = 1.0);

/// Pure error-norm trigger phi = |eps|^2 - eps_bar^2 (theta = 1).
std::unique_ptr<TriggerSpec> make_lebesgue_trigger(int n, double eps_bar);

/// Relative-plus-absolute trigger phi = |eps|^2 - sigma |zeta|^2 - eps_bar^2
/// (theta = 1).  sigma = 0 degenerates to the pure error-norm trigger.
std::unique_ptr<TriggerSpec> make_mixed_trigger(int n, double sigma, double eps_bar);

/// Registry lookup used by config loading: "uncertain2d", "zero2d".
std::unique_ptr<PlantModel> make_plant(const std::string& name);

}  // namespace stc
