#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stc/geometry.hpp"
#include "stc/models.hpp"

namespace stc {

/// Working sets of the synthesis problem.  phi_box over-approximates the
/// reachable-state projection {x : exists x0 in Z, w in W with
/// phi_tilde((x, x0-x, w)) <= 0}; e_box = Z - phi_box per axis.
struct SetSystem {
  Box Z;
  double w_lo = 0.0;
  double w_hi = 0.0;
  Box phi_box;
  Box e_box;
  double inflation = 0.0;
};

struct BuildSetsOptions {
  double inflation = 0.05;
  double growth_cap = 1e4;  // max allowed diameter as a multiple of diam(Z) + w_hi
};

/// Grid-probes the defining inequality to bound the reachable-state
/// projection as an axis-aligned box, inflates it, and derives the error
/// box.  Throws SynthesisError when the probe keeps escaping the growth cap
/// (the set is not compact and the method does not apply).
SetSystem build_sets(const TriggerSpec& trigger, const Box& Z, double w_lo, double w_hi,
                     const BuildSetsOptions& opts = {});

/// One sampled constraint of the decay inequality: trigger level and the
/// directional derivative of phi_tilde along the homogenized loop field at a
/// point of the constraint region.
struct ConstraintRow {
  double phi = 0.0;  // phi_tilde(z, w)
  double L = 0.0;    // grad_z phi_tilde . w^(alpha+1) f_e(z/w, d)
  std::vector<double> z;  // (x, e), kept for diagnostics and refits
  double w = 0.0;
  std::vector<double> d;
};

/// Constraint region: the sample-and-hold loop keeps x + e equal to the held
/// sample in Z and the trigger non-positive up to the crossing, so rows are
/// drawn from S = {(x0-e, e, w) : x0 in Z, w in W, x0-e in phi_box, e in
/// e_box, phi_tilde <= 0}, mixing interior, face and trigger-shell samples;
/// disturbances are box vertices with probability 1/2.
std::vector<ConstraintRow> sample_constraints(const PlantModel& plant,
                                              const TriggerSpec& trigger,
                                              const SetSystem& sets, int n,
                                              std::uint64_t seed);

/// Trigger levels on the sampling set Z x {0} x W (all negative under the
/// standing assumptions); these force delta0 phi + delta1 >= eps_delta.
std::vector<double> sample_boundary_levels(const TriggerSpec& trigger, const SetSystem& sets,
                                           int n, std::uint64_t seed);

struct DeltaCoefficients {
  double delta0 = 0.0;
  double delta1 = 0.0;
  double eps_delta = 0.0;
  double kappa = 0.0;        // objective weight used for the fit
  double margin = 0.0;       // min residual from the last verification
  int rows = 0;
  int boundary_rows = 0;
  long verify_points = 0;
  int refits = 0;
  bool degenerate_tie = false;
  bool inflated_fallback = false;  // refit cap hit; delta1 bumped by the shortfall
};

/// Exact 2-variable LP: minimize delta1 + kappa*delta0 subject to
///   delta0*phi_i + delta1 >= L_i          (rows)
///   delta0*phi_b + delta1 >= eps_delta    (boundary levels, phi_b < 0)
///   delta0 >= 0, delta1 >= eps_delta.
/// Solved by enumerating the vertices of the upper envelope of the
/// constraint lines (every optimum of the full pairwise-intersection
/// enumeration lies there).  kappa defaults to mean |phi_i|.
DeltaCoefficients fit_delta(std::span<const ConstraintRow> rows,
                            std::span<const double> boundary_levels, double eps_delta,
                            std::optional<double> kappa = std::nullopt);

struct VerifyReport {
  double margin = 0.0;  // m* = min(delta0*phi + delta1 - L)
  long points = 0;
  ConstraintRow worst;  // argmin row
  double max_L_box = 0.0;    // max sampled L with box membership only
  double max_L_probe = 0.0;  // max sampled L re-checked against the probed set
};

/// Dense a-posteriori check of the decay inequality on a deterministic
/// lattice (all disturbance vertices included) plus fresh random samples,
/// totalling at least n_fine points.  Pass iff margin >= 0.
VerifyReport verify_delta(const PlantModel& plant, const TriggerSpec& trigger,
                          const SetSystem& sets, const DeltaCoefficients& coeffs,
                          long n_fine, std::uint64_t seed);

struct SynthesisOptions {
  int rows = 20000;
  int boundary_rows = 2000;
  long verify_points = 100000;
  double eps_delta = 1e-3;
  int max_refits = 20;
  std::uint64_t seed = 1;
  /// Multiplier applied to the fitted delta1 before the final verification;
  /// covers the gap between the sampled maximum and the true supremum of
  /// the constraint rows.
  double safety = 1.05;
};

/// Full fit-verify-refit loop: failed verifications feed their worst point
/// back as a constraint row; after max_refits the remaining shortfall is
/// added to delta1 and the result re-verified.
DeltaCoefficients synthesize_delta(const PlantModel& plant, const TriggerSpec& trigger,
                                   const SetSystem& sets, const SynthesisOptions& opts,
                                   VerifyReport* last_verify = nullptr);

}  // namespace stc
