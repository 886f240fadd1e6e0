#pragma once

#include <cstdint>
#include <span>

#include "stc/isochron.hpp"
#include "stc/setsynth.hpp"

namespace stc {

// Brute-force reference implementations, deliberately independent of the
// production code paths they check (no shared formulas beyond the model
// interfaces).  Used by the verification command and by tests.

/// Fixed-step RK4 integration of the scalar comparison dynamics
/// psi' = delta0 psi + delta1 from psi(0) = phi0 over [0, t].
double psi_numeric(double phi0, double delta0, double delta1, double t, double h = 1e-5);

/// Root of s -> mu((x,w), s) on [0, t_hi] by plain bisection.  Requires
/// mu(0) < 0 <= mu(t_hi); by monotonicity t_hi = 2 * tau_down always
/// brackets.  Throws ContractViolation on an invalid bracket.
double mu_root_bisect(const IsochronEngine& engine, std::span<const double> x, double w,
                      double t_hi, double tol = 1e-12);

struct MembershipStats {
  long samples = 0;
  long box_misses = 0;      // exact members found outside the reported box
  long unbounded_rays = 0;  // rays whose trigger never crossed before the cap
};

/// Rejection-style containment check of the reachable-state projection:
/// points x = x0 - s*dir with x0 in Z and the trigger still non-positive
/// are exact members by construction (no box clipping involved), and every
/// one of them must lie inside sets.phi_box.
MembershipStats membership_reject(const TriggerSpec& trigger, const SetSystem& sets,
                                  long n, std::uint64_t seed);

struct ConeAgreement {
  long samples = 0;
  long mismatches = 0;  // closed-form radius vs direct cone test disagreements
};

/// Compares the closed-form coverage radius on the w = 1 slice,
/// |x|^2 <= (r^2 - w_lo^2)/w_lo^2, against the engine's direct cone test on
/// points clustered around the boundary sphere.  Ties within 1e-9 relative
/// of the boundary are skipped.
ConeAgreement b1_agreement(const IsochronEngine& engine, int dim, long n,
                           std::uint64_t seed);

}  // namespace stc
