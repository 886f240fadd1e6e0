#include "stc/oracles.hpp"

#include <cmath>

#include "stc/errors.hpp"
#include "stc/rng.hpp"

namespace stc {

double psi_numeric(double phi0, double delta0, double delta1, double t, double h) {
  if (!(h > 0.0)) throw ContractViolation("psi_numeric: step must be positive");
  if (!(t >= 0.0)) throw ContractViolation("psi_numeric: time must be non-negative");
  auto f = [&](double y) { return delta0 * y + delta1; };
  long steps = std::max(1L, static_cast<long>(std::ceil(t / h)));
  double dt = t / static_cast<double>(steps);
  double y = phi0;
  for (long k = 0; k < steps; ++k) {
    double k1 = f(y);
    double k2 = f(y + 0.5 * dt * k1);
    double k3 = f(y + 0.5 * dt * k2);
    double k4 = f(y + dt * k3);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

double mu_root_bisect(const IsochronEngine& engine, std::span<const double> x, double w,
                      double t_hi, double tol) {
  if (!(t_hi > 0.0)) throw ContractViolation("mu_root_bisect: empty bracket");
  double lo = 0.0, hi = t_hi;
  if (!(engine.mu(x, w, lo) < 0.0) || engine.mu(x, w, hi) < 0.0)
    throw ContractViolation("mu_root_bisect: bracket does not straddle the root");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (engine.mu(x, w, mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

MembershipStats membership_reject(const TriggerSpec& trigger, const SetSystem& sets,
                                  long n, std::uint64_t seed) {
  const int n_dim = trigger.state_dim();
  if (n_dim > 8) throw ContractViolation("membership_reject: dimension above maximum");
  MembershipStats stats;

  double x0[8], dir[8], z[16];
  auto phi_at = [&](std::span<const double> base, std::span<const double> d, double s,
                    double w) {
    for (int i = 0; i < n_dim; ++i) {
      z[n_dim + i] = s * d[i];
      z[i] = base[i] - z[n_dim + i];
    }
    return trigger.hom_value(std::span<const double>(z, 2 * n_dim), w);
  };

  double reach = 0.0;
  for (int i = 0; i < n_dim; ++i) reach = std::max(reach, sets.Z.width(i));
  const double cap = 1e6 * std::max(reach, 1e-9);

  for (long k = 0; k < n; ++k) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(k));
    for (int i = 0; i < n_dim; ++i) x0[i] = rng.uniform(sets.Z.lo(i), sets.Z.hi(i));
    double w = std::exp(rng.uniform(std::log(sets.w_lo), std::log(sets.w_hi)));
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int i = 0; i < n_dim; ++i) {
        dir[i] = rng.normal();
        norm2 += dir[i] * dir[i];
      }
    } while (norm2 == 0.0);
    for (int i = 0; i < n_dim; ++i) dir[i] /= std::sqrt(norm2);

    std::span<const double> base(x0, n_dim), d(dir, n_dim);
    if (phi_at(base, d, 0.0, w) > 0.0) continue;  // assumption violated elsewhere

    // bracket a trigger crossing along the ray by doubling
    double s_hi = std::max(1e-6, 0.125 * reach);
    while (phi_at(base, d, s_hi, w) <= 0.0) {
      s_hi *= 2.0;
      if (s_hi > cap) break;
    }
    if (s_hi > cap) {
      ++stats.unbounded_rays;
      continue;
    }
    double lo = 0.0, hi = s_hi;
    for (int it = 0; it < 60 && hi - lo > 1e-15 * s_hi; ++it) {
      double mid = 0.5 * (lo + hi);
      (phi_at(base, d, mid, w) > 0.0 ? hi : lo) = mid;
    }

    double s = rng.uniform01() < 0.25 ? lo : lo * rng.uniform01();
    if (phi_at(base, d, s, w) > 0.0) s = lo;  // non-monotone ray: fall back to the shell
    double x[8];
    for (int i = 0; i < n_dim; ++i) x[i] = x0[i] - s * dir[i];
    ++stats.samples;
    if (!sets.phi_box.contains(std::span<const double>(x, n_dim))) ++stats.box_misses;
  }
  return stats;
}

ConeAgreement b1_agreement(const IsochronEngine& engine, int dim, long n,
                           std::uint64_t seed) {
  if (dim < 1 || dim > 8) throw ContractViolation("b1_agreement: bad dimension");
  const double r = engine.radius(), w_lo = engine.w_lo();
  const double b1 = std::sqrt((r * r - w_lo * w_lo)) / w_lo;

  ConeAgreement agree;
  double dir[8], x[8];
  for (long k = 0; k < n; ++k) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(k));
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int i = 0; i < dim; ++i) {
        dir[i] = rng.normal();
        norm2 += dir[i] * dir[i];
      }
    } while (norm2 == 0.0);
    double inv = 1.0 / std::sqrt(norm2);

    // cluster around the boundary sphere, with some mass across the whole range
    double u = rng.uniform01();
    double radius;
    if (u < 0.5) {
      radius = b1 * (1.0 + (rng.uniform01() - 0.5) * 2e-6);
    } else {
      radius = b1 * rng.uniform(0.0, 1.2);
    }
    if (std::abs(radius - b1) <= 1e-9 * (1.0 + b1)) continue;  // boundary tie

    for (int i = 0; i < dim; ++i) x[i] = dir[i] * inv * radius;
    ++agree.samples;
    bool formula = radius <= b1;
    bool direct = engine.in_cone(std::span<const double>(x, dim), 1.0);
    if (formula != direct) ++agree.mismatches;
  }
  return agree;
}

}  // namespace stc
