#include "stc/setsynth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stc/errors.hpp"
#include "stc/rng.hpp"

namespace stc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Geometric w probe values covering [w_lo, w_hi] including both endpoints.
std::vector<double> w_probe_values(double w_lo, double w_hi, int count) {
  std::vector<double> ws;
  ws.reserve(count);
  if (count == 1 || w_hi == w_lo) return {w_hi};
  double la = std::log(w_lo), lb = std::log(w_hi);
  for (int i = 0; i < count; ++i)
    ws.push_back(std::exp(la + (lb - la) * static_cast<double>(i) / (count - 1)));
  ws.front() = w_lo;
  ws.back() = w_hi;
  return ws;
}

// Axis-product lattice over a box, k points per axis.
std::vector<std::vector<double>> box_lattice(const Box& b, int k) {
  const int n = b.dim();
  std::vector<std::vector<double>> pts;
  std::vector<int> idx(n, 0);
  while (true) {
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i)
      p[i] = k == 1 ? 0.5 * (b.lo(i) + b.hi(i))
                    : b.lo(i) + b.width(i) * static_cast<double>(idx[i]) / (k - 1);
    pts.push_back(std::move(p));
    int j = 0;
    while (j < n && ++idx[j] == k) idx[j++] = 0;
    if (j == n) break;
  }
  return pts;
}

double hom_phi_at(const TriggerSpec& trig, std::span<const double> x,
                  std::span<const double> e, double w) {
  const int n = trig.state_dim();
  double z[16];
  for (int i = 0; i < n; ++i) {
    z[i] = x[i];
    z[n + i] = e[i];
  }
  return trig.hom_value(std::span<const double>(z, 2 * n), w);
}

// Membership probe for the reachable-state projection: exists a grid witness
// (x0, w) with phi_tilde((x, x0-x, w)) <= 0.  The clamp of x onto Z is always
// tried first (exact witness for error-norm-style triggers).
struct MembershipProbe {
  const TriggerSpec* trig;
  const Box* Z;
  std::vector<std::vector<double>> x0s;
  std::vector<double> ws;

  bool contains(std::span<const double> x) const {
    const int n = Z->dim();
    double x0c[8], e[8];
    std::span<double> clamp_span(x0c, n);
    Z->clamp(x, clamp_span);
    for (double w : ws) {
      for (int i = 0; i < n; ++i) e[i] = x0c[i] - x[i];
      if (hom_phi_at(*trig, x, std::span<const double>(e, n), w) <= 0.0) return true;
      for (const auto& x0 : x0s) {
        for (int i = 0; i < n; ++i) e[i] = x0[i] - x[i];
        if (hom_phi_at(*trig, x, std::span<const double>(e, n), w) <= 0.0) return true;
      }
    }
    return false;
  }
};

int probe_points_per_axis(int n, bool fine) {
  if (n <= 2) return fine ? 141 : 61;
  if (n == 3) return fine ? 41 : 21;
  return fine ? 15 : 9;
}

// Box hull of the probed members inside `probe`; empty optional when no grid
// point is a member.
std::optional<Box> probed_hull(const MembershipProbe& mp, const Box& probe, int k) {
  const int n = probe.dim();
  std::vector<std::array<double, 2>> hull(n, {kInf, -kInf});
  bool any = false;
  std::vector<int> idx(n, 0);
  std::vector<double> p(n);
  while (true) {
    for (int i = 0; i < n; ++i)
      p[i] = probe.lo(i) + probe.width(i) * static_cast<double>(idx[i]) / (k - 1);
    if (mp.contains(p)) {
      any = true;
      for (int i = 0; i < n; ++i) {
        hull[i][0] = std::min(hull[i][0], p[i]);
        hull[i][1] = std::max(hull[i][1], p[i]);
      }
    }
    int j = 0;
    while (j < n && ++idx[j] == k) idx[j++] = 0;
    if (j == n) break;
  }
  if (!any) return std::nullopt;
  return Box(hull);
}

}  // namespace

SetSystem build_sets(const TriggerSpec& trigger, const Box& Z, double w_lo, double w_hi,
                     const BuildSetsOptions& opts) {
  const int n = trigger.state_dim();
  if (Z.dim() != n) throw ConfigError("build_sets: inner set dimension mismatch");
  if (!(w_lo > 0.0) || !(w_hi >= w_lo)) throw ConfigError("build_sets: bad scaling interval");
  if (n > 8) throw ConfigError("build_sets: dimension above supported maximum");

  MembershipProbe mp;
  mp.trig = &trigger;
  mp.Z = &Z;
  mp.x0s = box_lattice(Z, n <= 2 ? 9 : 5);
  mp.ws = w_probe_values(w_lo, w_hi, n <= 2 ? 9 : 5);

  double scale = w_hi;
  for (int i = 0; i < n; ++i) scale = std::max(scale, Z.width(i));
  const double cap = opts.growth_cap * std::max(scale, 1e-9);

  // expand the probe window until no member touches its boundary shell
  Box probe = Z.inflated(1.0);
  const int k_coarse = probe_points_per_axis(n, false);
  Box hull = Z;
  for (int iter = 0;; ++iter) {
    if (iter > 60)
      throw SynthesisError("build_sets: probe did not stabilize (working set unbounded?)");
    for (int i = 0; i < n; ++i)
      if (probe.width(i) > cap)
        throw SynthesisError(
            "build_sets: reachable-state projection escaped the growth cap; the working "
            "set is not compact under this trigger");
    auto h = probed_hull(mp, probe, k_coarse);
    if (!h)
      throw SynthesisError("build_sets: no member found; trigger positive on the inner set");
    hull = *h;
    bool touched = false;
    for (int i = 0; i < n; ++i) {
      double spacing = probe.width(i) / (k_coarse - 1);
      if (hull.lo(i) < probe.lo(i) + 1.5 * spacing || hull.hi(i) > probe.hi(i) - 1.5 * spacing)
        touched = true;
    }
    if (!touched) break;
    probe = probe.inflated(1.0);
  }

  // refinement pass at higher resolution around the coarse hull
  Box fine_probe = hull.inflated(0.25);
  auto fine = probed_hull(mp, fine_probe, probe_points_per_axis(n, true));
  if (fine) hull = *fine;

  SetSystem out;
  out.Z = Z;
  out.w_lo = w_lo;
  out.w_hi = w_hi;
  out.inflation = opts.inflation;
  out.phi_box = hull.inflated(opts.inflation);
  std::vector<std::array<double, 2>> e_iv(n);
  for (int i = 0; i < n; ++i)
    e_iv[i] = {Z.lo(i) - out.phi_box.hi(i), Z.hi(i) - out.phi_box.lo(i)};
  out.e_box = Box(e_iv);
  return out;
}

// ── Constraint region sampling ─────────────────────────────────────────────

namespace {

// Largest step s such that e = s*dir stays in e_box, x = x0 - s*dir stays in
// phi_box, and the trigger stays non-positive along the whole segment
// (first-crossing semantics: the scan stops at the first sign change, which
// is the only part reachable by a continuous error trajectory from e = 0).
double shell_distance(const TriggerSpec& trig, const SetSystem& sets,
                      std::span<const double> x0, std::span<const double> dir, double w) {
  const int n = trig.state_dim();
  double s_box = kInf;
  for (int i = 0; i < n; ++i) {
    if (dir[i] > 0.0) {
      s_box = std::min(s_box, sets.e_box.hi(i) / dir[i]);
      s_box = std::min(s_box, (x0[i] - sets.phi_box.lo(i)) / dir[i]);
    } else if (dir[i] < 0.0) {
      s_box = std::min(s_box, sets.e_box.lo(i) / dir[i]);
      s_box = std::min(s_box, (x0[i] - sets.phi_box.hi(i)) / dir[i]);
    }
  }
  if (!(s_box > 0.0) || !std::isfinite(s_box)) return 0.0;

  double x[8], e[8];
  auto phi_at = [&](double s) {
    for (int i = 0; i < n; ++i) {
      e[i] = s * dir[i];
      x[i] = x0[i] - e[i];
    }
    return hom_phi_at(trig, std::span<const double>(x, n), std::span<const double>(e, n), w);
  };

  if (phi_at(0.0) > 0.0) return 0.0;
  constexpr int kScan = 64;
  double prev = 0.0;
  for (int k = 1; k <= kScan; ++k) {
    double s = s_box * static_cast<double>(k) / kScan;
    if (phi_at(s) > 0.0) {
      double lo = prev, hi = s;
      for (int it = 0; it < 50 && hi - lo > 1e-15 * s_box; ++it) {
        double mid = 0.5 * (lo + hi);
        (phi_at(mid) > 0.0 ? hi : lo) = mid;
      }
      return lo;  // the non-positive side of the shell
    }
    prev = s;
  }
  return s_box;
}

struct RowEvaluator {
  const PlantModel* plant;
  const TriggerSpec* trig;
  int n, m, md;

  RowEvaluator(const PlantModel& p, const TriggerSpec& t)
      : plant(&p), trig(&t), n(p.state_dim()), m(2 * p.state_dim()),
        md(p.disturbances().dim()) {
    if (t.state_dim() != n)
      throw ContractViolation("constraint sampling: plant/trigger dimension mismatch");
  }

  ConstraintRow eval(std::span<const double> z, double w, std::span<const double> d) const {
    double grad[16], field[17];
    trig->hom_gradient(z, w, std::span<double>(grad, m));
    homogenize_field(*plant, z, w, d, std::span<double>(field, m + 1), FieldRole::analysis);
    double L = 0.0;
    for (int i = 0; i < m; ++i) L += grad[i] * field[i];
    ConstraintRow row;
    row.phi = trig->hom_value(z, w);
    row.L = L;
    row.z.assign(z.begin(), z.end());
    row.w = w;
    row.d.assign(d.begin(), d.end());
    return row;
  }
};

struct TubeSampler {
  const TriggerSpec* trig;
  const SetSystem* sets;
  int n;

  void x0_sample(Rng& rng, std::span<double> x0) const {
    const Box& Z = sets->Z;
    for (int i = 0; i < n; ++i) x0[i] = rng.uniform(Z.lo(i), Z.hi(i));
    if (rng.coin()) {  // face sample: pin one coordinate to a bound
      int j = static_cast<int>(rng.below(n));
      x0[j] = rng.coin() ? Z.lo(j) : Z.hi(j);
    }
  }

  double w_sample(Rng& rng) const {
    double u = rng.uniform01();
    if (u < 0.40) return rng.uniform(sets->w_lo, sets->w_hi);
    if (u < 0.80) return std::exp(rng.uniform(std::log(sets->w_lo), std::log(sets->w_hi)));
    return u < 0.90 ? sets->w_lo : sets->w_hi;
  }

  void direction(Rng& rng, std::span<double> dir) const {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (auto& c : dir) {
        c = rng.normal();
        norm2 += c * c;
      }
    } while (norm2 == 0.0);
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : dir) c *= inv;
  }

  void d_sample(Rng& rng, const DisturbanceBox& box, std::span<double> d) const {
    if (box.dim() == 0) return;
    if (rng.coin()) {
      box.vertex(static_cast<unsigned>(rng.below(box.vertex_count())), d);
    } else {
      for (int i = 0; i < box.dim(); ++i) d[i] = rng.uniform(box.box.lo(i), box.box.hi(i));
    }
  }

  // One point of the constraint region: z = (x0 - e, e) with e on a random
  // ray, outward-biased and with a 30% mass exactly on the trigger shell.
  void z_sample(Rng& rng, std::span<double> z, double& w_out) const {
    double x0[8], dir[8];
    x0_sample(rng, std::span<double>(x0, n));
    double w = w_sample(rng);
    direction(rng, std::span<double>(dir, n));
    double shell = shell_distance(*trig, *sets, std::span<const double>(x0, n),
                                  std::span<const double>(dir, n), w);
    double u = rng.uniform01();
    double s = u < 0.3 ? shell : shell * std::sqrt(rng.uniform01());
    for (int i = 0; i < n; ++i) {
      z[n + i] = s * dir[i];
      z[i] = x0[i] - z[n + i];
    }
    w_out = w;
  }
};

}  // namespace

std::vector<ConstraintRow> sample_constraints(const PlantModel& plant,
                                              const TriggerSpec& trigger,
                                              const SetSystem& sets, int n_rows,
                                              std::uint64_t seed) {
  RowEvaluator ev(plant, trigger);
  TubeSampler ts{&trigger, &sets, ev.n};
  std::vector<ConstraintRow> rows;
  rows.reserve(n_rows);
  double z[16], d[16];
  for (int i = 0; i < n_rows; ++i) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(i));
    double w = 0.0;
    ts.z_sample(rng, std::span<double>(z, ev.m), w);
    ts.d_sample(rng, plant.disturbances(), std::span<double>(d, ev.md));
    rows.push_back(ev.eval(std::span<const double>(z, ev.m), w,
                           std::span<const double>(d, ev.md)));
  }
  return rows;
}

std::vector<double> sample_boundary_levels(const TriggerSpec& trigger, const SetSystem& sets,
                                           int n_levels, std::uint64_t seed) {
  const int n = trigger.state_dim();
  std::vector<double> levels;
  double e0[8] = {0.0};
  std::span<const double> zero_err(e0, n);

  auto push = [&](std::span<const double> x0, double w) {
    double phi = hom_phi_at(trigger, x0, zero_err, w);
    if (!(phi < 0.0))
      throw SynthesisError(
          "boundary sampling: trigger not negative on the inner set with zero error "
          "(standing assumption violated)");
    levels.push_back(phi);
  };

  auto lattice = box_lattice(sets.Z, n <= 2 ? 9 : 5);
  auto ws = w_probe_values(sets.w_lo, sets.w_hi, 17);
  for (const auto& x0 : lattice)
    for (double w : ws) push(x0, w);

  TubeSampler ts{&trigger, &sets, n};
  double x0[8];
  for (int i = 0; static_cast<int>(levels.size()) < n_levels; ++i) {
    Rng rng = Rng::derive(seed ^ 0xb07dull, static_cast<std::uint64_t>(i));
    ts.x0_sample(rng, std::span<double>(x0, n));
    push(std::span<const double>(x0, n), ts.w_sample(rng));
  }
  return levels;
}

// ── Two-variable LP ────────────────────────────────────────────────────────

namespace {

struct Line {
  double a;  // intercept
  double b;  // slope:  delta1 >= a + b * delta0
};

double meet(const Line& p, const Line& q) { return (p.a - q.a) / (q.b - p.b); }

// Upper envelope of the lines over delta0 in [0, inf).
struct Envelope {
  std::vector<Line> hull;       // by ascending slope
  std::vector<double> breaks;   // hull[i] active on [breaks[i-1], breaks[i]]

  explicit Envelope(std::vector<Line> lines) {
    std::sort(lines.begin(), lines.end(), [](const Line& p, const Line& q) {
      return p.b < q.b || (p.b == q.b && p.a < q.a);
    });
    for (const Line& l : lines) {
      if (!hull.empty() && hull.back().b == l.b) hull.pop_back();  // keep max intercept
      while (hull.size() >= 2 &&
             meet(l, hull[hull.size() - 2]) <= meet(hull.back(), hull[hull.size() - 2]))
        hull.pop_back();
      hull.push_back(l);
    }
    for (std::size_t i = 0; i + 1 < hull.size(); ++i)
      breaks.push_back(meet(hull[i], hull[i + 1]));
  }

  double value(double x) const {
    std::size_t k = std::upper_bound(breaks.begin(), breaks.end(), x) - breaks.begin();
    return hull[k].a + hull[k].b * x;
  }
};

}  // namespace

DeltaCoefficients fit_delta(std::span<const ConstraintRow> rows,
                            std::span<const double> boundary_levels, double eps_delta,
                            std::optional<double> kappa) {
  if (!(eps_delta > 0.0)) throw ConfigError("fit_delta: eps_delta must be positive");

  std::vector<Line> lines;
  lines.reserve(rows.size() + boundary_levels.size() + 1);
  for (const auto& r : rows) lines.push_back({r.L, -r.phi});
  for (double phi_b : boundary_levels) {
    if (!(phi_b < 0.0))
      throw SynthesisError("fit_delta: non-negative boundary trigger level");
    lines.push_back({eps_delta, -phi_b});
  }
  lines.push_back({eps_delta, 0.0});

  double kap;
  if (kappa) {
    kap = *kappa;
  } else if (rows.empty()) {
    kap = 1.0;
  } else {
    kap = 0.0;
    for (const auto& r : rows) kap += std::abs(r.phi);
    kap /= static_cast<double>(rows.size());
    if (kap == 0.0) kap = 1.0;
  }
  if (!(kap >= 0.0)) throw ConfigError("fit_delta: objective weight must be non-negative");

  // candidate vertices: the axis point delta0 = 0 and every envelope
  // breakpoint at positive delta0 (the objective is convex piecewise linear,
  // so its minimum sits on one of them)
  Envelope env(std::move(lines));
  std::vector<double> candidates{0.0};
  for (double x : env.breaks)
    if (x > 0.0 && std::isfinite(x)) candidates.push_back(x);

  double best_obj = kInf, best_x = 0.0, second_obj = kInf, second_x = 0.0;
  for (double x : candidates) {
    double obj = env.value(x) + kap * x;
    if (obj < best_obj) {
      second_obj = best_obj;
      second_x = best_x;
      best_obj = obj;
      best_x = x;
    } else if (obj < second_obj) {
      second_obj = obj;
      second_x = x;
    }
  }

  DeltaCoefficients out;
  out.delta0 = best_x;
  out.delta1 = env.value(best_x);
  out.eps_delta = eps_delta;
  out.kappa = kap;
  out.rows = static_cast<int>(rows.size());
  out.boundary_rows = static_cast<int>(boundary_levels.size());
  out.degenerate_tie = second_obj < kInf &&
                       second_obj - best_obj <= 1e-12 * (1.0 + std::abs(best_obj)) &&
                       std::abs(second_x - best_x) > 1e-12 * (1.0 + best_x);

  // floating-point safety: restore exact feasibility on the given rows
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.L - r.phi * out.delta0 - out.delta1);
  for (double phi_b : boundary_levels)
    worst = std::max(worst, eps_delta - phi_b * out.delta0 - out.delta1);
  if (out.delta1 < eps_delta) worst = std::max(worst, eps_delta - out.delta1);
  if (worst > 0.0) out.delta1 += worst;
  return out;
}

// ── Verification ───────────────────────────────────────────────────────────

namespace {

std::vector<std::vector<double>> verification_directions(int n, std::uint64_t seed) {
  std::vector<std::vector<double>> dirs;
  if (n == 1) {
    dirs.push_back({1.0});
    dirs.push_back({-1.0});
    return dirs;
  }
  if (n == 2) {
    for (int k = 0; k < 16; ++k) {
      double a = 6.283185307179586 * k / 16.0;
      dirs.push_back({std::cos(a), std::sin(a)});
    }
    return dirs;
  }
  for (int i = 0; i < n; ++i)
    for (double sign : {1.0, -1.0}) {
      std::vector<double> d(n, 0.0);
      d[i] = sign;
      dirs.push_back(std::move(d));
    }
  Rng rng = Rng::derive(seed, 0xd135u);
  for (int k = 0; k < 8; ++k) {
    std::vector<double> d(n);
    double norm2 = 0.0;
    for (auto& c : d) {
      c = rng.normal();
      norm2 += c * c;
    }
    for (auto& c : d) c /= std::sqrt(norm2);
    dirs.push_back(std::move(d));
  }
  return dirs;
}

}  // namespace

VerifyReport verify_delta(const PlantModel& plant, const TriggerSpec& trigger,
                          const SetSystem& sets, const DeltaCoefficients& coeffs,
                          long n_fine, std::uint64_t seed) {
  RowEvaluator ev(plant, trigger);
  TubeSampler ts{&trigger, &sets, ev.n};
  const auto& dbox = plant.disturbances();

  MembershipProbe probe;
  probe.trig = &trigger;
  probe.Z = &sets.Z;
  probe.x0s = box_lattice(sets.Z, ev.n <= 2 ? 9 : 5);
  probe.ws = w_probe_values(sets.w_lo, sets.w_hi, 9);

  VerifyReport rep;
  rep.margin = kInf;
  rep.max_L_box = -kInf;
  rep.max_L_probe = -kInf;

  auto consider = [&](const ConstraintRow& row) {
    ++rep.points;
    double res = coeffs.delta0 * row.phi + coeffs.delta1 - row.L;
    if (res < rep.margin) {
      rep.margin = res;
      rep.worst = row;
    }
    if (row.L > rep.max_L_box) {
      rep.max_L_box = row.L;
      if (probe.contains(std::span<const double>(row.z.data(), ev.n)))
        rep.max_L_probe = std::max(rep.max_L_probe, row.L);
    }
  };

  // deterministic lattice: all disturbance vertices crossed with a coarse
  // sweep of the constraint region
  auto x0s = box_lattice(sets.Z, ev.n <= 2 ? 5 : 3);
  auto ws = w_probe_values(sets.w_lo, sets.w_hi, 7);
  auto dirs = verification_directions(ev.n, seed);
  std::vector<std::vector<double>> dvals;
  for (unsigned k = 0; k < dbox.vertex_count(); ++k) {
    std::vector<double> d(ev.md);
    if (ev.md > 0) dbox.vertex(k, d);
    dvals.push_back(std::move(d));
  }
  {
    std::vector<double> center(ev.md);
    for (int i = 0; i < ev.md; ++i) center[i] = 0.5 * (dbox.box.lo(i) + dbox.box.hi(i));
    dvals.push_back(std::move(center));
  }
  const double svals[] = {0.3, 0.6, 0.9, 1.0};

  double z[16];
  for (const auto& x0 : x0s) {
    for (double w : ws) {
      for (const auto& dir : dirs) {
        double shell = shell_distance(trigger, sets, x0, dir, w);
        for (double sf : svals) {
          double s = sf * shell;
          for (int i = 0; i < ev.n; ++i) {
            z[ev.n + i] = s * dir[i];
            z[i] = x0[i] - z[ev.n + i];
          }
          for (const auto& d : dvals)
            consider(ev.eval(std::span<const double>(z, ev.m), w, d));
        }
      }
    }
  }

  // fresh random samples: fill up to the requested total, but always at
  // least a tenth of it so the lattice never crowds them out entirely
  const long target = std::max(n_fine, rep.points + n_fine / 10);
  double d[16];
  for (long i = 0; rep.points < target; ++i) {
    Rng rng = Rng::derive(seed ^ 0xf1feull, static_cast<std::uint64_t>(i));
    double w = 0.0;
    ts.z_sample(rng, std::span<double>(z, ev.m), w);
    ts.d_sample(rng, dbox, std::span<double>(d, ev.md));
    consider(ev.eval(std::span<const double>(z, ev.m), w, std::span<const double>(d, ev.md)));
  }
  return rep;
}

DeltaCoefficients synthesize_delta(const PlantModel& plant, const TriggerSpec& trigger,
                                   const SetSystem& sets, const SynthesisOptions& opts,
                                   VerifyReport* last_verify) {
  auto rows = sample_constraints(plant, trigger, sets, opts.rows, opts.seed);
  auto levels = sample_boundary_levels(trigger, sets, opts.boundary_rows, opts.seed ^ 0xb017ull);

  DeltaCoefficients coeffs = fit_delta(rows, levels, opts.eps_delta);
  VerifyReport rep;
  for (int iter = 0;; ++iter) {
    rep = verify_delta(plant, trigger, sets, coeffs, opts.verify_points,
                       opts.seed + 7777u + static_cast<std::uint64_t>(iter));
    coeffs.margin = rep.margin;
    coeffs.verify_points = rep.points;
    if (rep.margin >= 0.0) break;
    if (iter >= opts.max_refits) {
      // refits exhausted: absorb the shortfall into delta1, which raises
      // every residual uniformly
      coeffs.delta1 += -rep.margin * 1.05 + 1e-12;
      coeffs.inflated_fallback = true;
      rep = verify_delta(plant, trigger, sets, coeffs, opts.verify_points,
                         opts.seed + 7777u + static_cast<std::uint64_t>(iter));
      coeffs.margin = rep.margin;
      if (rep.margin < 0.0)
        throw VerificationError("synthesize_delta: margin still negative after inflation");
      break;
    }
    rows.push_back(rep.worst);
    double kappa = coeffs.kappa;
    int refits = coeffs.refits + 1;
    coeffs = fit_delta(rows, levels, opts.eps_delta, kappa);
    coeffs.refits = refits;
  }
  if (opts.safety > 1.0) {
    // Raising delta1 increases every residual uniformly, so the margin can
    // only grow; re-verify to report the final margin honestly.
    coeffs.delta1 *= opts.safety;
    rep = verify_delta(plant, trigger, sets, coeffs, opts.verify_points,
                       opts.seed + 424242u);
    coeffs.margin = rep.margin;
  }
  if (last_verify != nullptr) *last_verify = rep;
  return coeffs;
}

}  // namespace stc
