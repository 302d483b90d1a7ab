// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kinetic/dynamics.hpp"
#include "kinetic/equilibrium.hpp"
#include "kinetic/lattice.hpp"
#include "kinetic/model.hpp"
#include "kinetic/picard.hpp"
#include "kinetic/quadrature.hpp"
#include "oracles.hpp"

using namespace kinetic;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;
std::vector<std::string> pending_notes;

void run_criterion(int id, const char* name, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char timing[96];
  std::snprintf(timing, sizeof timing, "%.2f s of %.0f s", secs, budget_seconds);
  if (secs > budget_seconds) {
    o.pass = false;
    o.detail += "; over the time budget";
  }
  if (!o.pass) ++failures;
  std::printf("criterion %2d %s: %s [%s] %s\n", id, o.pass ? "PASS" : "FAIL", name, timing, o.detail.c_str());
  for (const auto& note : pending_notes) std::printf("             info: %s\n", note.c_str());
  pending_notes.clear();
  std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Printed under the next criterion line.
void info(const std::string& text) { pending_notes.push_back(text); }

// Seed plus the anchor (1,3,4): adds (-1,-1), giving a symmetric set with 0.
Model symmetric_seven() { return extend_model(seed_broadwell(2), {1, 3, 4}); }

// Further adds +-(e1 - e2), completing the 3x3 square.
Model symmetric_nine() {
  auto m = symmetric_seven();
  m = extend_model(m, {0, 3, 4});
  return extend_model(m, {1, 2, 4});
}

Model auto_extended(Model m, int steps) {
  for (int s = 0; s < steps; ++s) m = extend_model(m, find_extension_anchors(m.velocities()).front());
  return m;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// ------------------------------------------------------------------ 1

Outcome conservation() {
  const auto m = seed_broadwell(2);
  const auto f0 = random_initial_state(m.velocities(), InteractionLaw::wke(), 1, true);
  const auto traj = integrate(m, InteractionLaw::wke(), f0, 200.0);
  const auto& first = traj.front().invariants;
  double drho = 0.0, de = 0.0, dp = 0.0;
  for (const auto& s : traj.samples) {
    drho = std::max(drho, std::abs(s.invariants.rho - first.rho) / first.rho);
    de = std::max(de, std::abs(s.invariants.energy - first.energy) / first.energy);
    double p2 = 0.0;
    for (double p : s.invariants.momentum) p2 += p * p;
    dp = std::max(dp, std::sqrt(p2));
  }
  Outcome o;
  o.pass = drho <= 1e-9 && de <= 1e-9 && dp <= 1e-9 && traj.back().t == 200.0;
  o.detail = "max rel drift rho " + fmt("%.2e", drho) + ", E " + fmt("%.2e", de) + ", max |momentum| " +
             fmt("%.2e", dp) + " over " + std::to_string(traj.samples.size()) + " samples";
  return o;
}

// ------------------------------------------------------------------ 2

Outcome h_theorem() {
  const auto m = seed_broadwell(2);
  const std::vector<InteractionLaw> laws{InteractionLaw::wke(), InteractionLaw::boltzmann(), InteractionLaw::nuu(1),
                                         InteractionLaw::nuu(-1), InteractionLaw::anion(0.5)};
  Outcome o;
  for (const auto& law : laws) {
    const auto f0 = random_initial_state(m.velocities(), law, 1, true);
    const auto traj = integrate(m, law, f0, 200.0);
    double rise = -INFINITY, min_w = INFINITY;
    for (std::size_t s = 0; s < traj.samples.size(); ++s) {
      min_w = std::min(min_w, traj.samples[s].W);
      if (s > 0) rise = std::max(rise, traj.samples[s].H - traj.samples[s - 1].H);
    }
    const bool ok = rise <= 1e-11 && min_w >= -1e-12;
    o.pass = o.pass && ok;
    o.detail += law.name() + ": max H step " + fmt("%.2e", rise) + ", min W " + fmt("%.2e", min_w) + "; ";
  }
  o.detail.resize(o.detail.size() - 2);
  return o;
}

// ------------------------------------------------------------------ 3 and 5

struct ConvergenceRun {
  std::string label;
  double distance = 0.0;
  bool bounds_ok = true;
};

// Runs one model from a random zero-momentum state and measures the final
// distance to an equilibrium solved from the moments of f0 alone. The
// centred form a/(1+b|v|^2) is the limit only when V = -V; otherwise the
// limit is the drifting form 1/(c0 + c.v + cE|v|^2) with the same moments.
ConvergenceRun converge(const Model& m, std::uint64_t seed, const std::string& label) {
  const auto& v = m.velocities();
  const auto law = InteractionLaw::wke();
  const auto f0 = random_initial_state(v, law, seed, true);
  const auto traj = integrate(m, law, f0, 200.0);
  const auto& inv = traj.front().invariants;

  std::vector<double> f_st;
  if (v.is_symmetric()) {
    const auto sol = solve_wke_equilibrium(v, inv.rho, inv.temperature);
    f_st = equilibrium_state(v, law, sol.params);
  } else {
    f_st = equilibrium_state(v, law, solve_wke_equilibrium_general(v, {inv.rho, inv.momentum, inv.temperature}));
  }

  ConvergenceRun r;
  r.label = label;
  r.distance = sup_distance(traj.back().f, f_st);
  for (const auto& s : traj.samples) {
    r.bounds_ok = r.bounds_ok && decay_bound_check(f0, s.f, traj.g, inv.rho, s.t) &&
                  lower_bound_check(f0, s.f, inv.rho);
  }
  return r;
}

std::vector<ConvergenceRun> convergence_runs;

Outcome convergence() {
  struct Case {
    Model model;
    std::string name;
  };
  const std::vector<Case> cases{{seed_broadwell(2), "seed n=6"},
                                {symmetric_seven(), "symmetric n=7"},
                                {symmetric_nine(), "symmetric n=9"},
                                {auto_extended(seed_broadwell(2), 4), "extended n=10"}};
  Outcome o;
  for (const auto& c : cases) {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto r = converge(c.model, seed, c.name);
      worst = std::max(worst, r.distance);
      convergence_runs.push_back(std::move(r));
    }
    o.pass = o.pass && worst <= 1e-6;
    o.detail += c.name + (c.model.velocities().is_symmetric() ? " (centred form)" : " (drifting form)") +
                " max dist " + fmt("%.2e", worst) + "; ";
  }
  o.detail.resize(o.detail.size() - 2);

  // The centred form on the skew seed, for reference: it is not the limit.
  const auto m = seed_broadwell(2);
  const auto f0 = random_initial_state(m.velocities(), InteractionLaw::wke(), 1, true);
  const auto traj = integrate(m, InteractionLaw::wke(), f0, 200.0);
  const auto c = solve_wke_equilibrium(m.velocities(), traj.front().invariants.rho,
                                       traj.front().invariants.temperature);
  info("seed n=6, seed 1: distance to the centred form " +
       fmt("%.3e", sup_distance(traj.back().f, equilibrium_state(m.velocities(), InteractionLaw::wke(), c.params))) +
       " (V is not symmetric, so the centred form is not the limit)");
  return o;
}

Outcome positivity() {
  Outcome o;
  std::size_t bad = 0;
  for (const auto& r : convergence_runs) {
    if (!r.bounds_ok) ++bad;
  }
  o.pass = !convergence_runs.empty() && bad == 0;
  o.detail = std::to_string(convergence_runs.size() - bad) + " of " + std::to_string(convergence_runs.size()) +
             " runs satisfy both lower bounds at every sample";
  return o;
}

// ------------------------------------------------------------------ 4

Outcome equilibrium_anchor() {
  const auto sol = solve_wke_equilibrium(seed_broadwell(2).velocities(), 1.0, 1.0);
  Outcome o;
  o.pass = std::abs(sol.params.b) <= 1e-13 && std::abs(sol.params.a - 1.0 / 6.0) <= 1e-13;
  o.detail = "b = " + fmt("%.3e", sol.params.b) + ", a - 1/6 = " + fmt("%.3e", sol.params.a - 1.0 / 6.0);
  return o;
}

// ------------------------------------------------------------------ 6

Outcome normality() {
  Outcome o;
  const VelocitySet four(2, 1.0, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  const auto rep4 = check_normal(Model(four, autopopulate_reactions(four)));
  o.pass = !rep4.condition_a && !rep4.normal();
  o.detail = std::string("4-point: condition a ") + (rep4.condition_a ? "holds" : "fails");
  for (int d = 2; d <= 4; ++d) {
    auto m = seed_broadwell(d);
    const auto rep = check_normal(m);
    const bool seed_ok = rep.normal() && rep.rank_p == m.size() - static_cast<std::size_t>(d + 2);
    bool ext_ok = true;
    for (int step = 0; step < 10; ++step) {
      m = extend_model(m, find_extension_anchors(m.velocities()).front());
      const auto r = check_normal(m);
      ext_ok = ext_ok && r.normal() && r.rank_p == m.size() - static_cast<std::size_t>(d + 2);
    }
    o.pass = o.pass && seed_ok && ext_ok;
    o.detail += "; d=" + std::to_string(d) + " seed rank p " + std::to_string(rep.rank_p) + (seed_ok ? " ok" : " BAD") +
                ", 10 extensions " + (ext_ok ? "normal" : "NOT normal");
  }
  return o;
}

// ------------------------------------------------------------------ 7

Outcome picard() {
  const auto m = seed_broadwell(2);
  const auto law = InteractionLaw::wke();
  // Unit mass keeps lambda t = 2 at t = 1, where the unstable mass mode
  // amplifies rounding only by e^4.
  auto f0 = random_initial_state(m.velocities(), law, 1, true);
  double rho = 0.0;
  for (double x : f0) rho += x;
  for (double& x : f0) x /= rho;

  const auto r = picard_solve(m, law, f0, 1.0);
  IntegratorOptions io;
  io.sample_times = {1.0};
  const auto ref = integrate(m, law, f0, 1.0, io).back().f;

  bool monotone = true, bounded = true;
  for (std::size_t k = 1; k < r.end_history.size(); ++k) {
    for (std::size_t i = 0; i < m.size(); ++i) monotone = monotone && r.end_history[k][i] >= r.end_history[k - 1][i];
    bounded = bounded && r.max_rho[k] <= r.rho0;
  }
  double rel = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) rel = std::max(rel, std::abs(r.f_end[i] - ref[i]) / ref[i]);
  Outcome o;
  o.pass = r.converged && monotone && bounded && rel <= 1e-6;
  o.detail = std::to_string(r.iterations) + " iterates on " + std::to_string(r.times.size() - 1) +
             " intervals, monotone " + (monotone ? "yes" : "no") + ", bounded by rho0 " + (bounded ? "yes" : "no") +
             ", max rel diff to RK " + fmt("%.2e", rel);
  return o;
}

// ------------------------------------------------------------------ 8

bool excluded_by_form(Int m) {
  if (m <= 0) return false;
  while (m % 4 == 0) m /= 4;
  return m % 8 == 7;
}

Outcome number_theory() {
  Outcome o;
  Int mismatches = 0, exclusion_errors = 0;
  for (Int m = 0; m <= 500; ++m) {
    const Int r = count_sphere_points(m, 3);
    if (r != oracle::brute_sphere_count(m, 3)) ++mismatches;
    if ((r == 0) != excluded_by_form(m) || is_excluded_three_square(m) != excluded_by_form(m)) ++exclusion_errors;
  }
  const SphereFunction w1sq = [](std::span<const double> w) { return w[0] * w[0]; };
  std::vector<double> errs;
  std::string trend;
  for (Int m : {9, 101, 1001, 10001}) {
    const Int residue = m % 8;
    if (!(residue == 1 || residue == 2 || residue == 3 || residue == 5 || residue == 6)) continue;
    errs.push_back(sphere_average_error(m, 3, w1sq));
    trend += (trend.empty() ? "" : ", ") + fmt("%.3g", errs.back());
  }
  bool monotone = true;
  for (std::size_t k = 1; k < errs.size(); ++k) monotone = monotone && errs[k] <= errs[k - 1];
  o.pass = mismatches == 0 && exclusion_errors == 0 && monotone && errs.back() <= 0.02;
  o.detail = "r_3 mismatches " + std::to_string(mismatches) + ", exclusion errors " + std::to_string(exclusion_errors) +
             ", omega1^2 errors [" + trend + "] " + (monotone ? "non-increasing" : "NOT non-increasing");
  if (!monotone) {
    info("shells are invariant under coordinate permutations, so the omega1^2 shell average is exactly 1/3 and the "
         "errors above are rounding noise around zero");
  }
  const SphereFunction w1q = [](std::span<const double> w) { return w[0] * w[0] * w[0] * w[0]; };
  std::string quartic;
  for (Int m : {9, 101, 1001, 10001, 100001}) {
    quartic += (quartic.empty() ? "" : ", ") + fmt("%.3g", sphere_average_error(m, 3, w1q));
  }
  info("omega1^4 errors on m = 9, 101, 1001, 10001, 100001: [" + quartic + "]");
  return o;
}

// ------------------------------------------------------------------ 9

Outcome quadrature() {
  std::vector<double> norms;
  std::string list;
  for (double h : {1.0, 0.5, 0.25}) {
    QuadratureSpec spec;
    spec.d = 3;
    spec.h = h;
    spec.box_radius = 6;
    auto v = box_set(3, h, 6);
    auto table = build_gamma(spec, v);
    const Model m(std::move(v), std::move(table));
    std::vector<double> f(m.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(-m.velocities().speed2(i));
    double norm = 0.0;
    for (double x : discrete_operator(spec, m, InteractionLaw::boltzmann(), f)) norm = std::max(norm, std::abs(x));
    norms.push_back(norm);
    list += (list.empty() ? "" : ", ") + fmt("%.3e", norm);
  }
  bool halves = true;
  for (std::size_t k = 1; k < norms.size(); ++k) halves = halves && norms[k] <= 0.5 * norms[k - 1];
  Outcome o;
  o.pass = halves;
  o.detail = "||K_h||_inf for h = 1, 1/2, 1/4: [" + list + "]";
  if (!halves) {
    info("lattice collisions conserve energy exactly, so Gaussian samples make every Boltzmann term vanish; the "
         "norms above are rounding noise of the samples and cannot shrink with h");
  }
  return o;
}

// ------------------------------------------------------------------ 10

Outcome weak_form_identity() {
  const std::vector<InteractionLaw> laws{InteractionLaw::wke(), InteractionLaw::boltzmann(), InteractionLaw::nuu(1),
                                         InteractionLaw::nuu(-1), InteractionLaw::anion(0.5)};
  const std::vector<Model> models{seed_broadwell(2), seed_broadwell(3), symmetric_nine(),
                                  auto_extended(seed_broadwell(4), 3)};
  std::vector<oracle::DenseTensor> tensors;
  for (const auto& m : models) tensors.emplace_back(m);
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> weight(-1.0, 1.0);
  Outcome o;
  for (const auto& law : laws) {
    double worst = 0.0;
    for (int pair = 0; pair < 100; ++pair) {
      const std::size_t which = static_cast<std::size_t>(pair) % models.size();
      const auto& m = models[which];
      const auto f = random_initial_state(m.velocities(), law, 1000 + static_cast<std::uint64_t>(pair), false);
      std::vector<double> w(m.size());
      for (auto& x : w) x = weight(gen);
      const auto q = rhs(m, law, f);
      double lhs = 0.0, scale = 1.0;
      for (std::size_t i = 0; i < m.size(); ++i) {
        lhs += q[i] * w[i];
        scale = std::max(scale, std::abs(q[i] * w[i]));
      }
      const double oracle_value = tensors[which].weak_form(law, f, w);
      const double library_value = weak_form(m, law, f, w);
      worst = std::max(worst, std::max(std::abs(lhs - oracle_value), std::abs(library_value - oracle_value)) / scale);
    }
    o.pass = o.pass && worst <= 1e-12;
    o.detail += law.name() + " " + fmt("%.1e", worst) + "; ";
  }
  o.detail.resize(o.detail.size() - 2);
  return o;
}

}  // namespace

int main() {
  run_criterion(1, "conservation", 5, conservation);
  run_criterion(2, "H-theorem", 60, h_theorem);
  run_criterion(3, "convergence to equilibrium", 60, convergence);
  run_criterion(4, "equilibrium anchor", 1, equilibrium_anchor);
  run_criterion(5, "positivity bounds", 1, positivity);
  run_criterion(6, "normality suite", 60, normality);
  run_criterion(7, "Picard oracle", 60, picard);
  run_criterion(8, "number theory", 30, number_theory);
  run_criterion(9, "quadrature consistency", 120, quadrature);
  run_criterion(10, "weak-form identity", 60, weak_form_identity);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
