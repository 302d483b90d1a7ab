#include "kinetic/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "kinetic/dynamics.hpp"

namespace kinetic {

MomentSums moment_sums(const VelocitySet& v, double b) {
  MomentSums s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = v.speed2(i);
    const double den = 1.0 + b * x;
    if (!(den > 0.0)) throw std::domain_error("moment_sums: 1 + b|v|^2 vanishes or changes sign");
    s.S0 += 1.0 / den;
    s.S1 += x / den;
  }
  s.T = s.S1 / s.S0;
  return s;
}

double temperature_slope(const VelocitySet& v, double b) {
  const std::size_t n = v.size();
  std::vector<double> x(n), w(n);
  double s0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = v.speed2(i);
    const double den = 1.0 + b * x[i];
    if (!(den > 0.0)) throw std::domain_error("temperature_slope: 1 + b|v|^2 vanishes or changes sign");
    w[i] = 1.0 / (den * den);
    s0 += 1.0 / den;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      acc += dx * dx * w[i] * w[j];
    }
  }
  // The (i,j) and (j,i) terms are equal, which cancels the 1/2.
  return -acc / (s0 * s0);
}

WkeSolution solve_wke_equilibrium(const VelocitySet& v, double rho, double T, const WkeSolveOptions& opts) {
  const double M = v.max_speed2();
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("solve_wke_equilibrium: rho must be positive");
  if (!(T > 0.0 && T < M)) {
    throw std::invalid_argument("solve_wke_equilibrium: T must lie in (0, M) with M = " + std::to_string(M));
  }
  auto temp = [&](double b) { return moment_sums(v, b).T; };

  double lo = -1.0 / M + opts.left_margin / M;
  if (temp(lo) < T) {
    throw std::domain_error("solve_wke_equilibrium: T is too close to M for the bracket left end");
  }
  double hi = std::max(opts.b_hi_start, lo + 1.0 / M);
  while (temp(hi) > T) {
    hi *= 2.0;
    if (hi > 1e300) throw std::domain_error("solve_wke_equilibrium: T is below the range attained on this set");
  }

  WkeSolution sol;
  while (true) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    if (temp(mid) > T) lo = mid; else hi = mid;
    ++sol.bisections;
  }
  const double r_lo = std::abs(temp(lo) - T), r_hi = std::abs(temp(hi) - T);
  const double b = r_lo < r_hi ? lo : hi;
  sol.params.b = b;
  sol.params.a = rho / moment_sums(v, b).S0;
  sol.params.drift.assign(v.dim(), 0.0);
  sol.residual = std::min(r_lo, r_hi);
  sol.symmetric = v.is_symmetric();
  return sol;
}

namespace {

bool dual_domain(const InteractionLaw& law, double y) {
  if (!std::isfinite(y)) return false;
  switch (law.kind()) {
    case LawKind::Boltzmann: return y < 700.0;
    case LawKind::Nuu: return law.theta() < 0 || y < 0.0;
    case LawKind::Anion: return true;
    case LawKind::Wke: return y < 0.0;
  }
  return false;
}

struct DualState {
  bool ok = false;
  double value = 0.0;
  std::vector<double> f;
};

}  // namespace

MomentMatchResult match_moments(const VelocitySet& v, const InteractionLaw& law, const MomentTargets& targets,
                                int max_iterations) {
  const std::size_t n = v.size();
  const int d = v.dim();
  const bool with_momentum = !targets.momentum.empty();
  if (with_momentum && targets.momentum.size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("match_moments: momentum target has wrong dimension");
  }
  if (!(targets.rho > 0.0) || !(targets.temperature > 0.0)) {
    throw std::invalid_argument("match_moments: rho and T must be positive");
  }
  const int k = with_momentum ? d + 2 : 2;
  const double M = v.max_speed2();

  Eigen::MatrixXd phi(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    phi(i, 0) = 1.0;
    if (with_momentum) {
      for (int a = 0; a < d; ++a) phi(i, 1 + a) = v.velocity(i, a);
    }
    phi(i, k - 1) = v.speed2(i);
  }
  Eigen::VectorXd c(k), scale(k);
  c[0] = targets.rho;
  scale[0] = targets.rho;
  if (with_momentum) {
    for (int a = 0; a < d; ++a) {
      c[1 + a] = targets.momentum[a];
      scale[1 + a] = targets.rho * std::sqrt(M);
    }
  }
  c[k - 1] = targets.rho * targets.temperature;
  scale[k - 1] = targets.rho * targets.temperature;

  auto evaluate = [&](const Eigen::VectorXd& lam) {
    DualState st;
    st.f.resize(n);
    const Eigen::VectorXd y = phi * lam;
    double val = -lam.dot(c);
    for (std::size_t i = 0; i < n; ++i) {
      if (!dual_domain(law, y[i])) return st;
      double x;
      try {
        x = law.p_inverse(y[i]);
      } catch (const std::domain_error&) {
        return st;
      }
      if (!(x > 0.0) || !law.admissible(x)) return st;
      st.f[i] = x;
      val += y[i] * x - law.I(x);
    }
    st.ok = true;
    st.value = val;
    return st;
  };
  auto gradient = [&](const DualState& st) {
    Eigen::VectorXd g = -c;
    for (std::size_t i = 0; i < n; ++i) g += st.f[i] * phi.row(i).transpose();
    return g;
  };
  auto residual_of = [&](const Eigen::VectorXd& g) { return g.cwiseQuotient(scale).cwiseAbs().maxCoeff(); };

  const double start = targets.rho / static_cast<double>(n);
  if (!law.admissible(start)) {
    throw std::domain_error("match_moments: mass " + std::to_string(targets.rho) + " is infeasible for " + law.name());
  }
  Eigen::VectorXd lam = Eigen::VectorXd::Zero(k);
  lam[0] = law.p(start);
  DualState st = evaluate(lam);
  if (!st.ok) throw std::domain_error("match_moments: no feasible starting point");
  Eigen::VectorXd g = gradient(st);
  double res = residual_of(g);

  MomentMatchResult out;
  int stalled = 0;
  for (int it = 0; it < max_iterations && res > 1e-15; ++it) {
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(k, k);
    for (std::size_t i = 0; i < n; ++i) {
      hess += (1.0 / law.p_derivative(st.f[i])) * phi.row(i).transpose() * phi.row(i);
    }
    const Eigen::VectorXd step = hess.ldlt().solve(-g);
    if (!step.allFinite()) break;
    const double slope = g.dot(step);
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd trial = lam + t * step;
      DualState ts = evaluate(trial);
      if (ts.ok) {
        const Eigen::VectorXd tg = gradient(ts);
        const double tres = residual_of(tg);
        if (ts.value <= st.value + 1e-4 * t * slope || tres < res) {
          lam = trial;
          st = std::move(ts);
          stalled = tres < 0.5 * res ? 0 : stalled + 1;
          g = tg;
          res = tres;
          moved = true;
          break;
        }
      }
      t *= 0.5;
    }
    out.iterations = it + 1;
    if (!moved || stalled >= 4) break;
  }
  if (!(res <= 1e-12)) {
    throw std::domain_error("match_moments: Newton did not converge (residual " + std::to_string(res) +
                            "); targets may be infeasible for " + law.name());
  }
  out.multipliers.assign(lam.data(), lam.data() + k);
  out.f = std::move(st.f);
  out.residual = res;
  return out;
}

WkeEquilibrium solve_wke_equilibrium_general(const VelocitySet& v, const MomentTargets& targets) {
  MomentTargets t = targets;
  if (t.momentum.empty()) t.momentum.assign(v.dim(), 0.0);
  const auto mm = match_moments(v, InteractionLaw::wke(), t);
  const double c0 = mm.multipliers.front();
  if (!(c0 < 0.0)) throw std::domain_error("solve_wke_equilibrium_general: amplitude is not finite on this set");
  WkeEquilibrium eq;
  eq.a = -1.0 / c0;
  eq.b = mm.multipliers.back() / c0;
  for (int a = 0; a < v.dim(); ++a) eq.drift.push_back(mm.multipliers[1 + a] / c0);
  return eq;
}

ExponentialEquilibrium solve_exponential_equilibrium(const VelocitySet& v, const InteractionLaw& law, double rho,
                                                     double T) {
  if (law.kind() == LawKind::Wke) {
    throw std::invalid_argument("solve_exponential_equilibrium: use solve_wke_equilibrium for the wave-kinetic law");
  }
  const double M = v.max_speed2();
  if (!(rho > 0.0)) throw std::invalid_argument("solve_exponential_equilibrium: rho must be positive");
  if (!(T > 0.0 && T < M)) throw std::invalid_argument("solve_exponential_equilibrium: T must lie in (0, M)");
  const auto mm = match_moments(v, law, MomentTargets{rho, {}, T});
  ExponentialEquilibrium eq;
  eq.alpha = mm.multipliers[0];
  eq.beta.assign(v.dim(), 0.0);
  eq.gamma = mm.multipliers[1];
  return eq;
}

std::vector<double> equilibrium_state(const VelocitySet& v, const InteractionLaw& law,
                                      const EquilibriumParams& params) {
  const std::size_t n = v.size();
  const int d = v.dim();
  std::vector<double> f(n);
  auto drift_dot = [&](const std::vector<double>& beta, std::size_t i) {
    if (beta.empty()) return 0.0;
    if (beta.size() != static_cast<std::size_t>(d)) throw std::invalid_argument("equilibrium_state: drift dimension");
    double s = 0.0;
    for (int a = 0; a < d; ++a) s += beta[a] * v.velocity(i, a);
    return s;
  };
  if (const auto* w = std::get_if<WkeEquilibrium>(&params)) {
    if (law.kind() != LawKind::Wke) {
      throw std::invalid_argument("equilibrium_state: a / (1 + b|v|^2) parameters need the wave-kinetic law");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double den = 1.0 + w->b * v.speed2(i) + drift_dot(w->drift, i);
      f[i] = w->a / den;
    }
  } else {
    const auto& e = std::get<ExponentialEquilibrium>(params);
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = law.p_inverse(e.alpha + drift_dot(e.beta, i) + e.gamma * v.speed2(i));
    }
  }
  for (double x : f) {
    if (!(x > 0.0) || !law.admissible(x) || !std::isfinite(x)) {
      throw std::domain_error("equilibrium_state: parameters give a component outside the admissible range");
    }
  }
  return f;
}

StationaryReport verify_stationary(const Model& model, const InteractionLaw& law, const EquilibriumParams& params,
                                   const std::optional<MomentTargets>& targets) {
  const auto& v = model.velocities();
  const auto f = equilibrium_state(v, law, params);
  StationaryReport rep;
  const auto q = rhs(model, law, f);
  for (double x : q) rep.q_max = std::max(rep.q_max, std::abs(x));
  rep.dissipation = dissipation_W(law, model, f);

  std::vector<double> gross(f.size(), 0.0);
  for (const auto& r : model.reactions()) {
    const auto [i, j, k, l] = r.q;
    const double g = 2.0 * r.gamma *
                     (std::abs(law.loss(f[i], f[j], f[k], f[l])) + std::abs(law.loss(f[k], f[l], f[i], f[j])));
    gross[i] += g;
    gross[j] += g;
    gross[k] += g;
    gross[l] += g;
  }
  for (double x : gross) rep.scale = std::max(rep.scale, x);

  const auto inv = compute_invariants(v, f);
  rep.rho = inv.rho;
  rep.momentum = inv.momentum;
  rep.temperature = inv.temperature;

  const double tol = 1e-11 * rep.scale;
  rep.pass = rep.q_max <= tol && std::abs(rep.dissipation) <= tol;
  if (targets) {
    rep.moment_error = std::max(std::abs(inv.rho - targets->rho) / targets->rho,
                                std::abs(inv.temperature - targets->temperature) / targets->temperature);
    if (!targets->momentum.empty()) {
      const double unit = targets->rho * std::sqrt(v.max_speed2());
      for (std::size_t a = 0; a < inv.momentum.size() && a < targets->momentum.size(); ++a) {
        rep.moment_error = std::max(rep.moment_error, std::abs(inv.momentum[a] - targets->momentum[a]) / unit);
      }
    }
    rep.pass = rep.pass && rep.moment_error <= 1e-11;
  }
  return rep;
}

}  // namespace kinetic
