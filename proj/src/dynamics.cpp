#include "kinetic/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <string>

#include <Eigen/Dense>

namespace kinetic {

Invariants compute_invariants(const VelocitySet& v, std::span<const double> f) {
  const int d = v.dim();
  Invariants inv;
  inv.momentum.assign(d, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    inv.rho += f[i];
    for (int a = 0; a < d; ++a) inv.momentum[a] += f[i] * v.velocity(i, a);
    inv.energy += f[i] * v.speed2(i);
  }
  inv.temperature = inv.rho != 0.0 ? inv.energy / inv.rho : 0.0;
  return inv;
}

namespace {

void require_state(const Model& model, const InteractionLaw& law, std::span<const double> f, const char* who) {
  if (f.size() != model.size()) throw std::invalid_argument(std::string(who) + ": state size mismatch");
  for (double x : f) {
    if (!(x > 0.0) || !law.admissible(x)) {
      throw std::domain_error(std::string(who) + ": state component " + std::to_string(x) +
                              " is not positive and admissible for " + law.name());
    }
  }
}

template <class Flux>
void accumulate(const Model& model, std::span<const double> f, std::span<double> q, Flux flux) {
  std::fill(q.begin(), q.end(), 0.0);
  for (const auto& r : model.reactions()) {
    const auto [i, j, k, l] = r.q;
    const double c = 2.0 * r.gamma * flux(f[i], f[j], f[k], f[l]);
    q[i] += c;
    q[j] += c;
    q[k] -= c;
    q[l] -= c;
  }
}

}  // namespace

void rhs_into(const Model& model, const InteractionLaw& law, std::span<const double> f, std::span<double> q) {
  switch (law.kind()) {
    case LawKind::Boltzmann:
      accumulate(model, f, q, [](double a, double b, double c, double d) { return c * d - a * b; });
      return;
    case LawKind::Wke:
      accumulate(model, f, q, [](double a, double b, double c, double d) { return c * d * (a + b) - a * b * (c + d); });
      return;
    case LawKind::Nuu: {
      const double th = law.theta();
      accumulate(model, f, q, [th](double a, double b, double c, double d) {
        return c * d * (1.0 + th * a) * (1.0 + th * b) - a * b * (1.0 + th * c) * (1.0 + th * d);
      });
      return;
    }
    case LawKind::Anion:
      accumulate(model, f, q, [&law](double a, double b, double c, double d) { return law.F_unchecked(a, b, c, d); });
      return;
  }
}

std::vector<double> rhs(const Model& model, const InteractionLaw& law, std::span<const double> f) {
  require_state(model, law, f, "rhs");
  std::vector<double> q(f.size());
  rhs_into(model, law, f, q);
  return q;
}

WkeSplit wke_split(const Model& model, std::span<const double> f) {
  if (f.size() != model.size()) throw std::invalid_argument("wke_split: state size mismatch");
  WkeSplit s;
  s.gain.assign(f.size(), 0.0);
  s.loss_rate.assign(f.size(), 0.0);
  for (const auto& r : model.reactions()) {
    const auto [i, j, k, l] = r.q;
    const double g2 = 2.0 * r.gamma;
    const double in = f[k] * f[l], out = f[i] * f[j];
    s.gain[i] += g2 * in * (f[i] + f[j]);
    s.gain[j] += g2 * in * (f[i] + f[j]);
    s.gain[k] += g2 * out * (f[k] + f[l]);
    s.gain[l] += g2 * out * (f[k] + f[l]);
    s.loss_rate[i] += g2 * f[j] * (f[k] + f[l]);
    s.loss_rate[j] += g2 * f[i] * (f[k] + f[l]);
    s.loss_rate[k] += g2 * f[l] * (f[i] + f[j]);
    s.loss_rate[l] += g2 * f[k] * (f[i] + f[j]);
  }
  return s;
}

double weak_form(const Model& model, const InteractionLaw& law, std::span<const double> f,
                 std::span<const double> weights) {
  if (f.size() != model.size() || weights.size() != model.size()) {
    throw std::invalid_argument("weak_form: size mismatch");
  }
  double sum = 0.0;
  for (const auto& r : model.reactions()) {
    const auto [i, j, k, l] = r.q;
    const std::array<std::array<std::size_t, 4>, 8> orientations{{
        {i, j, k, l}, {j, i, k, l}, {i, j, l, k}, {j, i, l, k},
        {k, l, i, j}, {l, k, i, j}, {k, l, j, i}, {l, k, j, i},
    }};
    for (const auto& o : orientations) {
      const double F = law.F_unchecked(f[o[0]], f[o[1]], f[o[2]], f[o[3]]);
      sum += r.gamma * F * (weights[o[2]] + weights[o[3]] - weights[o[0]] - weights[o[1]]);
    }
  }
  return -0.25 * sum;
}

double growth_constant(const Model& model) {
  std::map<std::array<std::size_t, 3>, double> sums;
  for (const auto& r : model.reactions()) {
    const auto [i, j, k, l] = r.q;
    for (const auto& o : std::array<std::array<std::size_t, 3>, 8>{{
             {i, j, k}, {j, i, k}, {i, j, l}, {j, i, l}, {k, l, i}, {l, k, i}, {k, l, j}, {l, k, j}}}) {
      sums[o] += r.gamma;
    }
  }
  double best = 0.0;
  for (const auto& [key, s] : sums) best = std::max(best, s);
  return 2.0 * best;
}

StepUnderflowError::StepUnderflowError(double t_reached, double step)
    : std::runtime_error("integrate: step size underflow at t = " + std::to_string(t_reached)),
      t_reached_(t_reached),
      step_(step) {}

std::vector<double> sample_schedule(double t_end, double lambda, const IntegratorOptions& opts) {
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("sample_schedule: bad end time");
  std::vector<double> ts{0.0};
  if (!opts.sample_times.empty()) {
    auto given = opts.sample_times;
    std::sort(given.begin(), given.end());
    for (double t : given) {
      if (t > ts.back() && t < t_end) ts.push_back(t);
    }
    if (t_end > 0.0) ts.push_back(t_end);
    return ts;
  }
  if (t_end == 0.0) return ts;
  const double t_switch = lambda > 0.0 ? std::min(1.0 / lambda, t_end) : t_end;
  const std::size_t u = std::max<std::size_t>(opts.uniform_samples, 1);
  for (std::size_t k = 1; k <= u; ++k) ts.push_back(t_switch * static_cast<double>(k) / static_cast<double>(u));
  if (!(opts.geometric_ratio > 1.0)) throw std::invalid_argument("sample_schedule: geometric ratio must exceed 1");
  double t = t_switch;
  while (true) {
    t *= opts.geometric_ratio;
    if (t >= t_end) break;
    ts.push_back(t);
  }
  if (ts.back() < t_end) ts.push_back(t_end);
  return ts;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0, kB5 = -2187.0 / 6784.0,
                 kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0, kE5 = -17253.0 / 339200.0,
                 kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

Sample make_sample(const Model& model, const InteractionLaw& law, double t, std::span<const double> f,
                   bool with_w) {
  Sample s;
  s.t = t;
  s.f.assign(f.begin(), f.end());
  s.invariants = compute_invariants(model.velocities(), f);
  s.H = law.H(f);
  s.W = with_w ? dissipation_W(law, model, f) : 0.0;
  return s;
}

}  // namespace

Trajectory integrate(const Model& model, const InteractionLaw& law, std::span<const double> f0, double t_end,
                     const IntegratorOptions& opts) {
  const std::size_t n = model.size();
  if (f0.size() != n) throw InitialStateError("integrate: initial state has wrong size");
  if (!law.admissible_state(f0)) {
    throw InitialStateError("integrate: initial state must be strictly positive and admissible for " + law.name());
  }
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("integrate: t_end must be finite and >= 0");
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0)) throw std::invalid_argument("integrate: tolerances must be positive");

  const auto inv0 = compute_invariants(model.velocities(), f0);
  if (opts.require_zero_momentum) {
    double p2 = 0.0;
    for (double p : inv0.momentum) p2 += p * p;
    const double bound = opts.momentum_tolerance * inv0.rho * std::sqrt(model.velocities().max_speed2());
    if (std::sqrt(p2) > bound) throw InitialStateError("integrate: initial momentum is not zero");
  }

  Trajectory traj;
  traj.g = growth_constant(model);
  traj.lambda = traj.g * inv0.rho * inv0.rho;
  const auto times = sample_schedule(t_end, traj.lambda, opts);

  std::vector<double> y(f0.begin(), f0.end()), yn(n), ytmp(n), err(n);
  std::array<std::vector<double>, 7> k;
  for (auto& v : k) v.assign(n, 0.0);
  rhs_into(model, law, y, k[0]);

  traj.samples.push_back(make_sample(model, law, 0.0, y, opts.record_dissipation));

  double h = opts.initial_step;
  if (!(h > 0.0)) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d0 = std::max(d0, std::abs(y[i]));
      d1 = std::max(d1, std::abs(k[0][i]));
    }
    h = d1 > 0.0 ? 0.01 * d0 / d1 : 1e-3 * std::max(t_end, 1.0);
  }

  const double eps = std::numeric_limits<double>::epsilon();
  double t = 0.0;
  for (std::size_t s = 1; s < times.size(); ++s) {
    const double target = times[s];
    while (t < target) {
      if (traj.accepted_steps + traj.rejected_steps >= opts.max_steps) {
        throw StepUnderflowError(t, h);
      }
      const double remaining = target - t;
      bool clipped = false;
      double step = h;
      if (step >= remaining * (1.0 - 1e-12)) {
        step = remaining;
        clipped = true;
      }
      if (step < std::max(16.0 * eps * std::abs(t), 1e-300)) throw StepUnderflowError(t, step);

      auto stage = [&](std::vector<double>& out, std::initializer_list<std::pair<double, int>> terms) {
        for (std::size_t i = 0; i < n; ++i) {
          double acc = 0.0;
          for (const auto& [c, idx] : terms) acc += c * k[idx][i];
          out[i] = y[i] + step * acc;
        }
      };
      stage(ytmp, {{kA21, 0}});
      rhs_into(model, law, ytmp, k[1]);
      stage(ytmp, {{kA31, 0}, {kA32, 1}});
      rhs_into(model, law, ytmp, k[2]);
      stage(ytmp, {{kA41, 0}, {kA42, 1}, {kA43, 2}});
      rhs_into(model, law, ytmp, k[3]);
      stage(ytmp, {{kA51, 0}, {kA52, 1}, {kA53, 2}, {kA54, 3}});
      rhs_into(model, law, ytmp, k[4]);
      stage(ytmp, {{kA61, 0}, {kA62, 1}, {kA63, 2}, {kA64, 3}, {kA65, 4}});
      rhs_into(model, law, ytmp, k[5]);
      stage(yn, {{kB1, 0}, {kB3, 2}, {kB4, 3}, {kB5, 4}, {kB6, 5}});

      if (!law.admissible_state(yn)) {
        ++traj.rejected_steps;
        ++traj.positivity_rejections;
        h = 0.5 * step;
        continue;
      }
      rhs_into(model, law, yn, k[6]);

      double norm = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double e = step * (kE1 * k[0][i] + kE3 * k[2][i] + kE4 * k[3][i] + kE5 * k[4][i] +
                                 kE6 * k[5][i] + kE7 * k[6][i]);
        const double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(yn[i]));
        norm = std::max(norm, std::abs(e) / sc);
      }
      if (!std::isfinite(norm)) {
        ++traj.rejected_steps;
        h = 0.5 * step;
        continue;
      }
      const double factor = norm > 0.0 ? 0.9 * std::pow(norm, -0.2) : 5.0;
      if (norm <= 1.0) {
        ++traj.accepted_steps;
        t = clipped ? target : t + step;
        y.swap(yn);
        k[0].swap(k[6]);
        const double next = step * std::clamp(factor, 0.2, 5.0);
        h = clipped ? std::max(h, next) : next;
      } else {
        ++traj.rejected_steps;
        h = step * std::max(0.2, factor);
      }
    }
    traj.samples.push_back(make_sample(model, law, t, y, opts.record_dissipation));
  }
  return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  if (traj.samples.empty()) return;
  const std::size_t n = traj.samples.front().f.size();
  const std::size_t d = traj.samples.front().invariants.momentum.size();
  static constexpr const char* kMomentumNames[] = {"px", "py", "pz", "pw"};
  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",f_" << i;
  out << ",rho";
  for (std::size_t a = 0; a < d; ++a) out << ',' << kMomentumNames[a];
  out << ",E,H,W\n";
  char buf[32];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf;
  };
  for (const auto& s : traj.samples) {
    put(s.t);
    for (double x : s.f) {
      out << ',';
      put(x);
    }
    out << ',';
    put(s.invariants.rho);
    for (double p : s.invariants.momentum) {
      out << ',';
      put(p);
    }
    out << ',';
    put(s.invariants.energy);
    out << ',';
    put(s.H);
    out << ',';
    put(s.W);
    out << '\n';
  }
}

bool lower_bound_check(std::span<const double> f0, std::span<const double> ft, double rho0) {
  if (f0.size() != ft.size() || f0.empty()) throw std::invalid_argument("lower_bound_check: size mismatch");
  double log_bound = -static_cast<double>(f0.size() - 1) * std::log(rho0);
  for (double x : f0) log_bound += std::log(x);
  for (double x : ft) {
    if (!(x > 0.0) || std::log(x) < log_bound) return false;
  }
  return true;
}

bool decay_bound_check(std::span<const double> f0, std::span<const double> ft, double g, double rho0, double t) {
  if (f0.size() != ft.size()) throw std::invalid_argument("decay_bound_check: size mismatch");
  const double decay = std::exp(-g * rho0 * rho0 * t);
  for (std::size_t i = 0; i < f0.size(); ++i) {
    if (ft[i] < f0[i] * decay) return false;
  }
  return true;
}

std::vector<double> symmetrize_antipodal(const VelocitySet& v, std::span<const double> f) {
  if (f.size() != v.size()) throw std::invalid_argument("symmetrize_antipodal: size mismatch");
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto j = v.index_of(-v[i]);
    if (!j) throw std::invalid_argument("symmetrize_antipodal: velocity set is not symmetric");
    out[i] = 0.5 * (f[i] + f[*j]);
  }
  return out;
}

std::vector<double> tilt_to_zero_momentum(const VelocitySet& v, std::span<const double> f) {
  const std::size_t n = v.size();
  const int d = v.dim();
  if (f.size() != n) throw std::invalid_argument("tilt_to_zero_momentum: size mismatch");

  // Minimize the convex potential sum_i f_i exp(beta . v_i); its gradient is
  // the tilted momentum.
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  auto tilted = [&](const Eigen::VectorXd& b, std::vector<double>& out) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (int a = 0; a < d; ++a) s += b[a] * v.velocity(i, a);
      out[i] = f[i] * std::exp(s);
      total += out[i];
    }
    return total;
  };
  std::vector<double> w(n), trial(n);
  double phi = tilted(beta, w);
  const double scale = std::sqrt(v.max_speed2());
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(d, d);
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Eigen::VectorXd vi(d);
      for (int a = 0; a < d; ++a) vi[a] = v.velocity(i, a);
      grad += w[i] * vi;
      hess += w[i] * vi * vi.transpose();
      mass += w[i];
    }
    if (grad.norm() <= 1e-15 * mass * scale) break;
    const Eigen::VectorXd step = hess.ldlt().solve(-grad);
    if (!step.allFinite()) throw std::domain_error("tilt_to_zero_momentum: origin is not interior to the velocity hull");
    double s = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const double trial_phi = tilted(beta + s * step, trial);
      if (trial_phi <= phi - 1e-4 * s * (-grad.dot(step)) || (trial_phi <= phi && ls > 0)) {
        beta += s * step;
        phi = trial_phi;
        w.swap(trial);
        moved = true;
        break;
      }
      s *= 0.5;
    }
    if (!moved) break;
    if (beta.norm() * scale > 700.0) {
      throw std::domain_error("tilt_to_zero_momentum: origin is not interior to the velocity hull");
    }
  }
  return w;
}

std::vector<double> random_initial_state(const VelocitySet& v, const InteractionLaw& law, std::uint64_t seed,
                                         bool zero_momentum) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(0.1, 1.0);
  std::vector<double> f(v.size());
  for (auto& x : f) x = dist(gen);
  if (zero_momentum) f = v.is_symmetric() ? symmetrize_antipodal(v, f) : tilt_to_zero_momentum(v, f);
  const double cap = 0.9 * law.upper_bound();
  const double top = *std::max_element(f.begin(), f.end());
  if (std::isfinite(cap) && top > cap) {
    for (auto& x : f) x *= cap / top;
  }
  return f;
}

}  // namespace kinetic
