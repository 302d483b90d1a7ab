#include "kinetic/picard.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kinetic/dynamics.hpp"

namespace kinetic {

NonMonotoneIterateError::NonMonotoneIterateError(std::size_t iteration, double drop)
    : std::runtime_error("picard_solve: iterate " + std::to_string(iteration) + " decreased by " +
                         std::to_string(drop) + "; refine the time grid"),
      iteration_(iteration),
      drop_(drop) {}

std::size_t default_picard_intervals(double lambda, double t_end) {
  return std::max<std::size_t>(256, static_cast<std::size_t>(std::ceil(256.0 * lambda * t_end)));
}

namespace {

// 1 - e^{-x}(1 + x), accurate for small x.
double second_moment_defect(double x) {
  if (x < 0.1) {
    double term = x * x / 2.0, sum = 0.0;
    for (int k = 2; k < 20; ++k) {
      sum += term;
      term *= -x * static_cast<double>(k) / (static_cast<double>(k + 1) * static_cast<double>(k - 1));
    }
    return sum;
  }
  return -std::expm1(-x) - x * std::exp(-x);
}

void picard_operator(const Model& model, double g, std::span<const double> phi, std::vector<double>& out) {
  rhs_into(model, InteractionLaw::wke(), phi, out);
  double rho = 0.0;
  for (double x : phi) rho += x;
  const double c = g * rho * rho;
  for (std::size_t i = 0; i < phi.size(); ++i) out[i] += c * phi[i];
}

}  // namespace

PicardResult picard_solve(const Model& model, const InteractionLaw& law, std::span<const double> f0, double t_end,
                          const PicardOptions& opts) {
  if (law.kind() != LawKind::Wke) throw std::invalid_argument("picard_solve: only the wave-kinetic law is supported");
  const std::size_t n = model.size();
  if (f0.size() != n) throw std::invalid_argument("picard_solve: initial state has wrong size");
  for (double x : f0) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("picard_solve: initial state must be positive");
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("picard_solve: t_end must be positive");

  PicardResult res;
  for (double x : f0) res.rho0 += x;
  res.g = growth_constant(model);
  res.lambda = res.g * res.rho0 * res.rho0;
  const std::size_t m = opts.intervals > 0 ? opts.intervals : default_picard_intervals(res.lambda, t_end);
  const double dt = t_end / static_cast<double>(m);

  res.times.resize(m + 1);
  for (std::size_t s = 0; s <= m; ++s) res.times[s] = dt * static_cast<double>(s);

  // Exact integral of e^{-lambda (dt - s)} against the linear hat functions.
  const double x = res.lambda * dt;
  double decay = 1.0, w_left = 0.0, w_right = dt;
  if (res.lambda > 0.0) {
    decay = std::exp(-x);
    const double i0 = -std::expm1(-x) / res.lambda;
    w_left = second_moment_defect(x) / (res.lambda * x);
    w_right = i0 - w_left;
  } else {
    w_left = w_right = 0.5 * dt;
  }

  std::vector<std::vector<double>> phi(m + 1, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> next(m + 1, std::vector<double>(n, 0.0));
  std::vector<double> a_prev(n), a_next(n);

  res.end_history.push_back(phi[m]);
  res.max_rho.push_back(0.0);

  const double slack = opts.monotone_slack * res.rho0;
  for (std::size_t k = 1; k <= opts.k_max; ++k) {
    next[0].assign(f0.begin(), f0.end());
    picard_operator(model, res.g, phi[0], a_prev);
    for (std::size_t s = 1; s <= m; ++s) {
      picard_operator(model, res.g, phi[s], a_next);
      double mass = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        next[s][i] = decay * next[s - 1][i] + w_left * a_prev[i] + w_right * a_next[i];
        mass += next[s][i];
      }
      // In exact arithmetic the mass never exceeds rho0, but rho0 is an
      // unstable fixed point of the mass balance rho' = g rho (rho^2 - rho0^2),
      // and each sweep triples any rounding excess. Projecting back onto the
      // bound keeps that excess at the rounding level.
      if (mass > res.rho0) {
        const double shrink = res.rho0 / mass;
        for (std::size_t i = 0; i < n; ++i) next[s][i] *= shrink;
      }
      a_prev.swap(a_next);
    }

    double increment = 0.0, worst_drop = 0.0, top_rho = 0.0;
    for (std::size_t s = 0; s <= m; ++s) {
      double rho = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(next[s][i])) {
          throw std::runtime_error("picard_solve: non-finite iterate " + std::to_string(k));
        }
        const double diff = next[s][i] - phi[s][i];
        increment = std::max(increment, std::abs(diff) / next[s][i]);
        worst_drop = std::max(worst_drop, -diff);
        rho += next[s][i];
      }
      top_rho = std::max(top_rho, rho);
    }
    if (worst_drop > slack) throw NonMonotoneIterateError(k, worst_drop);

    phi.swap(next);
    res.iterations = k;
    res.last_increment = increment;
    res.end_history.push_back(phi[m]);
    res.max_rho.push_back(top_rho);
    if (increment <= opts.tol) {
      res.converged = true;
      break;
    }
  }
  res.f_end = phi[m];
  res.path = std::move(phi);
  return res;
}

}  // namespace kinetic
