#pragma once

// Stationary states. The wave-kinetic equilibrium a / (1 + b|v|^2) is found by
// bisection on the strictly decreasing temperature map T(b) = S1(b)/S0(b).
// Exponential-family equilibria p(f_i) = alpha + beta.v_i + gamma|v_i|^2 and
// the drifting wave-kinetic form come from a convex dual moment match.

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "kinetic/interaction.hpp"
#include "kinetic/model.hpp"

namespace kinetic {

struct MomentSums {
  double S0 = 0.0;  ///< sum_i 1 / (1 + b|v_i|^2)
  double S1 = 0.0;  ///< sum_i |v_i|^2 / (1 + b|v_i|^2)
  double T = 0.0;   ///< S1 / S0
};

/// Requires b > -1/M; throws std::domain_error when a pole is hit.
MomentSums moment_sums(const VelocitySet& v, double b);

/// dT/db = -(1/2) sum_{i,j} (x_i - x_j)^2 / (D_i^2 D_j^2) / S0^2 with
/// x = |v|^2 and D = 1 + b x.
double temperature_slope(const VelocitySet& v, double b);

/// f_i = a / (1 + b|v_i|^2 + drift . v_i). drift is empty or zero for the
/// centred form.
struct WkeEquilibrium {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> drift;
};

/// p(f_i) = alpha + beta . v_i + gamma |v_i|^2.
struct ExponentialEquilibrium {
  double alpha = 0.0;
  std::vector<double> beta;
  double gamma = 0.0;
};

using EquilibriumParams = std::variant<WkeEquilibrium, ExponentialEquilibrium>;

struct WkeSolveOptions {
  double b_hi_start = 1.0;
  /// The left end of the bracket is -1/M + left_margin / M.
  double left_margin = 1e-9;
};

struct WkeSolution {
  WkeEquilibrium params;
  double residual = 0.0;  ///< |T(b) - T|
  int bisections = 0;
  bool symmetric = false;  ///< whether V = -V, the setting in which the form is the limit
};

/// Unique b in (-1/M, inf) with T(b) = T, then a = rho / S0(b). Throws
/// std::invalid_argument unless rho > 0 and 0 < T < M, and std::domain_error
/// if T lies outside the range T attains on the velocity set.
WkeSolution solve_wke_equilibrium(const VelocitySet& v, double rho, double T, const WkeSolveOptions& opts = {});

/// Moment targets rho, momentum (physical units) and temperature.
struct MomentTargets {
  double rho = 1.0;
  std::vector<double> momentum;  ///< empty means only (rho, T) are matched
  double temperature = 1.0;
};

struct MomentMatchResult {
  std::vector<double> multipliers;  ///< (c0, c_1..c_d, c_E) or (c0, c_E)
  std::vector<double> f;
  double residual = 0.0;  ///< max relative moment mismatch
  int iterations = 0;
};

/// Finds f_i = p^-1(c0 + c.v_i + c_E|v_i|^2) with the requested moments by
/// damped Newton on the convex dual sum_i J(y_i) - c.targets, J' = p^-1.
/// Throws std::domain_error if Newton fails to converge (infeasible targets).
MomentMatchResult match_moments(const VelocitySet& v, const InteractionLaw& law, const MomentTargets& targets,
                                int max_iterations = 200);

/// Wave-kinetic equilibrium with drift, matching mass, momentum and
/// temperature. Needs 0 in V so that a is finite.
WkeEquilibrium solve_wke_equilibrium_general(const VelocitySet& v, const MomentTargets& targets);

/// Exponential-family equilibrium with beta = 0 for Boltzmann, NUU and anion.
ExponentialEquilibrium solve_exponential_equilibrium(const VelocitySet& v, const InteractionLaw& law, double rho,
                                                     double T);

/// Occupation numbers of a parameter set. Throws std::domain_error if a
/// component is nonpositive or outside the law's range.
std::vector<double> equilibrium_state(const VelocitySet& v, const InteractionLaw& law,
                                      const EquilibriumParams& params);

struct StationaryReport {
  double q_max = 0.0;        ///< max_i |Q_i(f_st)|
  double dissipation = 0.0;  ///< W(f_st)
  double scale = 1.0;        ///< max(1, largest gross collision flux at one index)
  double rho = 0.0;
  std::vector<double> momentum;
  double temperature = 0.0;
  double moment_error = 0.0;  ///< relative mismatch to the targets, if given
  bool pass = false;
};

/// Passes iff |Q|, |W| <= 1e-11 * scale and, when targets are supplied, the
/// mass and temperature match them to 1e-11 relative.
StationaryReport verify_stationary(const Model& model, const InteractionLaw& law, const EquilibriumParams& params,
                                   const std::optional<MomentTargets>& targets = std::nullopt);

}  // namespace kinetic
