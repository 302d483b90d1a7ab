#pragma once

// Monotone Picard iteration on the mild form of the wave-kinetic system
//   phi' + lambda phi = A[phi],  A_i = Q_i + g phi_i rho(phi)^2,  lambda = g rho0^2,
// started from phi = 0. The time integral is taken with A interpolated
// linearly between grid nodes and the exponential kernel integrated exactly,
// so every weight is nonnegative and the discrete iterates keep the
// monotonicity and the rho <= rho0 bound of the continuous scheme.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "kinetic/interaction.hpp"
#include "kinetic/model.hpp"

namespace kinetic {

struct PicardOptions {
  /// Grid intervals on [0, t_end]; 0 selects max(256, ceil(256 lambda t_end)).
  /// The scheme is second order in the grid step.
  std::size_t intervals = 0;
  std::size_t k_max = 2000;
  /// Stop when the largest relative increment over the grid is below tol.
  /// Relative because late grid nodes start near f0 exp(-lambda t), which
  /// can be far below rounding of rho0 while they are still filling in.
  double tol = 1e-13;
  /// Allowed decrease between successive iterates, relative to rho0.
  double monotone_slack = 1e-13;
};

struct PicardResult {
  std::vector<double> times;                   ///< grid nodes
  std::vector<std::vector<double>> path;       ///< final iterate at every node
  std::vector<double> f_end;                   ///< final iterate at t_end
  std::vector<std::vector<double>> end_history;  ///< iterate k at t_end, k = 0..iterations
  std::vector<double> max_rho;                 ///< max over nodes of rho(phi^(k)), per iterate
  std::size_t iterations = 0;
  bool converged = false;
  double last_increment = 0.0;                 ///< relative
  double g = 0.0;
  double lambda = 0.0;
  double rho0 = 0.0;
};

class NonMonotoneIterateError : public std::runtime_error {
 public:
  NonMonotoneIterateError(std::size_t iteration, double drop);
  std::size_t iteration() const { return iteration_; }
  double drop() const { return drop_; }

 private:
  std::size_t iteration_;
  double drop_;
};

std::size_t default_picard_intervals(double lambda, double t_end);

/// The converged iterate inherits the instability of the mass balance
/// rho' = g rho (rho^2 - rho0^2) at rho0: rounding deficits grow like
/// exp(2 lambda t). Results are reliable for lambda t of order one or a few;
/// beyond about 10 the rounding floor exceeds 1e-6.
///
/// Requires the wave-kinetic law (std::invalid_argument otherwise) and a
/// strictly positive f0. Throws NonMonotoneIterateError if an iterate falls
/// below its predecessor by more than the slack.
PicardResult picard_solve(const Model& model, const InteractionLaw& law, std::span<const double> f0, double t_end,
                          const PicardOptions& opts = {});

}  // namespace kinetic
