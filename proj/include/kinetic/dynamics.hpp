#pragma once

// Collision right-hand side Q(f), adaptive time integration with positivity
// guards, trajectory diagnostics and the a-priori bounds checked along runs.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "kinetic/interaction.hpp"
#include "kinetic/model.hpp"

namespace kinetic {

struct Invariants {
  double rho = 0.0;
  std::vector<double> momentum;  ///< sum_i f_i v_i, physical units
  double energy = 0.0;           ///< sum_i f_i |v_i|^2
  double temperature = 0.0;      ///< energy / rho
};

Invariants compute_invariants(const VelocitySet& v, std::span<const double> f);

/// Q_i = sum_{j,k,l} Gamma_ij^kl F(f_i,f_j;f_k,f_l) over the full symmetric
/// tensor. Throws std::domain_error if f has a nonpositive or inadmissible
/// component.
std::vector<double> rhs(const Model& model, const InteractionLaw& law, std::span<const double> f);

/// Same as rhs() without range checks; q must have size n and is overwritten.
void rhs_into(const Model& model, const InteractionLaw& law, std::span<const double> f, std::span<double> q);

/// Wave-kinetic split Q = gain - f * loss_rate, with
/// loss_rate_i = B_i = sum Gamma_ij^kl f_j (f_k + f_l).
struct WkeSplit {
  std::vector<double> gain;
  std::vector<double> loss_rate;
};
WkeSplit wke_split(const Model& model, std::span<const double> f);

/// -1/4 sum over the full tensor of Gamma F(f_i,f_j;f_k,f_l) (w_k + w_l - w_i - w_j).
/// Equals sum_i Q_i(f) w_i.
double weak_form(const Model& model, const InteractionLaw& law, std::span<const double> f,
                 std::span<const double> weights);

/// g = 2 max_{i,j,k} sum_l Gamma_ij^kl. The damping rate of the mild
/// formulation is lambda = g rho0^2.
double growth_constant(const Model& model);

struct IntegratorOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  double initial_step = 0.0;  ///< 0 picks a step from the initial rate
  std::uint64_t max_steps = 50'000'000;
  /// Reject f0 whose momentum exceeds momentum_tolerance * rho * sqrt(M).
  bool require_zero_momentum = false;
  double momentum_tolerance = 1e-12;
  /// Sampling: uniform_samples points on [0, min(1/lambda, t_end)], then a
  /// geometric sequence with the given ratio. Ignored if sample_times is set.
  std::size_t uniform_samples = 40;
  double geometric_ratio = 1.05;
  std::vector<double> sample_times;
  bool record_dissipation = true;
};

struct Sample {
  double t = 0.0;
  std::vector<double> f;
  Invariants invariants;
  double H = 0.0;
  double W = 0.0;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::uint64_t accepted_steps = 0;
  std::uint64_t rejected_steps = 0;
  std::uint64_t positivity_rejections = 0;
  double g = 0.0;
  double lambda = 0.0;

  const Sample& front() const { return samples.front(); }
  const Sample& back() const { return samples.back(); }
};

/// Thrown when the adaptive step falls below the resolvable size.
class StepUnderflowError : public std::runtime_error {
 public:
  StepUnderflowError(double t_reached, double step);
  double time_reached() const { return t_reached_; }
  double step() const { return step_; }

 private:
  double t_reached_;
  double step_;
};

/// Thrown by integrate() when f0 is nonpositive, inadmissible, or violates
/// the zero-momentum requirement.
class InitialStateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The sample grid integrate() would use.
std::vector<double> sample_schedule(double t_end, double lambda, const IntegratorOptions& opts);

/// Dormand-Prince 5(4) with embedded error control. Steps that leave the
/// positive admissible region are rejected and the step is halved.
Trajectory integrate(const Model& model, const InteractionLaw& law, std::span<const double> f0, double t_end,
                     const IntegratorOptions& opts = {});

/// CSV with header t,f_1..f_n,rho,px,py[,pz[,pw]],E,H,W and 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// f_i(t) >= rho^-(n-1) prod_j f_j(0) for every i, evaluated in log space.
bool lower_bound_check(std::span<const double> f0, std::span<const double> ft, double rho0);

/// f_i(t) >= f_i(0) exp(-g rho0^2 t) for every i.
bool decay_bound_check(std::span<const double> f0, std::span<const double> ft, double g, double rho0, double t);

/// (f(v) + f(-v)) / 2. Requires a symmetric set.
std::vector<double> symmetrize_antipodal(const VelocitySet& v, std::span<const double> f);

/// f_i exp(beta . v_i) with beta chosen so that the momentum vanishes.
/// Works on any set whose convex hull has the origin in its interior.
std::vector<double> tilt_to_zero_momentum(const VelocitySet& v, std::span<const double> f);

/// Uniform(0.1, 1) per point from a seeded generator, scaled into the law's
/// admissible range, then brought to zero momentum (antipodal averaging on
/// symmetric sets, exponential tilt otherwise) when zero_momentum is set.
std::vector<double> random_initial_state(const VelocitySet& v, const InteractionLaw& law, std::uint64_t seed,
                                         bool zero_momentum);

}  // namespace kinetic
