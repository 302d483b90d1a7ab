#pragma once

// Lattice quadrature for the continuum collision operator
//   K[f](v) = int dw int_{S^{d-1}} dw' R(u, u') F(f(v), f(w); f(v'), f(w')),
// u = v - w, u' = v' - w', v' = (v + w + |u| w')/2, w' = (v + w - |u| w')/2.
// Partners w run over v + 2h Z^d, and the sphere integral is replaced by the
// average over the integer points of the shell |x|^2 = |u|^2 / (4h^2).

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "kinetic/interaction.hpp"
#include "kinetic/lattice.hpp"
#include "kinetic/model.hpp"

namespace kinetic {

/// Collision kernel R(u, u') on physical relative velocities. It is
/// symmetrized over u -> -u, u' -> -u' and u <-> u' before use.
using CollisionKernel = std::function<double(std::span<const double> u, std::span<const double> u_prime)>;

struct QuadratureSpec {
  int d = 3;
  double h = 1.0;
  Int box_radius = 2;
  CollisionKernel kernel;  ///< empty means R = 1
};

/// |S^{d-1}|: 2 pi, 4 pi, 2 pi^2 for d = 2, 3, 4.
double sphere_area(int d);

/// Gamma_ij^kl = R~(v_i - v_j, v_k - v_l) |S^{d-1}| / r_d(m), m = |p_i - p_j|^2 / 4,
/// for every conservative quadruple of V whose pair differences are even
/// lattice vectors. V must lie in the quadrature box and share its h and d.
ReactionTable build_gamma(const QuadratureSpec& spec, const VelocitySet& v);

/// K_h[f](v_i) = (2h)^d sum Gamma_ij^kl F(f_i,f_j;f_k,f_l) over a table made by
/// build_gamma. Throws std::invalid_argument when f does not cover V.
std::vector<double> discrete_operator(const QuadratureSpec& spec, const Model& model, const InteractionLaw& law,
                                      std::span<const double> f);

/// K_h[f] at selected indices only, summing partners and shells directly
/// without materializing the table. Agrees with discrete_operator.
std::vector<double> discrete_operator_at(const QuadratureSpec& spec, const VelocitySet& v, const InteractionLaw& law,
                                         std::span<const double> f, std::span<const std::size_t> targets);

/// Largest sample on the faces of the box, a proxy for the truncation tail.
double box_boundary_max(const QuadratureSpec& spec, const VelocitySet& v, std::span<const double> f);

using SphereFunction = std::function<double(std::span<const double> omega)>;

/// (1/|S^{d-1}|) int_{S^{d-1}} fn, by Gauss-Legendre in the polar angles and
/// the trapezoid rule in azimuth.
double sphere_mean(int d, const SphereFunction& fn);

/// |(1/r_d(m)) sum_{x in shell} fn(x/sqrt m) - sphere_mean(d, fn)|. Throws
/// std::domain_error for an empty shell.
double sphere_average_error(Int m, int d, const SphereFunction& fn);

struct ExponentialSum {
  std::complex<double> value;
  bool empty = false;
};

/// S(m,k) = sum over integer points on x^2 + y^2 = m of e^{i k theta}. k >= 1.
ExponentialSum exponential_sum(Int m, int k);

}  // namespace kinetic
