#pragma once

// Discrete velocity sets, reaction tables and the normality certificate.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "kinetic/lattice.hpp"

namespace kinetic {

/// The phase set V = {h * p_i} with p_i pairwise distinct lattice points.
class VelocitySet {
 public:
  VelocitySet(int d, double h, std::vector<LatticePoint> points);

  int dim() const { return d_; }
  double h() const { return h_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<LatticePoint>& points() const { return points_; }
  const LatticePoint& operator[](std::size_t i) const { return points_[i]; }

  std::optional<std::size_t> index_of(const LatticePoint& p) const;
  bool contains(const LatticePoint& p) const { return index_of(p).has_value(); }

  /// Physical velocity component h * p_i[a].
  double velocity(std::size_t i, int a) const { return h_ * static_cast<double>(points_[i][a]); }
  /// Physical squared speed h^2 |p_i|^2.
  double speed2(std::size_t i) const { return h_ * h_ * static_cast<double>(points_[i].norm2()); }
  /// M = max_i |v_i|^2.
  double max_speed2() const;

  bool contains_origin() const;
  /// v in V implies -v in V.
  bool is_symmetric() const;

  /// Returns a copy with `p` appended. Throws if p is already present.
  VelocitySet with_point(const LatticePoint& p) const;

 private:
  int d_;
  double h_;
  std::vector<LatticePoint> points_;
};

struct Reaction {
  Quadruple q;
  double gamma = 1.0;

  bool operator==(const Reaction&) const = default;
};

/// Canonical list of reactions. Each entry stands for all eight index
/// orientations of the symmetric rate tensor Gamma_ij^kl.
class ReactionTable {
 public:
  ReactionTable() = default;
  /// Normalizes orientation and order. Throws std::invalid_argument on
  /// out-of-range or repeated indices, duplicate reactions, or negative
  /// (or non-finite) rates.
  ReactionTable(std::size_t n, std::vector<Reaction> reactions);

  std::size_t n() const { return n_; }
  std::size_t size() const { return reactions_.size(); }
  bool empty() const { return reactions_.empty(); }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  auto begin() const { return reactions_.begin(); }
  auto end() const { return reactions_.end(); }

  /// Same reactions with every rate multiplied by s >= 0.
  ReactionTable scaled(double s) const;
  double max_gamma() const;

 private:
  std::size_t n_ = 0;
  std::vector<Reaction> reactions_;
};

/// A velocity set together with a reaction table on it. Construction
/// checks the conservation equalities of every reaction exactly.
class Model {
 public:
  Model(VelocitySet velocities, ReactionTable reactions);

  const VelocitySet& velocities() const { return velocities_; }
  const ReactionTable& reactions() const { return reactions_; }
  std::size_t size() const { return velocities_.size(); }
  int dim() const { return velocities_.dim(); }

 private:
  VelocitySet velocities_;
  ReactionTable reactions_;
};

/// phi_1 = 1, phi_{a+1} = a-th coordinate, phi_{d+2} = |v|^2, in lattice units.
struct InvariantVectors {
  std::vector<std::vector<Int>> phi;
};

InvariantVectors invariant_vectors(const VelocitySet& v);

/// +1 at i and j, -1 at k and l.
std::vector<Int> reaction_vector(const Quadruple& q, std::size_t n);

struct NormalityReport {
  bool condition_a = false;  ///< set not in an affine hyperplane nor on a sphere
  bool condition_b = false;  ///< no isolated points
  bool condition_c = false;  ///< reaction vectors have full rank n - (d+2)
  std::size_t rank_phi = 0;
  std::size_t rank_p = 0;
  long p_max = 0;
  std::vector<std::size_t> isolated_points;  ///< 0-based

  bool normal() const { return condition_a && condition_b && condition_c; }
};

NormalityReport check_normal(const Model& model);

/// The 2d+2 point set {e_1, -e_1, ..., e_d, -e_d, 0, e_1+e_2} with unit rates
/// on {(e_1,-e_1),(e_k,-e_k)} for k = 2..d and {(e_1,e_2),(0,e_1+e_2)}.
Model seed_broadwell(int d, double h = 1.0);

/// Three points a, b and a right-angle corner c: (v_c - v_a).(v_c - v_b) = 0.
/// Extending adds v_a + v_b - v_c and the reaction {(a,b),(c,new)}.
struct ExtensionAnchor {
  std::size_t first = 0;
  std::size_t second = 0;
  std::size_t corner = 0;

  bool operator==(const ExtensionAnchor&) const = default;
};

/// Throws std::invalid_argument if the corner is not a right angle or the
/// new point is already in V.
Model extend_model(const Model& model, const ExtensionAnchor& anchor, double gamma = 1.0);

/// The point an anchor would add.
LatticePoint extension_point(const VelocitySet& v, const ExtensionAnchor& anchor);

/// All admissible anchors with first < second, ordered by the new point's
/// squared norm and then lexicographically by (new point, corner, first).
std::vector<ExtensionAnchor> find_extension_anchors(const VelocitySet& v);

/// Rate as a function of |v_i - v_j|^2 and (v_i - v_j).(v_k - v_l), both in
/// physical units and evaluated in canonical orientation.
using RateKernel = std::function<double(double u2, double u_dot_u_prime)>;

/// One reaction per conservative quadruple, rate from the kernel. Throws
/// std::domain_error if the kernel returns a negative or non-finite rate.
ReactionTable autopopulate_reactions(const VelocitySet& v, const RateKernel& kernel);
ReactionTable autopopulate_reactions(const VelocitySet& v, double constant_rate = 1.0);

/// Shifts every point by a. Reaction indices and rates carry over unchanged.
VelocitySet translate_set(const VelocitySet& v, const LatticePoint& a);
Model translate_model(const Model& model, const LatticePoint& a);

/// Integer box {p : |p_a| <= radius for all a}, lexicographic order.
VelocitySet box_set(int d, double h, Int radius);

}  // namespace kinetic
