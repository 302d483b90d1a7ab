#pragma once

// Interaction laws F(x1,x2;x3,x4) = P(x3,x4;x1,x2) - P(x1,x2;x3,x4) of the
// Boltzmann, Nordheim-Uehling-Uhlenbeck, anion and wave-kinetic families,
// with their entropy variables p(x) and H-integrands I(x) = int p.

#include <limits>
#include <span>
#include <string>
#include <string_view>

namespace kinetic {

class Model;

enum class LawKind { Boltzmann, Nuu, Anion, Wke };

class InteractionLaw {
 public:
  static InteractionLaw boltzmann();
  /// theta = +1 for bosons, -1 for fermions.
  static InteractionLaw nuu(int theta);
  /// 0 < alpha < 1.
  static InteractionLaw anion(double alpha);
  static InteractionLaw wke();

  /// "boltzmann" | "nuu-boson" | "nuu-fermion" | "anion:ALPHA" | "wke".
  static InteractionLaw parse(std::string_view name);
  std::string name() const;

  LawKind kind() const { return kind_; }
  int theta() const { return theta_; }
  double alpha() const { return alpha_; }

  /// Exclusive upper bound of admissible occupation numbers: infinity,
  /// 1 for fermions, 1/alpha for anions.
  double upper_bound() const { return upper_; }
  /// 0 <= x < upper_bound().
  bool admissible(double x) const { return x >= 0.0 && x < upper_; }
  bool admissible_state(std::span<const double> f) const;

  /// Statistics factor: 1 (Boltzmann), 1 + theta x (NUU),
  /// (1 - a x)^a (1 + (1-a) x)^(1-a) (anion). Not defined for WKE.
  double phi(double x) const;

  /// P(x1,x2;x3,x4), the loss product of F. No range checks.
  double loss(double x1, double x2, double x3, double x4) const;

  /// F(x1,x2;x3,x4). Throws std::domain_error outside the admissible range.
  double F(double x1, double x2, double x3, double x4) const;
  /// F without range checks, for hot loops over validated states.
  double F_unchecked(double x1, double x2, double x3, double x4) const {
    return loss(x3, x4, x1, x2) - loss(x1, x2, x3, x4);
  }

  /// Entropy variable p(x); requires x > 0 and admissible.
  double p(double x) const;
  double p_unchecked(double x) const;
  /// dp/dx, used by the moment-matching Newton iterations.
  double p_derivative(double x) const;
  /// Inverse of p. Throws std::domain_error when y is outside the range
  /// of p (y >= 0 for bosons, y >= 0 for WKE).
  double p_inverse(double y) const;

  /// I(x) with I' = p: x log x - x (Boltzmann), -log x (WKE),
  /// x log x - (1 + theta x) log(1 + theta x) / theta (NUU), and
  /// x log x + (1 - a x) log(1 - a x) - (1 + (1-a) x) log(1 + (1-a) x) (anion).
  double I(double x) const;

  /// H(f) = sum_i I(f_i). Throws std::domain_error on nonpositive or
  /// inadmissible components.
  double H(std::span<const double> f) const;

 private:
  InteractionLaw(LawKind k, int theta, double alpha);
  void check_positive(double x) const;

  LawKind kind_;
  int theta_ = 0;
  double alpha_ = 0.0;
  double upper_ = std::numeric_limits<double>::infinity();
};

/// W(f) = 1/4 sum Gamma_ij^kl F(f_i,f_j;f_k,f_l) [p(f_k)+p(f_l)-p(f_i)-p(f_j)]
/// over the full symmetric tensor, i.e. -dH/dt along solutions.
double dissipation_W(const InteractionLaw& law, const Model& model, std::span<const double> f);

}  // namespace kinetic
