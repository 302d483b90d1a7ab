#include "kinetic/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "kinetic/model.hpp"

namespace kinetic {

InteractionLaw::InteractionLaw(LawKind k, int theta, double alpha) : kind_(k), theta_(theta), alpha_(alpha) {
  if (kind_ == LawKind::Nuu && theta_ == -1) upper_ = 1.0;
  if (kind_ == LawKind::Anion) upper_ = 1.0 / alpha_;
}

InteractionLaw InteractionLaw::boltzmann() { return {LawKind::Boltzmann, 0, 0.0}; }

InteractionLaw InteractionLaw::nuu(int theta) {
  if (theta != 1 && theta != -1) throw std::invalid_argument("NUU law: theta must be +1 or -1");
  return {LawKind::Nuu, theta, 0.0};
}

InteractionLaw InteractionLaw::anion(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("anion law: alpha must lie in (0,1)");
  return {LawKind::Anion, 0, alpha};
}

InteractionLaw InteractionLaw::wke() { return {LawKind::Wke, 0, 0.0}; }

InteractionLaw InteractionLaw::parse(std::string_view name) {
  if (name == "boltzmann") return boltzmann();
  if (name == "nuu-boson") return nuu(1);
  if (name == "nuu-fermion") return nuu(-1);
  if (name == "wke") return wke();
  if (name.starts_with("anion:")) {
    const std::string num(name.substr(6));
    std::size_t used = 0;
    double a = 0.0;
    try {
      a = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != num.size()) throw std::invalid_argument("anion law: cannot parse alpha in '" + std::string(name) + "'");
    return anion(a);
  }
  throw std::invalid_argument("unknown interaction law '" + std::string(name) + "'");
}

std::string InteractionLaw::name() const {
  switch (kind_) {
    case LawKind::Boltzmann: return "boltzmann";
    case LawKind::Nuu: return theta_ > 0 ? "nuu-boson" : "nuu-fermion";
    case LawKind::Anion: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "anion:%.17g", alpha_);
      return buf;
    }
    case LawKind::Wke: return "wke";
  }
  return {};
}

bool InteractionLaw::admissible_state(std::span<const double> f) const {
  for (double x : f) {
    if (!(x > 0.0) || !(x < upper_)) return false;
  }
  return true;
}

double InteractionLaw::phi(double x) const {
  switch (kind_) {
    case LawKind::Boltzmann: return 1.0;
    case LawKind::Nuu: return 1.0 + theta_ * x;
    case LawKind::Anion: {
      const double s = 1.0 - alpha_ * x;
      if (s <= 0.0) return 0.0;
      return std::pow(s, alpha_) * std::pow(1.0 + (1.0 - alpha_) * x, 1.0 - alpha_);
    }
    case LawKind::Wke: break;
  }
  throw std::logic_error("statistics factor is not defined for the wave kinetic law");
}

double InteractionLaw::loss(double x1, double x2, double x3, double x4) const {
  switch (kind_) {
    case LawKind::Boltzmann: return x1 * x2;
    case LawKind::Nuu: return x1 * x2 * (1.0 + theta_ * x3) * (1.0 + theta_ * x4);
    case LawKind::Anion: return x1 * x2 * phi(x3) * phi(x4);
    case LawKind::Wke: return x1 * x2 * (x3 + x4);
  }
  return 0.0;
}

double InteractionLaw::F(double x1, double x2, double x3, double x4) const {
  for (double x : {x1, x2, x3, x4}) {
    if (!admissible(x)) {
      throw std::domain_error(name() + ": argument " + std::to_string(x) + " outside the admissible range");
    }
  }
  return F_unchecked(x1, x2, x3, x4);
}

void InteractionLaw::check_positive(double x) const {
  if (!(x > 0.0) || !(x < upper_)) {
    throw std::domain_error(name() + ": occupation " + std::to_string(x) + " must lie in (0, " +
                            std::to_string(upper_) + ")");
  }
}

double InteractionLaw::p_unchecked(double x) const {
  switch (kind_) {
    case LawKind::Boltzmann: return std::log(x);
    case LawKind::Nuu: return std::log(x) - std::log1p(theta_ * x);
    case LawKind::Anion:
      return std::log(x) - alpha_ * std::log1p(-alpha_ * x) - (1.0 - alpha_) * std::log1p((1.0 - alpha_) * x);
    case LawKind::Wke: return -1.0 / x;
  }
  return 0.0;
}

double InteractionLaw::p(double x) const {
  check_positive(x);
  return p_unchecked(x);
}

double InteractionLaw::p_derivative(double x) const {
  check_positive(x);
  switch (kind_) {
    case LawKind::Boltzmann: return 1.0 / x;
    case LawKind::Nuu: return 1.0 / (x * (1.0 + theta_ * x));
    case LawKind::Anion: {
      const double b = 1.0 - alpha_;
      return 1.0 / x + alpha_ * alpha_ / (1.0 - alpha_ * x) - b * b / (1.0 + b * x);
    }
    case LawKind::Wke: return 1.0 / (x * x);
  }
  return 0.0;
}

double InteractionLaw::p_inverse(double y) const {
  if (!std::isfinite(y)) throw std::domain_error("p_inverse: non-finite argument");
  switch (kind_) {
    case LawKind::Boltzmann: return std::exp(y);
    case LawKind::Nuu:
      if (theta_ > 0) {
        if (y >= 0.0) throw std::domain_error("p_inverse: boson entropy variable must be negative");
        return 1.0 / std::expm1(-y);
      }
      return 1.0 / (std::exp(-y) + 1.0);
    case LawKind::Wke:
      if (y >= 0.0) throw std::domain_error("p_inverse: wave-kinetic entropy variable must be negative");
      return -1.0 / y;
    case LawKind::Anion: break;
  }
  // p is strictly increasing from -inf to +inf on (0, 1/alpha); safeguarded
  // Newton inside a shrinking bracket.
  double lo = 0.0;
  double hi = upper_;
  double x = std::min(std::exp(y), 0.5 * upper_);
  if (!(x > 0.0)) return std::exp(y);
  for (int it = 0; it < 200; ++it) {
    const double g = p_unchecked(x) - y;
    if (g > 0.0) hi = x; else lo = x;
    if (g == 0.0) return x;
    double next = x - g / p_derivative(x);
    if (!(next > lo && next < hi)) next = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi * (x / hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4e-16 * x) return next;
    x = next;
  }
  return x;
}

double InteractionLaw::I(double x) const {
  check_positive(x);
  switch (kind_) {
    case LawKind::Boltzmann: return x * std::log(x) - x;
    case LawKind::Nuu: {
      const double s = 1.0 + theta_ * x;
      return x * std::log(x) - s * std::log(s) / theta_;
    }
    case LawKind::Anion: {
      const double s = 1.0 - alpha_ * x;
      const double t = 1.0 + (1.0 - alpha_) * x;
      return x * std::log(x) + s * std::log(s) - t * std::log(t);
    }
    case LawKind::Wke: return -std::log(x);
  }
  return 0.0;
}

double InteractionLaw::H(std::span<const double> f) const {
  double h = 0.0;
  for (double x : f) h += I(x);
  return h;
}

double dissipation_W(const InteractionLaw& law, const Model& model, std::span<const double> f) {
  if (f.size() != model.size()) throw std::invalid_argument("dissipation_W: state size mismatch");
  for (double x : f) {
    if (!(x > 0.0) || !law.admissible(x)) throw std::domain_error("dissipation_W: state must be positive and admissible");
  }
  double w = 0.0;
  for (const auto& r : model.reactions()) {
    const double fi = f[r.q.i], fj = f[r.q.j], fk = f[r.q.k], fl = f[r.q.l];
    double term;
    if (law.kind() == LawKind::Wke) {
      const double s = 1.0 / fi + 1.0 / fj - 1.0 / fk - 1.0 / fl;
      term = fi * fj * fk * fl * s * s;
    } else {
      term = law.F_unchecked(fi, fj, fk, fl) *
             (law.p_unchecked(fk) + law.p_unchecked(fl) - law.p_unchecked(fi) - law.p_unchecked(fj));
    }
    // Each canonical reaction stands for eight tensor entries, each carrying
    // the same product; 8/4 = 2.
    w += 2.0 * r.gamma * term;
  }
  return w;
}

}  // namespace kinetic
