#include "kinetic/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "kinetic/dynamics.hpp"
#include "kinetic/parallel.hpp"

namespace kinetic {

double sphere_area(int d) {
  switch (d) {
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    case 4: return 2.0 * std::numbers::pi * std::numbers::pi;
    default: break;
  }
  throw std::invalid_argument("sphere_area: unsupported dimension " + std::to_string(d));
}

namespace {

using Coord = std::array<Int, kMaxDimension>;

// Dense lookup from box coordinates to indices of V.
class BoxIndex {
 public:
  BoxIndex(const QuadratureSpec& spec, const VelocitySet& v) : d_(spec.d), r_(spec.box_radius) {
    if (spec.d < kMinDimension || spec.d > kMaxDimension) {
      throw std::invalid_argument("quadrature: unsupported dimension " + std::to_string(spec.d));
    }
    if (spec.box_radius < 2) throw std::invalid_argument("quadrature: box radius must be >= 2");
    if (!(spec.h > 0.0)) throw std::invalid_argument("quadrature: mesh step must be positive");
    if (v.dim() != spec.d) {
      throw std::invalid_argument("quadrature: velocity set dimension differs from the quadrature dimension");
    }
    if (std::abs(v.h() - spec.h) > 1e-14 * spec.h) {
      throw std::invalid_argument("quadrature: velocity set mesh step differs from the quadrature mesh step");
    }
    side_ = 2 * r_ + 1;
    std::size_t total = 1;
    for (int a = 0; a < d_; ++a) total *= static_cast<std::size_t>(side_);
    slots_.assign(total, -1);
    coords_.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      Coord c{};
      for (int a = 0; a < d_; ++a) {
        c[a] = v[i][a];
        if (c[a] < -r_ || c[a] > r_) throw std::invalid_argument("quadrature: velocity set leaves the box");
      }
      coords_[i] = c;
      slots_[slot(c)] = static_cast<long>(i);
    }
  }

  long find(const Coord& c) const {
    for (int a = 0; a < d_; ++a) {
      if (c[a] < -r_ || c[a] > r_) return -1;
    }
    return slots_[slot(c)];
  }
  const Coord& coords(std::size_t i) const { return coords_[i]; }
  std::size_t size() const { return coords_.size(); }
  int dim() const { return d_; }
  Int radius() const { return r_; }

 private:
  std::size_t slot(const Coord& c) const {
    std::size_t s = 0;
    for (int a = 0; a < d_; ++a) s = s * static_cast<std::size_t>(side_) + static_cast<std::size_t>(c[a] + r_);
    return s;
  }

  int d_;
  Int r_;
  Int side_ = 0;
  std::vector<long> slots_;
  std::vector<Coord> coords_;
};

// Integer points of every shell m <= m_max, stored flat.
struct ShellTable {
  int d;
  std::vector<std::vector<Coord>> shells;

  ShellTable(int dim, Int m_max) : d(dim), shells(static_cast<std::size_t>(m_max) + 1) {
    for (Int m = 1; m <= m_max; ++m) {
      for (const auto& p : enumerate_sphere_points(m, d).points) {
        Coord c{};
        for (int a = 0; a < d; ++a) c[a] = p[a];
        shells[m].push_back(c);
      }
    }
  }
};

double symmetrized_kernel(const QuadratureSpec& spec, const Coord& du, const Coord& dup) {
  if (!spec.kernel) return 1.0;
  const int d = spec.d;
  std::array<double, kMaxDimension> u{}, up{}, nu{}, nup{};
  for (int a = 0; a < d; ++a) {
    u[a] = spec.h * static_cast<double>(du[a]);
    up[a] = spec.h * static_cast<double>(dup[a]);
    nu[a] = -u[a];
    nup[a] = -up[a];
  }
  const std::span<const double> U(u.data(), d), Up(up.data(), d), NU(nu.data(), d), NUp(nup.data(), d);
  double s = 0.0;
  for (const auto& first : {U, NU}) {
    for (const auto& second : {Up, NUp}) {
      s += spec.kernel(first, second);
      s += spec.kernel(second, first);
    }
  }
  const double r = s / 8.0;
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::domain_error("quadrature: kernel must be finite and nonnegative");
  return r;
}

struct PairGeometry {
  bool even = false;
  Int m = 0;
  Coord half{};    // (p_i - p_j) / 2
  Coord centre{};  // (p_i + p_j) / 2
};

PairGeometry pair_geometry(const Coord& pi, const Coord& pj, int d) {
  PairGeometry g;
  for (int a = 0; a < d; ++a) {
    const Int diff = pi[a] - pj[a];
    if (diff % 2 != 0) return g;
    g.half[a] = diff / 2;
    g.centre[a] = (pi[a] + pj[a]) / 2;
    g.m += g.half[a] * g.half[a];
  }
  g.even = true;
  return g;
}

bool same(const Coord& x, const Coord& y, int d, int sign) {
  for (int a = 0; a < d; ++a) {
    if (x[a] != sign * y[a]) return false;
  }
  return true;
}

}  // namespace

ReactionTable build_gamma(const QuadratureSpec& spec, const VelocitySet& v) {
  const BoxIndex box(spec, v);
  const int d = spec.d;
  const Int m_max = spec.box_radius * spec.box_radius * d;
  const ShellTable shells(d, m_max);
  const double area = sphere_area(d);
  const std::size_t n = v.size();

  std::vector<std::vector<Reaction>> per_first(n);
  parallel_for(n, [&](std::size_t i) {
    auto& out = per_first[i];
    const Coord& pi = box.coords(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Coord& pj = box.coords(j);
      const auto geo = pair_geometry(pi, pj, d);
      if (!geo.even) continue;
      const auto& shell = shells.shells[geo.m];
      const double weight = area / static_cast<double>(shell.size());
      for (const Coord& x : shell) {
        if (same(x, geo.half, d, 1) || same(x, geo.half, d, -1)) continue;
        Coord pk{}, pl{};
        for (int a = 0; a < d; ++a) {
          pk[a] = geo.centre[a] + x[a];
          pl[a] = geo.centre[a] - x[a];
        }
        const long k = box.find(pk), l = box.find(pl);
        if (k < 0 || l < 0) continue;
        // Emit each reaction once: from its first pair, with k < l.
        if (k > l) continue;
        if (std::pair<std::size_t, std::size_t>(i, j) > std::pair<std::size_t, std::size_t>(k, l)) continue;
        Coord du{}, dup{};
        for (int a = 0; a < d; ++a) {
          du[a] = pi[a] - pj[a];
          dup[a] = pk[a] - pl[a];
        }
        out.push_back({{i, j, static_cast<std::size_t>(k), static_cast<std::size_t>(l)},
                       symmetrized_kernel(spec, du, dup) * weight});
      }
    }
  });

  std::size_t total = 0;
  for (const auto& p : per_first) total += p.size();
  std::vector<Reaction> all;
  all.reserve(total);
  for (auto& p : per_first) {
    all.insert(all.end(), p.begin(), p.end());
    std::vector<Reaction>().swap(p);
  }
  return ReactionTable(n, std::move(all));
}

std::vector<double> discrete_operator(const QuadratureSpec& spec, const Model& model, const InteractionLaw& law,
                                      std::span<const double> f) {
  if (f.size() != model.size()) throw std::invalid_argument("discrete_operator: samples do not cover the velocity set");
  for (double x : f) {
    if (!(x >= 0.0) || !law.admissible(x)) throw std::domain_error("discrete_operator: sample outside the admissible range");
  }
  std::vector<double> q(f.size());
  rhs_into(model, law, f, q);
  const double cell = std::pow(2.0 * spec.h, spec.d);
  for (auto& x : q) x *= cell;
  return q;
}

std::vector<double> discrete_operator_at(const QuadratureSpec& spec, const VelocitySet& v, const InteractionLaw& law,
                                         std::span<const double> f, std::span<const std::size_t> targets) {
  if (f.size() != v.size()) throw std::invalid_argument("discrete_operator_at: samples do not cover the velocity set");
  const BoxIndex box(spec, v);
  const int d = spec.d;
  const ShellTable shells(d, spec.box_radius * spec.box_radius * d);
  const double area = sphere_area(d);
  const double cell = std::pow(2.0 * spec.h, d);

  std::vector<double> out(targets.size(), 0.0);
  parallel_for(targets.size(), [&](std::size_t t) {
    const std::size_t i = targets[t];
    if (i >= v.size()) throw std::out_of_range("discrete_operator_at: target index out of range");
    const Coord& pi = box.coords(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j == i) continue;
      const Coord& pj = box.coords(j);
      const auto geo = pair_geometry(pi, pj, d);
      if (!geo.even) continue;
      const auto& shell = shells.shells[geo.m];
      const double weight = area / static_cast<double>(shell.size());
      double pair_sum = 0.0;
      for (const Coord& x : shell) {
        if (same(x, geo.half, d, 1) || same(x, geo.half, d, -1)) continue;
        Coord pk{}, pl{};
        for (int a = 0; a < d; ++a) {
          pk[a] = geo.centre[a] + x[a];
          pl[a] = geo.centre[a] - x[a];
        }
        const long k = box.find(pk), l = box.find(pl);
        if (k < 0 || l < 0) continue;
        Coord du{}, dup{};
        for (int a = 0; a < d; ++a) {
          du[a] = pi[a] - pj[a];
          dup[a] = pk[a] - pl[a];
        }
        pair_sum += symmetrized_kernel(spec, du, dup) * law.F_unchecked(f[i], f[j], f[k], f[l]);
      }
      acc += weight * pair_sum;
    }
    out[t] = cell * acc;
  });
  return out;
}

double box_boundary_max(const QuadratureSpec& spec, const VelocitySet& v, std::span<const double> f) {
  const BoxIndex box(spec, v);
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Coord& c = box.coords(i);
    bool face = false;
    for (int a = 0; a < spec.d; ++a) face = face || c[a] == spec.box_radius || c[a] == -spec.box_radius;
    if (face) best = std::max(best, std::abs(f[i]));
  }
  return best;
}

namespace {

// Mean over S^2 with the first coordinate as the polar axis.
double s2_mean(const std::function<double(double, double, double)>& g, int azimuth_points) {
  using boost::math::quadrature::gauss;
  const double dt = 2.0 * std::numbers::pi / azimuth_points;
  auto ring = [&](double z) {
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    double acc = 0.0;
    for (int a = 0; a < azimuth_points; ++a) {
      const double t = dt * a;
      acc += g(z, s * std::cos(t), s * std::sin(t));
    }
    return acc * dt;
  };
  return gauss<double, 30>::integrate(ring, -1.0, 1.0) / (4.0 * std::numbers::pi);
}

}  // namespace

double sphere_mean(int d, const SphereFunction& fn) {
  switch (d) {
    case 2: {
      constexpr int kPoints = 256;
      double acc = 0.0;
      for (int a = 0; a < kPoints; ++a) {
        const double t = 2.0 * std::numbers::pi * a / kPoints;
        const std::array<double, 2> w{std::cos(t), std::sin(t)};
        acc += fn(w);
      }
      return acc / kPoints;
    }
    case 3:
      return s2_mean([&](double x, double y, double z) {
        const std::array<double, 3> w{x, y, z};
        return fn(w);
      }, 128);
    case 4: {
      // omega = (cos psi, sin psi * sigma), sigma on S^2, weight sin^2 psi.
      using boost::math::quadrature::gauss;
      auto shell = [&](double psi) {
        const double c = std::cos(psi), s = std::sin(psi);
        const double inner = s2_mean([&](double x, double y, double z) {
          const std::array<double, 4> w{c, s * x, s * y, s * z};
          return fn(w);
        }, 64);
        return s * s * inner;
      };
      // int_0^pi sin^2 = pi / 2.
      return gauss<double, 30>::integrate(shell, 0.0, std::numbers::pi) / (0.5 * std::numbers::pi);
    }
    default: break;
  }
  throw std::invalid_argument("sphere_mean: unsupported dimension " + std::to_string(d));
}

double sphere_average_error(Int m, int d, const SphereFunction& fn) {
  const auto shell = enumerate_sphere_points(m, d);
  if (shell.points.empty() || m == 0) {
    throw std::domain_error("sphere_average_error: shell m = " + std::to_string(m) + " has no points on a sphere");
  }
  const double radius = std::sqrt(static_cast<double>(m));
  std::vector<double> w(d);
  double acc = 0.0;
  for (const auto& p : shell.points) {
    for (int a = 0; a < d; ++a) w[a] = static_cast<double>(p[a]) / radius;
    acc += fn(w);
  }
  return std::abs(acc / static_cast<double>(shell.count()) - sphere_mean(d, fn));
}

ExponentialSum exponential_sum(Int m, int k) {
  if (k < 1) throw std::invalid_argument("exponential_sum: k must be >= 1");
  const auto shell = enumerate_sphere_points(m, 2);
  ExponentialSum s;
  if (m == 0 || shell.points.empty()) {
    s.empty = true;
    return s;
  }
  for (const auto& p : shell.points) {
    const double theta = std::atan2(static_cast<double>(p[1]), static_cast<double>(p[0]));
    s.value += std::polar(1.0, k * theta);
  }
  return s;
}

}  // namespace kinetic
