#include "kinetic/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>

namespace kinetic {

VelocitySet::VelocitySet(int d, double h, std::vector<LatticePoint> points)
    : d_(d), h_(h), points_(std::move(points)) {
  if (d_ < kMinDimension || d_ > kMaxDimension) {
    throw std::invalid_argument("velocity set: unsupported dimension " + std::to_string(d_));
  }
  if (!(h_ > 0.0) || !std::isfinite(h_)) {
    throw std::invalid_argument("velocity set: mesh step must be positive");
  }
  if (points_.size() < 4) {
    throw std::invalid_argument("velocity set: need at least 4 points");
  }
  std::set<LatticePoint> seen;
  for (const auto& p : points_) {
    if (p.dim() != d_) throw std::invalid_argument("velocity set: point of wrong dimension");
    if (!seen.insert(p).second) throw std::invalid_argument("velocity set: duplicate point");
  }
}

std::optional<std::size_t> VelocitySet::index_of(const LatticePoint& p) const {
  auto it = std::find(points_.begin(), points_.end(), p);
  if (it == points_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - points_.begin());
}

double VelocitySet::max_speed2() const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i) m = std::max(m, speed2(i));
  return m;
}

bool VelocitySet::contains_origin() const { return contains(LatticePoint::zero(d_)); }

bool VelocitySet::is_symmetric() const {
  std::set<LatticePoint> s(points_.begin(), points_.end());
  return std::all_of(points_.begin(), points_.end(), [&](const LatticePoint& p) { return s.count(-p) > 0; });
}

VelocitySet VelocitySet::with_point(const LatticePoint& p) const {
  auto pts = points_;
  pts.push_back(p);
  return VelocitySet(d_, h_, std::move(pts));
}

ReactionTable::ReactionTable(std::size_t n, std::vector<Reaction> reactions)
    : n_(n), reactions_(std::move(reactions)) {
  for (auto& r : reactions_) {
    const auto& q = r.q;
    if (q.i >= n_ || q.j >= n_ || q.k >= n_ || q.l >= n_) {
      throw std::invalid_argument("reaction table: index out of range");
    }
    std::array<std::size_t, 4> idx{q.i, q.j, q.k, q.l};
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
      throw std::invalid_argument("reaction table: repeated index in a reaction");
    }
    if (!(r.gamma >= 0.0) || !std::isfinite(r.gamma)) {
      throw std::invalid_argument("reaction table: rate must be finite and nonnegative");
    }
    r.q = canonical(q.i, q.j, q.k, q.l);
  }
  std::sort(reactions_.begin(), reactions_.end(),
            [](const Reaction& a, const Reaction& b) { return a.q < b.q; });
  for (std::size_t a = 1; a < reactions_.size(); ++a) {
    if (reactions_[a].q == reactions_[a - 1].q) {
      throw std::invalid_argument("reaction table: duplicate reaction");
    }
  }
}

ReactionTable ReactionTable::scaled(double s) const {
  auto rs = reactions_;
  for (auto& r : rs) r.gamma *= s;
  return ReactionTable(n_, std::move(rs));
}

double ReactionTable::max_gamma() const {
  double g = 0.0;
  for (const auto& r : reactions_) g = std::max(g, r.gamma);
  return g;
}

Model::Model(VelocitySet velocities, ReactionTable reactions)
    : velocities_(std::move(velocities)), reactions_(std::move(reactions)) {
  if (reactions_.n() != velocities_.size()) {
    throw std::invalid_argument("model: reaction table size does not match velocity set");
  }
  const auto& v = velocities_;
  for (const auto& r : reactions_) {
    if (!is_conservative(v[r.q.i], v[r.q.j], v[r.q.k], v[r.q.l])) {
      throw std::invalid_argument("model: reaction violates momentum or energy conservation");
    }
  }
}

InvariantVectors invariant_vectors(const VelocitySet& v) {
  const int d = v.dim();
  const std::size_t n = v.size();
  InvariantVectors out;
  out.phi.assign(d + 2, std::vector<Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    out.phi[0][i] = 1;
    for (int a = 0; a < d; ++a) out.phi[a + 1][i] = v[i][a];
    out.phi[d + 1][i] = v[i].norm2();
  }
  return out;
}

std::vector<Int> reaction_vector(const Quadruple& q, std::size_t n) {
  std::vector<Int> theta(n, 0);
  theta.at(q.i) += 1;
  theta.at(q.j) += 1;
  theta.at(q.k) -= 1;
  theta.at(q.l) -= 1;
  return theta;
}

NormalityReport check_normal(const Model& model) {
  const auto& v = model.velocities();
  const std::size_t n = v.size();
  const int d = v.dim();
  NormalityReport rep;

  rep.rank_phi = exact_integer_rank(invariant_vectors(v).phi);
  rep.condition_a = rep.rank_phi == static_cast<std::size_t>(d + 2);

  std::vector<bool> touched(n, false);
  std::vector<std::vector<Int>> thetas;
  for (const auto& r : model.reactions()) {
    if (!(r.gamma > 0.0)) continue;
    touched[r.q.i] = touched[r.q.j] = touched[r.q.k] = touched[r.q.l] = true;
    thetas.push_back(reaction_vector(r.q, n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!touched[i]) rep.isolated_points.push_back(i);
  }
  rep.condition_b = rep.isolated_points.empty();

  rep.p_max = static_cast<long>(n) - (d + 2);
  rep.rank_p = exact_integer_rank(thetas);
  rep.condition_c = static_cast<long>(rep.rank_p) == rep.p_max;
  return rep;
}

Model seed_broadwell(int d, double h) {
  if (d < kMinDimension || d > kMaxDimension) {
    throw std::invalid_argument("seed_broadwell: unsupported dimension " + std::to_string(d));
  }
  std::vector<LatticePoint> pts;
  for (int a = 0; a < d; ++a) {
    pts.push_back(LatticePoint::unit(d, a));
    pts.push_back(-LatticePoint::unit(d, a));
  }
  pts.push_back(LatticePoint::zero(d));
  pts.push_back(LatticePoint::unit(d, 0) + LatticePoint::unit(d, 1));
  const std::size_t n = pts.size();

  std::vector<Reaction> rs;
  for (int a = 1; a < d; ++a) {
    rs.push_back({{0, 1, static_cast<std::size_t>(2 * a), static_cast<std::size_t>(2 * a + 1)}, 1.0});
  }
  rs.push_back({{0, 2, n - 2, n - 1}, 1.0});
  return Model(VelocitySet(d, h, std::move(pts)), ReactionTable(n, std::move(rs)));
}

LatticePoint extension_point(const VelocitySet& v, const ExtensionAnchor& a) {
  return v[a.first] + v[a.second] - v[a.corner];
}

Model extend_model(const Model& model, const ExtensionAnchor& anchor, double gamma) {
  const auto& v = model.velocities();
  const std::size_t n = v.size();
  if (anchor.first >= n || anchor.second >= n || anchor.corner >= n ||
      anchor.first == anchor.second || anchor.first == anchor.corner ||
      anchor.second == anchor.corner) {
    throw std::invalid_argument("extend_model: anchor indices must be distinct and in range");
  }
  const auto& c = v[anchor.corner];
  if ((v[anchor.first] - c).dot(v[anchor.second] - c) != 0) {
    throw std::invalid_argument("extend_model: anchor corner is not a right angle");
  }
  LatticePoint fresh = extension_point(v, anchor);
  if (v.contains(fresh)) {
    throw std::invalid_argument("extend_model: new point already belongs to the set");
  }
  auto rs = model.reactions().reactions();
  rs.push_back({canonical(anchor.first, anchor.second, anchor.corner, n), gamma});
  return Model(v.with_point(fresh), ReactionTable(n + 1, std::move(rs)));
}

std::vector<ExtensionAnchor> find_extension_anchors(const VelocitySet& v) {
  const std::size_t n = v.size();
  struct Candidate {
    ExtensionAnchor anchor;
    LatticePoint point;
  };
  std::vector<Candidate> found;
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t a = 0; a < n; ++a) {
      if (a == c) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (b == c) continue;
        if ((v[a] - v[c]).dot(v[b] - v[c]) != 0) continue;
        LatticePoint p = v[a] + v[b] - v[c];
        if (v.contains(p)) continue;
        found.push_back({{a, b, c}, std::move(p)});
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const Candidate& x, const Candidate& y) {
    return std::tuple(x.point.norm2(), x.point, x.anchor.corner, x.anchor.first, x.anchor.second) <
           std::tuple(y.point.norm2(), y.point, y.anchor.corner, y.anchor.first, y.anchor.second);
  });
  std::vector<ExtensionAnchor> out;
  out.reserve(found.size());
  for (auto& f : found) out.push_back(f.anchor);
  return out;
}

ReactionTable autopopulate_reactions(const VelocitySet& v, const RateKernel& kernel) {
  const double h2 = v.h() * v.h();
  std::vector<Reaction> rs;
  for (const auto& q : find_collision_quadruples(v.points())) {
    const LatticePoint u = v[q.i] - v[q.j];
    const LatticePoint up = v[q.k] - v[q.l];
    const double rate = kernel(h2 * static_cast<double>(u.norm2()), h2 * static_cast<double>(u.dot(up)));
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
      throw std::domain_error("autopopulate_reactions: kernel returned a negative or non-finite rate");
    }
    rs.push_back({q, rate});
  }
  return ReactionTable(v.size(), std::move(rs));
}

ReactionTable autopopulate_reactions(const VelocitySet& v, double constant_rate) {
  return autopopulate_reactions(v, [constant_rate](double, double) { return constant_rate; });
}

VelocitySet translate_set(const VelocitySet& v, const LatticePoint& a) {
  if (a.dim() != v.dim()) throw std::invalid_argument("translate_set: dimension mismatch");
  std::vector<LatticePoint> pts;
  pts.reserve(v.size());
  for (const auto& p : v.points()) pts.push_back(p + a);
  return VelocitySet(v.dim(), v.h(), std::move(pts));
}

Model translate_model(const Model& model, const LatticePoint& a) {
  return Model(translate_set(model.velocities(), a), model.reactions());
}

VelocitySet box_set(int d, double h, Int radius) {
  if (radius < 1) throw std::invalid_argument("box_set: radius must be >= 1");
  std::vector<LatticePoint> pts;
  std::vector<Int> c(d, -radius);
  while (true) {
    pts.emplace_back(c);
    int a = d - 1;
    while (a >= 0 && c[a] == radius) {
      c[a] = -radius;
      --a;
    }
    if (a < 0) break;
    ++c[a];
  }
  return VelocitySet(d, h, std::move(pts));
}

}  // namespace kinetic
