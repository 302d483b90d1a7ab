#include "kinetic/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

namespace kinetic {

LatticePoint LatticePoint::unit(int d, int axis) {
  LatticePoint p = zero(d);
  p.coords.at(axis) = 1;
  return p;
}

Int LatticePoint::norm2() const { return dot(*this); }

Int LatticePoint::dot(const LatticePoint& o) const {
  Int s = 0;
  for (std::size_t a = 0; a < coords.size(); ++a) s += coords[a] * o.coords[a];
  return s;
}

bool LatticePoint::is_even() const {
  return std::all_of(coords.begin(), coords.end(), [](Int c) { return c % 2 == 0; });
}

LatticePoint LatticePoint::operator+(const LatticePoint& o) const {
  LatticePoint r = *this;
  for (std::size_t a = 0; a < coords.size(); ++a) r.coords[a] += o.coords[a];
  return r;
}

LatticePoint LatticePoint::operator-(const LatticePoint& o) const {
  LatticePoint r = *this;
  for (std::size_t a = 0; a < coords.size(); ++a) r.coords[a] -= o.coords[a];
  return r;
}

LatticePoint LatticePoint::operator-() const {
  LatticePoint r = *this;
  for (auto& c : r.coords) c = -c;
  return r;
}

LatticePoint LatticePoint::operator*(Int s) const {
  LatticePoint r = *this;
  for (auto& c : r.coords) c *= s;
  return r;
}

std::size_t LatticePointHash::operator()(const LatticePoint& p) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (Int c : p.coords) {
    h ^= static_cast<std::size_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

Int isqrt(Int m) {
  if (m < 0) throw std::invalid_argument("isqrt: negative argument");
  auto r = static_cast<Int>(std::sqrt(static_cast<double>(m)));
  while (r * r > m) --r;
  while ((r + 1) * (r + 1) <= m) ++r;
  return r;
}

namespace {

void check_dimension(int d) {
  if (d < kMinDimension || d > kMaxDimension) {
    throw std::invalid_argument("unsupported dimension " + std::to_string(d) +
                                " (expected 2, 3 or 4)");
  }
}

// Appends all points with the given prefix whose remaining coordinates
// have squared norm `rest`. Iterating each coordinate upward keeps the
// output in lexicographic order.
void enumerate_rec(Int rest, int remaining, std::vector<Int>& prefix,
                   std::vector<LatticePoint>& out) {
  if (remaining == 1) {
    Int s = isqrt(rest);
    if (s * s != rest) return;
    prefix.push_back(-s);
    out.emplace_back(prefix);
    prefix.pop_back();
    if (s != 0) {
      prefix.push_back(s);
      out.emplace_back(prefix);
      prefix.pop_back();
    }
    return;
  }
  Int s = isqrt(rest);
  for (Int x = -s; x <= s; ++x) {
    prefix.push_back(x);
    enumerate_rec(rest - x * x, remaining - 1, prefix, out);
    prefix.pop_back();
  }
}

Int count_rec(Int rest, int remaining) {
  if (remaining == 1) {
    Int s = isqrt(rest);
    if (s * s != rest) return 0;
    return s == 0 ? 1 : 2;
  }
  Int total = 0;
  Int s = isqrt(rest);
  for (Int x = -s; x <= s; ++x) total += count_rec(rest - x * x, remaining - 1);
  return total;
}

}  // namespace

SphereShell enumerate_sphere_points(Int m, int d) {
  check_dimension(d);
  if (m < 0) throw std::invalid_argument("enumerate_sphere_points: m must be >= 0");
  SphereShell shell;
  shell.m = m;
  shell.d = d;
  std::vector<Int> prefix;
  prefix.reserve(d);
  enumerate_rec(m, d, prefix, shell.points);
  return shell;
}

Int count_sphere_points(Int m, int d) {
  check_dimension(d);
  if (m < 0) throw std::invalid_argument("count_sphere_points: m must be >= 0");
  return count_rec(m, d);
}

bool is_excluded_three_square(Int m) {
  if (m <= 0) return false;
  while (m % 4 == 0) m /= 4;
  return m % 8 == 7;
}

Quadruple canonical(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
  if (i > j) std::swap(i, j);
  if (k > l) std::swap(k, l);
  if (std::pair(k, l) < std::pair(i, j)) {
    std::swap(i, k);
    std::swap(j, l);
  }
  return {i, j, k, l};
}

bool is_conservative(const LatticePoint& vi, const LatticePoint& vj,
                     const LatticePoint& vk, const LatticePoint& vl) {
  return vi + vj == vk + vl && vi.norm2() + vj.norm2() == vk.norm2() + vl.norm2();
}

namespace {

struct PairKey {
  LatticePoint sum;
  Int energy;
  bool operator==(const PairKey&) const = default;
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const noexcept {
    return LatticePointHash{}(k.sum) ^ (static_cast<std::size_t>(k.energy) * 0x9e3779b97f4a7c15ULL);
  }
};

}  // namespace

std::vector<Quadruple> find_collision_quadruples(std::span<const LatticePoint> points) {
  const std::size_t n = points.size();
  std::unordered_map<PairKey, std::vector<std::pair<std::size_t, std::size_t>>, PairKeyHash> groups;
  groups.reserve(n * (n - 1) / 2 + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      groups[PairKey{points[i] + points[j], points[i].norm2() + points[j].norm2()}]
          .emplace_back(i, j);
    }
  }
  // Two different pairs sharing both moments cannot share an index: if
  // i == k then v_j == v_l, so j == l for pairwise distinct points.
  std::vector<Quadruple> out;
  for (const auto& [key, pairs] : groups) {
    for (std::size_t a = 0; a < pairs.size(); ++a) {
      for (std::size_t b = a + 1; b < pairs.size(); ++b) {
        out.push_back(canonical(pairs[a].first, pairs[a].second, pairs[b].first, pairs[b].second));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t exact_integer_rank(const std::vector<std::vector<Int>>& rows) {
  using Big = boost::multiprecision::cpp_int;
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::vector<std::vector<Big>> a;
  a.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::invalid_argument("exact_integer_rank: ragged rows");
    a.emplace_back(r.begin(), r.end());
  }

  const std::size_t m = a.size();
  std::size_t rank = 0;
  Big prev_pivot = 1;
  for (std::size_t c = 0; c < cols && rank < m; ++c) {
    std::size_t p = rank;
    while (p < m && a[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(a[p], a[rank]);
    const Big& piv = a[rank][c];
    for (std::size_t r = rank + 1; r < m; ++r) {
      for (std::size_t cc = c + 1; cc < cols; ++cc) {
        a[r][cc] = (piv * a[r][cc] - a[r][c] * a[rank][cc]) / prev_pivot;
      }
      a[r][c] = 0;
    }
    prev_pivot = piv;
    ++rank;
  }
  return rank;
}

}  // namespace kinetic
