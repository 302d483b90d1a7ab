#pragma once

// Integer-lattice geometry: points of Z^d, integer points on spheres,
// conservative collision quadruples and exact rank computations.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kinetic {

using Int = std::int64_t;

/// A point of Z^d. The physical velocity is h * coords for a mesh step h.
struct LatticePoint {
  std::vector<Int> coords;

  LatticePoint() = default;
  explicit LatticePoint(std::vector<Int> c) : coords(std::move(c)) {}
  LatticePoint(std::initializer_list<Int> c) : coords(c) {}

  static LatticePoint zero(int d) { return LatticePoint(std::vector<Int>(d, 0)); }
  static LatticePoint unit(int d, int axis);

  int dim() const { return static_cast<int>(coords.size()); }
  Int operator[](int a) const { return coords[a]; }
  Int& operator[](int a) { return coords[a]; }

  Int norm2() const;
  Int dot(const LatticePoint& o) const;
  bool is_even() const;

  LatticePoint operator+(const LatticePoint& o) const;
  LatticePoint operator-(const LatticePoint& o) const;
  LatticePoint operator-() const;
  LatticePoint operator*(Int s) const;

  auto operator<=>(const LatticePoint&) const = default;
  bool operator==(const LatticePoint&) const = default;
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const noexcept;
};

/// All x in Z^d with |x|^2 = m, in lexicographic order.
struct SphereShell {
  Int m = 0;
  int d = 0;
  std::vector<LatticePoint> points;

  std::size_t count() const { return points.size(); }
};

inline constexpr int kMinDimension = 2;
inline constexpr int kMaxDimension = 4;

/// Floor of the square root of a nonnegative integer, exact.
Int isqrt(Int m);

/// Enumerates V_d(m). Throws std::invalid_argument for d outside [2,4] or m < 0.
SphereShell enumerate_sphere_points(Int m, int d);

/// r_d(m) without materializing the shell.
Int count_sphere_points(Int m, int d);

/// m = 4^a (8k+7), i.e. the squared radii with no representation as a sum
/// of three squares.
bool is_excluded_three_square(Int m);

/// A reaction {(i,j),(k,l)} in canonical order: i<j, k<l, (i,j) < (k,l).
/// Indices are 0-based.
struct Quadruple {
  std::size_t i = 0, j = 0, k = 0, l = 0;

  auto operator<=>(const Quadruple&) const = default;
  bool operator==(const Quadruple&) const = default;
};

/// Brings a quadruple with arbitrary pair orientation into canonical order.
Quadruple canonical(std::size_t i, std::size_t j, std::size_t k, std::size_t l);

/// v_i + v_j == v_k + v_l and |v_i|^2 + |v_j|^2 == |v_k|^2 + |v_l|^2.
bool is_conservative(const LatticePoint& vi, const LatticePoint& vj,
                     const LatticePoint& vk, const LatticePoint& vl);

/// Every conservative quadruple with {i,j} != {k,l}, each reported once,
/// sorted. Points must be pairwise distinct. Uses a hash on pair moments.
std::vector<Quadruple> find_collision_quadruples(std::span<const LatticePoint> points);

/// Rank over Q by fraction-free (Bareiss) elimination on arbitrary-precision
/// integers. All rows must have equal length.
std::size_t exact_integer_rank(const std::vector<std::vector<Int>>& rows);

}  // namespace kinetic
