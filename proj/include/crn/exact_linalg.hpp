#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "crn/error.hpp"

// Exact rational elimination over small integer matrices. Structural
// quantities (ranks, kernels, deficiency) must be exact, so no floating
// point enters here. Entries live in __int128 with overflow checks;
// reaction networks keep everything tiny.

namespace crn {

namespace exact {

using Int = __int128;

inline Int checked_mul(Int a, Int b) {
  if (a == 0 || b == 0) return 0;
  Int r = a * b;
  if (a != 0 && r / a != b)
    throw Error("overflow", "exact arithmetic overflow");
  return r;
}

inline Int gcd128(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct Rational {
  Int num = 0;
  Int den = 1;

  Rational() = default;
  Rational(Int n) : num(n), den(1) {}
  Rational(Int n, Int d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw Error("overflow", "zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    Int g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  bool is_zero() const { return num == 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(checked_mul(a.num, b.den) + checked_mul(b.num, a.den),
                    checked_mul(a.den, b.den));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(checked_mul(a.num, b.den) - checked_mul(b.num, a.den),
                    checked_mul(a.den, b.den));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(checked_mul(a.num, b.num), checked_mul(a.den, b.den));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw Error("overflow", "division by zero");
    return Rational(checked_mul(a.num, b.den), checked_mul(a.den, b.num));
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
};

using Matrix = std::vector<std::vector<Rational>>;

// In-place reduced row echelon form; returns pivot column per pivot row.
inline std::vector<std::size_t> rref(Matrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && m[sel][c].is_zero()) ++sel;
    if (sel == rows) continue;
    std::swap(m[sel], m[r]);
    Rational inv = Rational(1) / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] = m[r][j] * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j)
        m[i][j] = m[i][j] - f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline Matrix from_int(const std::vector<std::vector<std::int64_t>>& a) {
  Matrix m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    m[i].resize(a[i].size());
    for (std::size_t j = 0; j < a[i].size(); ++j) m[i][j] = Rational(a[i][j]);
  }
  return m;
}

}  // namespace exact

// Rank over the rationals of an integer matrix.
inline std::size_t rational_rank(const std::vector<std::vector<std::int64_t>>& a) {
  if (a.empty()) return 0;
  exact::Matrix m = exact::from_int(a);
  return exact::rref(m).size();
}

// Integer basis of ker A (right kernel): linearly independent integer
// vectors spanning the rational kernel, computed by exact elimination and
// denominator clearing. Each vector is primitive with positive leading
// entry.
inline std::vector<std::vector<std::int64_t>> integer_kernel_basis(
    const std::vector<std::vector<std::int64_t>>& a) {
  if (a.empty()) return {};
  const std::size_t cols = a[0].size();
  exact::Matrix m = exact::from_int(a);
  std::vector<std::size_t> pivots = exact::rref(m);

  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<std::vector<std::int64_t>> basis;
  for (std::size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    // Free column fc = 1, other free columns = 0.
    std::vector<exact::Rational> v(cols);
    v[fc] = exact::Rational(1);
    for (std::size_t pr = 0; pr < pivots.size(); ++pr)
      v[pivots[pr]] = exact::Rational(0) - m[pr][fc];
    // Clear denominators, divide by gcd, sign-normalize.
    exact::Int lcm = 1;
    for (const auto& x : v) {
      exact::Int g = exact::gcd128(lcm, x.den);
      lcm = exact::checked_mul(lcm / g, x.den);
    }
    std::vector<exact::Int> w(cols);
    exact::Int g = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      w[j] = exact::checked_mul(v[j].num, lcm / v[j].den);
      g = exact::gcd128(g, w[j]);
    }
    if (g > 1)
      for (auto& x : w) x /= g;
    for (std::size_t j = 0; j < cols; ++j) {
      if (w[j] == 0) continue;
      if (w[j] < 0)
        for (auto& x : w) x = -x;
      break;
    }
    std::vector<std::int64_t> out(cols);
    for (std::size_t j = 0; j < cols; ++j) {
      if (w[j] > std::numeric_limits<std::int64_t>::max() ||
          w[j] < std::numeric_limits<std::int64_t>::min())
        throw Error("overflow", "kernel basis entry exceeds 64-bit range");
      out[j] = static_cast<std::int64_t>(w[j]);
    }
    basis.push_back(std::move(out));
  }
  return basis;
}

}  // namespace crn
