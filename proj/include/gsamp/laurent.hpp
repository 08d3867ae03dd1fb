#pragma once

// Laurent polynomials sum_k c_k z^k over an arbitrary coefficient ring, with
// exact rational arithmetic for Bezout identities, central discrete
// B-splines and their polyphase components.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace gsamp::laurent {

using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

template <typename T>
inline bool is_zero(const T& c) {
  return c == T(0);
}

template <typename T>
inline Complex to_complex(const T& c) {
  if constexpr (std::is_same_v<T, Rational>) {
    return Complex(c.template convert_to<double>(), 0.0);
  } else {
    return Complex(c);
  }
}

template <typename T>
class LaurentPoly {
 public:
  LaurentPoly() = default;

  LaurentPoly(int min_deg, std::vector<T> coeffs) : min_deg_(min_deg), coeffs_(std::move(coeffs)) {
    normalize();
  }

  static LaurentPoly constant(T c) { return LaurentPoly(0, {std::move(c)}); }
  static LaurentPoly monomial(T c, int k) { return LaurentPoly(k, {std::move(c)}); }

  bool is_zero() const { return coeffs_.empty(); }
  /// Lowest power with a nonzero coefficient (0 for the zero polynomial).
  int min_deg() const { return min_deg_; }
  int max_deg() const { return min_deg_ + static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<T>& coeffs() const { return coeffs_; }

  T operator[](int k) const {
    if (is_zero() || k < min_deg_ || k > max_deg()) return T(0);
    return coeffs_[k - min_deg_];
  }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const int lo = std::min(a.min_deg_, b.min_deg_);
    const int hi = std::max(a.max_deg(), b.max_deg());
    std::vector<T> c(static_cast<std::size_t>(hi - lo + 1), T(0));
    for (int k = lo; k <= hi; ++k) c[k - lo] = a[k] + b[k];
    return LaurentPoly(lo, std::move(c));
  }

  LaurentPoly operator-() const {
    std::vector<T> c = coeffs_;
    for (auto& v : c) v = -v;
    return LaurentPoly(min_deg_, std::move(c));
  }

  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> c(a.coeffs_.size() + b.coeffs_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[i + k] += a.coeffs_[i] * b.coeffs_[k];
    }
    return LaurentPoly(a.min_deg_ + b.min_deg_, std::move(c));
  }

  friend LaurentPoly operator*(const T& s, const LaurentPoly& p) {
    return LaurentPoly::constant(s) * p;
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.min_deg_ == b.min_deg_ && a.coeffs_ == b.coeffs_;
  }

  /// Multiplication by the unit z^k.
  LaurentPoly shifted(int k) const {
    return is_zero() ? LaurentPoly() : LaurentPoly(min_deg_ + k, coeffs_);
  }

  /// P(1/z).
  LaurentPoly reflected() const {
    if (is_zero()) return {};
    std::vector<T> c(coeffs_.rbegin(), coeffs_.rend());
    return LaurentPoly(-max_deg(), std::move(c));
  }

  Complex eval(Complex z) const {
    Complex acc(0.0, 0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + to_complex(*it);
    return acc * std::pow(z, min_deg_);
  }

 private:
  void normalize() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && gsamp::laurent::is_zero(coeffs_[lead])) ++lead;
    if (lead == coeffs_.size()) {
      coeffs_.clear();
      min_deg_ = 0;
      return;
    }
    std::size_t tail = coeffs_.size();
    while (gsamp::laurent::is_zero(coeffs_[tail - 1])) --tail;
    coeffs_ = std::vector<T>(coeffs_.begin() + static_cast<std::ptrdiff_t>(lead),
                             coeffs_.begin() + static_cast<std::ptrdiff_t>(tail));
    min_deg_ += static_cast<int>(lead);
  }

  int min_deg_ = 0;
  std::vector<T> coeffs_;
};

using RationalPoly = LaurentPoly<Rational>;
using ComplexPoly = LaurentPoly<Complex>;

/// P(e^{-2 pi i w}).
template <typename T>
Complex eval_torus(const LaurentPoly<T>& p, double w) {
  return p.eval(std::polar(1.0, -2.0 * std::numbers::pi * w));
}

inline std::string format_rational(const Rational& q) {
  return q.str();
}

/// Renders "4z^-1 + 19 + 4z" or "-(38/243)z - (5/486)z^2": ascending powers,
/// fractional coefficients in parentheses, unit coefficients omitted.
inline std::string to_string(const RationalPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = p.min_deg(); k <= p.max_deg(); ++k) {
    Rational c = p[k];
    if (c == 0) continue;
    const bool negative = c < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    const bool integral = denominator(c) == 1;
    if (k == 0) {
      os << (integral ? c.str() : "(" + c.str() + ")");
    } else {
      if (c != 1) os << (integral ? c.str() : "(" + c.str() + ")");
      os << 'z';
      if (k != 1) os << '^' << k;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Polynomial division over Q on plain (non-negative power) polynomials.

namespace detail {

struct DivMod {
  RationalPoly quotient;
  RationalPoly remainder;
};

/// Both operands must have min_deg >= 0 semantics (they are treated as
/// ordinary polynomials in z).
inline DivMod divmod(const RationalPoly& a, const RationalPoly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  RationalPoly q;
  RationalPoly rem = a;
  const int db = b.max_deg();
  const Rational lead = b[db];
  while (!rem.is_zero() && rem.max_deg() >= db) {
    const int shift = rem.max_deg() - db;
    RationalPoly term = RationalPoly::monomial(rem[rem.max_deg()] / lead, shift);
    q = q + term;
    rem = rem - term * b;
  }
  return {q, rem};
}

/// Multiply by z^{-min_deg} so the lowest power is z^0.
inline RationalPoly to_plain(const RationalPoly& p) { return p.shifted(-p.min_deg()); }

}  // namespace detail

struct BezoutResult {
  bool coprime = false;
  RationalPoly h1;
  RationalPoly h2;
  /// Monic gcd of the plain polynomials when coprimality fails.
  RationalPoly common_factor;
};

/// Laurent polynomials h1, h2 with g1 h1 + g2 h2 = 1.
///
/// Extended Euclid runs on the plain polynomials p_i = z^{-min_deg(g_i)} g_i.
/// The pair is reduced to the minimal-degree solution (deg u < deg p2) and
/// shifted back, h_i = z^{-min_deg(g_i)} u_i, so that both results only
/// contain non-negative powers when the inputs have symmetric supports.
inline BezoutResult bezout(const RationalPoly& g1, const RationalPoly& g2) {
  using detail::divmod;
  if (g1.is_zero() && g2.is_zero()) {
    return {false, {}, {}, {}};
  }
  const RationalPoly p1 = detail::to_plain(g1);
  const RationalPoly p2 = detail::to_plain(g2);

  // Invariant: s_i p1 + t_i p2 = r_i.
  RationalPoly r0 = p1, r1 = p2;
  RationalPoly s0 = RationalPoly::constant(1), s1;
  RationalPoly t0, t1 = RationalPoly::constant(1);
  while (!r1.is_zero()) {
    auto [q, rem] = divmod(r0, r1);
    RationalPoly s2 = s0 - q * s1;
    RationalPoly t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  BezoutResult out;
  if (r0.max_deg() > 0 || r0.min_deg() != 0) {
    const Rational lead = r0[r0.max_deg()];
    out.common_factor = RationalPoly::constant(Rational(1) / lead) * r0;
    return out;
  }
  const Rational inv = Rational(1) / r0[0];
  RationalPoly u = RationalPoly::constant(inv) * s0;
  RationalPoly v = RationalPoly::constant(inv) * t0;
  if (p1.max_deg() == 0) {
    u = RationalPoly::constant(Rational(1) / p1[0]);
    v = RationalPoly();
  } else if (!p2.is_zero()) {
    u = divmod(u, p2).remainder;
    RationalPoly numer = RationalPoly::constant(1) - p1 * u;
    auto [quot, rem] = divmod(numer, p2);
    if (!rem.is_zero()) throw std::logic_error("bezout: inexact cofactor");
    v = quot;
  }
  out.coprime = true;
  out.h1 = u.shifted(-g1.min_deg());
  out.h2 = g2.is_zero() ? RationalPoly() : v.shifted(-g2.min_deg());
  return out;
}

// ---------------------------------------------------------------------------
// Discrete B-splines.

struct DiscreteBSpline {
  int K = 3;
  int p = 1;
  /// Index of values[0]; equals -p (K - 1) / 2.
  int offset = 0;
  std::vector<std::int64_t> values;

  std::int64_t at(long long n) const {
    const long long i = n - offset;
    if (i < 0 || i >= static_cast<long long>(values.size())) return 0;
    return values[static_cast<std::size_t>(i)];
  }
  int half_width() const { return -offset; }
};

/// M_p = M_1 * ... * M_1 (p times), M_1 the indicator of |n| <= (K - 1) / 2.
inline DiscreteBSpline bspline(int K, int p) {
  if (K < 1 || K % 2 == 0) throw std::invalid_argument("bspline: K must be odd and positive");
  if (p < 1) throw std::invalid_argument("bspline: order p must be positive");
  if (static_cast<double>(p) * std::log2(static_cast<double>(K)) > 62.0) {
    throw std::overflow_error("bspline: values exceed 64-bit range");
  }
  const int half = (K - 1) / 2;
  DiscreteBSpline m{K, p, -half, std::vector<std::int64_t>(static_cast<std::size_t>(K), 1)};
  for (int step = 1; step < p; ++step) {
    std::vector<std::int64_t> next(m.values.size() + static_cast<std::size_t>(K) - 1, 0);
    for (std::size_t i = 0; i < m.values.size(); ++i) {
      for (int k = 0; k < K; ++k) next[i + static_cast<std::size_t>(k)] += m.values[i];
    }
    m.values = std::move(next);
    m.offset -= half;
  }
  return m;
}

/// G_i(z) = sum_n M(n K + i) z^n.
inline RationalPoly polyphase_sample(const DiscreteBSpline& m, int K, int i) {
  if (K <= 0 || i < 0 || i >= K) throw std::invalid_argument("polyphase_sample: need 0 <= i < K");
  const int lo = static_cast<int>(std::floor(static_cast<double>(m.offset - i) / K));
  const int hi = static_cast<int>(std::ceil(static_cast<double>(-m.offset - i) / K));
  std::vector<Rational> c;
  for (int n = lo; n <= hi; ++n) c.emplace_back(m.at(static_cast<long long>(n) * K + i));
  return RationalPoly(lo, std::move(c));
}

// ---------------------------------------------------------------------------
// Positivity of Hermitian-symmetric Laurent polynomials on the torus.

struct PositivityCertificate {
  double min_value = 0.0;
  double argmin = 0.0;
  bool strictly_positive = false;
};

template <typename T>
bool is_hermitian_symmetric(const LaurentPoly<T>& p) {
  if (p.is_zero()) return true;
  if (p.min_deg() != -p.max_deg()) return false;
  for (int k = 0; k <= p.max_deg(); ++k) {
    if (to_complex(p[-k]) != std::conj(to_complex(p[k]))) return false;
  }
  return true;
}

/// Minimum of the real values P(e^{-2 pi i w}) over w = q / grid.
template <typename T>
PositivityCertificate positivity_certificate(const LaurentPoly<T>& p, int grid) {
  if (grid <= 0) throw std::invalid_argument("positivity_certificate: grid must be positive");
  if (!is_hermitian_symmetric(p)) {
    throw std::invalid_argument("positivity_certificate: polynomial is not Hermitian-symmetric");
  }
  PositivityCertificate cert;
  cert.min_value = std::numeric_limits<double>::infinity();
  for (int q = 0; q < grid; ++q) {
    const double w = static_cast<double>(q) / grid;
    const double v = eval_torus(p, w).real();
    if (v < cert.min_value) {
      cert.min_value = v;
      cert.argmin = w;
    }
  }
  cert.strictly_positive = cert.min_value > 0.0;
  return cert;
}

}  // namespace gsamp::laurent
