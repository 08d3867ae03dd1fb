#pragma once

// Shift-invariant (Z-infinite) sampling in a desk model where every
// cross-correlation sequence is finitely supported, so the spectra g_j are
// trigonometric polynomials. Covers the s x rL matrix G(w), frame constants,
// pseudo-inverse duals, reconstruction coefficients, and the equivalent
// analysis/synthesis filter bank with its polyphase certification.

#include "gsamp/hilbert_core.hpp"
#include "gsamp/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

namespace gsamp::spectral {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Sequence that is zero outside [offset, offset + values.size()).
struct FiniteSequence {
  int offset = 0;
  std::vector<Complex> values;

  FiniteSequence() : values{Complex(0.0, 0.0)} {}
  FiniteSequence(int off, std::vector<Complex> v) : offset(off), values(std::move(v)) {
    if (values.empty()) throw std::invalid_argument("FiniteSequence: empty window");
  }

  static FiniteSequence delta(int at = 0) { return {at, {Complex(1.0, 0.0)}}; }

  int last() const { return offset + static_cast<int>(values.size()) - 1; }
  Complex at(long long n) const {
    if (n < offset || n > last()) return {0.0, 0.0};
    return values[static_cast<std::size_t>(n - offset)];
  }
  double norm() const {
    double acc = 0.0;
    for (const auto& v : values) acc += std::norm(v);
    return std::sqrt(acc);
  }
};

inline FiniteSequence convolve(const FiniteSequence& a, const FiniteSequence& b) {
  std::vector<Complex> out(a.values.size() + b.values.size() - 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    for (std::size_t k = 0; k < b.values.size(); ++k) out[i + k] += a.values[i] * b.values[k];
  }
  return {a.offset + b.offset, std::move(out)};
}

/// sum_k c(k) e^{2 pi i k w}.
inline Complex spectrum_from_sequence(const FiniteSequence& c, double w) {
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    acc += c.values[i] * std::polar(1.0, kTwoPi * (c.offset + static_cast<double>(i)) * w);
  }
  return acc;
}

/// Cross-correlations <(T^*)^k b, a> for the shift T x = x(. - K) on l^2(Z),
/// with finitely supported a and b.
inline FiniteSequence shift_model_correlation(const FiniteSequence& a, const FiniteSequence& b,
                                              int K) {
  if (K <= 0) throw std::invalid_argument("shift_model_correlation: K must be positive");
  // (T^*)^k b = b(. + kK); nonzero overlap needs a.offset <= n <= a.last and
  // b.offset <= n + kK <= b.last.
  const int lo = static_cast<int>(std::floor(static_cast<double>(b.offset - a.last()) / K));
  const int hi = static_cast<int>(std::ceil(static_cast<double>(b.last() - a.offset) / K));
  std::vector<Complex> out;
  for (int k = lo; k <= hi; ++k) {
    Complex acc(0.0, 0.0);
    for (int n = a.offset; n <= a.last(); ++n) {
      acc += b.at(static_cast<long long>(n) + static_cast<long long>(k) * K) * std::conj(a.at(n));
    }
    out.push_back(acc);
  }
  return {lo, std::move(out)};
}

/// Analysis impulse response h(n) = <a, (T^*)^{-n} b> = conj(c(-n)) from the
/// spectral sequence c(k) = <(T^*)^k b, a>.
inline FiniteSequence analysis_filter(const FiniteSequence& c) {
  std::vector<Complex> v(c.values.rbegin(), c.values.rend());
  for (auto& x : v) x = std::conj(x);
  return {-c.last(), std::move(v)};
}

// ---------------------------------------------------------------------------
// G(w) field.

/// spectra[j][l] holds the sequence of g_j^l.
using SpectraTable = std::vector<std::vector<FiniteSequence>>;

class SpectralField {
 public:
  SpectralField(SpectraTable spectra, int r, int grid_size)
      : spectra_(std::move(spectra)), r_(r), Q_(grid_size) {
    if (spectra_.empty() || spectra_.front().empty()) {
      throw std::invalid_argument("SpectralField: need at least one sampler and generator");
    }
    L_ = static_cast<int>(spectra_.front().size());
    for (const auto& row : spectra_) {
      if (static_cast<int>(row.size()) != L_) {
        throw DimensionError("SpectralField: every sampler needs L spectra");
      }
    }
    if (r_ <= 0) throw std::invalid_argument("SpectralField: r must be positive");
    if (Q_ % r_ != 0) {
      throw std::invalid_argument("SpectralField: grid size Q must be a multiple of r");
    }
    if (Q_ < 64 * r_) throw std::invalid_argument("SpectralField: grid size Q must be >= 64 r");
    values_.reserve(static_cast<std::size_t>(Q_ / r_));
    for (int q = 0; q < Q_ / r_; ++q) values_.push_back(matrix_at(grid_point(q)));
  }

  int r() const { return r_; }
  int L() const { return L_; }
  int s() const { return static_cast<int>(spectra_.size()); }
  int grid_size() const { return Q_; }
  int points() const { return Q_ / r_; }
  double grid_point(int q) const { return static_cast<double>(q) / Q_; }
  const SpectraTable& spectra() const { return spectra_; }
  /// G(w_q) for w_q = q / Q in [0, 1/r).
  const std::vector<CMatrix>& values() const { return values_; }

  /// Column k L + l holds g_j^l(w + k / r).
  CMatrix matrix_at(double w) const {
    CMatrix G(s(), r_ * L_);
    for (int j = 0; j < s(); ++j) {
      for (int k = 0; k < r_; ++k) {
        for (int l = 0; l < L_; ++l) {
          G(j, k * L_ + l) =
              spectrum_from_sequence(spectra_[j][l], w + static_cast<double>(k) / r_);
        }
      }
    }
    return G;
  }

 private:
  SpectraTable spectra_;
  int r_;
  int Q_;
  int L_ = 1;
  std::vector<CMatrix> values_;
};

inline SpectralField build_spectral_field(SpectraTable spectra, int r, int grid_size) {
  return SpectralField(std::move(spectra), r, grid_size);
}

/// Single-generator convenience: spectra[j] is g_j.
inline SpectralField build_spectral_field(const std::vector<FiniteSequence>& spectra, int r,
                                          int grid_size) {
  SpectraTable table;
  for (const auto& g : spectra) table.push_back({g});
  return SpectralField(std::move(table), r, grid_size);
}

struct FrameConstants {
  double alpha = 0.0;
  double beta = 0.0;
  double min_det = 0.0;
  double argmin_alpha = 0.0;
  double argmax_beta = 0.0;
  /// Optimal frame bounds alpha_G / r and beta_G / r.
  double lower_bound = 0.0;
  double upper_bound = 0.0;
};

/// Grid min of lambda_min[G^*G] and max of lambda_max[G^*G]; these estimate
/// the essential inf/sup from the sampled points only.
inline FrameConstants frame_constants(const SpectralField& field) {
  FrameConstants fc;
  fc.alpha = std::numeric_limits<double>::infinity();
  fc.beta = 0.0;
  fc.min_det = std::numeric_limits<double>::infinity();
  for (int q = 0; q < field.points(); ++q) {
    const CMatrix& G = field.values()[static_cast<std::size_t>(q)];
    const CMatrix gram = G.adjoint() * G;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
    const RVector& ev = eig.eigenvalues();
    const double lo = std::max(0.0, ev(0));
    const double hi = ev(ev.size() - 1);
    if (lo < fc.alpha) {
      fc.alpha = lo;
      fc.argmin_alpha = field.grid_point(q);
    }
    if (hi > fc.beta) {
      fc.beta = hi;
      fc.argmax_beta = field.grid_point(q);
    }
    double det = 1.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) det *= std::max(0.0, ev(i));
    fc.min_det = std::min(fc.min_det, det);
  }
  fc.lower_bound = fc.alpha / field.r();
  fc.upper_bound = fc.beta / field.r();
  return fc;
}

/// Free parameter of the dual family: w -> rL x s matrix.
using UField = std::function<CMatrix(double)>;

struct DualField {
  int r = 1;
  int L = 1;
  int s = 1;
  int grid_size = 0;
  /// H(w_q) = G^+ + U (I - G G^+) on the [0, 1/r) grid; rows 0..L-1 are the duals.
  std::vector<CMatrix> h_values;
  /// Dual rows (L x s) on the full grid q / Q, q = 0..Q-1, used for the
  /// Fourier coefficients of r conj(h_j).
  std::vector<CMatrix> rows_full;
  /// max |rows G - (I_L, 0)| over the full grid.
  double residual = 0.0;
};

inline CMatrix dual_target(int L, int r) {
  CMatrix target = CMatrix::Zero(L, r * L);
  target.leftCols(L) = CMatrix::Identity(L, L);
  return target;
}

inline CMatrix dual_matrix(const CMatrix& G, const std::optional<CMatrix>& U) {
  CMatrix pinv = pseudo_inverse(G);
  if (!U) return pinv;
  if (U->rows() != G.cols() || U->cols() != G.rows()) {
    throw DimensionError("dual_field: U must be rL x s");
  }
  return pinv + *U * (CMatrix::Identity(G.rows(), G.rows()) - G * pinv);
}

inline DualField dual_field(const SpectralField& field, const UField& U = nullptr,
                            double alpha_threshold = 1e-8) {
  const FrameConstants fc = frame_constants(field);
  if (!(fc.alpha > alpha_threshold)) {
    throw RankError("dual_field: alpha_G = " + std::to_string(fc.alpha) +
                    " is below the frame threshold");
  }
  DualField dual;
  dual.r = field.r();
  dual.L = field.L();
  dual.s = field.s();
  dual.grid_size = field.grid_size();
  const CMatrix target = dual_target(dual.L, dual.r);
  for (int q = 0; q < field.points(); ++q) {
    const double w = field.grid_point(q);
    std::optional<CMatrix> u;
    if (U) u = U(w);
    dual.h_values.push_back(dual_matrix(field.values()[static_cast<std::size_t>(q)], u));
  }
  for (int q = 0; q < field.grid_size(); ++q) {
    const double w = field.grid_point(q);
    const CMatrix G = field.matrix_at(w);
    std::optional<CMatrix> u;
    if (U) u = U(w);
    CMatrix rows = dual_matrix(G, u).topRows(dual.L);
    dual.residual = std::max(dual.residual, max_abs(rows * G - target));
    dual.rows_full.push_back(std::move(rows));
  }
  return dual;
}

/// Dual field from closed-form dual rows (for example Bezout duals), with the
/// residual measured against the field.
inline DualField dual_from_rows(const SpectralField& field,
                                const std::function<CMatrix(double)>& rows_at) {
  DualField dual;
  dual.r = field.r();
  dual.L = field.L();
  dual.s = field.s();
  dual.grid_size = field.grid_size();
  const CMatrix target = dual_target(dual.L, dual.r);
  for (int q = 0; q < field.grid_size(); ++q) {
    const double w = field.grid_point(q);
    CMatrix rows = rows_at(w);
    if (rows.rows() != dual.L || rows.cols() != dual.s) {
      throw DimensionError("dual_from_rows: rows must be L x s");
    }
    dual.residual = std::max(dual.residual, max_abs(rows * field.matrix_at(w) - target));
    if (q < field.points()) {
      CMatrix h = CMatrix::Zero(dual.r * dual.L, dual.s);
      h.topRows(dual.L) = rows;
      dual.h_values.push_back(std::move(h));
    }
    dual.rows_full.push_back(std::move(rows));
  }
  return dual;
}

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CoefficientSet {
  /// coefficients[j][l]: orbit coefficients of c_j on generator l.
  std::vector<std::vector<FiniteSequence>> coefficients;
  /// Largest relative tail energy among the truncated sequences.
  double tail_energy = 0.0;
};

/// Fourier coefficients of r conj(h_j^l) from the grid samples, truncated to
/// |n| <= half_length. Refuses when the discarded tail carries more than
/// tail_tol of the energy.
inline CoefficientSet reconstruction_coefficients(const DualField& dual, int half_length,
                                                  double tail_tol = 1e-6) {
  const int Q = dual.grid_size;
  if (half_length < 0 || 2 * half_length + 1 > Q) {
    throw std::invalid_argument("reconstruction_coefficients: invalid truncation length");
  }
  CoefficientSet out;
  out.coefficients.assign(static_cast<std::size_t>(dual.s), {});
  for (int j = 0; j < dual.s; ++j) {
    for (int l = 0; l < dual.L; ++l) {
      std::vector<Complex> samples(static_cast<std::size_t>(Q));
      double total = 0.0;
      for (int q = 0; q < Q; ++q) {
        samples[static_cast<std::size_t>(q)] =
            static_cast<double>(dual.r) * std::conj(dual.rows_full[static_cast<std::size_t>(q)](l, j));
        total += std::norm(samples[static_cast<std::size_t>(q)]);
      }
      total /= Q;  // Parseval: sum over all Q coefficients
      std::vector<Complex> coeffs;
      double kept = 0.0;
      for (int n = -half_length; n <= half_length; ++n) {
        Complex acc(0.0, 0.0);
        for (int q = 0; q < Q; ++q) {
          acc += samples[static_cast<std::size_t>(q)] *
                 std::polar(1.0, -kTwoPi * static_cast<double>(mod(static_cast<long long>(n) * q, Q)) / Q);
        }
        acc /= static_cast<double>(Q);
        kept += std::norm(acc);
        coeffs.push_back(acc);
      }
      const double tail = total > 0.0 ? std::max(0.0, total - kept) / total : 0.0;
      out.tail_energy = std::max(out.tail_energy, tail);
      if (tail > tail_tol) {
        throw TruncationError("reconstruction_coefficients: tail energy " + std::to_string(tail) +
                              " exceeds tolerance; increase the truncation length");
      }
      out.coefficients[static_cast<std::size_t>(j)].emplace_back(-half_length, std::move(coeffs));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Filter banks.

struct FilterBank {
  std::vector<FiniteSequence> analysis;
  std::vector<FiniteSequence> synthesis;
  int r = 1;

  int channels() const { return static_cast<int>(analysis.size()); }
  void validate() const {
    if (analysis.empty() || analysis.size() != synthesis.size()) {
      throw DimensionError("FilterBank: analysis and synthesis need the same nonzero length");
    }
    if (r <= 0) throw std::invalid_argument("FilterBank: r must be positive");
  }
};

inline long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

/// y_j(m) = (alpha * h_j)(r m).
inline std::vector<FiniteSequence> analysis(const FilterBank& fb, const FiniteSequence& alpha) {
  fb.validate();
  std::vector<FiniteSequence> out;
  for (const auto& h : fb.analysis) {
    const FiniteSequence full = convolve(alpha, h);
    const long long lo = ceil_div(full.offset, fb.r);
    const long long hi = floor_div(full.last(), fb.r);
    if (hi < lo) {
      out.emplace_back(static_cast<int>(lo), std::vector<Complex>{Complex(0.0, 0.0)});
      continue;
    }
    std::vector<Complex> y;
    for (long long m = lo; m <= hi; ++m) y.push_back(full.at(m * fb.r));
    out.emplace_back(static_cast<int>(lo), std::move(y));
  }
  return out;
}

/// out(n) = sum_j sum_m y_j(m) g_j(n - m r).
inline FiniteSequence synthesis(const FilterBank& fb, const std::vector<FiniteSequence>& y) {
  fb.validate();
  if (y.size() != fb.synthesis.size()) throw DimensionError("synthesis: one input per channel");
  long long lo = std::numeric_limits<long long>::max();
  long long hi = std::numeric_limits<long long>::min();
  for (std::size_t j = 0; j < y.size(); ++j) {
    lo = std::min(lo, static_cast<long long>(y[j].offset) * fb.r + fb.synthesis[j].offset);
    hi = std::max(hi, static_cast<long long>(y[j].last()) * fb.r + fb.synthesis[j].last());
  }
  std::vector<Complex> out(static_cast<std::size_t>(hi - lo + 1), Complex(0.0, 0.0));
  for (std::size_t j = 0; j < y.size(); ++j) {
    const auto& g = fb.synthesis[j];
    for (int m = y[j].offset; m <= y[j].last(); ++m) {
      const Complex ym = y[j].at(m);
      for (int k = g.offset; k <= g.last(); ++k) {
        out[static_cast<std::size_t>(static_cast<long long>(m) * fb.r + k - lo)] += ym * g.at(k);
      }
    }
  }
  return {static_cast<int>(lo), std::move(out)};
}

struct Polyphase {
  /// s x r: H[j][k] = sum_m h_j(r m - k) z^{-m}.
  std::vector<std::vector<laurent::ComplexPoly>> H;
  /// r x s: G[k][j] = sum_m g_j(r m + k) z^{-m}.
  std::vector<std::vector<laurent::ComplexPoly>> G;

  CMatrix eval_H(Complex z) const {
    CMatrix out(static_cast<Eigen::Index>(H.size()), static_cast<Eigen::Index>(H.front().size()));
    for (std::size_t j = 0; j < H.size(); ++j)
      for (std::size_t k = 0; k < H[j].size(); ++k) out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = H[j][k].eval(z);
    return out;
  }
  CMatrix eval_G(Complex z) const {
    CMatrix out(static_cast<Eigen::Index>(G.size()), static_cast<Eigen::Index>(G.front().size()));
    for (std::size_t k = 0; k < G.size(); ++k)
      for (std::size_t j = 0; j < G[k].size(); ++j) out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = G[k][j].eval(z);
    return out;
  }
};

namespace detail {

/// sum_m f(r m + shift) z^{-m}.
inline laurent::ComplexPoly phase(const FiniteSequence& f, int r, int shift) {
  const long long lo = ceil_div(static_cast<long long>(f.offset) - shift, r);
  const long long hi = floor_div(static_cast<long long>(f.last()) - shift, r);
  if (hi < lo) return {};
  // power -m runs from -hi to -lo
  std::vector<Complex> c;
  for (long long m = hi; m >= lo; --m) c.push_back(f.at(r * m + shift));
  return {static_cast<int>(-hi), std::move(c)};
}

}  // namespace detail

inline Polyphase polyphase(const FilterBank& fb) {
  fb.validate();
  Polyphase p;
  const auto s = fb.analysis.size();
  p.H.assign(s, std::vector<laurent::ComplexPoly>(static_cast<std::size_t>(fb.r)));
  p.G.assign(static_cast<std::size_t>(fb.r), std::vector<laurent::ComplexPoly>(s));
  for (std::size_t j = 0; j < s; ++j) {
    for (int k = 0; k < fb.r; ++k) {
      p.H[j][static_cast<std::size_t>(k)] = detail::phase(fb.analysis[j], fb.r, -k);
      p.G[static_cast<std::size_t>(k)][j] = detail::phase(fb.synthesis[j], fb.r, k);
    }
  }
  return p;
}

struct PRReport {
  bool pass = false;
  double torus_residual = 0.0;
  double time_residual = 0.0;
  /// Whether the polyphase verdict and the time-domain round trip agree.
  bool consistent = false;
};

inline FiniteSequence random_sequence(std::mt19937_64& rng, int max_support) {
  std::uniform_int_distribution<int> len_dist(1, max_support);
  std::uniform_int_distribution<int> off_dist(-max_support, max_support);
  std::normal_distribution<double> nd;
  std::vector<Complex> v(static_cast<std::size_t>(len_dist(rng)));
  for (auto& x : v) x = Complex(nd(rng), nd(rng));
  return {off_dist(rng), std::move(v)};
}

/// Relative l2 error of synthesis(analysis(alpha)) against alpha.
inline double round_trip_error(const FilterBank& fb, const FiniteSequence& alpha) {
  const FiniteSequence back = synthesis(fb, analysis(fb, alpha));
  const long long lo = std::min(back.offset, alpha.offset);
  const long long hi = std::max(back.last(), alpha.last());
  double err = 0.0;
  for (long long n = lo; n <= hi; ++n) err += std::norm(back.at(n) - alpha.at(n));
  return std::sqrt(err) / alpha.norm();
}

inline PRReport perfect_reconstruction_check(const FilterBank& fb, int torus_grid,
                                             int trials = 100, int max_support = 64,
                                             std::uint64_t seed = 0x5eed,
                                             double torus_tol = 1e-9) {
  if (torus_grid <= 0) throw std::invalid_argument("perfect_reconstruction_check: grid must be positive");
  const Polyphase p = polyphase(fb);
  PRReport rep;
  const CMatrix I = CMatrix::Identity(fb.r, fb.r);
  for (int q = 0; q < torus_grid; ++q) {
    const Complex z = std::polar(1.0, kTwoPi * q / torus_grid);
    rep.torus_residual = std::max(rep.torus_residual, max_abs(p.eval_G(z) * p.eval_H(z) - I));
  }
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    rep.time_residual = std::max(rep.time_residual, round_trip_error(fb, random_sequence(rng, max_support)));
  }
  rep.pass = rep.torus_residual <= torus_tol;
  rep.consistent = rep.pass ? rep.time_residual <= 1e-8 : rep.time_residual > 1e-8;
  return rep;
}

// ---------------------------------------------------------------------------
// Discrete spline oversampling example (r = 1, s = 2, samplers delta_0 and
// delta_1, T the delay by K).

struct SplineBank {
  laurent::DiscreteBSpline spline;
  laurent::RationalPoly G1;
  laurent::RationalPoly G2;
  laurent::BezoutResult bezout;
  FilterBank bank;
};

inline FiniteSequence to_sequence(const laurent::RationalPoly& p) {
  if (p.is_zero()) return {};
  std::vector<Complex> v;
  for (int k = p.min_deg(); k <= p.max_deg(); ++k) v.push_back(laurent::to_complex(p[k]));
  return {p.min_deg(), std::move(v)};
}

/// Analysis filters h_1(n) = M(nK), h_2(n) = M(nK + 1); synthesis filters are
/// the coefficient sequences of the Bezout pair (g_j(n) = [z^n] H_j).
inline SplineBank spline_bank(int K, int p) {
  SplineBank sb;
  sb.spline = laurent::bspline(K, p);
  sb.G1 = laurent::polyphase_sample(sb.spline, K, 0);
  sb.G2 = laurent::polyphase_sample(sb.spline, K, K > 1 ? 1 : 0);
  sb.bezout = laurent::bezout(sb.G1, sb.G2);
  sb.bank.r = 1;
  sb.bank.analysis = {to_sequence(sb.G1), to_sequence(sb.G2)};
  if (sb.bezout.coprime) {
    sb.bank.synthesis = {to_sequence(sb.bezout.h1), to_sequence(sb.bezout.h2)};
  } else {
    sb.bank.synthesis = {FiniteSequence(), FiniteSequence()};
  }
  return sb;
}

}  // namespace gsamp::spectral
