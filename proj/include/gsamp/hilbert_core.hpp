#pragma once

// Finite-dimensional model of the ambient Hilbert space: complex vectors,
// invertible operators with cached inverses, integer powers, inner products,
// Gram matrices and cross-correlation sequences <T^k a, b>.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsamp {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kRankTol = 1e-10;
inline constexpr int kDefaultMaxPower = 4096;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected dimension " +
                         std::to_string(want) + ", got " + std::to_string(got));
  }
}

/// Standard inner product, linear in x and conjugate-linear in y.
inline Complex inner(const CVector& x, const CVector& y) {
  require_dim(y.size(), x.size(), "inner");
  return y.dot(x);  // Eigen conjugates the left operand
}

inline int mod(long long k, long long n) {
  long long m = k % n;
  return static_cast<int>(m < 0 ? m + n : m);
}

/// Singular values in descending order.
inline RVector singular_values(const CMatrix& m) {
  if (m.size() == 0) return RVector();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues();
}

inline int numerical_rank(const RVector& sv, double rank_tol = kRankTol) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rank_tol * sv(0)) ++rank;
  }
  return rank;
}

/// Moore-Penrose pseudo-inverse through the SVD; singular values below
/// rank_tol * sigma_max are treated as zero.
inline CMatrix pseudo_inverse(const CMatrix& m, double rank_tol = kRankTol) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  RVector inv = RVector::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rank_tol * sv(0)) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Bounded invertible operator on C^dim. The inverse is computed once so that
/// negative powers cost the same as positive ones.
class LinearOperator {
 public:
  explicit LinearOperator(CMatrix matrix, int max_power = kDefaultMaxPower,
                          double rank_tol = kRankTol)
      : matrix_(std::move(matrix)), max_power_(max_power) {
    if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
      throw DimensionError("LinearOperator: matrix must be square and nonempty");
    }
    RVector sv = singular_values(matrix_);
    if (!(sv(sv.size() - 1) > rank_tol * sv(0))) {
      throw RankError("LinearOperator: matrix is numerically singular");
    }
    inverse_ = matrix_.fullPivLu().inverse();
    CMatrix residual = inverse_ * matrix_ - CMatrix::Identity(dim(), dim());
    if (max_abs(residual) > 1e-10) {
      throw RankError("LinearOperator: inverse residual exceeds 1e-10");
    }
  }

  static LinearOperator identity(int dim) {
    return LinearOperator(CMatrix::Identity(dim, dim));
  }

  int dim() const { return static_cast<int>(matrix_.rows()); }
  int max_power() const { return max_power_; }
  const CMatrix& matrix() const { return matrix_; }
  const CMatrix& inverse() const { return inverse_; }

  LinearOperator adjoint() const {
    return LinearOperator(matrix_.adjoint(), inverse_.adjoint(), max_power_);
  }

  LinearOperator inverse_operator() const {
    return LinearOperator(inverse_, matrix_, max_power_);
  }

  /// Dense matrix of T^k.
  CMatrix power_matrix(int k) const {
    check_power(k);
    CMatrix out = CMatrix::Identity(dim(), dim());
    const CMatrix& step = k >= 0 ? matrix_ : inverse_;
    for (int i = 0; i < std::abs(k); ++i) out = step * out;
    return out;
  }

  void check_power(long long k) const {
    if (std::llabs(k) > max_power_) {
      throw std::out_of_range("power " + std::to_string(k) +
                              " exceeds configured bound " +
                              std::to_string(max_power_));
    }
  }

 private:
  LinearOperator(CMatrix m, CMatrix inv, int max_power)
      : matrix_(std::move(m)), inverse_(std::move(inv)), max_power_(max_power) {}

  CMatrix matrix_;
  CMatrix inverse_;
  int max_power_;
};

/// T^k v by repeated multiplication with T (k > 0) or its cached inverse.
inline CVector apply_power(const LinearOperator& op, int k, const CVector& v) {
  require_dim(v.size(), op.dim(), "apply_power");
  op.check_power(k);
  CVector out = v;
  const CMatrix& step = k >= 0 ? op.matrix() : op.inverse();
  for (int i = 0; i < std::abs(k); ++i) out = step * out;
  return out;
}

/// values(k) = <T^k a, b> over a window [first, first + size). When a period
/// is declared, lookups outside the window are reduced modulo the period.
class CrossCorrelation {
 public:
  CrossCorrelation(int first, std::vector<Complex> values,
                   std::optional<int> period = std::nullopt)
      : first_(first), values_(std::move(values)), period_(period) {
    if (period_ && *period_ <= 0) {
      throw std::invalid_argument("CrossCorrelation: period must be positive");
    }
  }

  int first() const { return first_; }
  int last() const { return first_ + static_cast<int>(values_.size()) - 1; }
  const std::vector<Complex>& values() const { return values_; }
  std::optional<int> period() const { return period_; }

  Complex at(long long k) const {
    if (k >= first_ && k <= last()) return values_[k - first_];
    if (period_) {
      long long base = first_ + mod(k - first_, *period_);
      if (base <= last()) return values_[base - first_];
    }
    throw std::out_of_range("CrossCorrelation: index " + std::to_string(k) +
                            " outside represented window");
  }

 private:
  int first_;
  std::vector<Complex> values_;
  std::optional<int> period_;
};

inline CrossCorrelation cross_correlation(const LinearOperator& op,
                                          const CVector& a, const CVector& b,
                                          int first, int last,
                                          std::optional<int> period = std::nullopt) {
  require_dim(a.size(), op.dim(), "cross_correlation(a)");
  require_dim(b.size(), op.dim(), "cross_correlation(b)");
  if (last < first) throw std::invalid_argument("cross_correlation: empty window");
  std::vector<Complex> values;
  values.reserve(static_cast<std::size_t>(last - first + 1));
  CVector orbit = apply_power(op, first, a);
  for (int k = first; k <= last; ++k) {
    values.push_back(inner(orbit, b));
    if (k < last) orbit = op.matrix() * orbit;
  }
  return CrossCorrelation(first, std::move(values), period);
}

/// Entry (k, l) = <v_l, v_k>.
inline CMatrix gram_matrix(const std::vector<CVector>& vectors) {
  if (vectors.empty()) throw std::invalid_argument("gram_matrix: empty list");
  const auto dim = vectors.front().size();
  CMatrix stacked(dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    require_dim(vectors[i].size(), dim, "gram_matrix");
    stacked.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  return stacked.adjoint() * stacked;
}

}  // namespace gsamp
