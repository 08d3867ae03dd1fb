#pragma once

// Regular generalized sampling in finite T-invariant subspaces
// A_a = span{T^k a_l : 0 <= k < N_l}: sample matrix assembly, rank tests,
// structured left inverses whose columns are cyclic shifts of each other,
// reconstruction vectors and the equivalent filter-bank synthesis.

#include "gsamp/hilbert_core.hpp"

#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace gsamp::cyclic {

inline constexpr double kPeriodTol = 1e-8;

class CyclicSubspace {
 public:
  CyclicSubspace(LinearOperator op, std::vector<CVector> generators,
                 std::vector<int> orders, double rank_tol = kRankTol)
      : op_(std::move(op)),
        generators_(std::move(generators)),
        orders_(std::move(orders)) {
    if (generators_.empty() || generators_.size() != orders_.size()) {
      throw std::invalid_argument(
          "CyclicSubspace: need one order per generator and at least one generator");
    }
    lcm_ = 1;
    offsets_.reserve(orders_.size());
    int offset = 0;
    for (std::size_t l = 0; l < orders_.size(); ++l) {
      const int order = orders_[l];
      if (order <= 0) throw std::invalid_argument("CyclicSubspace: orders must be positive");
      require_dim(generators_[l].size(), op_.dim(), "CyclicSubspace generator");
      CVector back = apply_power(op_, order, generators_[l]);
      if ((back - generators_[l]).norm() > kPeriodTol * generators_[l].norm()) {
        throw std::invalid_argument("CyclicSubspace: T^N_l a_l != a_l for generator " +
                                    std::to_string(l));
      }
      lcm_ = std::lcm(lcm_, order);
      offsets_.push_back(offset);
      offset += order;
    }
    total_ = offset;

    orbit_ = CMatrix(op_.dim(), total_);
    for (std::size_t l = 0; l < orders_.size(); ++l) {
      CVector v = generators_[l];
      for (int k = 0; k < orders_[l]; ++k) {
        orbit_.col(offsets_[l] + k) = v;
        v = op_.matrix() * v;
      }
    }
    if (numerical_rank(singular_values(orbit_), rank_tol) != total_) {
      throw RankError("CyclicSubspace: orbit vectors are linearly dependent");
    }
  }

  const LinearOperator& op() const { return op_; }
  const std::vector<CVector>& generators() const { return generators_; }
  const std::vector<int>& orders() const { return orders_; }
  /// First coefficient index of generator l inside the stacked alpha vector.
  int offset(std::size_t l) const { return offsets_[l]; }
  int num_generators() const { return static_cast<int>(orders_.size()); }
  int lcm_order() const { return lcm_; }
  int total_dim() const { return total_; }
  /// Columns T^k a_l in generator-major order.
  const CMatrix& orbit_matrix() const { return orbit_; }

  /// x = sum_l sum_k alpha^l(k) T^k a_l.
  CVector synthesize(const CVector& alpha) const {
    require_dim(alpha.size(), total_, "synthesize");
    return orbit_ * alpha;
  }

 private:
  LinearOperator op_;
  std::vector<CVector> generators_;
  std::vector<int> orders_;
  std::vector<int> offsets_;
  int lcm_ = 1;
  int total_ = 0;
  CMatrix orbit_;
};

class SamplingScheme {
 public:
  SamplingScheme(std::vector<CVector> samplers, int period_r, int lcm_order)
      : samplers_(std::move(samplers)), r_(period_r) {
    if (samplers_.empty()) throw std::invalid_argument("SamplingScheme: no samplers");
    if (r_ <= 0 || lcm_order <= 0 || lcm_order % r_ != 0) {
      throw std::invalid_argument("SamplingScheme: r = " + std::to_string(r_) +
                                  " does not divide N = " + std::to_string(lcm_order));
    }
    ell_ = lcm_order / r_;
  }

  SamplingScheme(std::vector<CVector> samplers, int period_r, const CyclicSubspace& space)
      : SamplingScheme(std::move(samplers), period_r, space.lcm_order()) {
    for (const auto& b : samplers_) require_dim(b.size(), space.op().dim(), "sampler");
  }

  const std::vector<CVector>& samplers() const { return samplers_; }
  int num_samplers() const { return static_cast<int>(samplers_.size()); }
  int r() const { return r_; }
  int ell() const { return ell_; }
  int num_samples() const { return num_samplers() * ell_; }

 private:
  std::vector<CVector> samplers_;
  int r_;
  int ell_ = 0;
};

/// Block layout shared by the sample matrix and its left inverses.
struct BlockLayout {
  std::vector<int> orders;
  std::vector<int> offsets;
  int lcm = 1;
  int r = 1;
  int ell = 1;
  int s = 1;

  int total() const { return offsets.empty() ? 0 : offsets.back() + orders.back(); }
  int rows() const { return s * ell; }

  static BlockLayout from(const CyclicSubspace& space, const SamplingScheme& scheme) {
    BlockLayout layout;
    layout.orders = space.orders();
    for (int l = 0; l < space.num_generators(); ++l) layout.offsets.push_back(space.offset(l));
    layout.lcm = space.lcm_order();
    layout.r = scheme.r();
    layout.ell = scheme.ell();
    layout.s = scheme.num_samplers();
    return layout;
  }
};

/// R_{a,b}: s*ell rows (sampler-major, time index inner) by sum N_l columns.
struct SampleMatrix {
  CMatrix entries;
  BlockLayout layout;
};

struct StructuredLeftInverse {
  CMatrix entries;
  /// Column (j, 0) for each sampler j: the impulse responses beta_j^l stacked
  /// by generator block.
  CMatrix impulse;
  BlockLayout layout;
};

struct ReconstructionBasis {
  std::vector<CVector> vectors;
};

struct RankReport {
  bool full_rank = false;
  int rank = 0;
  int columns = 0;
  RVector singular_values;
  /// Optimal frame bounds of the columns of R^*: sigma_min^2, sigma_max^2.
  double lower_frame_bound() const {
    return full_rank ? singular_values(singular_values.size() - 1) *
                           singular_values(singular_values.size() - 1)
                     : 0.0;
  }
  double upper_frame_bound() const {
    return singular_values.size() ? singular_values(0) * singular_values(0) : 0.0;
  }
};

inline SampleMatrix build_sample_matrix(const CyclicSubspace& space,
                                        const SamplingScheme& scheme) {
  if (space.lcm_order() % scheme.r() != 0 ||
      space.lcm_order() / scheme.r() != scheme.ell()) {
    throw std::invalid_argument("build_sample_matrix: scheme built for a different N");
  }
  for (const auto& b : scheme.samplers()) {
    require_dim(b.size(), space.op().dim(), "build_sample_matrix sampler");
  }
  SampleMatrix out;
  out.layout = BlockLayout::from(space, scheme);
  const auto& lay = out.layout;
  out.entries = CMatrix::Zero(lay.rows(), lay.total());
  for (int j = 0; j < lay.s; ++j) {
    for (int l = 0; l < space.num_generators(); ++l) {
      const int order = lay.orders[l];
      CrossCorrelation corr = cross_correlation(space.op(), space.generators()[l],
                                                scheme.samplers()[j], 0, order - 1, order);
      for (int n = 0; n < lay.ell; ++n) {
        for (int k = 0; k < order; ++k) {
          // r_{a_l,b_j}(N - r n + k), reduced with the N_l-periodicity of the orbit
          out.entries(j * lay.ell + n, lay.offsets[l] + k) =
              corr.at(static_cast<long long>(lay.lcm) - lay.r * n + k);
        }
      }
    }
  }
  return out;
}

/// L_j x(r n) = <x, (T^*)^{-r n} b_j>, ordered like the rows of R.
inline CVector take_samples(const CyclicSubspace& space, const SamplingScheme& scheme,
                            const CVector& x) {
  require_dim(x.size(), space.op().dim(), "take_samples");
  const LinearOperator adj = space.op().adjoint();
  const CMatrix step = adj.inverse();  // (T^*)^{-1}
  CMatrix step_r = CMatrix::Identity(adj.dim(), adj.dim());
  for (int i = 0; i < scheme.r(); ++i) step_r = step * step_r;
  CVector out(scheme.num_samples());
  for (int j = 0; j < scheme.num_samplers(); ++j) {
    CVector analyzer = scheme.samplers()[j];
    for (int n = 0; n < scheme.ell(); ++n) {
      out(j * scheme.ell() + n) = inner(x, analyzer);
      analyzer = step_r * analyzer;
    }
  }
  return out;
}

inline RankReport check_rank(const SampleMatrix& R, double rank_tol = kRankTol) {
  RankReport report;
  report.singular_values = singular_values(R.entries);
  report.rank = numerical_rank(report.singular_values, rank_tol);
  report.columns = static_cast<int>(R.entries.cols());
  report.full_rank = report.rank == report.columns;
  return report;
}

/// H = R^+ + U (I - R R^+). U defaults to zero.
inline CMatrix left_inverse(const SampleMatrix& R, const std::optional<CMatrix>& U = std::nullopt,
                            double rank_tol = kRankTol) {
  if (!check_rank(R, rank_tol).full_rank) {
    throw RankError("left_inverse: sample matrix is rank deficient");
  }
  CMatrix pinv = pseudo_inverse(R.entries, rank_tol);
  if (!U) return pinv;
  if (U->rows() != R.entries.cols() || U->cols() != R.entries.rows()) {
    throw DimensionError("left_inverse: U must be (sum N_l) x (s ell)");
  }
  const auto m = R.entries.rows();
  return pinv + *U * (CMatrix::Identity(m, m) - R.entries * pinv);
}

/// Rebuilds a left inverse so that, inside every generator block, column
/// (j, n) is column (j, 0) cyclically shifted down by r n (mod N_l).
///
/// Row p0 < gcd(r, N_l) of the block of H determines the whole residue class
/// p0 + r t (mod N_l). Its entries are first averaged over the n-period
/// N_l / gcd(r, N_l) (a no-op when N_l = N, where this reduces to reordering
/// the first r rows), which keeps the row a left-inverse row, and are then
/// scattered into the shifted positions.
inline StructuredLeftInverse structurize_left_inverse(const SampleMatrix& R, const CMatrix& H,
                                                      double residual_tol = 1e-8,
                                                      double rank_tol = kRankTol) {
  const auto& lay = R.layout;
  const int total = lay.total();
  if (H.rows() != total || H.cols() != lay.rows()) {
    throw DimensionError("structurize_left_inverse: H must be (sum N_l) x (s ell)");
  }
  if (!check_rank(R, rank_tol).full_rank) {
    throw RankError("structurize_left_inverse: sample matrix is rank deficient");
  }
  const double residual = max_abs(H * R.entries - CMatrix::Identity(total, total));
  if (residual > residual_tol) {
    throw std::invalid_argument("structurize_left_inverse: H is not a left inverse (residual " +
                                std::to_string(residual) + ")");
  }

  StructuredLeftInverse out;
  out.layout = lay;
  out.impulse = CMatrix::Zero(total, lay.s);
  for (std::size_t l = 0; l < lay.orders.size(); ++l) {
    const int order = lay.orders[l];
    const int base = lay.offsets[l];
    const int g = std::gcd(lay.r, order);
    for (int j = 0; j < lay.s; ++j) {
      std::vector<Complex> sum(order, Complex(0.0, 0.0));
      std::vector<int> count(order, 0);
      for (int p0 = 0; p0 < g; ++p0) {
        for (int n = 0; n < lay.ell; ++n) {
          const int k = mod(static_cast<long long>(p0) - static_cast<long long>(lay.r) * n, order);
          sum[k] += H(base + p0, j * lay.ell + n);
          ++count[k];
        }
      }
      for (int k = 0; k < order; ++k) {
        out.impulse(base + k, j) = sum[k] / static_cast<double>(count[k]);
      }
    }
  }

  out.entries = CMatrix::Zero(total, lay.rows());
  for (std::size_t l = 0; l < lay.orders.size(); ++l) {
    const int order = lay.orders[l];
    const int base = lay.offsets[l];
    for (int j = 0; j < lay.s; ++j) {
      for (int n = 0; n < lay.ell; ++n) {
        for (int p = 0; p < order; ++p) {
          out.entries(base + p, j * lay.ell + n) =
              out.impulse(base + mod(static_cast<long long>(p) - static_cast<long long>(lay.r) * n, order), j);
        }
      }
    }
  }
  return out;
}

/// c_j = sum_l sum_k h_{j,0}[l, k] T^k a_l.
inline ReconstructionBasis reconstruction_vectors(const CyclicSubspace& space,
                                                  const StructuredLeftInverse& hs) {
  require_dim(hs.impulse.rows(), space.total_dim(), "reconstruction_vectors");
  ReconstructionBasis basis;
  for (Eigen::Index j = 0; j < hs.impulse.cols(); ++j) {
    basis.vectors.push_back(space.synthesize(hs.impulse.col(j)));
  }
  return basis;
}

/// x = sum_j sum_n samples(j, n) T^{r n} c_j.
inline CVector reconstruct(const CyclicSubspace& space, const SamplingScheme& scheme,
                           const ReconstructionBasis& basis, const CVector& samples) {
  require_dim(samples.size(), scheme.num_samples(), "reconstruct samples");
  if (static_cast<int>(basis.vectors.size()) != scheme.num_samplers()) {
    throw DimensionError("reconstruct: one reconstruction vector per sampler required");
  }
  const CMatrix step_r = space.op().power_matrix(scheme.r());
  CVector x = CVector::Zero(space.op().dim());
  for (int j = 0; j < scheme.num_samplers(); ++j) {
    CVector shifted = basis.vectors[j];
    for (int n = 0; n < scheme.ell(); ++n) {
      x += samples(j * scheme.ell() + n) * shifted;
      shifted = step_r * shifted;
    }
  }
  return x;
}

/// alpha^l(m) = sum_j sum_n samples(j, n) beta_j^l(m - r n), N_l-periodic.
inline std::vector<CVector> filter_bank_coefficients(const StructuredLeftInverse& hs,
                                                     const CVector& samples) {
  const auto& lay = hs.layout;
  require_dim(samples.size(), lay.rows(), "filter_bank_coefficients");
  std::vector<CVector> alphas;
  for (std::size_t l = 0; l < lay.orders.size(); ++l) {
    const int order = lay.orders[l];
    CVector alpha = CVector::Zero(order);
    for (int m = 0; m < order; ++m) {
      for (int j = 0; j < lay.s; ++j) {
        for (int n = 0; n < lay.ell; ++n) {
          const int k = mod(static_cast<long long>(m) - static_cast<long long>(lay.r) * n, order);
          alpha(m) += samples(j * lay.ell + n) * hs.impulse(lay.offsets[l] + k, j);
        }
      }
    }
    alphas.push_back(std::move(alpha));
  }
  return alphas;
}

/// True iff every ell-row block of C satisfies C(n, k) = C(n - 1, k - r),
/// indices taken cyclically, with the column index reduced modulo the width
/// of its column block (C = P* C P^r blockwise).
inline bool is_r_circulant(const CMatrix& C, int block_rows, int r,
                           const std::vector<int>& column_blocks, double tol = 1e-12) {
  if (block_rows <= 0 || C.rows() % block_rows != 0) {
    throw DimensionError("is_r_circulant: row count is not a multiple of ell");
  }
  int width = 0;
  for (int w : column_blocks) width += w;
  if (width != C.cols()) throw DimensionError("is_r_circulant: column blocks do not cover C");
  const double scale = std::max(1.0, max_abs(C));
  for (Eigen::Index row = 0; row < C.rows(); ++row) {
    const int block = static_cast<int>(row / block_rows);
    const int n = static_cast<int>(row % block_rows);
    const Eigen::Index prev = block * block_rows + mod(n - 1, block_rows);
    int base = 0;
    for (int w : column_blocks) {
      for (int k = 0; k < w; ++k) {
        if (std::abs(C(row, base + k) - C(prev, base + mod(static_cast<long long>(k) - r, w))) >
            tol * scale) {
          return false;
        }
      }
      base += w;
    }
  }
  return true;
}

inline bool is_r_circulant(const CMatrix& C, int block_rows, int r, int N, double tol = 1e-12) {
  if (C.cols() != N) throw DimensionError("is_r_circulant: C must have N columns");
  return is_r_circulant(C, block_rows, r, std::vector<int>{N}, tol);
}

/// Orthogonal projection onto the cyclic subspace through the normal equations of the orbit.
inline CVector project_onto_subspace(const CyclicSubspace& space, const CVector& v) {
  require_dim(v.size(), space.op().dim(), "project_onto_subspace");
  const CMatrix& V = space.orbit_matrix();
  const CMatrix gram = V.adjoint() * V;
  Eigen::LDLT<CMatrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success || numerical_rank(singular_values(gram)) != gram.rows()) {
    throw RankError("project_onto_subspace: orbit matrix is rank deficient");
  }
  return V * ldlt.solve(V.adjoint() * v);
}

/// Samples -> structured dual -> reconstruction vectors, for callers that
/// only need the finished pipeline.
struct CyclicPipeline {
  SampleMatrix R;
  RankReport rank;
  StructuredLeftInverse hs;
  ReconstructionBasis basis;
};

inline CyclicPipeline run_pipeline(const CyclicSubspace& space, const SamplingScheme& scheme,
                                   const std::optional<CMatrix>& U = std::nullopt,
                                   double rank_tol = kRankTol) {
  CyclicPipeline p;
  p.R = build_sample_matrix(space, scheme);
  p.rank = check_rank(p.R, rank_tol);
  if (!p.rank.full_rank) {
    throw RankError("sample matrix has rank " + std::to_string(p.rank.rank) + "/" +
                    std::to_string(p.rank.columns));
  }
  p.hs = structurize_left_inverse(p.R, left_inverse(p.R, U, rank_tol), 1e-8, rank_tol);
  p.basis = reconstruction_vectors(space, p.hs);
  return p;
}

}  // namespace gsamp::cyclic
