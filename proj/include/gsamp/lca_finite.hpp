#pragma once

// Sampling in Pi-invariant subspaces for finite abelian groups
// G = Z_{d_1} x ... x Z_{d_k}: subgroups M < H, the characters of H,
// annihilators, sections of H^/M^perp, the G(xi) matrix and the sampling
// formula x = sum_j sum_{m in M} L_j x(m) Pi(m) c_j.

#include "gsamp/hilbert_core.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <vector>

namespace gsamp::lca {

using Element = std::vector<int>;

class FiniteAbelianGroup {
 public:
  explicit FiniteAbelianGroup(std::vector<int> moduli) : moduli_(std::move(moduli)) {
    if (moduli_.empty()) throw std::invalid_argument("FiniteAbelianGroup: no factors");
    order_ = 1;
    for (int d : moduli_) {
      if (d <= 0) throw std::invalid_argument("FiniteAbelianGroup: moduli must be positive");
      order_ *= d;
    }
  }

  const std::vector<int>& moduli() const { return moduli_; }
  int rank() const { return static_cast<int>(moduli_.size()); }
  int order() const { return order_; }

  Element zero() const { return Element(moduli_.size(), 0); }

  Element reduce(Element e) const {
    check(e);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = mod(e[i], moduli_[i]);
    return e;
  }
  Element add(const Element& a, const Element& b) const {
    check(a);
    check(b);
    Element out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = mod(a[i] + b[i], moduli_[i]);
    return out;
  }
  Element neg(const Element& a) const {
    check(a);
    Element out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = mod(-a[i], moduli_[i]);
    return out;
  }

  /// Mixed-radix index, first factor most significant.
  int index(const Element& e) const {
    int idx = 0;
    for (std::size_t i = 0; i < e.size(); ++i) idx = idx * moduli_[i] + mod(e[i], moduli_[i]);
    return idx;
  }
  Element element(int idx) const {
    Element e(moduli_.size());
    for (std::size_t i = moduli_.size(); i-- > 0;) {
      e[i] = idx % moduli_[i];
      idx /= moduli_[i];
    }
    return e;
  }

  /// (h, gamma) = exp(2 pi i sum_i j_i h_i / d_i) for a character label j.
  Complex character(const Element& label, const Element& h) const {
    double phase = 0.0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      phase += static_cast<double>(mod(static_cast<long long>(label[i]) * h[i], moduli_[i])) / moduli_[i];
    }
    return std::polar(1.0, 2.0 * std::numbers::pi * (phase - std::floor(phase)));
  }

 private:
  void check(const Element& e) const {
    if (e.size() != moduli_.size()) throw DimensionError("group element has wrong rank");
  }

  std::vector<int> moduli_;
  int order_ = 1;
};

/// Subgroup generated by a list of elements; elements kept sorted by index.
class Subgroup {
 public:
  Subgroup(const FiniteAbelianGroup& parent, std::vector<Element> generators)
      : parent_(parent), generators_(std::move(generators)) {
    std::set<int> seen{parent_.index(parent_.zero())};
    std::vector<Element> frontier{parent_.zero()};
    for (auto& g : generators_) g = parent_.reduce(g);
    while (!frontier.empty()) {
      std::vector<Element> next;
      for (const auto& e : frontier) {
        for (const auto& g : generators_) {
          Element sum = parent_.add(e, g);
          if (seen.insert(parent_.index(sum)).second) next.push_back(std::move(sum));
        }
      }
      frontier = std::move(next);
    }
    for (int idx : seen) elements_.push_back(parent_.element(idx));
    members_ = std::move(seen);
  }

  const FiniteAbelianGroup& parent() const { return parent_; }
  const std::vector<Element>& generators() const { return generators_; }
  const std::vector<Element>& elements() const { return elements_; }
  int order() const { return static_cast<int>(elements_.size()); }
  bool contains(const Element& e) const { return members_.count(parent_.index(parent_.reduce(e))) > 0; }
  bool is_subgroup_of(const Subgroup& other) const {
    return std::all_of(elements_.begin(), elements_.end(), [&](const Element& e) { return other.contains(e); });
  }

 private:
  FiniteAbelianGroup parent_;
  std::vector<Element> generators_;
  std::vector<Element> elements_;
  std::set<int> members_;
};

/// Characters of a subgroup H < G. Every character of H extends to G, so H^
/// is G^ / H^perp; each class is represented by its lexicographically
/// smallest label.
class DualGroup {
 public:
  explicit DualGroup(const Subgroup& H) : H_(H) {
    const auto& G = H_.parent();
    std::map<std::vector<long long>, int> signature_to_class;
    for (int idx = 0; idx < G.order(); ++idx) {
      const Element label = G.element(idx);
      // The restriction to H is identified by the exact phases j.h mod d.
      std::vector<long long> sig;
      for (const auto& h : H_.elements()) {
        long long acc = 0;
        long long lcm = 1;
        for (int d : G.moduli()) lcm = std::lcm(lcm, static_cast<long long>(d));
        for (std::size_t i = 0; i < h.size(); ++i) {
          acc += static_cast<long long>(label[i]) * h[i] * (lcm / G.moduli()[i]);
        }
        sig.push_back(((acc % lcm) + lcm) % lcm);
      }
      auto [it, inserted] = signature_to_class.emplace(sig, static_cast<int>(labels_.size()));
      if (inserted) labels_.push_back(label);  // labels enumerated in lexicographic order
      class_of_.push_back(it->second);
    }
  }

  const Subgroup& subgroup() const { return H_; }
  int order() const { return static_cast<int>(labels_.size()); }
  const std::vector<Element>& labels() const { return labels_; }
  const Element& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }

  Complex value(int gamma, const Element& h) const { return H_.parent().character(label(gamma), h); }

  int add(int a, int b) const {
    const auto& G = H_.parent();
    return class_of_[static_cast<std::size_t>(G.index(G.add(label(a), label(b))))];
  }
  int neg(int a) const {
    const auto& G = H_.parent();
    return class_of_[static_cast<std::size_t>(G.index(G.neg(label(a))))];
  }
  int zero() const { return 0; }

 private:
  Subgroup H_;
  std::vector<Element> labels_;
  std::vector<int> class_of_;
};

/// M^perp = {gamma in H^ : (m, gamma) = 1 for all m in M}, as indices into H^.
inline std::vector<int> annihilator(const DualGroup& dual, const Subgroup& M, double tol = 1e-9) {
  if (!M.is_subgroup_of(dual.subgroup())) throw std::invalid_argument("annihilator: M is not a subgroup of H");
  std::vector<int> out;
  for (int g = 0; g < dual.order(); ++g) {
    bool trivial = true;
    for (const auto& m : M.elements()) {
      if (std::abs(dual.value(g, m) - Complex(1.0, 0.0)) > tol) {
        trivial = false;
        break;
      }
    }
    if (trivial) out.push_back(g);
  }
  return out;
}

/// Lexicographically smallest label of each coset gamma + M^perp.
inline std::vector<int> section(const DualGroup& dual, const std::vector<int>& perp) {
  std::vector<int> omega;
  std::set<int> covered;
  for (int g = 0; g < dual.order(); ++g) {
    if (covered.count(g)) continue;
    omega.push_back(g);
    for (int mu : perp) covered.insert(dual.add(g, mu));
  }
  return omega;
}

/// Pi on G given by one commuting operator per cyclic factor; Pi(g) is the
/// product of the generator powers.
class GroupRepresentation {
 public:
  GroupRepresentation(FiniteAbelianGroup group, std::vector<LinearOperator> generator_ops,
                      double tol = 1e-8)
      : group_(std::move(group)), ops_(std::move(generator_ops)) {
    if (static_cast<int>(ops_.size()) != group_.rank()) {
      throw DimensionError("GroupRepresentation: one operator per cyclic factor required");
    }
    dim_ = ops_.front().dim();
    for (const auto& op : ops_) require_dim(op.dim(), dim_, "GroupRepresentation operator");
    const CMatrix I = CMatrix::Identity(dim_, dim_);
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      const CMatrix full = ops_[i].power_matrix(group_.moduli()[i]);
      if (max_abs(full - I) > tol * std::max(1.0, max_abs(ops_[i].matrix()))) {
        throw std::invalid_argument("GroupRepresentation: Pi(e_i)^{d_i} != I for factor " + std::to_string(i));
      }
      for (std::size_t k = i + 1; k < ops_.size(); ++k) {
        const CMatrix comm = ops_[i].matrix() * ops_[k].matrix() - ops_[k].matrix() * ops_[i].matrix();
        if (max_abs(comm) > tol * std::max(1.0, max_abs(ops_[i].matrix()) * max_abs(ops_[k].matrix()))) {
          throw std::invalid_argument("GroupRepresentation: generator operators do not commute");
        }
      }
    }
    cache_.resize(static_cast<std::size_t>(group_.order()));
  }

  const FiniteAbelianGroup& group() const { return group_; }
  int dim() const { return dim_; }

  const CMatrix& operator()(const Element& g) const {
    const Element e = group_.reduce(g);
    auto& slot = cache_[static_cast<std::size_t>(group_.index(e))];
    if (!slot) {
      CMatrix m = CMatrix::Identity(dim_, dim_);
      for (std::size_t i = 0; i < e.size(); ++i) m = m * ops_[i].power_matrix(e[i]);
      slot = std::move(m);
    }
    return *slot;
  }

  /// Largest |Pi(h + h') - Pi(h) Pi(h')| over all pairs in H.
  double homomorphism_defect(const Subgroup& H) const {
    double worst = 0.0;
    for (const auto& a : H.elements())
      for (const auto& b : H.elements())
        worst = std::max(worst, max_abs((*this)(group_.add(a, b)) - (*this)(a) * (*this)(b)));
    return worst;
  }

 private:
  FiniteAbelianGroup group_;
  std::vector<LinearOperator> ops_;
  int dim_ = 0;
  mutable std::vector<std::optional<CMatrix>> cache_;
};

struct GroupProblem {
  const GroupRepresentation* rep = nullptr;
  CVector generator;
  std::vector<CVector> samplers;
  Subgroup H;
  Subgroup M;
};

struct GroupGMatrix {
  DualGroup dual;
  std::vector<int> perp;    ///< M^perp, with perp[0] the trivial character
  std::vector<int> omega;   ///< section of H^ / M^perp
  /// G_j(gamma) for every gamma in H^ (indexed by H^ position), j = 0..s-1.
  CMatrix G_values;
  /// G(xi) (s x r) for xi in omega.
  std::vector<CMatrix> matrices;
  double alpha = 0.0;
  double beta = 0.0;
  int r() const { return static_cast<int>(perp.size()); }

  CMatrix matrix_at(int gamma) const {
    CMatrix out(G_values.rows(), r());
    for (int k = 0; k < r(); ++k) out.col(k) = G_values.col(dual.add(gamma, perp[static_cast<std::size_t>(k)]));
    return out;
  }
};

/// L_j x(m) = <x, Pi^*(-m) b_j> = <Pi(-m) x, b_j>.
inline CVector group_samples(const GroupProblem& pb, const CVector& x) {
  require_dim(x.size(), pb.rep->dim(), "group_samples");
  const auto& G = pb.rep->group();
  CVector out(static_cast<Eigen::Index>(pb.samplers.size()) * pb.M.order());
  Eigen::Index row = 0;
  for (const auto& b : pb.samplers) {
    for (const auto& m : pb.M.elements()) out(row++) = inner((*pb.rep)(G.neg(m)) * x, b);
  }
  return out;
}

/// Orbit matrix with columns Pi(h) a over the elements of H.
inline CMatrix orbit_matrix(const GroupProblem& pb) {
  CMatrix V(pb.rep->dim(), pb.H.order());
  for (int i = 0; i < pb.H.order(); ++i) V.col(i) = (*pb.rep)(pb.H.elements()[static_cast<std::size_t>(i)]) * pb.generator;
  return V;
}

inline GroupGMatrix build_group_G_matrix(const GroupProblem& pb, double rank_tol = kRankTol) {
  if (!pb.rep) throw std::invalid_argument("build_group_G_matrix: missing representation");
  if (!pb.M.is_subgroup_of(pb.H)) throw std::invalid_argument("build_group_G_matrix: M is not a subgroup of H");
  if (pb.samplers.empty()) throw std::invalid_argument("build_group_G_matrix: no samplers");
  require_dim(pb.generator.size(), pb.rep->dim(), "build_group_G_matrix generator");
  for (const auto& b : pb.samplers) require_dim(b.size(), pb.rep->dim(), "build_group_G_matrix sampler");
  if (pb.rep->homomorphism_defect(pb.H) > 1e-8) {
    throw std::invalid_argument("build_group_G_matrix: representation is not a homomorphism on H");
  }
  if (numerical_rank(singular_values(orbit_matrix(pb)), rank_tol) != pb.H.order()) {
    throw RankError("build_group_G_matrix: orbit {Pi(h) a} is linearly dependent");
  }

  GroupGMatrix out{DualGroup(pb.H), {}, {}, {}, {}, 0.0, 0.0};
  out.perp = annihilator(out.dual, pb.M);
  out.omega = section(out.dual, out.perp);

  const auto& G = pb.rep->group();
  const int s = static_cast<int>(pb.samplers.size());
  // L_j a(k) for k in H.
  CMatrix La(s, pb.H.order());
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < pb.H.order(); ++i)
      La(j, i) = inner((*pb.rep)(G.neg(pb.H.elements()[static_cast<std::size_t>(i)])) * pb.generator,
                       pb.samplers[static_cast<std::size_t>(j)]);

  // G_j(gamma) = sum_k L_j a(k) chi_{-k}(gamma) = sum_k L_j a(k) conj((k, gamma)).
  out.G_values = CMatrix(s, out.dual.order());
  for (int g = 0; g < out.dual.order(); ++g) {
    for (int j = 0; j < s; ++j) {
      Complex acc(0.0, 0.0);
      for (int i = 0; i < pb.H.order(); ++i)
        acc += La(j, i) * std::conj(out.dual.value(g, pb.H.elements()[static_cast<std::size_t>(i)]));
      out.G_values(j, g) = acc;
    }
  }

  out.alpha = std::numeric_limits<double>::infinity();
  for (int xi : out.omega) {
    CMatrix m = out.matrix_at(xi);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(m.adjoint() * m, Eigen::EigenvaluesOnly);
    out.alpha = std::min(out.alpha, std::max(0.0, eig.eigenvalues()(0)));
    out.beta = std::max(out.beta, eig.eigenvalues()(eig.eigenvalues().size() - 1));
    out.matrices.push_back(std::move(m));
  }
  return out;
}

struct GroupReconstruction {
  /// H_j(gamma) for all gamma in H^ (s x |H^|).
  CMatrix duals;
  std::vector<CVector> vectors;  ///< reconstruction vectors c_j
  double dual_residual = 0.0;
};

/// Pseudo-inverse duals per character and the reconstruction vectors
/// c_j = sum_h phi_j(h) Pi(h) a, where phi_j is the inverse transform of r H_j
/// (normalized counting measure on the dual).
inline GroupReconstruction group_dual(const GroupProblem& pb, const GroupGMatrix& gm,
                                      double alpha_threshold = 1e-8) {
  if (!(gm.alpha > alpha_threshold)) {
    throw RankError("group_dual: alpha_G = " + std::to_string(gm.alpha) + " (configuration not recoverable)");
  }
  const int s = static_cast<int>(gm.G_values.rows());
  const int order = gm.dual.order();
  GroupReconstruction out;
  out.duals = CMatrix(s, order);
  CMatrix target = CMatrix::Zero(1, gm.r());
  target(0, 0) = 1.0;
  for (int g = 0; g < order; ++g) {
    const CMatrix m = gm.matrix_at(g);
    const CMatrix row = pseudo_inverse(m).topRows(1);
    out.dual_residual = std::max(out.dual_residual, max_abs(row * m - target));
    out.duals.col(g) = row.transpose();
  }
  const double r = gm.r();
  for (int j = 0; j < s; ++j) {
    CVector c = CVector::Zero(pb.rep->dim());
    for (const auto& h : pb.H.elements()) {
      Complex coeff(0.0, 0.0);
      for (int g = 0; g < order; ++g) coeff += r * out.duals(j, g) * gm.dual.value(g, h);
      coeff /= static_cast<double>(order);
      c += coeff * ((*pb.rep)(h) * pb.generator);
    }
    out.vectors.push_back(std::move(c));
  }
  return out;
}

/// x = sum_j sum_{m in M} L_j x(m) Pi(m) c_j, samples ordered as group_samples.
inline CVector group_reconstruct(const GroupProblem& pb, const GroupReconstruction& rec,
                                 const CVector& samples) {
  require_dim(samples.size(), static_cast<Eigen::Index>(pb.samplers.size()) * pb.M.order(),
              "group_reconstruct samples");
  CVector x = CVector::Zero(pb.rep->dim());
  Eigen::Index row = 0;
  for (std::size_t j = 0; j < pb.samplers.size(); ++j)
    for (const auto& m : pb.M.elements()) x += samples(row++) * ((*pb.rep)(m) * rec.vectors[j]);
  return x;
}

inline GroupReconstruction group_dual_and_reconstruct(const GroupProblem& pb, const GroupGMatrix& gm) {
  return group_dual(pb, gm);
}

}  // namespace gsamp::lca
