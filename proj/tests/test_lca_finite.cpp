#include "gsamp/cyclic_sampling.hpp"
#include "gsamp/lca_finite.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace gsamp;
using namespace gsamp::lca;
using gsamp::testing::random_cvector;

namespace {

CVector delta(int n, int i) {
  CVector v = CVector::Zero(n);
  v(i) = 1.0;
  return v;
}

// Regular representation of G on C^{|G|}: Pi(g) e_h = e_{h+g}.
std::vector<LinearOperator> regular_generators(const FiniteAbelianGroup& G) {
  std::vector<LinearOperator> ops;
  for (int i = 0; i < G.rank(); ++i) {
    Element e = G.zero();
    e[static_cast<std::size_t>(i)] = 1;
    CMatrix P = CMatrix::Zero(G.order(), G.order());
    for (int h = 0; h < G.order(); ++h) P(G.index(G.add(G.element(h), e)), h) = 1.0;
    ops.emplace_back(P);
  }
  return ops;
}

std::vector<Subgroup> some_subgroups(const FiniteAbelianGroup& G) {
  std::vector<Subgroup> out;
  for (int a = 0; a < G.order(); ++a) {
    out.emplace_back(G, std::vector<Element>{G.element(a)});
    for (int b = a + 1; b < G.order(); b += 3) out.emplace_back(G, std::vector<Element>{G.element(a), G.element(b)});
  }
  return out;
}

}  // namespace

TEST(GroupTest, ElementsAndCharacters) {
  FiniteAbelianGroup G({4, 6});
  EXPECT_EQ(G.order(), 24);
  for (int i = 0; i < G.order(); ++i) EXPECT_EQ(G.index(G.element(i)), i);
  EXPECT_EQ(G.add({3, 5}, {2, 4}), (Element{1, 3}));
  EXPECT_EQ(G.neg({1, 0}), (Element{3, 0}));
  for (int g = 0; g < G.order(); ++g) {
    for (int h = 0; h < G.order(); h += 5) {
      const auto label = G.element(g), x = G.element(h), y = G.element((h * 7 + 3) % G.order());
      EXPECT_NEAR(std::abs(G.character(label, x)), 1.0, 1e-14);
      EXPECT_NEAR(std::abs(G.character(label, G.add(x, y)) - G.character(label, x) * G.character(label, y)), 0.0,
                  1e-12);
    }
  }
  EXPECT_THROW(G.add({1}, {1, 2}), DimensionError);
}

TEST(SubgroupTest, ClosureAndMembership) {
  FiniteAbelianGroup G({12});
  Subgroup M(G, {{3}});
  EXPECT_EQ(M.order(), 4);
  EXPECT_TRUE(M.contains({9}));
  EXPECT_FALSE(M.contains({4}));
  Subgroup H(G, {{8}, {6}});  // gcd generates 2Z_12
  EXPECT_EQ(H.order(), 6);
  EXPECT_TRUE(Subgroup(G, {{4}}).is_subgroup_of(H));
  for (const auto& a : H.elements()) {
    EXPECT_TRUE(H.contains(G.neg(a)));
    for (const auto& b : H.elements()) EXPECT_TRUE(H.contains(G.add(a, b)));
  }
}

TEST(AnnihilatorTest, Examples) {
  FiniteAbelianGroup G({4});
  Subgroup H(G, {{1}});
  DualGroup dual(H);
  EXPECT_EQ(dual.order(), 4);
  const auto perp = annihilator(dual, Subgroup(G, {{2}}));
  ASSERT_EQ(perp.size(), 2u);
  EXPECT_EQ(dual.label(perp[0]), Element{0});
  EXPECT_EQ(dual.label(perp[1]), Element{2});
  EXPECT_EQ(annihilator(dual, H).size(), 1u);
  EXPECT_EQ(annihilator(dual, Subgroup(G, {})).size(), 4u);
  EXPECT_THROW(annihilator(DualGroup(Subgroup(G, {{2}})), H), std::invalid_argument);
}

TEST(AnnihilatorTest, OrderAndTilingForAllPairs) {
  for (const auto& moduli : std::vector<std::vector<int>>{{6}, {2, 4}, {2, 2, 3}}) {
    FiniteAbelianGroup G(moduli);
    const auto subs = some_subgroups(G);
    for (const auto& H : subs) {
      DualGroup dual(H);
      EXPECT_EQ(dual.order(), H.order());
      for (const auto& M : subs) {
        if (!M.is_subgroup_of(H)) continue;
        const auto perp = annihilator(dual, M);
        EXPECT_EQ(static_cast<int>(perp.size()) * M.order(), H.order());
        const auto omega = section(dual, perp);
        std::multiset<int> cover;
        for (int xi : omega)
          for (int mu : perp) cover.insert(dual.add(xi, mu));
        EXPECT_EQ(static_cast<int>(cover.size()), dual.order());
        EXPECT_EQ(static_cast<int>(std::set<int>(cover.begin(), cover.end()).size()), dual.order());
      }
    }
  }
}

TEST(DualGroupTest, CharacterOrthogonality) {
  FiniteAbelianGroup G({4, 6});
  Subgroup H(G, {{2, 3}, {0, 2}});
  DualGroup dual(H);
  EXPECT_EQ(dual.order(), H.order());
  for (const auto& h : H.elements()) {
    for (const auto& k : H.elements()) {
      Complex acc(0.0, 0.0);
      for (int g = 0; g < dual.order(); ++g) acc += dual.value(g, h) * std::conj(dual.value(g, k));
      acc /= static_cast<double>(dual.order());
      EXPECT_NEAR(std::abs(acc - (h == k ? 1.0 : 0.0)), 0.0, 1e-12);
    }
  }
  // Group law on classes agrees with pointwise products.
  for (int a = 0; a < dual.order(); ++a)
    for (int b = 0; b < dual.order(); ++b)
      for (const auto& h : H.elements())
        EXPECT_NEAR(std::abs(dual.value(dual.add(a, b), h) - dual.value(a, h) * dual.value(b, h)), 0.0, 1e-12);
}

TEST(RepresentationTest, ChecksRelationsAndCommutation) {
  FiniteAbelianGroup G({2, 2});
  GroupRepresentation rep(G, regular_generators(G));
  EXPECT_LT(max_abs(rep(G.zero()) - CMatrix::Identity(4, 4)), 1e-14);
  for (int i = 0; i < G.order(); ++i) {
    const auto h = G.element(i);
    EXPECT_LT(max_abs(rep(G.neg(h)) * rep(h) - CMatrix::Identity(4, 4)), 1e-8);
  }
  EXPECT_LT(rep.homomorphism_defect(Subgroup(G, {{1, 0}, {0, 1}})), 1e-14);

  CMatrix three = CMatrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) three((i + 1) % 3, i) = 1.0;
  EXPECT_THROW(GroupRepresentation(FiniteAbelianGroup({2}), {LinearOperator(three)}), std::invalid_argument);

  CMatrix swap01 = CMatrix::Identity(3, 3), swap12 = CMatrix::Identity(3, 3);
  swap01.row(0).swap(swap01.row(1));
  swap12.row(1).swap(swap12.row(2));
  EXPECT_THROW(GroupRepresentation(G, {LinearOperator(swap01), LinearOperator(swap12)}), std::invalid_argument);
  EXPECT_THROW(GroupRepresentation(G, {LinearOperator(swap01)}), DimensionError);
}

TEST(GroupSamplingTest, TrivialQuotientIsTautological) {
  FiniteAbelianGroup G({3});
  GroupRepresentation rep(G, regular_generators(G));
  Subgroup H(G, {{1}});
  GroupProblem pb{&rep, delta(3, 0), {delta(3, 0)}, H, H};
  const auto gm = build_group_G_matrix(pb);
  EXPECT_EQ(gm.r(), 1);
  for (const auto& m : gm.matrices) EXPECT_LT(max_abs(m - CMatrix::Ones(1, 1)), 1e-14);
  const auto rec = group_dual(pb, gm);
  EXPECT_LT((rec.vectors[0] - delta(3, 0)).norm(), 1e-14);
}

TEST(GroupSamplingTest, ProductGroupRoundTrip) {
  FiniteAbelianGroup G({2, 2});
  GroupRepresentation rep(G, regular_generators(G));
  Subgroup H(G, {{1, 0}, {0, 1}});
  Subgroup M(G, {{1, 0}});
  std::mt19937_64 rng(51);
  GroupProblem pb{&rep, random_cvector(rng, 4), {random_cvector(rng, 4), random_cvector(rng, 4)}, H, M};
  const auto gm = build_group_G_matrix(pb);
  EXPECT_EQ(gm.r(), 2);
  EXPECT_EQ(gm.omega.size(), 2u);
  EXPECT_GT(gm.alpha, 0.0);
  const auto rec = group_dual(pb, gm);
  EXPECT_LT(rec.dual_residual, 1e-10);
  // Dense oracle: samples are linear in the orbit coefficients.
  const CMatrix V = orbit_matrix(pb);
  CMatrix S(4, 4);
  for (int i = 0; i < 4; ++i) S.col(i) = group_samples(pb, V.col(i));
  for (int t = 0; t < 5; ++t) {
    const CVector x = V * random_cvector(rng, 4);
    const CVector samples = group_samples(pb, x);
    const CVector y = group_reconstruct(pb, rec, samples);
    const CVector oracle = V * S.fullPivLu().solve(samples);
    EXPECT_LT((x - y).norm(), 1e-8 * x.norm());
    EXPECT_LT((oracle - y).norm(), 1e-8 * x.norm());
  }
}

TEST(GroupSamplingTest, UnderSamplingIsReported) {
  FiniteAbelianGroup G({4});
  GroupRepresentation rep(G, regular_generators(G));
  Subgroup H(G, {{1}});
  GroupProblem pb{&rep, delta(4, 0), {delta(4, 0)}, H, Subgroup(G, {{2}})};
  const auto gm = build_group_G_matrix(pb);
  EXPECT_NEAR(gm.alpha, 0.0, 1e-12);
  EXPECT_THROW(group_dual(pb, gm), RankError);
}

TEST(GroupSamplingTest, DependentOrbitIsRejected) {
  FiniteAbelianGroup G({4});
  GroupRepresentation rep(G, regular_generators(G));
  Subgroup H(G, {{1}});
  GroupProblem pb{&rep, CVector::Ones(4), {delta(4, 0)}, H, H};
  EXPECT_THROW(build_group_G_matrix(pb), RankError);
}

TEST(GroupSamplingTest, CyclicCaseMatchesCyclicModule) {
  // H = Z_4, M = 2 Z_4, shift on C^4, samplers delta_0 and delta_1.
  FiniteAbelianGroup G({4});
  const auto ops = regular_generators(G);
  GroupRepresentation rep(G, ops);
  Subgroup H(G, {{1}});
  GroupProblem pb{&rep, delta(4, 0), {delta(4, 0), delta(4, 1)}, H, Subgroup(G, {{2}})};
  const auto rec = group_dual(pb, build_group_G_matrix(pb));

  cyclic::CyclicSubspace space(ops[0], {delta(4, 0)}, {4});
  cyclic::SamplingScheme scheme({delta(4, 0), delta(4, 1)}, 2, space);
  const auto pipe = cyclic::run_pipeline(space, scheme);

  std::mt19937_64 rng(52);
  for (int t = 0; t < 5; ++t) {
    const CVector x = random_cvector(rng, 4);
    const CVector s_group = group_samples(pb, x);
    const CVector s_cyclic = cyclic::take_samples(space, scheme, x);
    EXPECT_LT((s_group - s_cyclic).norm(), 1e-12);
    const CVector a = group_reconstruct(pb, rec, s_group);
    const CVector b = cyclic::reconstruct(space, scheme, pipe.basis, s_cyclic);
    EXPECT_LT((a - b).norm(), 1e-10);
  }
}

TEST(GroupSamplingTest, SingularValuesMatchTheSampleMatrix) {
  // sigma(R) = sigma(G(xi)) / sqrt(r) over xi in Omega.
  std::mt19937_64 rng(53);
  std::vector<Complex> eig;
  for (int k = 0; k < 12; ++k) eig.push_back(gsamp::testing::root_of_unity(k, 12));
  const auto c = gsamp::testing::conjugated_operator(rng, eig);
  const CVector a = c.basis * random_cvector(rng, 12);
  std::vector<CVector> samplers{random_cvector(rng, 12), random_cvector(rng, 12), random_cvector(rng, 12),
                                random_cvector(rng, 12)};
  FiniteAbelianGroup G({12});
  GroupRepresentation rep(G, {c.op});
  GroupProblem pb{&rep, a, samplers, Subgroup(G, {{1}}), Subgroup(G, {{3}})};
  const auto gm = build_group_G_matrix(pb);

  cyclic::CyclicSubspace space(c.op, {a}, {12});
  cyclic::SamplingScheme scheme(samplers, 3, space);
  const RVector sv_R = singular_values(cyclic::build_sample_matrix(space, scheme).entries);

  std::vector<double> sv_G;
  for (const auto& m : gm.matrices) {
    const RVector sv = singular_values(m);
    for (Eigen::Index i = 0; i < sv.size(); ++i) sv_G.push_back(sv(i) / std::sqrt(3.0));
  }
  std::sort(sv_G.rbegin(), sv_G.rend());
  ASSERT_EQ(static_cast<Eigen::Index>(sv_G.size()), sv_R.size());
  for (Eigen::Index i = 0; i < sv_R.size(); ++i) EXPECT_NEAR(sv_G[static_cast<std::size_t>(i)], sv_R(i), 1e-9 * sv_R(0));
}
