#include "gsamp/hilbert_core.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace gsamp;
using gsamp::testing::random_cmatrix;
using gsamp::testing::random_cvector;

namespace {

CMatrix cyclic_shift(int n) {
  CMatrix P = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) P((i + 1) % n, i) = 1.0;
  return P;
}

CVector delta(int n, int i) {
  CVector v = CVector::Zero(n);
  v(i) = 1.0;
  return v;
}

LinearOperator well_conditioned(std::mt19937_64& rng, int n) {
  return LinearOperator(gsamp::testing::near_identity(rng, n));
}

}  // namespace

TEST(ApplyPower, IdentityLeavesVectorAlone) {
  std::mt19937_64 rng(1);
  const CVector v = random_cvector(rng, 5);
  EXPECT_EQ(apply_power(LinearOperator::identity(5), 5, v), v);
}

TEST(ApplyPower, FullCycleOfShift) {
  LinearOperator P(cyclic_shift(3));
  EXPECT_EQ(apply_power(P, 3, delta(3, 0)), delta(3, 0));
  EXPECT_EQ(apply_power(P, 1, delta(3, 0)), delta(3, 1));
  EXPECT_EQ(apply_power(P, -1, delta(3, 0)), delta(3, 2));
}

TEST(ApplyPower, NegativePowerMatchesLinearSolve) {
  std::mt19937_64 rng(2);
  const auto T = well_conditioned(rng, 4);
  const CVector v = random_cvector(rng, 4);
  const CMatrix T2 = T.matrix() * T.matrix();
  const CVector w = T2.colPivHouseholderQr().solve(v);
  EXPECT_LT((apply_power(T, -2, v) - w).norm(), 1e-12 * w.norm());
}

TEST(ApplyPower, GroupLaw) {
  std::mt19937_64 rng(3);
  const auto T = well_conditioned(rng, 6);
  const CVector v = random_cvector(rng, 6);
  for (int k1 = -8; k1 <= 8; k1 += 3) {
    for (int k2 = -8; k2 <= 8; k2 += 2) {
      const CVector lhs = apply_power(T, k1, apply_power(T, k2, v));
      const CVector rhs = apply_power(T, k1 + k2, v);
      EXPECT_LT((lhs - rhs).norm(), 1e-10 * v.norm()) << k1 << "," << k2;
    }
  }
}

TEST(ApplyPower, Errors) {
  LinearOperator T(CMatrix::Identity(3, 3), 16);
  EXPECT_THROW(apply_power(T, 17, CVector::Ones(3)), std::out_of_range);
  EXPECT_THROW(apply_power(T, -17, CVector::Ones(3)), std::out_of_range);
  EXPECT_THROW(apply_power(T, 1, CVector::Ones(4)), DimensionError);
}

TEST(LinearOperatorTest, RejectsSingularAndNonSquare) {
  CMatrix singular = CMatrix::Ones(3, 3);
  EXPECT_THROW(LinearOperator{singular}, RankError);
  EXPECT_THROW(LinearOperator{CMatrix::Ones(2, 3)}, DimensionError);
}

TEST(LinearOperatorTest, AdjointConsistency) {
  std::mt19937_64 rng(4);
  const auto T = well_conditioned(rng, 5);
  const auto Tstar = T.adjoint();
  const double norm_T = singular_values(T.matrix())(0);
  for (int t = 0; t < 10; ++t) {
    const CVector v = random_cvector(rng, 5), w = random_cvector(rng, 5);
    const Complex lhs = inner(T.matrix() * v, w);
    const Complex rhs = inner(v, Tstar.matrix() * w);
    EXPECT_LT(std::abs(lhs - rhs), 1e-12 * v.norm() * w.norm() * norm_T);
  }
  EXPECT_LT(max_abs(Tstar.inverse() * Tstar.matrix() - CMatrix::Identity(5, 5)), 1e-10);
}

TEST(Inner, ConjugateLinearInSecondArgument) {
  CVector x(1), y(1);
  x << Complex(0, 1);
  y << Complex(2, 0);
  EXPECT_EQ(inner(x, y), Complex(0, 2));
  EXPECT_EQ(inner(y, x), Complex(0, -2));
  const Complex c(0, 1);
  EXPECT_EQ(inner(x, c * y), std::conj(c) * inner(x, y));
}

TEST(CrossCorrelationTest, ShiftOrbitOnC3) {
  LinearOperator P(cyclic_shift(3));
  const auto corr = cross_correlation(P, delta(3, 0), delta(3, 0), -3, 5, 3);
  for (int k = -3; k <= 5; ++k) EXPECT_EQ(corr.at(k), Complex(mod(k, 3) == 0 ? 1.0 : 0.0)) << k;
}

TEST(CrossCorrelationTest, ShiftOrbitOnC4) {
  LinearOperator P(cyclic_shift(4));
  const auto corr = cross_correlation(P, delta(4, 0), delta(4, 1), 0, 3, 4);
  for (int k = -9; k <= 9; ++k) EXPECT_EQ(corr.at(k), Complex(mod(k, 4) == 1 ? 1.0 : 0.0)) << k;
}

TEST(CrossCorrelationTest, MatchesDirectApplication) {
  std::mt19937_64 rng(5);
  const LinearOperator T(random_cmatrix(rng, 3, 3));
  const CVector a = random_cvector(rng, 3), b = random_cvector(rng, 3);
  const auto corr = cross_correlation(T, a, b, -1, 2);
  const CVector t2a = T.matrix() * (T.matrix() * a);
  EXPECT_LT(std::abs(corr.at(2) - b.dot(t2a)), 1e-12 * t2a.norm() * b.norm());
  const CVector tinva = T.matrix().lu().solve(a);
  EXPECT_LT(std::abs(corr.at(-1) - b.dot(tinva)), 1e-10 * tinva.norm() * b.norm());
  EXPECT_THROW(corr.at(3), std::out_of_range);
}

TEST(CrossCorrelationTest, PeriodicWhenOrbitCloses) {
  // T = S diag(4th roots) S^{-1}: every vector satisfies T^4 a = a.
  std::mt19937_64 rng(6);
  std::vector<Complex> eig;
  for (int k = 0; k < 4; ++k) eig.push_back(gsamp::testing::root_of_unity(k, 4));
  const auto c = gsamp::testing::conjugated_operator(rng, eig);
  const CVector a = random_cvector(rng, 4), b = random_cvector(rng, 4);
  const auto window = cross_correlation(c.op, a, b, 0, 11);
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(std::abs(window.at(k + 4) - window.at(k)), 0.0, 1e-10);
}

TEST(GramMatrix, OrthonormalAndDependent) {
  std::vector<CVector> basis{delta(3, 0), delta(3, 1), delta(3, 2)};
  EXPECT_EQ(gram_matrix(basis), CMatrix::Identity(3, 3));
  const CMatrix g = gram_matrix({delta(2, 0), delta(2, 0)});
  EXPECT_EQ(g, CMatrix::Ones(2, 2));
  EXPECT_EQ(g.determinant(), Complex(0.0));
  EXPECT_THROW(gram_matrix({delta(2, 0), delta(3, 0)}), DimensionError);
}

TEST(GramMatrix, DeterminantAgreesWithSvdRank) {
  std::mt19937_64 rng(7);
  const LinearOperator T(gsamp::testing::near_identity(rng, 5));
  const CVector a = random_cvector(rng, 5);
  std::vector<CVector> orbit;
  for (int k = 0; k < 5; ++k) orbit.push_back(apply_power(T, k, a));
  CMatrix stacked(5, 5);
  for (int k = 0; k < 5; ++k) stacked.col(k) = orbit[static_cast<std::size_t>(k)];
  const CMatrix g = gram_matrix(orbit);
  EXPECT_LT(max_abs(g - g.adjoint()), 1e-12);
  const bool independent = numerical_rank(singular_values(stacked)) == 5;
  EXPECT_EQ(std::abs(g.determinant()) > 0.0, independent);

  // Orbit of an eigenvector is rank one.
  CVector eig = Eigen::ComplexEigenSolver<CMatrix>(T.matrix()).eigenvectors().col(0);
  std::vector<CVector> flat;
  for (int k = 0; k < 3; ++k) flat.push_back(apply_power(T, k, eig));
  EXPECT_EQ(numerical_rank(singular_values(gram_matrix(flat)), 1e-8), 1);
}

TEST(PseudoInverse, MoorePenroseAxioms) {
  std::mt19937_64 rng(8);
  const CMatrix A = random_cmatrix(rng, 7, 4);
  const CMatrix P = pseudo_inverse(A);
  EXPECT_LT(max_abs(A * P * A - A), 1e-10);
  EXPECT_LT(max_abs(P * A * P - P), 1e-10);
  EXPECT_LT(max_abs((A * P).adjoint() - A * P), 1e-10);
  EXPECT_LT(max_abs((P * A).adjoint() - P * A), 1e-10);
}
