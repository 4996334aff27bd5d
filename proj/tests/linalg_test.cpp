#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "dpsqkd/errors.hpp"
#include "dpsqkd/linalg.hpp"
#include "oracles.hpp"

using namespace dpsqkd;

TEST(SymMatrix, RejectsAsymmetricRows) {
  EXPECT_THROW(SymMatrix::from_rows({{1.0, 2.0}, {3.0, 1.0}}), InvalidInput);
  EXPECT_THROW(SymMatrix::from_rows({{1.0, 2.0}, {2.0}}), InvalidInput);
}

TEST(SymMatrix, SetKeepsBothTriangles) {
  SymMatrix m(3);
  m.set(0, 2, 4.0);
  m.add(2, 0, 1.0);
  EXPECT_EQ(m(0, 2), 5.0);
  EXPECT_EQ(m(2, 0), 5.0);
}

TEST(SymMatrix, PrincipalSubmatrix) {
  auto m = SymMatrix::from_rows({{1, 2, 3}, {2, 4, 5}, {3, 5, 6}});
  std::vector<std::size_t> idx{0, 2};
  auto p = m.principal(idx);
  EXPECT_EQ(p.dim(), 2u);
  EXPECT_EQ(p(0, 0), 1.0);
  EXPECT_EQ(p(0, 1), 3.0);
  EXPECT_EQ(p(1, 1), 6.0);
}

TEST(Interval, RequiresOrderedFiniteEnds) {
  EXPECT_THROW(Interval(1.0, 1.0), InvalidInput);
  EXPECT_THROW(Interval(0.0, INFINITY), InvalidInput);
  EXPECT_NO_THROW(Interval(-1.0, 1.0));
}

TEST(EigMax, OneByOne) { EXPECT_EQ(eig_max(SymMatrix::from_rows({{-3.25}})), -3.25); }

TEST(EigMax, SwapMatrix) { EXPECT_NEAR(eig_max(SymMatrix::from_rows({{0, 1}, {1, 0}})), 1.0, 1e-15); }

TEST(EigMax, UncoupledThreePulseBlockAtZeroLambda) {
  // Diagonal weights of the restricted (1,2,3) block with no coupling.
  auto m = SymMatrix::from_rows({{1.0, 0, 0}, {0, 0.5, 0}, {0, 0, 1.0}});
  EXPECT_NEAR(eig_max(m), 1.0, 1e-15);
}

TEST(EigMax, RejectsNonFinite) {
  SymMatrix m(2);
  m.set(0, 1, NAN);
  EXPECT_THROW(eig_max(m), InvalidInput);
  EXPECT_THROW(eig_pairs(m), InvalidInput);
}

TEST(EigMax, MatchesSturmBisectionOnTridiagonals) {
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 64; n += 3) {
    SymMatrix m(n);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < n; ++i) {
      m.set(i, i, u(rng));
      if (i + 1 < n) m.set(i, i + 1, u(rng));
    }
    EXPECT_NEAR(eig_max(m), oracle::tridiagonal_max_eig(m), 1e-12) << "n=" << n;
  }
}

TEST(EigMax, MatchesPowerIterationOnDenseMatrices) {
  std::mt19937_64 rng(11);
  for (int n : {2, 3, 5, 8}) {
    auto m = oracle::random_symmetric(n, rng);
    // Shift so the top eigenvalue is well separated for the power method.
    m.add(0, 0, 3.0);
    EXPECT_NEAR(eig_max(m), oracle::power_max_eig(m), 1e-12) << "n=" << n;
  }
}

TEST(EigMax, IsBitwiseDeterministic) {
  std::mt19937_64 rng(3);
  auto m = oracle::random_symmetric(20, rng);
  double a = eig_max(m), b = eig_max(m);
  EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
}

TEST(EigPairs, IdentityGivesUnitSpectrumAndOrthonormalBasis) {
  auto pairs = eig_pairs(SymMatrix::identity(3));
  ASSERT_EQ(pairs.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(pairs[i].value, 1.0, 1e-15);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(dot(pairs[i].vector, pairs[j].vector), i == j ? 1.0 : 0.0, 1e-12);
  }
}

TEST(EigPairs, SwapMatrixVectors) {
  auto pairs = eig_pairs(SymMatrix::from_rows({{0, 1}, {1, 0}}));
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(pairs[0].value, 1.0, 1e-15);
  EXPECT_NEAR(pairs[0].vector[0], r, 1e-12);
  EXPECT_NEAR(pairs[0].vector[1], r, 1e-12);
  EXPECT_NEAR(pairs[1].value, -1.0, 1e-15);
  EXPECT_NEAR(std::abs(pairs[1].vector[0]), r, 1e-12);
  EXPECT_NEAR(pairs[1].vector[0], -pairs[1].vector[1], 1e-12);
}

TEST(EigPairs, RandomSpectraAreSortedOrthonormalEigenpairs) {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 32; n += 3) {
    auto m = oracle::random_symmetric(n, rng);
    auto pairs = eig_pairs(m);
    ASSERT_EQ(pairs.size(), static_cast<std::size_t>(n));
    EXPECT_NEAR(pairs.front().value, eig_max(m), 1e-12);
    for (int i = 0; i < n; ++i) {
      if (i > 0) EXPECT_GE(pairs[i - 1].value, pairs[i].value);
      auto mv = m.multiply(pairs[i].vector);
      double res = 0.0;
      for (int k = 0; k < n; ++k) res = std::max(res, std::abs(mv[k] - pairs[i].value * pairs[i].vector[k]));
      EXPECT_LT(res, 1e-11);
      for (int j = 0; j <= i; ++j) EXPECT_NEAR(dot(pairs[i].vector, pairs[j].vector), i == j ? 1.0 : 0.0, 1e-10);
    }
  }
}

TEST(EigMax, RayleighQuotientNeverExceedsTop) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + trial % 32;
    auto m = oracle::random_symmetric(n, rng);
    Vector v(n);
    for (auto& x : v) x = g(rng);
    double nv = norm2(v);
    for (auto& x : v) x /= nv;
    EXPECT_LE(dot(v, m.multiply(v)), eig_max(m) + 1e-10);
  }
}

TEST(EigMax, EntrywiseDominanceWithNonNegativeCouplings) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0), s(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + trial % 12;
    SymMatrix small(n), big(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double base = i == j ? s(rng) : u(rng);
        small.set(i, j, base);
        big.set(i, j, base + u(rng));
      }
    EXPECT_GE(eig_max(big), eig_max(small) - 1e-10);
  }
}

TEST(FindRoot, Linear) { EXPECT_NEAR(find_root([](double x) { return x - 1.0; }, Interval(0, 2)), 1.0, 1e-12); }

TEST(FindRoot, CoshEquation) {
  double x = find_root([](double t) { return std::cosh(2 * t) - 1.2 * std::cosh(t); }, Interval(0, 2));
  EXPECT_NEAR(std::cosh(2 * x) / (2 * std::cosh(x)), 0.6, 1e-12);
}

TEST(FindRoot, NoSignChangeIsABracketError) {
  EXPECT_THROW(find_root([](double x) { return x * x + 1.0; }, Interval(-1, 1)), BracketError);
}

TEST(FindRoot, ConvergesOnStepFunctionByBisection) {
  double x = find_root([](double t) { return t < 0.3 ? -1.0 : 1.0; }, Interval(0, 1), 1e-12);
  EXPECT_NEAR(x, 0.3, 1e-11);
}

TEST(Cubic, DoubleRootAtFour) { EXPECT_NEAR(cubic_max_real_root(1, -10, 32, -32), 4.0, 1e-12); }

TEST(Cubic, CubeRootOfOne) { EXPECT_NEAR(cubic_max_real_root(1, 0, 0, -1), 1.0, 1e-12); }

TEST(Cubic, ThreePulseCubicAtUnitLambda) {
  // x^3 - 4x^2 + x + 2 = (x - 1)(x^2 - 3x - 2), top root (3 + sqrt 17) / 2.
  EXPECT_NEAR(cubic_max_real_root(1, -4, 1, 2), (3.0 + std::sqrt(17.0)) / 2.0, 1e-12);
  auto m = SymMatrix::from_rows({{1.0 - 0.5, std::sqrt(2.0) / 4, 0},
                                 {std::sqrt(2.0) / 4, 1.0 - 0.5, 0.25},
                                 {0, 0.25, 0.5 - 0.5}});
  EXPECT_NEAR(cubic_max_real_root(1, -4, 1, 2) / 4.0, eig_max(m), 1e-12);
}

TEST(Cubic, TripleRoot) { EXPECT_NEAR(cubic_max_real_root(1, -6, 12, -8), 2.0, 1e-6); }

TEST(Cubic, RejectsZeroLeadingCoefficient) { EXPECT_THROW(cubic_max_real_root(0, 1, 1, 1), InvalidInput); }

TEST(Cubic, ResidualOfRandomCubics) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int k = 0; k < 1000; ++k) {
    double c3 = u(rng), c2 = u(rng), c1 = u(rng), c0 = u(rng);
    if (std::abs(c3) < 1e-3) continue;
    double x = cubic_max_real_root(c3, c2, c1, c0);
    double scale = std::max({1.0, std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
    double res = ((c3 * x + c2) * x + c1) * x + c0;
    EXPECT_LE(std::abs(res), 1e-9 * scale * std::max(1.0, x * x * std::abs(x)));
  }
}

TEST(Minimize, Parabola) {
  auto r = minimize_scalar([](double x) { return (x - 2) * (x - 2); }, Interval(0, 5));
  EXPECT_NEAR(r.argmin, 2.0, 1e-5);
  EXPECT_NEAR(r.min, 0.0, 1e-10);
}

TEST(Minimize, BoundaryMinimum) {
  auto r = minimize_scalar([](double x) { return x; }, Interval(0, 1));
  EXPECT_NEAR(r.argmin, 0.0, 1e-10);
  EXPECT_NEAR(r.min, 0.0, 1e-10);
}

TEST(Minimize, OneQubitBoundObjectiveAgainstDenseGrid) {
  const double e_b = 0.2;
  auto f = [e_b](double lam) { return lam * e_b + (3 - 2 * lam + std::sqrt(1 + 2 * lam * lam)) / 4; };
  const double lam0 = 3 + std::sqrt(5.0);
  auto r = minimize_scalar(f, Interval(0, lam0));
  auto g = oracle::dense_grid_min(f, 0, lam0, 100000, false);
  EXPECT_LE(r.min, g.min + 1e-12);
  EXPECT_NEAR(r.min, g.min, 1e-8);
}

TEST(Minimize, LogScaleNeedsPositiveDomain) {
  EXPECT_THROW(minimize_scalar([](double x) { return x; }, Interval(0, 1), 1e-10, {129, true}), InvalidInput);
}

TEST(Minimize, NonFiniteObjectiveIsRejected) {
  EXPECT_THROW(minimize_scalar([](double) { return NAN; }, Interval(0, 1)), InvalidInput);
}

TEST(Entropy, Endpoints) {
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_EQ(binary_entropy(0.5), 1.0);
}

TEST(Entropy, MatchesExtendedPrecision) {
  for (double x : {1e-9, 1e-4, 0.02, 0.11, 0.3, 0.49, 0.7})
    EXPECT_NEAR(binary_entropy(x), static_cast<double>(oracle::entropy_ld(x)), 1e-15) << x;
}

TEST(Entropy, ExactlySymmetric) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 10000; ++k) {
    double x = u(rng);
    EXPECT_EQ(binary_entropy(x), binary_entropy(1.0 - x));
  }
}

TEST(Entropy, OutsideUnitIntervalIsADomainError) {
  EXPECT_THROW(binary_entropy(-1e-3), DomainError);
  EXPECT_THROW(binary_entropy(1.001), DomainError);
}
