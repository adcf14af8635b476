#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <qes/polynomial.hpp>

using namespace qes;

namespace {

Polynomial from_roots(const std::vector<double>& roots, double lead = 1.0)
{
    Polynomial p(lead);
    for (double r : roots) p *= Polynomial(std::vector<double>{-r, 1.0});
    return p;
}

} // namespace

TEST(Polynomial, Arithmetic)
{
    const Polynomial x = Polynomial::variable();
    const Polynomial p = (x - 2.0) * (x + 3.0); // x^2 + x - 6
    EXPECT_EQ(p.degree(), 2);
    EXPECT_DOUBLE_EQ(p[0], -6.0);
    EXPECT_DOUBLE_EQ(p[1], 1.0);
    EXPECT_DOUBLE_EQ(p[2], 1.0);
    EXPECT_DOUBLE_EQ(p(2.0), 0.0);
    EXPECT_DOUBLE_EQ(p.derivative()(1.0), 3.0);
    EXPECT_EQ((p - p).degree(), -1);
    EXPECT_EQ((x * x - x * x + 1.0).degree(), 0);
}

TEST(DurandKerner, RealRootsOfQuadratic)
{
    // E^2 - 4E - 13 from the 2x2 sextic determinant
    const Polynomial p(std::vector<double>{-13.0, -4.0, 1.0});
    const auto roots = real_roots(p);
    ASSERT_EQ(roots.size(), 2u);
    EXPECT_NEAR(roots[0].value, 2.0 - std::sqrt(17.0), 1e-13);
    EXPECT_NEAR(roots[1].value, 2.0 + std::sqrt(17.0), 1e-13);
}

TEST(DurandKerner, ComplexRootsAreDropped)
{
    const Polynomial p(std::vector<double>{1.0, 0.0, 1.0}); // x^2 + 1
    EXPECT_TRUE(real_roots(p).empty());
    const auto z = durand_kerner(p);
    ASSERT_EQ(z.size(), 2u);
    for (const auto& r : z) EXPECT_NEAR(std::abs(r.imag()), 1.0, 1e-12);
}

TEST(DurandKerner, RandomRealRoots)
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int degree = 1 + trial % 5;
        std::vector<double> want(static_cast<std::size_t>(degree));
        for (auto& r : want) r = dist(rng);
        std::sort(want.begin(), want.end());
        // keep roots separated so the test is about convergence, not conditioning
        bool separated = true;
        for (std::size_t i = 1; i < want.size(); ++i) separated = separated && want[i] - want[i - 1] > 0.2;
        if (!separated) continue;
        const auto got = real_roots(from_roots(want, dist(rng)));
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i].value, want[i], 1e-9 * (1 + std::abs(want[i])));
    }
}

TEST(DurandKerner, CoincidentRootsMerged)
{
    const auto roots = real_roots(from_roots({1.5, 1.5, -2.0}));
    ASSERT_EQ(roots.size(), 2u);
    EXPECT_NEAR(roots[0].value, -2.0, 1e-12);
    EXPECT_EQ(roots[0].multiplicity, 1);
    EXPECT_NEAR(roots[1].value, 1.5, 1e-6);
    EXPECT_EQ(roots[1].multiplicity, 2);
}

TEST(DurandKerner, LinearAndConstant)
{
    EXPECT_TRUE(durand_kerner(Polynomial(3.0)).empty());
    const auto r = real_roots(Polynomial(std::vector<double>{1.0, 2.0}));
    ASSERT_EQ(r.size(), 1u);
    EXPECT_DOUBLE_EQ(r[0].value, -0.5);
}
