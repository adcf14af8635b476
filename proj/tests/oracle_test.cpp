#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

#include <qes/oracle.hpp>

using namespace qes;

namespace {

Eigen::VectorXd dense_eigenvalues(const SymmetricTridiagonal& t)
{
    const int n = t.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = t.diagonal[static_cast<std::size_t>(i)];
        if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = t.off_diagonal[static_cast<std::size_t>(i)];
    }
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

SymmetricTridiagonal random_tridiagonal(std::mt19937& rng, int n)
{
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    SymmetricTridiagonal t;
    t.diagonal.resize(static_cast<std::size_t>(n));
    t.off_diagonal.resize(static_cast<std::size_t>(std::max(n - 1, 0)));
    for (auto& d : t.diagonal) d = u(rng);
    for (auto& e : t.off_diagonal) e = u(rng);
    return t;
}

} // namespace

TEST(SturmCount, AgreesWithDenseSolver)
{
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> shift(-4.0, 4.0);
    for (int trial = 0; trial < 60; ++trial) {
        const auto t = random_tridiagonal(rng, 1 + trial % 50);
        const auto ev = dense_eigenvalues(t);
        for (int s = 0; s < 5; ++s) {
            const double x = shift(rng);
            const auto below = std::count_if(ev.begin(), ev.end(), [x](double v) { return v < x; });
            EXPECT_EQ(sturm_count(t, x), below);
        }
    }
}

TEST(Bisection, MatchesDenseEigenvalues)
{
    std::mt19937 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const auto t = random_tridiagonal(rng, 40);
        const auto ev = dense_eigenvalues(t);
        const auto ours = lowest_eigenvalues(t, 40);
        for (int i = 0; i < 40; ++i) EXPECT_NEAR(ours[static_cast<std::size_t>(i)], ev(i), 1e-9);
    }
}

TEST(FdHamiltonian, DenseCheckOnSmallGrid)
{
    const auto grid = origin_grid(8.0, 300);
    const auto t = fd_hamiltonian(PotentialSpec::mixed(0.0, 1.0, 0.0), 1, grid);
    const auto ev = dense_eigenvalues(t);
    const auto ours = fd_spectrum(PotentialSpec::mixed(0.0, 1.0, 0.0), 1, grid, 3);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(ours[static_cast<std::size_t>(i)], ev(i), 1e-9);
}

TEST(FdSpectrum, HarmonicOscillator)
{
    const auto osc = PotentialSpec::mixed(0.0, 1.0, 0.0);
    const auto e0 = fd_spectrum(osc, 0, default_grid(Family::Mixed), 3);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(e0[static_cast<std::size_t>(i)], 2.0 + 4.0 * i, 5e-3);
    const auto e1 = fd_spectrum(osc, 1, default_grid(Family::Mixed), 2);
    EXPECT_NEAR(e1[0], 4.0, 5e-3);
    EXPECT_NEAR(e1[1], 8.0, 5e-3);
}

TEST(FdSpectrum, ClosedFormGroundStates)
{
    EXPECT_NEAR(fd_spectrum(PotentialSpec::sextic(-3.75, 1.0, 1.0), 0, default_grid(Family::Sextic), 1)[0], 1.0,
                1e-3);
    EXPECT_NEAR(fd_spectrum(PotentialSpec::mixed(1.0, 1.0, -0.5), 0, default_grid(Family::Mixed), 1)[0], 1.75, 1e-3);
    EXPECT_NEAR(fd_spectrum(PotentialSpec::singular(1.0, 2.0, 2.0, 1.0), 0, default_grid(Family::SingularEvenPower),
                            1)[0],
                6.0, 1e-3);
}

TEST(FdSpectrum, SecondOrderConvergenceAwayFromSWave)
{
    const auto osc = PotentialSpec::mixed(0.0, 1.0, 0.0);
    const double e1 = std::abs(fd_spectrum(osc, 1, origin_grid(12.0, 1000), 1)[0] - 4.0);
    const double e2 = std::abs(fd_spectrum(osc, 1, origin_grid(12.0, 2000), 1)[0] - 4.0);
    const double ratio = e1 / e2;
    EXPECT_GE(ratio, 3.5);
    EXPECT_LE(ratio, 4.5);
}

TEST(FdSpectrum, SWaveErrorShrinksUnderRefinement)
{
    const auto osc = PotentialSpec::mixed(0.0, 1.0, 0.0);
    double previous = 1e9;
    for (int n : {500, 1000, 2000, 4000}) {
        const double err = std::abs(fd_spectrum(osc, 0, origin_grid(12.0, n), 1)[0] - 2.0);
        EXPECT_LT(err, previous) << "n=" << n;
        previous = err;
    }
}

TEST(FdSpectrum, DeterministicAcrossCallOrder)
{
    const auto g = default_grid(Family::Sextic);
    const auto a = PotentialSpec::sextic(-3.75, 1.0, 1.0);
    const auto b = PotentialSpec::sextic(-7.75, 1.0, 1.0);
    const auto a1 = fd_spectrum(a, 0, g, 2);
    const auto b1 = fd_spectrum(b, 0, g, 2);
    const auto b2 = fd_spectrum(b, 0, g, 2);
    const auto a2 = fd_spectrum(a, 0, g, 2);
    EXPECT_EQ(a1, a2);
    EXPECT_EQ(b1, b2);
}

TEST(FdEigenvector, NodeCountsFollowIndex)
{
    const auto t = fd_hamiltonian(PotentialSpec::mixed(0.0, 1.0, 0.0), 0, origin_grid(10.0, 2000));
    const auto ev = lowest_eigenvalues(t, 4);
    for (int i = 0; i < 4; ++i) EXPECT_EQ(sign_changes(fd_eigenvector(t, ev[static_cast<std::size_t>(i)])), i);
}

TEST(OdeResidual, ValidAndPerturbedStates)
{
    const auto sol = solve(PotentialSpec::sextic(-7.75, 1.0, 1.0), 0, 1)[1];
    EXPECT_LE(ode_residual(sol), 1e-10);
    const auto off = make_solution(sol.spec, 0, 1, sol.energy + 1e-3);
    EXPECT_GE(ode_residual(off), 1e-4);
    const auto printed = make_solution(PotentialSpec::mixed(1.0, 1.0, 0.5), 0, 0, 2.0, FormulaSet::AsPrinted);
    EXPECT_GE(ode_residual(printed), 1e-2);
}

TEST(CrossValidate, ClosedFormsPass)
{
    const auto pair = solve(PotentialSpec::sextic(-7.75, 1.0, 1.0), 0, 1);
    const auto report = cross_validate(pair, default_grid(Family::Sextic));
    ASSERT_EQ(report.matched.size(), 2u);
    EXPECT_TRUE(report.all_pass());
    EXPECT_EQ(report.matched[0].oracle_index, 0);
    EXPECT_EQ(report.matched[1].oracle_index, 1);
    EXPECT_EQ(report.matched[0].oracle_sign_changes, 0);
    EXPECT_EQ(report.matched[1].oracle_sign_changes, 1);

    const auto singular = solve(PotentialSpec::singular(1.0, 2.0, 2.0, 1.0), 0, 0);
    EXPECT_TRUE(cross_validate(singular.front(), default_grid(Family::SingularEvenPower)).all_pass());
}

TEST(CrossValidate, ShiftedEnergyFails)
{
    const auto good = solve(PotentialSpec::sextic(-3.75, 1.0, 1.0), 0, 0).front();
    const auto bad = make_solution(good.spec, 0, 0, good.energy + 0.5);
    const auto report = cross_validate(bad, default_grid(Family::Sextic));
    ASSERT_EQ(report.matched.size(), 1u);
    EXPECT_FALSE(report.all_pass());
    EXPECT_NEAR(report.matched[0].delta, 0.5, 1e-3);
}

TEST(CrossValidate, RejectsMixedPotentials)
{
    const std::vector<QesSolution> two{solve(PotentialSpec::sextic(-3.75, 1.0, 1.0), 0, 0).front(),
                                       solve(PotentialSpec::mixed(1.0, 1.0, -0.5), 0, 0).front()};
    EXPECT_THROW(cross_validate(two, default_grid(Family::Sextic)), Error);
}

TEST(Grid, Validation)
{
    EXPECT_THROW(make_grid(0.0, 10.0, 1000), GridError);
    EXPECT_THROW(make_grid(2.0, 1.0, 1000), GridError);
    EXPECT_THROW(make_grid(0.1, 10.0, 50), GridError);
    EXPECT_THROW(origin_grid(-1.0, 1000), GridError);
    const auto g = origin_grid(10.0, 1000);
    EXPECT_NEAR(g.node(0), 0.5 * g.spacing(), 1e-15);
    EXPECT_NEAR(g.node(999) + g.spacing(), 10.0, 1e-12); // Dirichlet point one spacing out
}
