#ifndef QES_ORACLE_HPP
#define QES_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "potentials.hpp"
#include "quantization.hpp"
#include "wavefunction.hpp"

namespace qes {

/// Radial grid for the finite-difference oracle.
///
/// With `regular_origin` the nodes are cell centred, r_i = (i + 1/2) h with
/// h = r_max / (n_points + 1/2), and the origin is a zero-flux face; this is the
/// boundary for potentials that are regular enough at r = 0 (sextic, mixed).
/// Otherwise r_i = r_min + (i + 1) h with h = (r_max - r_min) / (n_points + 1)
/// and Dirichlet conditions at r_min and r_max.
struct Grid
{
    double r_min = 1e-3;
    double r_max = 12.0;
    int n_points = 20000;
    bool regular_origin = false;

    double spacing() const noexcept
    {
        return regular_origin ? r_max / (n_points + 0.5) : (r_max - r_min) / (n_points + 1);
    }
    /// i = 0..n_points-1
    double node(int i) const noexcept
    {
        return regular_origin ? (i + 0.5) * spacing() : r_min + (i + 1) * spacing();
    }
    /// Lower boundary of the discretized interval.
    double lower() const noexcept { return regular_origin ? 0.0 : r_min; }
};

inline Grid make_grid(double r_min, double r_max, int n_points, bool regular_origin = false)
{
    if (!regular_origin && !(r_min > 0.0)) throw GridError("grid r_min must be positive");
    if (!((regular_origin ? 0.0 : r_min) < r_max)) throw GridError("grid needs r_min < r_max");
    if (n_points < 100) throw GridError("grid needs at least 100 interior points");
    return {r_min, r_max, n_points, regular_origin};
}

/// Grid anchored at the origin (zero-flux face at r = 0).
inline Grid origin_grid(double r_max, int n_points) { return make_grid(0.0, r_max, n_points, true); }

inline Grid default_grid(Family family)
{
    if (family == Family::SingularEvenPower) return make_grid(0.05, 10.0, 20000);
    return origin_grid(12.0, 20000);
}

/// Symmetric tridiagonal matrix; off_diagonal[i] couples rows i and i+1.
struct SymmetricTridiagonal
{
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;

    int size() const noexcept { return static_cast<int>(diagonal.size()); }
};

/// Finite-volume discretization of -(1/r)(r u')' + (m^2/r^2 + V) u with u = R / sqrt(r),
/// symmetrized by sqrt(r_i) so that it acts on R_i and approximates -R'' + V_eff R.
/// Unlike the plain three-point stencil with (m^2 - 1/4)/r^2 on the diagonal, this stays
/// second order for m = 0.
inline SymmetricTridiagonal fd_hamiltonian(const PotentialSpec& raw, int m, const Grid& grid)
{
    const PotentialSpec spec = validate(raw);
    if (m < 0) throw InvalidParameter("m", m, "angular momentum must be nonnegative");
    const Grid g = make_grid(grid.r_min, grid.r_max, grid.n_points, grid.regular_origin);
    const double h = g.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const double m2 = static_cast<double>(m) * m;
    const auto n = static_cast<std::size_t>(g.n_points);

    SymmetricTridiagonal t;
    t.diagonal.resize(n);
    t.off_diagonal.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = g.node(static_cast<int>(i));
        const double face_lo = r - 0.5 * h;
        const double face_hi = r + 0.5 * h;
        const double v = potential_value(spec, r) + m2 / (r * r);
        if (!std::isfinite(v)) throw GridError("effective potential overflows at r = " + std::to_string(r));
        t.diagonal[i] = (face_lo + face_hi) / r * inv_h2 + v;
        if (i + 1 < n) t.off_diagonal[i] = -face_hi * inv_h2 / std::sqrt(r * (r + h));
    }
    return t;
}

/// Number of eigenvalues strictly below `shift`, from the signs of the LDL^T pivots of T - shift.
inline int sturm_count(const SymmetricTridiagonal& t, double shift)
{
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    int count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < t.diagonal.size(); ++i) {
        const double coupling = i == 0 ? 0.0 : t.off_diagonal[i - 1] * t.off_diagonal[i - 1] / q;
        q = t.diagonal[i] - shift - coupling;
        if (q == 0.0) q = -tiny;
        if (q < 0.0) ++count;
    }
    return count;
}

inline std::pair<double, double> gershgorin_bounds(const SymmetricTridiagonal& t)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const std::size_t n = t.diagonal.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double radius =
            (i > 0 ? std::abs(t.off_diagonal[i - 1]) : 0.0) + (i + 1 < n ? std::abs(t.off_diagonal[i]) : 0.0);
        lo = std::min(lo, t.diagonal[i] - radius);
        hi = std::max(hi, t.diagonal[i] + radius);
    }
    return {lo, hi};
}

/// Eigenvalue number `index` (0-based, ascending) by bisection on the Sturm count.
inline double bisect_eigenvalue(const SymmetricTridiagonal& t, int index, double tolerance = 1e-10)
{
    auto [lo, hi] = gershgorin_bounds(t);
    for (int it = 0; it < 200 && hi - lo > tolerance; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (sturm_count(t, mid) > index ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

inline std::vector<double> lowest_eigenvalues(const SymmetricTridiagonal& t, int k, double tolerance = 1e-10)
{
    k = std::min(k, t.size());
    std::vector<double> out(static_cast<std::size_t>(std::max(k, 0)));
    for (int i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = bisect_eigenvalue(t, i, tolerance);
    return out;
}

/// Lowest k finite-difference eigenvalues of the radial problem at angular momentum m.
inline std::vector<double> fd_spectrum(const PotentialSpec& spec, int m, const Grid& grid, int k)
{
    return lowest_eigenvalues(fd_hamiltonian(spec, m, grid), k);
}

/// Eigenvector for an (already converged) eigenvalue by inverse iteration.
inline std::vector<double> fd_eigenvector(const SymmetricTridiagonal& t, double eigenvalue)
{
    const std::size_t n = t.diagonal.size();
    const auto& e = t.off_diagonal;
    // Shift slightly off the eigenvalue so the factorization stays nonsingular.
    const double shift = eigenvalue + 1e-9 * std::max(1.0, std::abs(eigenvalue));
    std::vector<double> x(n, 1.0);
    std::vector<double> c(n, 0.0);
    std::vector<double> y(n);
    for (int iter = 0; iter < 3; ++iter) {
        // Thomas algorithm for (T - shift) y = x.
        double denom = t.diagonal[0] - shift;
        if (denom == 0.0) denom = 1e-300;
        if (n > 1) c[0] = e[0] / denom;
        y[0] = x[0] / denom;
        for (std::size_t i = 1; i < n; ++i) {
            denom = t.diagonal[i] - shift - e[i - 1] * c[i - 1];
            if (denom == 0.0) denom = 1e-300;
            if (i + 1 < n) c[i] = e[i] / denom;
            y[i] = (x[i] - e[i - 1] * y[i - 1]) / denom;
        }
        for (std::size_t i = n - 1; i-- > 0;) y[i] -= c[i] * y[i + 1];
        double norm = 0.0;
        for (double v : y) norm += v * v;
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
    }
    return x;
}

/// Sign changes of `v`, ignoring entries below `relative_floor` of the largest magnitude.
inline int sign_changes(std::span<const double> v, double relative_floor = 1e-8)
{
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    int changes = 0;
    int last = 0;
    for (double x : v) {
        if (std::abs(x) <= relative_floor * peak) continue;
        const int s = x > 0.0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

/// 50 log-spaced radii on [0.2, 2.5] at which the closed-form residual is sampled.
inline std::vector<double> residual_sample_points()
{
    std::vector<double> out(50);
    const double lo = std::log(0.2);
    const double hi = std::log(2.5);
    for (int i = 0; i < 50; ++i) out[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / 49.0);
    return out;
}

/// Max over the sample set of |R'' + (E - V_eff) R| / max(1, |E R|) for the a_0 = 1 state.
inline double ode_residual(const QesSolution& sol)
{
    const RadialState st = unnormalized_state(sol);
    double worst = 0.0;
    for (double r : residual_sample_points()) {
        const double res = scaled_ode_residual(st, r);
        if (!std::isfinite(res)) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, res);
    }
    return worst;
}

struct OracleComparison
{
    double closed_form = 0.0;
    double oracle = 0.0;
    double delta = 0.0;
    int oracle_index = -1;
    int oracle_sign_changes = 0;
    double residual = 0.0;
    bool pass = false;
};

struct OracleReport
{
    std::vector<double> eigenvalues;
    std::vector<OracleComparison> matched;
    double residual_max = 0.0;

    bool all_pass() const
    {
        return !matched.empty() &&
               std::all_of(matched.begin(), matched.end(), [](const OracleComparison& c) { return c.pass; });
    }
};

struct OracleThresholds
{
    double energy_absolute = 1e-3;
    double energy_relative = 1e-3;
    double residual = 1e-8;
};

/// Checks closed-form states of one (spec, m) against the finite-difference spectrum.
inline OracleReport cross_validate(std::span<const QesSolution> solutions, const Grid& grid,
                                   const OracleThresholds& thr = {})
{
    OracleReport report;
    if (solutions.empty()) return report;
    const QesSolution& first = solutions.front();
    for (const auto& s : solutions)
        if (!(s.spec == first.spec) || s.m != first.m)
            throw Error("cross_validate needs solutions of a single potential and angular momentum");

    double e_max = first.energy;
    for (const auto& s : solutions) e_max = std::max(e_max, s.energy);
    const SymmetricTridiagonal t = fd_hamiltonian(first.spec, first.m, grid);
    const double ceiling = e_max + std::max(1.0, 0.1 * std::abs(e_max));
    const int k = std::max(1, std::min(sturm_count(t, ceiling) + 1, t.size()));
    report.eigenvalues = lowest_eigenvalues(t, k);

    for (const auto& s : solutions) {
        OracleComparison cmp;
        cmp.closed_form = s.energy;
        std::size_t best = 0;
        for (std::size_t i = 1; i < report.eigenvalues.size(); ++i)
            if (std::abs(report.eigenvalues[i] - s.energy) < std::abs(report.eigenvalues[best] - s.energy)) best = i;
        cmp.oracle_index = static_cast<int>(best);
        cmp.oracle = report.eigenvalues[best];
        cmp.delta = std::abs(cmp.oracle - s.energy);
        const auto vec = fd_eigenvector(t, cmp.oracle);
        cmp.oracle_sign_changes = sign_changes(vec);
        cmp.residual = ode_residual(s);
        cmp.pass = cmp.delta <= std::max(thr.energy_absolute, thr.energy_relative * std::abs(s.energy)) &&
                   cmp.residual <= thr.residual;
        report.residual_max = std::max(report.residual_max, cmp.residual);
        report.matched.push_back(cmp);
    }
    return report;
}

inline OracleReport cross_validate(const QesSolution& solution, const Grid& grid, const OracleThresholds& thr = {})
{
    return cross_validate(std::span<const QesSolution>(&solution, 1), grid, thr);
}

} // namespace qes

#endif
