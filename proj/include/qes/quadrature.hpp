#ifndef QES_QUADRATURE_HPP
#define QES_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "errors.hpp"

namespace qes {

struct QuadratureResult
{
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
    bool converged = true;
};

namespace detail {

struct SimpsonState
{
    const std::function<double(double)>* f;
    int max_depth;
    int evaluations = 0;
    double error = 0.0;
    bool converged = true;
};

inline double simpson_recurse(SimpsonState& st, double a, double b, double fa, double fm, double fb, double whole,
                              double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = (*st.f)(lm);
    const double frm = (*st.f)(rm);
    st.evaluations += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (std::abs(diff) <= 15.0 * tol || depth >= st.max_depth) {
        if (std::abs(diff) > 15.0 * tol) st.converged = false;
        st.error += std::abs(diff) / 15.0;
        return left + right + diff / 15.0;
    }
    return simpson_recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

} // namespace detail

/// Adaptive Simpson with Richardson correction. [lo, hi] is first split into
/// `panels` equal pieces so narrow features are not missed by the initial sample.
inline QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol,
                                         int panels = 64, int max_depth = 40)
{
    detail::SimpsonState st{&f, max_depth};
    double total = 0.0;
    const double width = (hi - lo) / panels;
    for (int i = 0; i < panels; ++i) {
        const double a = lo + i * width;
        const double b = (i + 1 == panels) ? hi : a + width;
        const double fa = f(a);
        const double fb = f(b);
        const double fm = f(0.5 * (a + b));
        st.evaluations += 3;
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        total += detail::simpson_recurse(st, a, b, fa, fm, fb, whole, tol / panels, 0);
    }
    return {total, st.error, st.evaluations, st.converged};
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre_rule(int n)
{
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        x[lo] = -z;
        x[hi] = z;
        w[lo] = w[hi] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

/// Composite Gauss-Legendre: `points`-point rule on each of `panels` pieces of [lo, hi].
inline double gauss_legendre(const std::function<double(double)>& f, double lo, double hi, int points = 64,
                             int panels = 1)
{
    const auto [x, w] = gauss_legendre_rule(points);
    const double width = (hi - lo) / panels;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double a = lo + k * width;
        const double half = 0.5 * width;
        const double mid = a + half;
        double part = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) part += w[i] * f(mid + half * x[i]);
        total += half * part;
    }
    return total;
}

} // namespace qes

#endif
