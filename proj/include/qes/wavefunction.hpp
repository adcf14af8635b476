#ifndef QES_WAVEFUNCTION_HPP
#define QES_WAVEFUNCTION_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include "ansatz.hpp"
#include "errors.hpp"
#include "polynomial.hpp"
#include "potentials.hpp"
#include "quadrature.hpp"
#include "quantization.hpp"

namespace qes {

/// A closed-form radial eigenfunction N * P(r^step) * r^delta * exp(p(r)).
struct RadialState
{
    QesSolution solution;
    AnsatzProfile profile;
    double normalization = 1.0; ///< N, so that the integral of (N R)^2 over (0, inf) is 1
    int node_count = 0;
};

/// R and its first two radial derivatives.
struct RadialSample
{
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
};

/// Number of distinct positive roots of the polynomial factor sum_k a_k x^k.
inline int node_count(const QesSolution& sol)
{
    const Polynomial poly(sol.coefficients.values);
    int count = 0;
    for (const auto& root : real_roots(poly))
        if (root.value > 0.0) ++count;
    return count;
}

/// State with normalization N = 1 (a_0 = 1 as produced by the recurrence).
inline RadialState unnormalized_state(const QesSolution& sol)
{
    RadialState st;
    st.solution = sol;
    st.profile = build_profile(sol.spec, sol.m);
    st.normalization = 1.0;
    st.node_count = node_count(sol);
    return st;
}

namespace detail {

/// Polynomial factor and its r-derivatives divided by r^delta:
/// F0 = f / r^delta, F1 = f' / r^delta, F2 = f'' / r^delta.
struct SeriesParts
{
    double f0 = 0.0;
    double f1 = 0.0;
    double f2 = 0.0;
};

inline SeriesParts series_parts(const RadialState& st, double r)
{
    SeriesParts out;
    const auto& a = st.solution.coefficients.values;
    const double step = st.profile.step;
    const double r_step = std::pow(r, step);
    double power = 1.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double e = static_cast<double>(k) * step + st.profile.delta;
        const double t = a[k] * power;
        out.f0 += t;
        out.f1 += t * e / r;
        out.f2 += t * e * (e - 1.0) / (r * r);
        power *= r_step;
    }
    return out;
}

/// N * r^delta * exp(p), computed in log space so it underflows cleanly to 0.
inline double envelope(const RadialState& st, double exponent, double r)
{
    return st.normalization * std::exp(exponent + st.profile.delta * std::log(r));
}

} // namespace detail

inline double radial_value(const RadialState& st, double r)
{
    require_positive_radius(r);
    const Exponent ex = prefactor_and_derivatives(st.profile, r);
    const double env = detail::envelope(st, ex.value, r);
    if (env == 0.0) return 0.0;
    return env * detail::series_parts(st, r).f0;
}

inline RadialSample radial_derivatives(const RadialState& st, double r)
{
    require_positive_radius(r);
    const Exponent ex = prefactor_and_derivatives(st.profile, r);
    const double env = detail::envelope(st, ex.value, r);
    if (env == 0.0) return {};
    const auto s = detail::series_parts(st, r);
    return {env * s.f0, env * (s.f1 + ex.first * s.f0),
            env * (s.f2 + 2.0 * ex.first * s.f1 + (ex.second + ex.first * ex.first) * s.f0)};
}

/// |R'' + (E - V_eff) R| / max(1, |E R|) at one radius.
inline double scaled_ode_residual(const RadialState& st, double r)
{
    const auto d = radial_derivatives(st, r);
    const auto& sol = st.solution;
    const double veff = effective_potential(sol.spec, sol.m, r);
    const double res = d.second + (sol.energy - veff) * d.value;
    return std::abs(res) / std::max(1.0, std::abs(sol.energy * d.value));
}

/// Interval outside which R^2 is below 1e-16 of its peak. The lower end is 0 unless
/// the exponent suppresses the origin (singular family).
inline std::pair<double, double> integration_window(const RadialState& st)
{
    constexpr int samples = 4000;
    const double log_lo = std::log(1e-4);
    const double log_hi = std::log(1e3);
    std::vector<double> rs(samples);
    std::vector<double> vals(samples);
    double peak = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double r = std::exp(log_lo + (log_hi - log_lo) * i / (samples - 1));
        const double v = radial_value(st, r);
        rs[static_cast<std::size_t>(i)] = r;
        vals[static_cast<std::size_t>(i)] = v * v;
        peak = std::max(peak, v * v);
    }
    if (!(peak > 0.0) || !std::isfinite(peak)) throw QuadratureFailure("radial function has no finite peak");
    const double floor = 1e-16 * peak;
    std::size_t first = 0;
    while (first < rs.size() && vals[first] < floor) ++first;
    std::size_t last = rs.size() - 1;
    while (last > 0 && vals[last] < floor) --last;
    if (last + 1 >= rs.size()) throw QuadratureFailure("radial function does not decay within r = 1e3");
    const double hi = rs[last + 1];
    double lo = 0.0;
    if (st.profile.family == Family::SingularEvenPower && first > 0) lo = rs[first - 1];
    return {lo, hi};
}

namespace detail {

inline QuadratureResult integrate_product(const RadialState& s1, const RadialState& s2, double lo, double hi,
                                          double rel_tol)
{
    auto integrand = [&](double r) { return r > 0.0 ? radial_value(s1, r) * radial_value(s2, r) : 0.0; };
    const std::function<double(double)> f = integrand;
    const double rough = std::abs(gauss_legendre(f, lo, hi, 64, 8));
    return adaptive_simpson(f, lo, hi, rel_tol * std::max(rough, 1e-300));
}

} // namespace detail

/// Integral of R^2 over (0, inf) for the state as given (including its N).
inline double norm_squared(const RadialState& st, double rel_tol = 1e-11)
{
    const auto [lo, hi] = integration_window(st);
    const auto res = detail::integrate_product(st, st, lo, hi, rel_tol);
    if (!res.converged || !(res.value > 0.0)) throw QuadratureFailure("norm integral did not converge");
    return res.value;
}

/// Scales the a_0 = 1 solution so that the integral of R^2 over (0, inf) is 1.
inline RadialState normalize(const QesSolution& sol)
{
    RadialState st = unnormalized_state(sol);
    const double a0 = sol.coefficients.values.front();
    st.normalization = (a0 < 0.0 ? -1.0 : 1.0) / std::sqrt(norm_squared(st));
    return st;
}

/// Integral of R1 R2 over (0, inf).
inline double overlap(const RadialState& s1, const RadialState& s2, double rel_tol = 1e-11)
{
    const auto w1 = integration_window(s1);
    const auto w2 = integration_window(s2);
    const double lo = std::min(w1.first, w2.first);
    const double hi = std::max(w1.second, w2.second);
    // The integrand can cancel to ~0, so the tolerance is set by the norms, not by the result.
    auto sq = [&](const RadialState& s) { return std::sqrt(norm_squared(s, rel_tol)); };
    const double scale = sq(s1) * sq(s2);
    auto integrand = [&](double r) { return r > 0.0 ? radial_value(s1, r) * radial_value(s2, r) : 0.0; };
    const auto res = adaptive_simpson(integrand, lo, hi, rel_tol * scale);
    if (!res.converged) throw QuadratureFailure("overlap integral did not converge");
    return res.value;
}

/// psi(r, phi) = (2 pi)^{-1/2} r^{-1/2} R(r) exp(i sign m phi).
inline std::complex<double> full_wavefunction(const RadialState& st, double r, double phi, int sign)
{
    require_positive_radius(r);
    if (sign != 1 && sign != -1) throw InvalidParameter("sign", sign, "angular sign must be +1 or -1");
    const double radial = radial_value(st, r) / std::sqrt(2.0 * std::numbers::pi * r);
    return std::polar(1.0, static_cast<double>(sign * st.solution.m) * phi) * radial;
}

} // namespace qes

#endif
