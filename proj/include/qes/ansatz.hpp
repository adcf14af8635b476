#ifndef QES_ANSATZ_HPP
#define QES_ANSATZ_HPP

#include <cmath>

#include "potentials.hpp"

namespace qes {

/// Parameters of R(r) = exp(p(r)) * sum_n a_n r^(step*n + delta).
///
/// The exponent is
///   sextic:   p = alpha r^2 / 2 + beta r^4 / 4
///   mixed:    p = alpha r     + beta r^2 / 2
///   singular: p = alpha r^2 / 2 + beta r^-2 / 2
/// with the decaying root branch always selected, so beta < 0.
struct AnsatzProfile
{
    Family family = Family::Sextic;
    double alpha = 0.0;
    double beta = 0.0;
    double delta = 0.0;
    double mu = 0.0; ///< c / (2 sqrt d), singular family only
    int step = 2;
};

inline AnsatzProfile build_profile(const PotentialSpec& raw, int m)
{
    const PotentialSpec spec = validate(raw);
    if (m < 0) throw InvalidParameter("m", m, "angular momentum must be nonnegative");

    AnsatzProfile prof;
    prof.family = spec.family;
    const double half_m = static_cast<double>(m) + 0.5;
    switch (spec.family) {
    case Family::Sextic: {
        const double root_c = std::sqrt(spec.c);
        prof.beta = -root_c;
        prof.alpha = -spec.b / (2.0 * root_c);
        prof.delta = half_m;
        prof.step = 2;
        break;
    }
    case Family::Mixed: {
        const double root_b = std::sqrt(spec.b);
        prof.beta = -root_b;
        prof.alpha = -spec.a / (2.0 * root_b);
        prof.delta = half_m;
        prof.step = 1;
        break;
    }
    case Family::SingularEvenPower: {
        const double root_d = std::sqrt(spec.d);
        prof.alpha = -std::sqrt(spec.a);
        prof.beta = -root_d;
        prof.mu = spec.c / (2.0 * root_d);
        // Indicial root of C_0 = beta (3 - 2 delta) - c = 0.
        prof.delta = 0.5 * (3.0 - spec.c / prof.beta);
        prof.step = 2;
        break;
    }
    }
    return prof;
}

/// p(r) with its first and second derivatives.
struct Exponent
{
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
};

inline Exponent prefactor_and_derivatives(const AnsatzProfile& prof, double r)
{
    require_positive_radius(r);
    const double al = prof.alpha;
    const double be = prof.beta;
    const double r2 = r * r;
    switch (prof.family) {
    case Family::Sextic:
        return {0.5 * al * r2 + 0.25 * be * r2 * r2, al * r + be * r2 * r, al + 3.0 * be * r2};
    case Family::Mixed:
        return {al * r + 0.5 * be * r2, al + be * r, be};
    case Family::SingularEvenPower: {
        const double inv2 = 1.0 / r2;
        return {0.5 * al * r2 + 0.5 * be * inv2, al * r - be * inv2 / r, al + 3.0 * be * inv2 * inv2};
    }
    }
    return {};
}

} // namespace qes

#endif
