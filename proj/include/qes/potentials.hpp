#ifndef QES_POTENTIALS_HPP
#define QES_POTENTIALS_HPP

#include <cmath>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace qes {

// Units: hbar = 1, mass = 1/2, so the radial operator is -d^2/dr^2 + V_eff.

enum class Family
{
    Sextic,            ///< V = a r^2 + b r^4 + c r^6
    Mixed,             ///< V = a r + b r^2 + c / r
    SingularEvenPower, ///< V = a r^2 + b r^-2 + c r^-4 + d r^-6
};

inline std::string_view family_name(Family f)
{
    switch (f) {
    case Family::Sextic: return "sextic";
    case Family::Mixed: return "mixed";
    case Family::SingularEvenPower: return "singular";
    }
    return "unknown";
}

inline Family parse_family(std::string_view name)
{
    if (name == "sextic") return Family::Sextic;
    if (name == "mixed") return Family::Mixed;
    if (name == "singular") return Family::SingularEvenPower;
    throw Error("unknown potential family '" + std::string(name) + "'");
}

struct PotentialSpec
{
    Family family = Family::Sextic;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0; ///< singular family only

    static PotentialSpec sextic(double a, double b, double c) { return {Family::Sextic, a, b, c, 0.0}; }
    static PotentialSpec mixed(double a, double b, double c) { return {Family::Mixed, a, b, c, 0.0}; }
    static PotentialSpec singular(double a, double b, double c, double d)
    {
        return {Family::SingularEvenPower, a, b, c, d};
    }

    friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;
};

/// Returns the spec unchanged if every square root taken by the ansatz is real
/// and finite; throws InvalidParameter otherwise.
inline PotentialSpec validate(const PotentialSpec& spec)
{
    auto finite = [](const char* name, double v) {
        if (!std::isfinite(v)) throw InvalidParameter(name, v, "coefficient must be finite");
    };
    finite("a", spec.a);
    finite("b", spec.b);
    finite("c", spec.c);
    finite("d", spec.d);

    switch (spec.family) {
    case Family::Sextic:
        if (!(spec.c > 0.0)) throw InvalidParameter("c", spec.c, "beta^2=c requires c>0");
        break;
    case Family::Mixed:
        if (!(spec.b > 0.0)) throw InvalidParameter("b", spec.b, "beta^2=b requires b>0");
        break;
    case Family::SingularEvenPower:
        if (!(spec.a > 0.0)) throw InvalidParameter("a", spec.a, "alpha^2=a requires a>0");
        if (spec.d == 0.0) throw InvalidParameter("d", spec.d, "mu=c/(2 sqrt d) undefined");
        if (spec.d < 0.0) throw InvalidParameter("d", spec.d, "beta^2=d requires d>0");
        if (spec.c < 0.0) throw InvalidParameter("c", spec.c, "c>=0 required for a positive leading power");
        break;
    }
    return spec;
}

inline void require_positive_radius(double r)
{
    if (!(r > 0.0)) throw DomainError("radius must be positive, got " + std::to_string(r));
}

inline double potential_value(const PotentialSpec& spec, double r)
{
    require_positive_radius(r);
    const double r2 = r * r;
    switch (spec.family) {
    case Family::Sextic: return r2 * (spec.a + r2 * (spec.b + r2 * spec.c));
    case Family::Mixed: return spec.a * r + spec.b * r2 + spec.c / r;
    case Family::SingularEvenPower: {
        const double s = 1.0 / r2;
        return spec.a * r2 + s * (spec.b + s * (spec.c + s * spec.d));
    }
    }
    return 0.0;
}

/// (m^2 - 1/4) / r^2, left over from the r^{-1/2} reduction of the 2D Laplacian.
inline double centrifugal_term(int m, double r)
{
    const double mm = static_cast<double>(m);
    return (mm * mm - 0.25) / (r * r);
}

inline double effective_potential(const PotentialSpec& spec, int m, double r)
{
    require_positive_radius(r);
    if (m < 0) throw InvalidParameter("m", m, "angular momentum must be nonnegative");
    return potential_value(spec, r) + centrifugal_term(m, r);
}

} // namespace qes

#endif
