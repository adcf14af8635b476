#ifndef QES_QUANTIZATION_HPP
#define QES_QUANTIZATION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ansatz.hpp"
#include "errors.hpp"
#include "polynomial.hpp"
#include "potentials.hpp"
#include "recurrence.hpp"

namespace qes {

/// Determinant of the (p+1)x(p+1) tridiagonal matrix with diagonal B_0..B_p,
/// superdiagonal C_1..C_p and subdiagonal A_0..A_{p-1}:
///   D_{-1} = 1, D_0 = B_0, D_k = B_k D_{k-1} - A_{k-1} C_k D_{k-2}.
template <class T>
T continuant(std::span<const BasicRow<T>> rows, int p)
{
    if (p < 0 || static_cast<std::size_t>(p) >= rows.size())
        throw InvalidParameter("p", p, "continuant needs rows 0..p");
    T before(1.0);
    T current = rows[0].B;
    for (int k = 1; k <= p; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        T next = rows[uk].B * current - rows[uk - 1].A * rows[uk].C * before;
        before = std::move(current);
        current = std::move(next);
    }
    return current;
}

inline double continuant(const std::vector<RecurrenceRow>& rows, int p)
{
    return continuant<double>(std::span<const RecurrenceRow>(rows), p);
}

/// Magnitude against which a continuant value is judged to be zero: the larger of
/// prod max(1, |B_k|) and the size of the terms the recursion actually sums.
inline double continuant_scale(std::span<const RecurrenceRow> rows, int p)
{
    double product = 1.0;
    double before = 1.0;
    double current = std::abs(rows[0].B);
    product *= std::max(1.0, std::abs(rows[0].B));
    for (int k = 1; k <= p; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        product *= std::max(1.0, std::abs(rows[uk].B));
        const double next = std::abs(rows[uk].B) * current + std::abs(rows[uk - 1].A * rows[uk].C) * before;
        before = current;
        current = next;
    }
    return std::max(product, current);
}

struct Tolerances
{
    double termination = 1e-9;
    double determinant = 1e-9;
};

struct SolveOptions
{
    FormulaSet formulas = FormulaSet::Corrected;
    Tolerances tolerances{};
    RealRootOptions roots{};
};

/// One closed-form bound state.
struct QesSolution
{
    PotentialSpec spec;
    int m = 0;
    int p = 0;
    double energy = 0.0;
    SeriesCoefficients coefficients;
    double termination_residual = 0.0;
    double determinant_residual = 0.0;
    double determinant_scale = 1.0;
    int multiplicity = 1;
    FormulaSet formulas = FormulaSet::Corrected;
    std::string note; ///< set when a closed form had to be coerced (e.g. a non-real root)
};

namespace detail {

inline std::vector<BasicRow<Polynomial>> polynomial_rows(const PotentialSpec& spec, const AnsatzProfile& prof, int m,
                                                         int p, const Polynomial& energy, const Polynomial& b,
                                                         const Polynomial& c, FormulaSet formulas)
{
    std::vector<BasicRow<Polynomial>> rows;
    rows.reserve(static_cast<std::size_t>(p) + 1);
    for (int n = 0; n <= p; ++n) rows.push_back(make_row<Polynomial>(spec, prof, m, n, energy, b, c, formulas));
    return rows;
}

inline std::vector<double> root_values(const Polynomial& det, const RealRootOptions& opts, const char* what)
{
    if (det.degree() < 1) throw NoRealRoots(std::string("determinant is constant in ") + what);
    std::vector<double> out;
    for (const auto& root : real_roots(det, opts)) out.push_back(root.value);
    if (out.empty()) throw NoRealRoots(std::string("determinant has no real roots in ") + what);
    return out;
}

inline void require_order(int m, int p)
{
    if (m < 0) throw InvalidParameter("m", m, "angular momentum must be nonnegative");
    if (p < 0) throw InvalidParameter("p", p, "truncation order must be nonnegative");
}

/// Sorts candidate values by distance to `target`.
inline std::vector<double> nearest_first(std::vector<double> values, double target)
{
    std::stable_sort(values.begin(), values.end(),
                     [target](double x, double y) { return std::abs(x - target) < std::abs(y - target); });
    return values;
}

inline double sextic_termination_scale(const PotentialSpec& spec, const AnsatzProfile& prof, int p)
{
    return std::max({1.0, std::abs(spec.a), prof.alpha * prof.alpha,
                     std::abs(prof.beta) * (3.0 + 2.0 * prof.delta + 4.0 * p)});
}

} // namespace detail

// ---------------------------------------------------------------------------
// Sextic family: A_p is energy independent and fixes a; D_p(E) has degree p+1.

/// Two of {a, b, c} known; the third is solved from A_p = 0, i.e.
/// a + 2 sqrt(c) (2 + m + 2p) - b^2 / (4c) = 0.
struct SexticKnown
{
    std::optional<double> a;
    std::optional<double> b;
    std::optional<double> c;
};

/// Returns the admissible value(s) of the missing coefficient. Solving for b
/// yields the pair -|b|, +|b| since only b^2 enters.
inline std::vector<double> sextic_constraint_solve(int m, int p, const SexticKnown& known)
{
    detail::require_order(m, p);
    const double k = 2.0 + m + 2.0 * p;
    const int given = int(known.a.has_value()) + int(known.b.has_value()) + int(known.c.has_value());
    if (given != 2) throw Error("sextic constraint needs exactly two of a, b, c");

    if (!known.a) {
        const double c = *known.c;
        const double b = *known.b;
        if (!(c > 0.0)) throw InvalidParameter("c", c, "beta^2=c requires c>0");
        return {b * b / (4.0 * c) - 2.0 * std::sqrt(c) * k};
    }
    if (!known.b) {
        const double c = *known.c;
        if (!(c > 0.0)) throw InvalidParameter("c", c, "beta^2=c requires c>0");
        const double b2 = 4.0 * c * (*known.a + 2.0 * std::sqrt(c) * k);
        if (b2 < 0.0) throw NoSolution("b^2 = 4c(a + 2 sqrt(c)(2+m+2p)) is negative");
        const double b = std::sqrt(b2);
        if (b == 0.0) return {0.0};
        return {-b, b};
    }

    // Solve for c > 0: f(c) = a + 2 k sqrt(c) - b^2 / (4c) is increasing on (0, inf).
    const double a = *known.a;
    const double b2 = *known.b * *known.b;
    auto f = [&](double c) { return a + 2.0 * k * std::sqrt(c) - b2 / (4.0 * c); };
    if (b2 == 0.0) {
        if (!(a < 0.0)) throw NoSolution("b = 0 requires a < 0 for a positive c");
        const double root = -a / (2.0 * k);
        return {root * root};
    }
    double lo = 1.0;
    double hi = 1.0;
    for (int i = 0; i < 2000 && f(lo) > 0.0; ++i) lo *= 0.5;
    for (int i = 0; i < 2000 && f(hi) < 0.0; ++i) hi *= 2.0;
    if (!(f(lo) <= 0.0 && f(hi) >= 0.0)) throw NoSolution("could not bracket the sextic constraint in c");
    for (int i = 0; i < 400 && hi - lo > 1e-16 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi)};
}

/// Real roots of D_p(E) with their multiplicities.
inline std::vector<RealRoot> sextic_energy_roots(const PotentialSpec& raw, int m, int p, const SolveOptions& opts = {})
{
    detail::require_order(m, p);
    const PotentialSpec spec = validate(raw);
    if (spec.family != Family::Sextic) throw FamilyMismatch("sextic_energies needs a sextic potential");
    const AnsatzProfile prof = build_profile(spec, m);

    const double residual = termination_residual(spec, prof, m, p, 0.0, opts.formulas);
    if (std::abs(residual) > opts.tolerances.termination * detail::sextic_termination_scale(spec, prof, p)) {
        const auto admissible = sextic_constraint_solve(m, p, {std::nullopt, spec.b, spec.c});
        throw ConstraintViolated("termination condition A_" + std::to_string(p) + " = 0 violated", "a", residual,
                                 admissible);
    }

    if (opts.formulas == FormulaSet::AsPrinted && p <= 1) {
        const double root_c = std::sqrt(spec.c);
        if (p == 0) return {{spec.b * (1.0 + m) / root_c, 1}};
        const double disc = spec.b * spec.b * (2.0 + m) - 4.0 * spec.c * (1.0 + m) * (2.0 + 2.0 * root_c * (2.0 + m));
        const double centre = spec.b * (2.0 + m) / root_c;
        if (disc < 0.0) return {{centre, 2}};
        const double half = std::sqrt(disc) / root_c;
        return {{centre - half, 1}, {centre + half, 1}};
    }

    const auto rows = detail::polynomial_rows(spec, prof, m, p, Polynomial::variable(), Polynomial(spec.b),
                                              Polynomial(spec.c), opts.formulas);
    const Polynomial det = continuant<Polynomial>(std::span<const BasicRow<Polynomial>>(rows), p);
    if (det.degree() < 1) throw NoRealRoots("determinant is constant in E");
    auto roots = real_roots(det, opts.roots);
    if (roots.empty()) throw NoRealRoots("determinant has no real roots in E");
    return roots;
}

inline std::vector<double> sextic_energies(const PotentialSpec& spec, int m, int p, const SolveOptions& opts = {})
{
    std::vector<double> out;
    for (const auto& root : sextic_energy_roots(spec, m, p, opts)) out.push_back(root.value);
    return out;
}

// ---------------------------------------------------------------------------
// Mixed family: A_p = 0 fixes E; D_p is a polynomial of degree p+1 in c.

inline double mixed_energy(const PotentialSpec& raw, int m, int p, FormulaSet formulas = FormulaSet::Corrected)
{
    detail::require_order(m, p);
    const PotentialSpec spec = validate(raw);
    if (spec.family != Family::Mixed) throw FamilyMismatch("mixed_energy needs a mixed potential");
    const double base = 2.0 * std::sqrt(spec.b) * (1.0 + m + p);
    if (formulas == FormulaSet::AsPrinted) return base;
    return base - spec.a * spec.a / (4.0 * spec.b);
}

/// Sorted admissible Coulomb coefficients c for given a, b.
inline std::vector<double> mixed_coulomb_solve(double a, double b, int m, int p, const SolveOptions& opts = {})
{
    detail::require_order(m, p);
    const PotentialSpec spec = validate(PotentialSpec::mixed(a, b, 0.0));
    const double energy = mixed_energy(spec, m, p, opts.formulas);

    if (opts.formulas == FormulaSet::AsPrinted && p <= 1) {
        const double root_b = std::sqrt(b);
        if (p == 0) return {a * (1.0 + 2.0 * m) / (2.0 * root_b)};
        // (c + u)(c + v) = w
        const double u = (1.0 + 2.0 * m) * a / (2.0 * root_b);
        const double v = (3.0 + 2.0 * m) * a / (2.0 * root_b);
        const double w = 2.0 * root_b * (1.0 + 2.0 * m);
        const double disc = (u - v) * (u - v) + 4.0 * w;
        if (disc < 0.0) throw NoRealRoots("printed mixed p=1 condition has no real c");
        const double s = std::sqrt(disc);
        return {0.5 * (-(u + v) - s), 0.5 * (-(u + v) + s)};
    }

    const AnsatzProfile prof = build_profile(spec, m);
    const auto rows = detail::polynomial_rows(spec, prof, m, p, Polynomial(energy), Polynomial(b),
                                              Polynomial::variable(), opts.formulas);
    return detail::root_values(continuant<Polynomial>(std::span<const BasicRow<Polynomial>>(rows), p), opts.roots,
                               "c");
}

// ---------------------------------------------------------------------------
// Singular even-power family: A_p = 0 fixes E; D_p is a polynomial in b.

inline double singular_energy(const PotentialSpec& raw, int m, int p)
{
    detail::require_order(m, p);
    const PotentialSpec spec = validate(raw);
    if (spec.family != Family::SingularEvenPower) throw FamilyMismatch("singular_energy needs a singular potential");
    const double mu = spec.c / (2.0 * std::sqrt(spec.d));
    return std::sqrt(spec.a) * (4.0 + 4.0 * p + 2.0 * mu);
}

/// Sorted admissible inverse-square coefficients b for given a, c, d.
inline std::vector<double> singular_b_solve(double a, double c, double d, int m, int p, const SolveOptions& opts = {})
{
    detail::require_order(m, p);
    const PotentialSpec spec = validate(PotentialSpec::singular(a, 0.0, c, d));
    const double energy = singular_energy(spec, m, p);

    if (opts.formulas == FormulaSet::AsPrinted && p <= 1) {
        const double mu = c / (2.0 * std::sqrt(d));
        const double shift = 2.0 * std::sqrt(a * d) + static_cast<double>(m) * m;
        if (p == 0) return {(1.0 + mu) * (1.0 + mu) - shift};
        // With x = -b - shift: (x + (1+mu)^2)(x + (3+mu)^2) = 16 sqrt(ad).
        const double u = (1.0 + mu) * (1.0 + mu);
        const double v = (3.0 + mu) * (3.0 + mu);
        const double disc = (u - v) * (u - v) + 64.0 * std::sqrt(a * d);
        const double s = std::sqrt(disc);
        const double x1 = 0.5 * (-(u + v) - s);
        const double x2 = 0.5 * (-(u + v) + s);
        std::vector<double> out{-x1 - shift, -x2 - shift};
        std::sort(out.begin(), out.end());
        return out;
    }

    const AnsatzProfile prof = build_profile(spec, m);
    const auto rows = detail::polynomial_rows(spec, prof, m, p, Polynomial(energy), Polynomial::variable(),
                                              Polynomial(c), opts.formulas);
    return detail::root_values(continuant<Polynomial>(std::span<const BasicRow<Polynomial>>(rows), p), opts.roots,
                               "b");
}

// ---------------------------------------------------------------------------

/// Closed-form energies and the admissible value of the constrained coefficient
/// (a for sextic, c for mixed, b for singular), computed with either formula set.
/// The constrained coefficient of `spec` is ignored.
struct ClosedFormValues
{
    std::string parameter;
    std::vector<double> parameter_values;
    std::vector<double> energies;
    bool nonreal_energy = false;
};

inline ClosedFormValues closed_form_values(const PotentialSpec& spec, int m, int p, FormulaSet formulas)
{
    ClosedFormValues out;
    SolveOptions opts;
    opts.formulas = formulas;
    switch (spec.family) {
    case Family::Sextic: {
        out.parameter = "a";
        out.parameter_values = sextic_constraint_solve(m, p, {std::nullopt, spec.b, spec.c});
        PotentialSpec fixed = spec;
        fixed.a = out.parameter_values.front();
        for (const auto& root : sextic_energy_roots(fixed, m, p, opts)) {
            out.energies.push_back(root.value);
            if (formulas == FormulaSet::AsPrinted && p == 1 && root.multiplicity == 2) out.nonreal_energy = true;
        }
        break;
    }
    case Family::Mixed:
        out.parameter = "c";
        out.parameter_values = mixed_coulomb_solve(spec.a, spec.b, m, p, opts);
        out.energies = {mixed_energy(spec, m, p, formulas)};
        break;
    case Family::SingularEvenPower:
        out.parameter = "b";
        out.parameter_values = singular_b_solve(spec.a, spec.c, spec.d, m, p, opts);
        out.energies = {singular_energy(spec, m, p)};
        break;
    }
    return out;
}

/// Builds the state for a given energy without checking either quantization
/// condition; the residual fields report how far the candidate is from one.
inline QesSolution make_solution(const PotentialSpec& raw, int m, int p, double energy,
                                 FormulaSet formulas = FormulaSet::Corrected, int multiplicity = 1)
{
    detail::require_order(m, p);
    const PotentialSpec spec = validate(raw);
    const AnsatzProfile prof = build_profile(spec, m);
    QesSolution sol;
    sol.spec = spec;
    sol.m = m;
    sol.p = p;
    sol.energy = energy;
    sol.multiplicity = multiplicity;
    sol.formulas = formulas;
    sol.coefficients = series_coefficients(spec, prof, m, p, energy, formulas);
    const auto rows = recurrence_rows(spec, prof, m, p + 1, energy, formulas);
    sol.termination_residual = rows.back().A;
    sol.determinant_residual = continuant(rows, p);
    sol.determinant_scale = continuant_scale(rows, p);
    return sol;
}

/// All closed-form states of `spec` at angular momentum m and truncation order p.
///
/// Sextic: checks A_p = 0 and returns one state per real root of D_p(E).
/// Mixed / singular: fixes E from A_p = 0, then requires the given c (mixed) or
/// b (singular) to be a root of D_p.
inline std::vector<QesSolution> solve(const PotentialSpec& raw, int m, int p, const SolveOptions& opts = {})
{
    detail::require_order(m, p);
    const PotentialSpec spec = validate(raw);
    std::vector<QesSolution> out;

    if (spec.family == Family::Sextic) {
        const auto roots = sextic_energy_roots(spec, m, p, opts);
        for (const auto& root : roots) {
            out.push_back(make_solution(spec, m, p, root.value, opts.formulas, root.multiplicity));
            if (opts.formulas == FormulaSet::AsPrinted && p == 1 && roots.size() == 1)
                out.back().note = "closed-form energy is non-real; real part used";
        }
        return out;
    }

    const bool mixed = spec.family == Family::Mixed;
    const double energy =
        mixed ? mixed_energy(spec, m, p, opts.formulas) : singular_energy(spec, m, p);
    const char* param_name = mixed ? "c" : "b";
    const double param = mixed ? spec.c : spec.b;
    QesSolution sol = make_solution(spec, m, p, energy, opts.formulas);

    auto admissible = [&] {
        return mixed ? mixed_coulomb_solve(spec.a, spec.b, m, p, opts)
                     : singular_b_solve(spec.a, spec.c, spec.d, m, p, opts);
    };

    if (opts.formulas == FormulaSet::Corrected) {
        if (std::abs(sol.determinant_residual) > opts.tolerances.determinant * sol.determinant_scale) {
            std::vector<double> nearest;
            try {
                nearest = detail::nearest_first(admissible(), param);
            } catch (const NoRealRoots&) {
            }
            throw ConstraintViolated(std::string("determinant condition violated for ") + param_name, param_name,
                                     sol.determinant_residual, nearest);
        }
    } else {
        const auto nearest = detail::nearest_first(admissible(), param);
        const double gap = param - nearest.front();
        if (std::abs(gap) > opts.tolerances.determinant * std::max(1.0, std::abs(nearest.front())))
            throw ConstraintViolated(std::string("printed closed-form condition violated for ") + param_name,
                                     param_name, gap, nearest);
    }
    out.push_back(std::move(sol));
    return out;
}

} // namespace qes

#endif
