#ifndef QES_RECURRENCE_HPP
#define QES_RECURRENCE_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "ansatz.hpp"
#include "errors.hpp"
#include "potentials.hpp"

namespace qes {

/// Which coefficient formulas to use. `Corrected` is what substituting the
/// ansatz into the radial equation actually produces; `AsPrinted` keeps the
/// published forms (mixed A_n without alpha^2, singular C_n without the factor
/// beta) for side-by-side auditing.
enum class FormulaSet
{
    Corrected,
    AsPrinted,
};

inline std::string_view formula_set_name(FormulaSet f)
{
    return f == FormulaSet::Corrected ? "corrected" : "as-printed";
}

/// Coefficients of A_n a_n + B_{n+1} a_{n+1} + C_{n+2} a_{n+2} = 0.
///
/// Templated on the scalar so the same formulas can be run with polynomial
/// arithmetic when E, b or c is the unknown of a determinant condition.
template <class T>
struct BasicRow
{
    int n = 0;
    T A{};
    T B{};
    T C{};
};

using RecurrenceRow = BasicRow<double>;

inline void require_matching_family(const PotentialSpec& spec, const AnsatzProfile& prof)
{
    if (spec.family != prof.family)
        throw FamilyMismatch("profile built for " + std::string(family_name(prof.family)) + " used with " +
                             std::string(family_name(spec.family)) + " potential");
}

/// Row n with the energy and the b, c coefficients supplied as scalars of type T.
/// a and d are taken from the spec; they only enter through the profile or as constants.
template <class T>
BasicRow<T> make_row(const PotentialSpec& spec, const AnsatzProfile& prof, int m, int n, const T& energy,
                     const T& coeff_b, const T& coeff_c, FormulaSet formulas = FormulaSet::Corrected)
{
    require_matching_family(spec, prof);
    const double al = prof.alpha;
    const double be = prof.beta;
    const double dl = prof.delta;
    const double nn = static_cast<double>(n);
    const double centrifugal = static_cast<double>(m) * m - 0.25;

    BasicRow<T> row;
    row.n = n;
    switch (spec.family) {
    case Family::Sextic: {
        const double k = dl + 2.0 * nn;
        row.A = T(al * al + (3.0 + 2.0 * dl + 4.0 * nn) * be - spec.a);
        row.B = energy + T((1.0 + 2.0 * dl + 4.0 * nn) * al);
        row.C = T(k * (k - 1.0) - centrifugal);
        break;
    }
    case Family::Mixed: {
        const double k = nn + dl;
        const double shift = formulas == FormulaSet::Corrected ? al * al : 0.0;
        row.A = energy + T(shift + be * (1.0 + 2.0 * nn + 2.0 * dl));
        row.B = T(al * (2.0 * nn + 2.0 * dl)) - coeff_c;
        row.C = T(k * (k - 1.0) - centrifugal);
        break;
    }
    case Family::SingularEvenPower: {
        const double k = dl + 2.0 * nn;
        const double factor = formulas == FormulaSet::Corrected ? be : 1.0;
        row.A = energy + T(al * (1.0 + 2.0 * dl + 4.0 * nn));
        row.B = T(-2.0 * al * be - centrifugal + k * (k - 1.0)) - coeff_b;
        row.C = T(factor * (3.0 - 2.0 * dl - 4.0 * nn)) - coeff_c;
        break;
    }
    }
    return row;
}

inline RecurrenceRow coeff_row(const PotentialSpec& spec, const AnsatzProfile& prof, int m, int n, double energy,
                               FormulaSet formulas = FormulaSet::Corrected)
{
    return make_row<double>(spec, prof, m, n, energy, spec.b, spec.c, formulas);
}

inline std::vector<RecurrenceRow> recurrence_rows(const PotentialSpec& spec, const AnsatzProfile& prof, int m,
                                                  int count, double energy,
                                                  FormulaSet formulas = FormulaSet::Corrected)
{
    std::vector<RecurrenceRow> rows;
    rows.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int n = 0; n < count; ++n) rows.push_back(coeff_row(spec, prof, m, n, energy, formulas));
    return rows;
}

/// Series coefficients a_0..a_p, with a_0 = 1 (physical normalization is applied later).
struct SeriesCoefficients
{
    int p = 0;
    std::vector<double> values{1.0};
};

/// Forward recurrence a_k = -(A_{k-2} a_{k-2} + B_{k-1} a_{k-1}) / C_k, a_{-1} = 0.
inline SeriesCoefficients series_coefficients(const PotentialSpec& spec, const AnsatzProfile& prof, int m, int p,
                                              double energy, FormulaSet formulas = FormulaSet::Corrected)
{
    if (p < 0) throw InvalidParameter("p", p, "truncation order must be nonnegative");
    const auto rows = recurrence_rows(spec, prof, m, p + 1, energy, formulas);

    SeriesCoefficients out;
    out.p = p;
    out.values.assign(static_cast<std::size_t>(p) + 1, 0.0);
    out.values[0] = 1.0;
    for (int k = 1; k <= p; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const double ck = rows[uk].C;
        if (ck == 0.0) throw SingularRecurrence(k);
        double acc = rows[uk - 1].B * out.values[uk - 1];
        if (k >= 2) acc += rows[uk - 2].A * out.values[uk - 2];
        out.values[uk] = -acc / ck;
    }
    return out;
}

/// A_p; the series truncates at order p exactly when this vanishes.
inline double termination_residual(const PotentialSpec& spec, const AnsatzProfile& prof, int m, int p, double energy,
                                   FormulaSet formulas = FormulaSet::Corrected)
{
    return coeff_row(spec, prof, m, p, energy, formulas).A;
}

} // namespace qes

#endif
