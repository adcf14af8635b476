#ifndef QES_POLYNOMIAL_HPP
#define QES_POLYNOMIAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "errors.hpp"

namespace qes {

/// Dense real polynomial, coefficients stored lowest power first.
class Polynomial
{
  public:
    Polynomial() = default;
    Polynomial(double constant) : coeffs_{constant} {} // NOLINT: implicit lift of scalars is intended
    explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    /// The polynomial x.
    static Polynomial variable() { return Polynomial(std::vector<double>{0.0, 1.0}); }

    /// Degree of the polynomial; the zero polynomial has degree -1.
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coefficients() const noexcept { return coeffs_; }
    double operator[](std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : 0.0; }

    template <class T>
    T operator()(T x) const
    {
        T acc(0.0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + T(*it);
        return acc;
    }

    Polynomial derivative() const
    {
        if (coeffs_.size() <= 1) return Polynomial();
        std::vector<double> out(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) out[i - 1] = static_cast<double>(i) * coeffs_[i];
        return Polynomial(std::move(out));
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o)
    {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        trim();
        return *this;
    }
    Polynomial& operator*=(const Polynomial& o)
    {
        *this = *this * o;
        return *this;
    }

    friend Polynomial operator+(Polynomial l, const Polynomial& r) { return l += r; }
    friend Polynomial operator-(Polynomial l, const Polynomial& r) { return l -= r; }
    friend Polynomial operator-(const Polynomial& p) { return Polynomial(0.0) - p; }
    friend Polynomial operator*(const Polynomial& l, const Polynomial& r)
    {
        if (l.coeffs_.empty() || r.coeffs_.empty()) return Polynomial();
        std::vector<double> out(l.coeffs_.size() + r.coeffs_.size() - 1, 0.0);
        for (std::size_t i = 0; i < l.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < r.coeffs_.size(); ++j) out[i + j] += l.coeffs_[i] * r.coeffs_[j];
        return Polynomial(std::move(out));
    }

  private:
    void trim()
    {
        while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
    }

    std::vector<double> coeffs_;
};

struct DurandKernerOptions
{
    int max_iterations = 128;
    double tolerance = 1e-13;
};

/// All complex roots of `poly` by simultaneous Weierstrass (Durand-Kerner) iteration.
inline std::vector<std::complex<double>> durand_kerner(const Polynomial& poly, DurandKernerOptions opts = {})
{
    using cplx = std::complex<double>;
    const int n = poly.degree();
    if (n < 1) return {};

    const double lead = poly[static_cast<std::size_t>(n)];
    std::vector<double> monic(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) monic[static_cast<std::size_t>(i)] = poly[static_cast<std::size_t>(i)] / lead;
    if (n == 1) return {cplx(-monic[0], 0.0)};

    auto eval = [&](cplx z) {
        cplx acc(1.0, 0.0);
        for (int i = n - 1; i >= 0; --i) acc = acc * z + monic[static_cast<std::size_t>(i)];
        return acc;
    };

    // Fujiwara bound on the root moduli sets the starting circle.
    double radius = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double ck = std::abs(monic[static_cast<std::size_t>(n - k)]);
        radius = std::max(radius, std::pow(ck, 1.0 / k));
    }
    radius = radius > 0.0 ? 2.0 * radius : 1.0;

    std::vector<cplx> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        z[static_cast<std::size_t>(k)] = std::polar(radius, 2.0 * std::numbers::pi * k / n + 0.4);

    for (int it = 0; it < opts.max_iterations; ++it) {
        double max_step = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            cplx denom(1.0, 0.0);
            for (std::size_t j = 0; j < z.size(); ++j)
                if (j != i) denom *= z[i] - z[j];
            if (denom == cplx(0.0, 0.0)) denom = cplx(1e-300, 0.0);
            const cplx step = eval(z[i]) / denom;
            z[i] -= step;
            max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(z[i])));
        }
        if (max_step < opts.tolerance) break;
    }
    return z;
}

struct RealRoot
{
    double value = 0.0;
    int multiplicity = 1;
};

struct RealRootOptions
{
    DurandKernerOptions dk{};
    double imaginary_tolerance = 1e-8; ///< |Im z| < tol * (1 + |Re z|) counts as real
    double merge_tolerance = 1e-7;     ///< roots closer than tol * (1 + |x|) are merged
};

/// Sorted real roots of `poly`; nearly coincident roots are reported once with
/// their combined multiplicity.
inline std::vector<RealRoot> real_roots(const Polynomial& poly, RealRootOptions opts = {})
{
    std::vector<double> xs;
    const Polynomial dpoly = poly.derivative();
    for (const auto& z : durand_kerner(poly, opts.dk)) {
        if (std::abs(z.imag()) >= opts.imaginary_tolerance * (1.0 + std::abs(z.real()))) continue;
        double x = z.real();
        // Newton polish on the real line, kept only while it lowers |P|.
        for (int k = 0; k < 4; ++k) {
            const double fx = poly(x);
            const double dfx = dpoly(x);
            if (fx == 0.0 || dfx == 0.0) break;
            const double next = x - fx / dfx;
            if (!(std::abs(poly(next)) < std::abs(fx))) break;
            x = next;
        }
        xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());

    std::vector<RealRoot> out;
    for (double x : xs) {
        if (!out.empty() && std::abs(x - out.back().value) < opts.merge_tolerance * (1.0 + std::abs(x))) {
            auto& last = out.back();
            last.value = (last.value * last.multiplicity + x) / (last.multiplicity + 1);
            ++last.multiplicity;
        } else {
            out.push_back({x, 1});
        }
    }
    return out;
}

} // namespace qes

#endif
