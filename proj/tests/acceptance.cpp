// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <qes/qes.hpp>

#include "cli.hpp"

using namespace qes;

namespace {

/// Collects sub-check outcomes for one criterion.
class Criterion
{
  public:
    void require(bool ok, const std::string& what)
    {
        if (!ok) failures_.push_back(what);
    }
    void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
    bool passed() const { return failures_.empty(); }
    std::string summary() const
    {
        if (passed()) return notes_;
        std::string s = "failed: ";
        for (std::size_t i = 0; i < failures_.size(); ++i) s += (i ? ", " : "") + failures_[i];
        return s;
    }

  private:
    std::vector<std::string> failures_;
    std::string notes_;
};

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

struct CliResult
{
    int code;
    std::string out;
};

CliResult cli(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str()};
}

void ac1(Criterion& c)
{
    const auto a = sextic_constraint_solve(0, 0, {std::nullopt, 1.0, 1.0});
    c.require(a.size() == 1 && a[0] == -3.75, "a = -3.75");
    const auto sols = solve(PotentialSpec::sextic(-3.75, 1.0, 1.0), 0, 0);
    c.require(sols.size() == 1, "one state");
    const double e = sols.at(0).energy;
    c.require(std::abs(e - 1.0) <= 1e-12, "|E-1| <= 1e-12");
    const double res = ode_residual(sols[0]);
    c.require(res <= 1e-10, "residual <= 1e-10");
    const double fd = fd_spectrum(sols[0].spec, 0, default_grid(Family::Sextic), 1)[0];
    c.require(std::abs(fd - 1.0) <= 1e-3, "fd within 1e-3");
    c.note("E=" + num(e) + " residual=" + num(res) + " fd=" + std::to_string(fd));
}

void ac2(Criterion& c)
{
    const auto a = sextic_constraint_solve(0, 1, {std::nullopt, 1.0, 1.0});
    c.require(a.size() == 1 && a[0] == -7.75, "a = -7.75");
    const auto sols = solve(PotentialSpec::sextic(-7.75, 1.0, 1.0), 0, 1);
    c.require(sols.size() == 2, "two states");
    if (sols.size() != 2) return;
    c.require(std::abs(sols[0].energy - (2.0 - std::sqrt(17.0))) <= 1e-10, "E- = 2-sqrt17");
    c.require(std::abs(sols[1].energy - (2.0 + std::sqrt(17.0))) <= 1e-10, "E+ = 2+sqrt17");
    const auto report = cross_validate(sols, default_grid(Family::Sextic));
    for (const auto& m : report.matched)
        c.require(std::abs(m.delta) <= 1e-3 * std::max(1.0, std::abs(m.closed_form)), "fd within 1e-3 relative");
    const auto lo = normalize(sols[0]);
    const auto hi = normalize(sols[1]);
    const double ov = std::abs(overlap(lo, hi));
    c.require(ov <= 1e-8, "overlap <= 1e-8");
    c.require(node_count(sols[0]) == 0 && node_count(sols[1]) == 1, "node counts 0 and 1");
    const auto paper = cli({"verify", "--family", "sextic", "--a", "-7.75", "--b", "1", "--c", "1", "--p", "1",
                            "--use-paper-formulas", "--format", "csv"});
    c.require(paper.code == 3 && paper.out.find("FAIL") != std::string::npos, "printed pair reported FAIL");
    c.note("overlap=" + num(ov) + " fd deltas " + num(report.matched.at(0).delta) + ", " +
           num(report.matched.at(1).delta) + "; printed form FAIL");
}

void ac3(Criterion& c)
{
    // Even p puts the p-th closed form on radial level p/2; odd p needs c != 0.
    double worst = 0.0;
    for (int m = 0; m <= 2; ++m) {
        const auto levels = fd_spectrum(PotentialSpec::mixed(0.0, 1.0, 0.0), m, default_grid(Family::Mixed), 3);
        for (int p : {0, 2}) {
            const auto sols = solve(PotentialSpec::mixed(0.0, 1.0, 0.0), m, p);
            const double e = sols.at(0).energy;
            c.require(e == 2.0 * (1 + m + p), "E_p = 2(1+m+p)");
            const double delta = std::abs(levels.at(static_cast<std::size_t>(p / 2)) - e);
            worst = std::max(worst, delta);
            c.require(delta <= 5e-3, "m=" + std::to_string(m) + " p=" + std::to_string(p) + " level");
        }
        bool rejected = false;
        try {
            solve(PotentialSpec::mixed(0.0, 1.0, 0.0), m, 1);
        } catch (const ConstraintViolated&) {
            rejected = true;
        }
        c.require(rejected, "p=1 with c=0 rejected");
        const auto cs = mixed_coulomb_solve(0.0, 1.0, m, 1);
        const double expect = std::sqrt(2.0 * (2 * m + 1));
        c.require(cs.size() == 2 && std::abs(cs[0] + expect) <= 1e-10 && std::abs(cs[1] - expect) <= 1e-10,
                  "p=1 c = +/-sqrt(2(2m+1))");
        for (double cc : cs) {
            const auto sol = solve(PotentialSpec::mixed(0.0, 1.0, cc), m, 1).at(0);
            const auto rep = cross_validate(sol, default_grid(Family::Mixed));
            worst = std::max(worst, rep.matched.at(0).delta);
            c.require(rep.matched.at(0).delta <= 5e-3, "p=1 admissible state in fd spectrum");
        }
    }
    c.note("max |E - fd| = " + num(worst) + " over m<=2, p<=2");
}

void ac4(Criterion& c)
{
    const auto cs = mixed_coulomb_solve(1.0, 1.0, 0, 0);
    c.require(cs.size() == 1 && std::abs(cs[0] + 0.5) <= 1e-13, "c = -0.5");
    const auto sol = solve(PotentialSpec::mixed(1.0, 1.0, -0.5), 0, 0).at(0);
    c.require(std::abs(sol.energy - 1.75) <= 1e-13, "E = 1.75");
    const double res = ode_residual(sol);
    c.require(res <= 1e-10, "residual <= 1e-10");
    const auto rep = cross_validate(sol, default_grid(Family::Mixed));
    c.require(rep.matched.at(0).delta <= 1e-3, "fd within 1e-3");
    const auto printed = make_solution(PotentialSpec::mixed(1.0, 1.0, 0.5), 0, 0, 2.0, FormulaSet::AsPrinted);
    const double printed_res = ode_residual(printed);
    c.require(printed_res >= 1e-2, "printed residual >= 1e-2");
    const auto v = cli({"verify", "--family", "mixed", "--a", "1", "--b", "1", "--c", "0.5", "--use-paper-formulas"});
    c.require(v.code == 3, "printed verify exits 3");
    c.note("residual=" + num(res) + " fd delta=" + num(rep.matched[0].delta) + " printed residual=" + num(printed_res));
}

void ac5(Criterion& c)
{
    const auto bs = singular_b_solve(1.0, 2.0, 1.0, 0, 0);
    c.require(bs.size() == 1 && std::abs(bs[0] - 2.0) <= 1e-12, "b = 2");
    const auto sol = solve(PotentialSpec::singular(1.0, 2.0, 2.0, 1.0), 0, 0).at(0);
    c.require(std::abs(sol.energy - 6.0) <= 1e-12, "E = 6");
    const double res = ode_residual(sol);
    c.require(res <= 1e-10, "residual <= 1e-10");
    const auto grid = default_grid(Family::SingularEvenPower);
    c.require(grid.r_min == 0.05, "r_min = 0.05");
    const auto rep = cross_validate(sol, grid);
    c.require(rep.matched.at(0).delta <= 1e-3, "fd within 1e-3");
    c.note("residual=" + num(res) + " fd delta=" + num(rep.matched[0].delta));
}

void ac6(Criterion& c)
{
    const auto bs = singular_b_solve(1.0, 2.0, 1.0, 0, 1);
    c.require(bs.size() == 2, "two b roots");
    if (bs.size() != 2) return;
    c.require(std::abs(bs[0] - (8.0 - 2.0 * std::sqrt(13.0))) <= 1e-9, "b- = 8-2sqrt13");
    c.require(std::abs(bs[1] - (8.0 + 2.0 * std::sqrt(13.0))) <= 1e-9, "b+ = 8+2sqrt13");
    double worst = 0.0;
    for (double b : bs) {
        const auto sol = solve(PotentialSpec::singular(1.0, b, 2.0, 1.0), 0, 1).at(0);
        c.require(std::abs(sol.energy - 10.0) <= 1e-12, "E = 10");
        worst = std::max(worst, ode_residual(sol));
    }
    c.require(worst <= 1e-8, "residual <= 1e-8");
    c.note("max residual=" + num(worst));
}

void ac7(Criterion& c)
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> log_mag(std::log(0.25), std::log(4.0));
    std::bernoulli_distribution coin(0.5);
    auto mag = [&] { return std::exp(log_mag(rng)); };
    auto sgn = [&] { return coin(rng) ? -1.0 : 1.0; };

    int configs = 0;
    int states = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int m = static_cast<int>(rng() % 4);
        const int p = static_cast<int>(rng() % 3);
        PotentialSpec spec;
        try {
            switch (trial % 3) {
            case 0: {
                const double b = sgn() * mag();
                const double cc = mag();
                spec = PotentialSpec::sextic(sextic_constraint_solve(m, p, {std::nullopt, b, cc}).front(), b, cc);
                break;
            }
            case 1: {
                const double a = sgn() * mag();
                const double b = mag();
                const auto roots = mixed_coulomb_solve(a, b, m, p);
                spec = PotentialSpec::mixed(a, b, roots[rng() % roots.size()]);
                break;
            }
            default: {
                const double a = mag();
                const double cc = mag();
                const double d = mag();
                const auto roots = singular_b_solve(a, cc, d, m, p);
                spec = PotentialSpec::singular(a, roots[rng() % roots.size()], cc, d);
                break;
            }
            }
            for (const auto& sol : solve(spec, m, p)) {
                worst = std::max(worst, ode_residual(sol));
                ++states;
            }
            ++configs;
        } catch (const Error& e) {
            c.require(false, "trial " + std::to_string(trial) + ": " + e.what());
        }
    }
    c.require(configs == 200, "200 configurations");
    c.require(worst <= 1e-8, "residual <= 1e-8");

    // continuant against an explicit 5x5 determinant by Gaussian elimination with pivoting
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double det_worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<RecurrenceRow> rows(5);
        for (auto& r : rows) r = {0, u(rng), u(rng), u(rng)};
        double m[5][5] = {};
        for (int k = 0; k < 5; ++k) {
            m[k][k] = rows[static_cast<std::size_t>(k)].B;
            if (k + 1 < 5) {
                m[k][k + 1] = rows[static_cast<std::size_t>(k) + 1].C;
                m[k + 1][k] = rows[static_cast<std::size_t>(k)].A;
            }
        }
        double det = 1.0;
        for (int col = 0; col < 5; ++col) {
            int piv = col;
            for (int r = col + 1; r < 5; ++r)
                if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
            if (piv != col) {
                std::swap(m[piv], m[col]);
                det = -det;
            }
            det *= m[col][col];
            if (m[col][col] == 0.0) break;
            for (int r = col + 1; r < 5; ++r) {
                const double f = m[r][col] / m[col][col];
                for (int k = col; k < 5; ++k) m[r][k] -= f * m[col][k];
            }
        }
        const double diff = std::abs(continuant(rows, 4) - det) / std::max(1.0, std::abs(det));
        det_worst = std::max(det_worst, diff);
    }
    c.require(det_worst <= 1e-12, "continuant within 1e-12");
    c.note(std::to_string(configs) + " configs, " + std::to_string(states) + " states, max residual=" + num(worst) +
           "; continuant max rel diff=" + num(det_worst));
}

void ac8(Criterion& c)
{
    const std::vector<std::vector<std::string>> runs{
        {"solve", "--family", "sextic", "--a", "-7.75", "--b", "1", "--c", "1", "--p", "1"},
        {"solve", "--family", "singular", "--a", "1", "--c", "2", "--d", "1", "--p", "1", "--format", "csv"},
        {"verify", "--family", "mixed", "--a", "1", "--b", "1", "--c", "-0.5"},
        {"verify", "--family", "sextic", "--a", "-3.75", "--b", "1", "--c", "1", "--format", "csv"},
    };
    for (const auto& args : runs) {
        const auto first = cli(args);
        const auto second = cli(args);
        c.require(first.code == 0 && !first.out.empty(), args[0] + " " + args[2] + " runs");
        c.require(first.out == second.out, args[0] + " " + args[2] + " byte-identical");
    }
    c.note(std::to_string(runs.size()) + " invocations repeated");
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria{
        {"AC-1 sextic p=0 exact case", ac1},
        {"AC-2 sextic p=1 pair", ac2},
        {"AC-3 mixed oscillator reduction", ac3},
        {"AC-4 mixed corrected case", ac4},
        {"AC-5 singular p=0", ac5},
        {"AC-6 singular p=1", ac6},
        {"AC-7 property suite", ac7},
        {"AC-8 determinism", ac8},
    };
    int failed = 0;
    for (const auto& [name, body] : criteria) {
        Criterion c;
        try {
            body(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        std::printf("[%s] %s: %s\n", c.passed() ? "PASS" : "FAIL", name.c_str(), c.summary().c_str());
        if (!c.passed()) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
