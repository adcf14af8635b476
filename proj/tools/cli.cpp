#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include <qes/qes.hpp>

#include "report_format.hpp"

namespace qes::cli {

namespace {

struct UsageFailure : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct RunConfig
{
    std::string command;
    std::string family;
    std::optional<double> a, b, c, d;
    int m = 0;
    int p = 0;
    std::string format = "json";
    std::string output;
    bool paper_formulas = false;

    // verify
    std::optional<double> grid_r_min, grid_r_max;
    std::optional<int> grid_points;

    // constrain
    std::string solve_for;

    // sample
    double sample_r_min = 0.01;
    double sample_r_max = 4.0;
    int sample_rows = 400;
    int root = 0;
};

SolveOptions solve_options(const RunConfig& cfg)
{
    SolveOptions opts;
    opts.formulas = cfg.paper_formulas ? FormulaSet::AsPrinted : FormulaSet::Corrected;
    return opts;
}

double require(const std::optional<double>& v, const char* name, const RunConfig& cfg)
{
    if (!v) throw UsageFailure("--" + std::string(name) + " is required for the " + cfg.family + " family");
    return *v;
}

/// Specs to solve: the constrained coefficient (sextic a, mixed c, singular b)
/// may be omitted, in which case every admissible value is used.
std::vector<PotentialSpec> expand_specs(const RunConfig& cfg)
{
    const Family family = parse_family(cfg.family);
    const SolveOptions opts = solve_options(cfg);
    std::vector<PotentialSpec> out;
    switch (family) {
    case Family::Sextic: {
        if (cfg.d) throw UsageFailure("--d only applies to the singular family");
        const double b = require(cfg.b, "b", cfg);
        const double c = require(cfg.c, "c", cfg);
        if (cfg.a) return {PotentialSpec::sextic(*cfg.a, b, c)};
        for (double a : sextic_constraint_solve(cfg.m, cfg.p, {std::nullopt, b, c}))
            out.push_back(PotentialSpec::sextic(a, b, c));
        break;
    }
    case Family::Mixed: {
        if (cfg.d) throw UsageFailure("--d only applies to the singular family");
        const double a = require(cfg.a, "a", cfg);
        const double b = require(cfg.b, "b", cfg);
        if (cfg.c) return {PotentialSpec::mixed(a, b, *cfg.c)};
        for (double c : mixed_coulomb_solve(a, b, cfg.m, cfg.p, opts)) out.push_back(PotentialSpec::mixed(a, b, c));
        break;
    }
    case Family::SingularEvenPower: {
        const double a = require(cfg.a, "a", cfg);
        const double c = require(cfg.c, "c", cfg);
        const double d = require(cfg.d, "d", cfg);
        if (cfg.b) return {PotentialSpec::singular(a, *cfg.b, c, d)};
        for (double b : singular_b_solve(a, c, d, cfg.m, cfg.p, opts))
            out.push_back(PotentialSpec::singular(a, b, c, d));
        break;
    }
    }
    return out;
}

std::vector<QesSolution> solve_all(const RunConfig& cfg)
{
    std::vector<QesSolution> out;
    for (const auto& spec : expand_specs(cfg))
        for (auto& sol : solve(spec, cfg.m, cfg.p, solve_options(cfg))) out.push_back(std::move(sol));
    std::stable_sort(out.begin(), out.end(),
                     [](const QesSolution& x, const QesSolution& y) { return x.energy < y.energy; });
    return out;
}

Json potential_json(const PotentialSpec& spec)
{
    Json j;
    j["a"] = spec.a;
    j["b"] = spec.b;
    j["c"] = spec.c;
    if (spec.family == Family::SingularEvenPower) j["d"] = spec.d;
    return j;
}

std::optional<RadialState> try_normalize(const QesSolution& sol)
{
    try {
        return normalize(sol);
    } catch (const QuadratureFailure&) {
        return std::nullopt;
    }
}

Json solution_json(const QesSolution& sol, const std::optional<RadialState>& st)
{
    Json j;
    j["family"] = std::string(family_name(sol.spec.family));
    j["m"] = sol.m;
    j["p"] = sol.p;
    j["formulas"] = std::string(formula_set_name(sol.formulas));
    j["potential"] = potential_json(sol.spec);
    j["E"] = sol.energy;
    j["coefficients"] = sol.coefficients.values;
    j["normalization"] = st ? st->normalization : std::nan("");
    j["node_count"] = node_count(sol);
    j["multiplicity"] = sol.multiplicity;
    j["termination_residual"] = sol.termination_residual;
    j["determinant_residual"] = sol.determinant_residual;
    if (!sol.note.empty()) j["note"] = sol.note;
    return j;
}

std::string join_numbers(const std::vector<double>& xs, char sep)
{
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += sep;
        s += format_number(xs[i]);
    }
    return s;
}

std::string csv_potential(const PotentialSpec& spec)
{
    std::string s = format_number(spec.a) + "," + format_number(spec.b) + "," + format_number(spec.c) + ",";
    if (spec.family == Family::SingularEvenPower) s += format_number(spec.d);
    return s;
}

Json closed_forms_json(const RunConfig& cfg, FormulaSet formulas)
{
    const Family family = parse_family(cfg.family);
    PotentialSpec spec{family, cfg.a.value_or(0.0), cfg.b.value_or(0.0), cfg.c.value_or(0.0), cfg.d.value_or(0.0)};
    Json j;
    try {
        const auto v = closed_form_values(spec, cfg.m, cfg.p, formulas);
        j["parameter"] = v.parameter;
        j["parameter_values"] = v.parameter_values;
        j["energies"] = v.energies;
        if (v.nonreal_energy) j["note"] = "closed-form energy is non-real; real part shown";
    } catch (const Error& e) {
        j["error"] = e.what();
    }
    return j;
}

// ---------------------------------------------------------------------------

void cmd_solve(const RunConfig& cfg, std::ostream& out)
{
    const auto sols = solve_all(cfg);
    if (cfg.format == "csv") {
        out << "family,m,p,a,b,c,d,E,normalization,node_count,multiplicity,termination_residual,"
               "determinant_residual,coefficients\n";
        for (const auto& s : sols) {
            const auto st = try_normalize(s);
            out << family_name(s.spec.family) << ',' << s.m << ',' << s.p << ',' << csv_potential(s.spec) << ','
                << format_number(s.energy) << ',' << format_number(st ? st->normalization : std::nan("")) << ','
                << node_count(s) << ',' << s.multiplicity << ',' << format_number(s.termination_residual) << ','
                << format_number(s.determinant_residual) << ',' << join_numbers(s.coefficients.values, ';') << '\n';
        }
        return;
    }
    Json doc;
    doc["command"] = "solve";
    doc["family"] = cfg.family;
    doc["m"] = cfg.m;
    doc["p"] = cfg.p;
    doc["formulas"] = std::string(formula_set_name(solve_options(cfg).formulas));
    doc["solutions"] = Json::array();
    for (const auto& s : sols) doc["solutions"].push_back(solution_json(s, try_normalize(s)));
    write_json(out, doc);
}

/// Values of the constrained coefficient; also warns when the uncorrected closed
/// form disagrees with the corrected one.
void cmd_constrain(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const Family family = parse_family(cfg.family);
    const SolveOptions opts = solve_options(cfg);
    std::vector<double> values;
    const std::string& target = cfg.solve_for;

    switch (family) {
    case Family::Sextic: {
        SexticKnown known{cfg.a, cfg.b, cfg.c};
        if (target == "a") known.a.reset();
        else if (target == "b") known.b.reset();
        else if (target == "c") known.c.reset();
        else throw UsageFailure("sextic family can solve for a, b or c");
        if (int(known.a.has_value()) + int(known.b.has_value()) + int(known.c.has_value()) != 2)
            throw UsageFailure("sextic constraint needs the other two of a, b, c");
        values = sextic_constraint_solve(cfg.m, cfg.p, known);
        break;
    }
    case Family::Mixed:
        if (target != "c") throw UsageFailure("mixed family can only solve for c");
        values = mixed_coulomb_solve(require(cfg.a, "a", cfg), require(cfg.b, "b", cfg), cfg.m, cfg.p, opts);
        break;
    case Family::SingularEvenPower:
        if (target != "b") throw UsageFailure("singular family can only solve for b");
        values = singular_b_solve(require(cfg.a, "a", cfg), require(cfg.c, "c", cfg), require(cfg.d, "d", cfg), cfg.m,
                                  cfg.p, opts);
        break;
    }

    if (family == Family::Mixed && opts.formulas == FormulaSet::Corrected) {
        SolveOptions printed_opts;
        printed_opts.formulas = FormulaSet::AsPrinted;
        const double a = *cfg.a;
        const double b = *cfg.b;
        std::vector<double> printed;
        try {
            printed = mixed_coulomb_solve(a, b, cfg.m, cfg.p, printed_opts);
        } catch (const Error&) {
        }
        bool same = printed.size() == values.size();
        for (std::size_t i = 0; same && i < values.size(); ++i)
            same = std::abs(printed[i] - values[i]) <= 1e-9 * std::max(1.0, std::abs(values[i]));
        if (!same) {
            const double printed_e = mixed_energy(PotentialSpec::mixed(a, b, 0.0), cfg.m, cfg.p, FormulaSet::AsPrinted);
            const double corrected_e = mixed_energy(PotentialSpec::mixed(a, b, 0.0), cfg.m, cfg.p);
            double printed_res = 0.0;
            for (double c : printed)
                printed_res = std::max(printed_res, ode_residual(make_solution(PotentialSpec::mixed(a, b, c), cfg.m,
                                                                               cfg.p, printed_e,
                                                                               FormulaSet::AsPrinted)));
            double corrected_res = 0.0;
            for (double c : values)
                corrected_res = std::max(
                    corrected_res, ode_residual(make_solution(PotentialSpec::mixed(a, b, c), cfg.m, cfg.p, corrected_e)));
            err << "WARNING: uncorrected closed form gives c = " << join_numbers(printed, ' ') << " with E = "
                << format_number(printed_e) << " (ODE residual " << format_number(printed_res)
                << "); corrected c = " << join_numbers(values, ' ') << " with E = " << format_number(corrected_e)
                << " (ODE residual " << format_number(corrected_res) << ")\n";
        }
    }

    if (cfg.format == "csv") {
        out << "solve_for,value\n";
        for (double v : values) out << target << ',' << format_number(v) << '\n';
        return;
    }
    Json doc;
    doc["command"] = "constrain";
    doc["family"] = cfg.family;
    doc["m"] = cfg.m;
    doc["p"] = cfg.p;
    doc["formulas"] = std::string(formula_set_name(opts.formulas));
    doc["solve_for"] = target;
    doc["values"] = values;
    write_json(out, doc);
}

Grid verify_grid(const RunConfig& cfg)
{
    Grid g = default_grid(parse_family(cfg.family));
    if (cfg.grid_r_min) {
        g.r_min = *cfg.grid_r_min;
        g.regular_origin = false;
    }
    if (cfg.grid_r_max) g.r_max = *cfg.grid_r_max;
    if (cfg.grid_points) g.n_points = *cfg.grid_points;
    return make_grid(g.r_min, g.r_max, g.n_points, g.regular_origin);
}

bool cmd_verify(const RunConfig& cfg, std::ostream& out)
{
    const auto sols = solve_all(cfg);
    const Grid grid = verify_grid(cfg);

    // One oracle run per distinct potential.
    struct Row
    {
        const QesSolution* sol;
        OracleComparison cmp;
        std::vector<double> eigenvalues;
    };
    std::vector<Row> rows;
    std::vector<std::vector<QesSolution>> groups;
    for (const auto& s : sols) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.front().spec == s.spec; });
        if (it == groups.end()) groups.push_back({s});
        else it->push_back(s);
    }
    bool pass = !sols.empty();
    for (const auto& group : groups) {
        const auto report = cross_validate(std::span<const QesSolution>(group), grid);
        for (std::size_t i = 0; i < group.size(); ++i) {
            const auto match = std::find_if(sols.begin(), sols.end(), [&](const QesSolution& s) {
                return s.spec == group[i].spec && s.energy == group[i].energy;
            });
            rows.push_back({&*match, report.matched[i], report.eigenvalues});
            pass = pass && report.matched[i].pass;
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) { return x.sol->energy < y.sol->energy; });

    if (cfg.format == "csv") {
        out << "family,m,p,a,b,c,d,E,oracle_E,delta,oracle_index,oracle_sign_changes,node_count,ode_residual,verdict\n";
        for (const auto& r : rows) {
            const auto& s = *r.sol;
            out << family_name(s.spec.family) << ',' << s.m << ',' << s.p << ',' << csv_potential(s.spec) << ','
                << format_number(s.energy) << ',' << format_number(r.cmp.oracle) << ',' << format_number(r.cmp.delta)
                << ',' << r.cmp.oracle_index << ',' << r.cmp.oracle_sign_changes << ',' << node_count(s) << ','
                << format_number(r.cmp.residual) << ',' << (r.cmp.pass ? "PASS" : "FAIL") << '\n';
        }
        return pass;
    }

    Json doc;
    doc["command"] = "verify";
    doc["family"] = cfg.family;
    doc["m"] = cfg.m;
    doc["p"] = cfg.p;
    doc["formulas"] = std::string(formula_set_name(solve_options(cfg).formulas));
    Json g;
    g["r_min"] = grid.lower();
    g["r_max"] = grid.r_max;
    g["n_points"] = grid.n_points;
    g["boundary"] = grid.regular_origin ? "regular-origin" : "dirichlet";
    doc["grid"] = g;
    doc["records"] = Json::array();
    for (const auto& r : rows) {
        Json j = solution_json(*r.sol, try_normalize(*r.sol));
        j["oracle_E"] = r.cmp.oracle;
        j["delta"] = r.cmp.delta;
        j["oracle_index"] = r.cmp.oracle_index;
        j["oracle_sign_changes"] = r.cmp.oracle_sign_changes;
        j["oracle_eigenvalues"] = r.eigenvalues;
        j["ode_residual"] = r.cmp.residual;
        j["verdict"] = r.cmp.pass ? "PASS" : "FAIL";
        doc["records"].push_back(j);
    }
    Json closed;
    closed["corrected"] = closed_forms_json(cfg, FormulaSet::Corrected);
    closed["as_printed"] = closed_forms_json(cfg, FormulaSet::AsPrinted);
    doc["closed_forms"] = closed;
    doc["verdict"] = pass ? "PASS" : "FAIL";
    write_json(out, doc);
    return pass;
}

void cmd_sample(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.sample_rows < 2) throw UsageFailure("--rows must be at least 2");
    if (!(cfg.sample_r_min > 0.0) || !(cfg.sample_r_min < cfg.sample_r_max))
        throw UsageFailure("sampling range needs 0 < r-min < r-max");
    const auto sols = solve_all(cfg);
    if (cfg.root < 0 || static_cast<std::size_t>(cfg.root) >= sols.size())
        throw UsageFailure("--root must index one of the " + std::to_string(sols.size()) + " solutions");
    const auto& sol = sols[static_cast<std::size_t>(cfg.root)];
    const RadialState st = normalize(sol);

    out << "r,R,Rprime,Veff\n";
    const double width = (cfg.sample_r_max - cfg.sample_r_min) / (cfg.sample_rows - 1);
    for (int i = 0; i < cfg.sample_rows; ++i) {
        const double r = i + 1 == cfg.sample_rows ? cfg.sample_r_max : cfg.sample_r_min + i * width;
        const auto d = radial_derivatives(st, r);
        out << format_number(r) << ',' << format_number(d.value) << ',' << format_number(d.first) << ','
            << format_number(effective_potential(sol.spec, sol.m, r)) << '\n';
    }
}

void add_common(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--family", cfg.family, "potential family")
        ->required()
        ->check(CLI::IsMember({"sextic", "mixed", "singular"}));
    sub->add_option("--a", cfg.a, "coefficient a");
    sub->add_option("--b", cfg.b, "coefficient b");
    sub->add_option("--c", cfg.c, "coefficient c");
    sub->add_option("--d", cfg.d, "coefficient d (singular family)");
    sub->add_option("--m", cfg.m, "angular momentum")->check(CLI::NonNegativeNumber);
    sub->add_option("--p", cfg.p, "truncation order")->check(CLI::NonNegativeNumber);
    sub->add_option("-o,--output", cfg.output, "write the report to this file");
    sub->add_flag("--use-paper-formulas", cfg.paper_formulas,
                  "use the uncorrected closed forms and recurrence rows");
}

void add_format(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

std::filesystem::path output_path(const std::string& raw)
{
    std::filesystem::path path(raw);
    if (path.is_relative()) {
        if (const char* dir = std::getenv("QES_OUTPUT_DIR"); dir && *dir) path = std::filesystem::path(dir) / path;
    }
    return path;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Closed-form bound states of 2D radial Schrodinger equations", "qes"};
    app.require_subcommand(1, 1);

    auto* solve_cmd = app.add_subcommand("solve", "closed-form states for one configuration");
    add_common(solve_cmd, cfg);
    add_format(solve_cmd, cfg);

    auto* constrain_cmd = app.add_subcommand("constrain", "admissible values of one potential coefficient");
    add_common(constrain_cmd, cfg);
    add_format(constrain_cmd, cfg);
    constrain_cmd->add_option("--solve-for", cfg.solve_for, "coefficient to solve for")->required();

    auto* verify_cmd = app.add_subcommand("verify", "cross-check closed forms against a finite-difference spectrum");
    add_common(verify_cmd, cfg);
    add_format(verify_cmd, cfg);
    verify_cmd->add_option("--r-min", cfg.grid_r_min, "Dirichlet inner boundary (default: regular origin)");
    verify_cmd->add_option("--r-max", cfg.grid_r_max, "outer boundary");
    verify_cmd->add_option("--n-points", cfg.grid_points, "interior grid points");

    auto* sample_cmd = app.add_subcommand("sample", "tabulate the normalized radial function as CSV");
    add_common(sample_cmd, cfg);
    sample_cmd->add_option("--r-min", cfg.sample_r_min, "first radius");
    sample_cmd->add_option("--r-max", cfg.sample_r_max, "last radius");
    sample_cmd->add_option("--rows", cfg.sample_rows, "number of rows");
    sample_cmd->add_option("--root", cfg.root, "index of the state, ordered by energy");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Success;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Success;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return UsageError;
    }

    std::ostringstream buffer;
    int code = Success;
    try {
        if (solve_cmd->parsed()) {
            cmd_solve(cfg, buffer);
        } else if (constrain_cmd->parsed()) {
            cmd_constrain(cfg, buffer, err);
        } else if (verify_cmd->parsed()) {
            code = cmd_verify(cfg, buffer) ? Success : VerificationFailed;
        } else if (sample_cmd->parsed()) {
            cmd_sample(cfg, buffer);
        }
    } catch (const ConstraintViolated& e) {
        err << "error: " << e.what() << ": residual " << format_number(e.residual());
        if (!e.admissible().empty())
            err << "; nearest admissible " << e.parameter() << " = " << format_number(e.admissible().front());
        err << "\n";
        return ConstraintError;
    } catch (const NoRealRoots& e) {
        err << "error: " << e.what() << "\n";
        return ConstraintError;
    } catch (const NoSolution& e) {
        err << "error: " << e.what() << "\n";
        return ConstraintError;
    } catch (const UsageFailure& e) {
        err << "error: " << e.what() << "\n";
        return UsageError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return UsageError;
    }

    if (cfg.output.empty()) {
        out << buffer.str();
    } else {
        const auto path = output_path(cfg.output);
        std::ofstream file(path, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << path.string() << " for writing\n";
            return UsageError;
        }
        file << buffer.str();
    }
    return code;
}

} // namespace qes::cli
