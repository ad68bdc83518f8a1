#pragma once

// Command-line front end for robinbd: argument grammar, dispatch to the
// library, and record output. run() takes the argument list without the
// program name and writes only to the given streams, so it can be driven
// from tests.

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "robinbd/robinbd.hpp"

namespace robinbd::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2 };

struct CliConfig {
    std::string subcommand;

    int kappa = 0;
    int dim = 2;
    std::optional<double> sphere_radius;
    std::optional<double> diameter;

    double p = 2.0;
    double beta = 1.0;

    std::optional<double> ball;
    std::vector<double> annulus;
    std::vector<double> rect;

    double tol = 1e-10;
    int grid = 2048;
    bool oracle = false;
    std::string out;
    std::string format = "json";

    double alpha = 1.0;
    double avr = 1.0;
    int m = 1;
    std::string profile;
    std::string phi = "f";
    unsigned threads = 1;
};

namespace detail {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline SpaceForm make_space(const CliConfig& c)
{
    if (c.sphere_radius) {
        return SpaceForm::compact(c.kappa, c.dim, *c.sphere_radius);
    }
    if (c.diameter) {
        return SpaceForm::compact(c.kappa, c.dim, solve_R_kappa(c.kappa, c.dim, *c.diameter));
    }
    return SpaceForm::model(c.kappa, c.dim);
}

inline RadialDomain make_domain(const CliConfig& c)
{
    if (c.ball) {
        return RadialDomain::ball(*c.ball);
    }
    if (c.annulus.size() == 2) {
        return RadialDomain::annulus(c.annulus[0], c.annulus[1]);
    }
    throw UsageError("this command needs exactly one of --ball R or --annulus R1 R2");
}

inline SolverOptions make_options(const CliConfig& c)
{
    SolverOptions opts;
    opts.tol = c.tol;
    opts.grid = c.grid;
    opts.validate();
    return opts;
}

/// Test function for hscan: f, scale:c, shift:c, const:c or trunc:c.
inline std::function<double(double)> make_phi(const std::string& spec,
                                              const RadialEigenSolution& sol)
{
    if (spec == "f") {
        return [&sol](double r) { return sol.f_at(r); };
    }
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw UsageError("unknown --phi '" + spec + "'");
    }
    const std::string kind = spec.substr(0, colon);
    char* end = nullptr;
    const std::string arg = spec.substr(colon + 1);
    const double c = std::strtod(arg.c_str(), &end);
    if (arg.empty() || *end != '\0') {
        throw UsageError("bad number in --phi '" + spec + "'");
    }
    if (kind == "scale") {
        return [&sol, c](double r) { return c * sol.f_at(r); };
    }
    if (kind == "shift") {
        return [&sol, c](double r) { return sol.f_at(r) + c; };
    }
    if (kind == "const") {
        return [c](double) { return c; };
    }
    if (kind == "trunc") {
        return [&sol, c](double r) { return std::min(sol.f_at(r), c); };
    }
    throw UsageError("unknown --phi kind '" + kind + "'");
}

inline void emit(const CliConfig& c, std::ostream& out, const io::Json& json,
                 const std::vector<io::Row>& rows)
{
    const std::string text = c.format == "csv" ? io::to_csv(rows) : io::dump(json);
    if (c.out.empty()) {
        out << text;
    } else {
        io::write_atomic(c.out, text);
    }
}

inline void emit_rows(const CliConfig& c, std::ostream& out, const std::vector<io::Row>& rows,
                      bool single)
{
    const io::Json json = single && rows.size() == 1 ? io::to_json(rows.front()) : io::to_json(rows);
    emit(c, out, json, rows);
}

inline int cmd_constants(const CliConfig& c, std::ostream& out)
{
    io::Row row;
    row.emplace_back("kappa", static_cast<std::int64_t>(c.kappa));
    row.emplace_back("n", static_cast<std::int64_t>(c.dim));
    row.emplace_back("m", static_cast<std::int64_t>(c.m));
    row.emplace_back("avr", c.avr);
    row.emplace_back("diameter", io::optional_value(c.diameter));
    std::optional<double> r_kappa;
    if (c.kappa == 1 || c.diameter) {
        r_kappa = solve_R_kappa(c.kappa, c.dim, c.diameter.value_or(0.0));
    }
    row.emplace_back("R_kappa", io::optional_value(r_kappa));
    double alpha = 1.0;
    if (c.kappa == 1 || c.diameter) {
        alpha = alpha_kappa(Assumption::CompactRicci, c.alpha);
    } else if (c.kappa == -1) {
        alpha = alpha_kappa(Assumption::Hyperbolic);
    } else {
        alpha = alpha_kappa(Assumption::NonnegativeRicci, c.avr);
    }
    row.emplace_back("alpha_kappa", alpha);
    row.emplace_back("theta_mn", theta_mn(c.avr, c.dim, c.m));
    row.emplace_back("omega_n", unit_ball_volume(c.dim));
    row.emplace_back("wallis", wallis(c.dim));
    emit_rows(c, out, {row}, true);
    return kOk;
}

inline int cmd_eig(const CliConfig& c, std::ostream& out)
{
    const SpaceForm sf = make_space(c);
    const RobinParams params{c.p, c.beta};
    const RadialDomain dom = make_domain(c);
    const SolverOptions opts = make_options(c);
    const RadialEigenSolution sol = first_eigenvalue(sf, params, dom, opts);
    io::EigenRecord rec = io::make_eigen_record(sol, opts);
    if (c.oracle) {
        rec.oracle_lambda = minimize(sf, params, dom, c.grid).lambda_est;
    }
    if (!c.profile.empty()) {
        const auto rows = io::profile_rows(sol);
        io::write_atomic(c.profile, c.format == "csv" ? io::to_csv(rows)
                                                      : io::dump(io::to_json(rows)));
    }
    emit_rows(c, out, {io::to_row(rec)}, true);
    return kOk;
}

inline int cmd_hscan(const CliConfig& c, std::ostream& out)
{
    const SpaceForm sf = make_space(c);
    const RobinParams params{c.p, c.beta};
    const RadialEigenSolution sol = first_eigenvalue(sf, params, make_domain(c), make_options(c));
    const auto phi = make_phi(c.phi, sol);
    std::vector<io::Row> rows;
    for (const HScanRow& r : h_scan(sol, phi, default_level_grid(sol))) {
        io::Row row = io::to_row(r);
        row.emplace_back("lambda", sol.lambda);
        rows.push_back(std::move(row));
    }
    emit_rows(c, out, rows, false);
    return kOk;
}

inline int cmd_verify(const CliConfig& c, std::ostream& out)
{
    const ComparisonRecord rec =
        compare(make_space(c), {c.p, c.beta}, make_domain(c), c.alpha, make_options(c));
    emit_rows(c, out, {io::to_row(rec)}, true);
    return rec.passed ? kOk : kVerificationFailed;
}

inline int cmd_sweep(const CliConfig& c, std::ostream& out)
{
    SweepGrid grid = SweepGrid::standard();
    grid.alpha = c.alpha;
    const SweepReport report = sweep(grid, make_options(c), c.threads);
    emit(c, out, io::to_json(report), io::to_rows(report.records));
    return report.summary.failures == 0 ? kOk : kVerificationFailed;
}

inline int cmd_rect(const CliConfig& c, std::ostream& out)
{
    if (c.rect.size() != 2) {
        throw UsageError("rect needs --rect LX LY");
    }
    const ComparisonRecord rec = rectangle_check({c.p, c.beta}, c.rect[0], c.rect[1], make_options(c));
    emit_rows(c, out, {io::to_row(rec)}, true);
    return rec.passed && rec.gap > 0.0 ? kOk : kVerificationFailed;
}

inline void add_geometry(CLI::App* sub, CliConfig& c)
{
    sub->add_option("--kappa", c.kappa, "curvature sign of the model space")
        ->check(CLI::IsMember({-1, 0, 1}));
    sub->add_option("--dim", c.dim, "dimension n")->check(CLI::Range(2, 64));
    auto* sr = sub->add_option("--sphere-radius", c.sphere_radius, "use the sphere of this radius")
                   ->check(CLI::PositiveNumber);
    auto* dm = sub->add_option("--diameter", c.diameter,
                               "use the comparison sphere for this diameter bound")
                   ->check(CLI::PositiveNumber);
    sr->excludes(dm);
}

inline void add_problem(CLI::App* sub, CliConfig& c)
{
    sub->add_option("--p", c.p, "p-Laplacian exponent, p > 1");
    sub->add_option("--beta", c.beta, "Robin parameter, beta > 0");
    sub->add_option("--tol", c.tol, "relative width of the eigenvalue bracket")
        ->check(CLI::PositiveNumber);
    sub->add_option("--grid", c.grid, "output grid cells")->check(CLI::Range(32, 1 << 20));
    sub->add_option("--out", c.out, "write output to this path instead of stdout");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

inline void add_radial_domain(CLI::App* sub, CliConfig& c)
{
    auto* b = sub->add_option("--ball", c.ball, "geodesic ball of radius R")
                  ->check(CLI::PositiveNumber);
    auto* a = sub->add_option("--annulus", c.annulus, "annulus R1 < r < R2")
                  ->expected(2)
                  ->check(CLI::PositiveNumber);
    b->excludes(a);
}

} // namespace detail

/// Parse and execute one command. Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CliConfig c;
    CLI::App app{"First Robin eigenvalues of the p-Laplacian on model-space domains", "robinbd"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "show help for all subcommands");

    auto* constants = app.add_subcommand("constants", "model constants R_kappa, alpha, theta, omega_n, W_n");
    detail::add_geometry(constants, c);
    constants->add_option("--m", c.m, "codimension m for theta_{m,n}")->check(CLI::PositiveNumber);
    constants->add_option("--avr", c.avr, "asymptotic volume ratio in (0, 1]");
    constants->add_option("--alpha", c.alpha, "volume ratio |M|/|M_kappa| for compact settings");
    constants->add_option("--out", c.out, "write output to this path instead of stdout");
    constants->add_option("--format", c.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* eig = app.add_subcommand("eig", "first eigenvalue on a ball or annulus");
    detail::add_geometry(eig, c);
    detail::add_problem(eig, c);
    detail::add_radial_domain(eig, c);
    eig->add_flag("--oracle", c.oracle, "also minimise the discrete Rayleigh quotient");
    eig->add_option("--profile", c.profile, "write r, v, w, f on the output grid to this path");

    auto* hscan = app.add_subcommand("hscan", "H-functional over the level grid");
    detail::add_geometry(hscan, c);
    detail::add_problem(hscan, c);
    detail::add_radial_domain(hscan, c);
    hscan->add_option("--phi", c.phi, "test function: f, scale:C, shift:C, const:C, trunc:C");

    auto* verify = app.add_subcommand("verify", "compare a domain against its volume-matched ball");
    detail::add_geometry(verify, c);
    detail::add_problem(verify, c);
    detail::add_radial_domain(verify, c);
    verify->add_option("--alpha", c.alpha, "volume ratio alpha in (0, 1]");

    auto* sweep_cmd = app.add_subcommand("sweep", "run the standard comparison grid");
    detail::add_problem(sweep_cmd, c);
    sweep_cmd->add_option("--alpha", c.alpha, "volume ratio alpha in (0, 1]");
    sweep_cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1u, 256u));

    auto* rect = app.add_subcommand("rect", "p = 2 rectangle against the disk of equal area");
    detail::add_problem(rect, c);
    rect->add_option("--rect", c.rect, "side lengths LX LY")->expected(2)->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return kUsage;
    }

    try {
        if (constants->parsed()) {
            return detail::cmd_constants(c, out);
        }
        if (eig->parsed()) {
            return detail::cmd_eig(c, out);
        }
        if (hscan->parsed()) {
            return detail::cmd_hscan(c, out);
        }
        if (verify->parsed()) {
            return detail::cmd_verify(c, out);
        }
        if (sweep_cmd->parsed()) {
            return detail::cmd_sweep(c, out);
        }
        if (rect->parsed()) {
            return detail::cmd_rect(c, out);
        }
    } catch (const detail::UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Unsupported& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kVerificationFailed;
    }
    return kUsage;
}

} // namespace robinbd::cli
