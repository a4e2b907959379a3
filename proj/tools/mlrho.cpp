// Command-line front end: Mittag-Leffler evaluation, monotonicity scans,
// spectral forward solves, and order recovery. Emits CSV or JSON.
//
// Exit codes: 0 success / unique solution, 2 usage or malformed input,
// 3 no solution in range, 4 monotonicity hypotheses unverified.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mlrho/inverse.hpp"
#include "mlrho/json_io.hpp"
#include "mlrho/monotonicity.hpp"
#include "mlrho/spectral.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_no_solution = 3;
constexpr int exit_unverified = 4;

int log_level() {
    const char* v = std::getenv("ML_RHO_LOG");
    return v ? std::atoi(v) : 0;
}

void log_line(const std::string& msg) {
    if (log_level() > 0) std::cerr << "[mlrho] " << msg << "\n";
}

// 17 significant digits round-trips a double exactly; '.' decimal always
// (printf "%.17g" is locale-independent for the C locale set in main).
std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Output {
    std::string path;   // empty = stdout
    std::string format; // "csv" or "json"

    void write(const std::string& csv_text, const nlohmann::json& j) const {
        const std::string text =
            format == "json" ? j.dump(2) + "\n" : csv_text;
        if (path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(path);
            if (!out) throw std::runtime_error("cannot open output file " + path);
            out << text;
        }
    }
};

const char* method_name(mlrho::Method m) {
    switch (m) {
        case mlrho::Method::Series: return "series";
        case mlrho::Method::AsymptoticNeg: return "asymptotic_neg";
        case mlrho::Method::AsymptoticPos: return "asymptotic_pos";
        case mlrho::Method::ClosedForm: return "closed_form";
        case mlrho::Method::Integral: return "integral";
    }
    return "unknown";
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mlrho::io::schema_error("cannot open input file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw mlrho::io::schema_error(std::string("malformed JSON: ") + e.what());
    }
    return j;
}

int run_ml_eval(double rho, double mu, const std::vector<double>& zs,
                double rel_tol, const Output& out) {
    std::ostringstream csv;
    csv << "z,value,abs_error_bound,method\n";
    nlohmann::json rows = nlohmann::json::array();
    for (double z : zs) {
        const auto r = mlrho::ml({rho, mu, z, rel_tol});
        csv << num(z) << ',' << num(r.value) << ',' << num(r.abs_error_bound)
            << ',' << method_name(r.method) << '\n';
        rows.push_back({{"z", z},
                        {"value", r.value},
                        {"abs_error_bound", r.abs_error_bound},
                        {"method", method_name(r.method)}});
    }
    out.write(csv.str(), rows);
    return exit_ok;
}

int run_ml_dml(double rho, double t, bool rl, double rel_tol, const Output& out) {
    const double d = rl ? mlrho::dml_rl_drho(rho, t, rel_tol)
                        : mlrho::dml_drho(rho, t, rel_tol);
    std::ostringstream csv;
    csv << "rho,t,kind,dvalue\n"
        << num(rho) << ',' << num(t) << ',' << (rl ? "rl" : "caputo") << ','
        << num(d) << '\n';
    out.write(csv.str(), nlohmann::json{{"rho", rho},
                                        {"t", t},
                                        {"kind", rl ? "rl" : "caputo"},
                                        {"dvalue", d}});
    return exit_ok;
}

int run_mono_scan(double rho0, double t, const std::string& kind, int points,
                  const Output& out) {
    std::vector<double> grid;
    const double hi = 0.999;
    for (int i = 0; i < points; ++i)
        grid.push_back(rho0 + (hi - rho0) * i / (points - 1.0));
    const auto k = kind == "rl" ? mlrho::DerivativeKind::RL2Param
                                : mlrho::DerivativeKind::Caputo1Param;
    const auto rep = mlrho::scan_derivative_sign(grid, t, k);
    const double threshold = kind == "rl" ? mlrho::threshold_decreasing(rho0)
                                          : mlrho::threshold_increasing(rho0);
    std::ostringstream csv;
    csv << "rho,dvalue\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        csv << num(grid[i]) << ',' << num(rep.derivative_values[i]) << '\n';
    csv << "# all_positive=" << (rep.all_positive ? "true" : "false")
        << " all_negative=" << (rep.all_negative ? "true" : "false")
        << " in_regime=" << (rep.in_regime ? "true" : "false")
        << " threshold=" << num(threshold) << '\n';
    nlohmann::json j{{"rho", grid},
                     {"dvalue", rep.derivative_values},
                     {"all_positive", rep.all_positive},
                     {"all_negative", rep.all_negative},
                     {"in_regime", rep.in_regime},
                     {"threshold", threshold}};
    out.write(csv.str(), j);
    return exit_ok;
}

int run_mono_verify_terms(double rho, double t, int n_max, const Output& out) {
    const auto rep = mlrho::verify_term_monotonicity(rho, t, n_max);
    std::ostringstream csv;
    csv << "rho,t,n_max,in_regime,violation_n,violation_value\n"
        << num(rho) << ',' << num(t) << ',' << n_max << ','
        << (rep.in_regime ? "true" : "false") << ',';
    nlohmann::json j{{"rho", rho}, {"t", t}, {"n_max", n_max},
                     {"in_regime", rep.in_regime}};
    if (rep.first_violation) {
        csv << num(rep.first_violation->first) << ','
            << num(rep.first_violation->second) << '\n';
        j["violation"] = {{"n", rep.first_violation->first},
                          {"value", rep.first_violation->second}};
    } else {
        csv << ",\n";
        j["violation"] = nullptr;
    }
    out.write(csv.str(), j);
    return exit_ok;
}

int run_forward(const std::string& input, const Output& out) {
    const auto j = load_json(input);
    const auto domain = mlrho::io::parse_domain(mlrho::io::detail::require(j, "domain"));
    const auto field = mlrho::io::parse_field(mlrho::io::detail::require(j, "field"));
    const double rho = mlrho::io::detail::require_number(j, "rho");
    const std::string dk = mlrho::io::detail::require(j, "derivative").get<std::string>();
    if (dk != "caputo" && dk != "rl")
        throw mlrho::io::schema_error("\"derivative\" must be caputo or rl");
    const auto& grid = mlrho::io::detail::require(j, "grid");
    const auto xs = mlrho::io::detail::require_array(grid, "x");
    const auto ts = mlrho::io::detail::require_array(grid, "t");
    std::vector<double> ys(xs.size(), 0.0);
    if (grid.contains("y")) {
        ys = mlrho::io::detail::require_array(grid, "y");
        if (ys.size() != xs.size())
            throw mlrho::io::schema_error("grid \"y\" must match \"x\" in length");
    }
    const int trunc = j.contains("truncation")
                          ? static_cast<int>(mlrho::io::detail::require_number(j, "truncation"))
                          : 0;
    mlrho::ForwardSolution sol{domain, field, rho,
                               dk == "rl" ? mlrho::FractionalKind::RiemannLiouville
                                          : mlrho::FractionalKind::Caputo,
                               trunc, 0.0};
    std::ostringstream csv;
    csv << "x,y,t,u\n";
    nlohmann::json rows = nlohmann::json::array();
    for (double t : ts)
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const mlrho::Point p{xs[i], ys[i]};
            const double u = mlrho::forward_eval(sol, p, t);
            csv << num(p.x) << ',' << num(p.y) << ',' << num(t) << ',' << num(u)
                << '\n';
            rows.push_back({{"x", p.x}, {"y", p.y}, {"t", t}, {"u", u}});
        }
    out.write(csv.str(), rows);
    return exit_ok;
}

int status_exit(mlrho::InverseStatus s) {
    switch (s) {
        case mlrho::InverseStatus::Unique: return exit_ok;
        case mlrho::InverseStatus::NoSolutionBelowRange:
        case mlrho::InverseStatus::NoSolutionAboveRange: return exit_no_solution;
        case mlrho::InverseStatus::HypothesesUnverified: return exit_unverified;
    }
    return exit_usage;
}

int emit_inverse(const mlrho::InverseResult& res, const Output& out) {
    const auto j = mlrho::io::result_to_json(res);
    std::ostringstream csv;
    csv << "rho_hat,status,iterations,residual\n"
        << num(res.rho_hat) << ',' << mlrho::io::status_name(res.status) << ','
        << res.iterations << ',' << num(res.residual) << '\n';
    out.write(csv.str(), j);
    return status_exit(res.status);
}

int run_inverse(const std::string& mode, const std::string& input,
                const Output& out) {
    const auto j = load_json(input);
    const double rho0 = mlrho::io::detail::require_number(j, "rho0");
    const double tol = j.contains("tol")
                           ? mlrho::io::detail::require_number(j, "tol")
                           : 1e-10;
    if (mode == "pskhu") {
        const auto p = mlrho::io::parse_pskhu(j);
        return emit_inverse(mlrho::solve_pskhu(p, rho0, tol), out);
    }
    const auto domain = mlrho::io::parse_domain(mlrho::io::detail::require(j, "domain"));
    const auto field = mlrho::io::parse_field(mlrho::io::detail::require(j, "field"));
    const auto& oj = mlrho::io::detail::require(j, "observation");
    if (mode == "point") {
        const auto obs = mlrho::io::parse_point_observation(oj);
        const double eps = j.contains("epsilon")
                               ? mlrho::io::detail::require_number(j, "epsilon")
                               : 1e-6;
        return emit_inverse(mlrho::solve_point(obs, domain, field, rho0, tol, eps),
                            out);
    }
    if (mode == "norm") {
        const double t0 = mlrho::io::detail::require_number(oj, "t0");
        const double d0 = mlrho::io::detail::require_number(oj, "d0");
        const bool assume = j.value("assume_regime", false);
        return emit_inverse(
            mlrho::solve_norm(t0, d0, domain, field, rho0, tol, assume), out);
    }
    if (mode == "alimov") {
        const auto obs = mlrho::io::parse_point_observation(oj);
        return emit_inverse(mlrho::solve_alimov(obs, domain, field, rho0, tol),
                            out);
    }
    throw mlrho::io::schema_error("unknown inverse mode " + mode);
}

int run_alimov_eigen(double h, double H, const Output& out) {
    const double l1 = mlrho::alimov_first_eigenvalue(h, H);
    std::ostringstream csv;
    csv << "h,H,lambda1\n" << num(h) << ',' << num(H) << ',' << num(l1) << '\n';
    out.write(csv.str(), nlohmann::json{{"h", h}, {"H", H}, {"lambda1", l1}});
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"Mittag-Leffler numerics: evaluation, monotonicity scans, "
                 "subdiffusion forward solves, and order recovery"};
    app.require_subcommand(1);

    Output out;
    out.format = "csv";
    app.add_option("--output", out.path, "output file (default stdout)");
    app.add_option("--format", out.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    int seed = 0;
    app.add_option("--seed", seed, "seed for randomized data generation");

    // ml eval / ml dml
    auto* ml_cmd = app.add_subcommand("ml", "Mittag-Leffler function");
    ml_cmd->require_subcommand(1);
    auto* eval_cmd = ml_cmd->add_subcommand("eval", "evaluate E_{rho,mu}(z)");
    double rho = 0.0, mu = 1.0, rel_tol = 1e-12;
    std::vector<double> zs;
    eval_cmd->add_option("--rho", rho)->required();
    eval_cmd->add_option("--mu", mu);
    eval_cmd->add_option("--z", zs, "argument(s)")->required()->delimiter(',');
    eval_cmd->add_option("--rel-tol", rel_tol);

    auto* dml_cmd = ml_cmd->add_subcommand("dml", "derivative in rho of the "
                                                  "relaxation kernel");
    double dml_rho = 0.0, dml_t = 0.0, dml_rel_tol = 1e-12;
    bool dml_rl = false;
    dml_cmd->add_option("--rho", dml_rho)->required();
    dml_cmd->add_option("--t", dml_t)->required();
    dml_cmd->add_flag("--rl", dml_rl, "two-parameter kernel t^{rho-1}E_{rho,rho}");
    dml_cmd->add_option("--rel-tol", dml_rel_tol);

    // mono scan / mono verify-terms
    auto* mono_cmd = app.add_subcommand("mono", "monotonicity verification");
    mono_cmd->require_subcommand(1);
    auto* scan_cmd = mono_cmd->add_subcommand("scan", "derivative sign over a "
                                                      "rho grid");
    double scan_rho0 = 0.0, scan_t = 0.0;
    std::string scan_kind = "caputo";
    int scan_points = 64;
    scan_cmd->add_option("--rho0", scan_rho0)->required();
    scan_cmd->add_option("--t", scan_t)->required();
    scan_cmd->add_option("--kind", scan_kind)->check(CLI::IsMember({"caputo", "rl"}));
    scan_cmd->add_option("--points", scan_points);

    auto* terms_cmd = mono_cmd->add_subcommand("verify-terms",
                                               "term growth y_{n+1} > y_n");
    double vt_rho = 0.0, vt_t = 0.0;
    int vt_nmax = 500;
    terms_cmd->add_option("--rho", vt_rho)->required();
    terms_cmd->add_option("--t", vt_t)->required();
    terms_cmd->add_option("--n-max", vt_nmax);

    // forward solve
    auto* fwd_cmd = app.add_subcommand("forward", "spectral forward solver");
    fwd_cmd->require_subcommand(1);
    auto* solve_cmd = fwd_cmd->add_subcommand("solve", "evaluate u on a grid");
    std::string fwd_input;
    solve_cmd->add_option("--input", fwd_input, "problem JSON")->required();

    // inverse point|norm|alimov|pskhu
    auto* inv_cmd = app.add_subcommand("inverse", "order recovery");
    inv_cmd->require_subcommand(1);
    std::string inv_input;
    std::vector<CLI::App*> inv_modes;
    for (const char* m : {"point", "norm", "alimov", "pskhu"}) {
        auto* sub = inv_cmd->add_subcommand(m);
        sub->add_option("--input", inv_input, "problem JSON")->required();
        inv_modes.push_back(sub);
    }

    // alimov eigen
    auto* ali_cmd = app.add_subcommand("alimov", "mixed boundary condition "
                                                 "spectrum helpers");
    ali_cmd->require_subcommand(1);
    auto* eig_cmd = ali_cmd->add_subcommand("eigen", "first eigenvalue");
    double ali_h = 0.0, ali_H = 0.0;
    // The boundary parameter is spelled --h; drop the default -h help alias
    // on this subcommand so the two do not collide.
    eig_cmd->set_help_flag("--help", "print help");
    eig_cmd->add_option("--h", ali_h)->required();
    eig_cmd->add_option("--H", ali_H)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (eval_cmd->parsed()) return run_ml_eval(rho, mu, zs, rel_tol, out);
        if (dml_cmd->parsed())
            return run_ml_dml(dml_rho, dml_t, dml_rl, dml_rel_tol, out);
        if (scan_cmd->parsed())
            return run_mono_scan(scan_rho0, scan_t, scan_kind, scan_points, out);
        if (terms_cmd->parsed())
            return run_mono_verify_terms(vt_rho, vt_t, vt_nmax, out);
        if (solve_cmd->parsed()) return run_forward(fwd_input, out);
        for (std::size_t i = 0; i < inv_modes.size(); ++i)
            if (inv_modes[i]->parsed()) {
                static const char* names[] = {"point", "norm", "alimov", "pskhu"};
                return run_inverse(names[i], inv_input, out);
            }
        if (eig_cmd->parsed()) return run_alimov_eigen(ali_h, ali_H, out);
    } catch (const mlrho::io::schema_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        log_line("aborting on exception");
        return 1;
    }
    return exit_usage;
}
