// Acceptance checks, one line per criterion. Each line reports PASS or FAIL
// with the measured quantity; a FAIL is an honest record that the claimed
// property does not hold numerically, not a build defect.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "mlrho/inverse.hpp"
#include "mlrho/json_io.hpp"
#include "mlrho/ml.hpp"
#include "mlrho/monotonicity.hpp"
#include "mlrho/oracle.hpp"
#include "mlrho/special.hpp"
#include "mlrho/spectral.hpp"

using namespace mlrho;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("criterion %2d: %s - %s\n", id, ok ? "PASS" : "FAIL",
                detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// Low modes only: large lambda_k leaves the per-mode increasing regime at
// this t0, which would break the margin hypothesis.
InitialField admissible_field(const SpectralDomain& d, Point x0, int n_modes,
                              std::mt19937& gen) {
    std::uniform_real_distribution<double> amp(0.2, 1.5);
    InitialField f;
    f.coefficients.assign(n_modes, 0.0);
    for (int k = 1; k <= std::min(n_modes, 3); ++k)
        if (d.eigenfunction(k, x0) > 0.1)
            f.coefficients[k - 1] = amp(gen) * std::pow(k, -3.0);
    return f;
}

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double z = -50.0 + 50.0 * i / 499.0;
        const double v = ml_value(1.0, 1.0, z);
        worst = std::max(worst, std::abs(v - std::exp(z)) / std::exp(z));
    }
    const double dt = seconds_since(t0);
    report(1, worst <= 1e-12 && dt < 1.0,
           fmt("exp reduction on [-50,0]: max rel err %.2e (tol 1e-12), "
               "%.2f s (budget 1 s)",
               worst, dt));
}

void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double rho = 0.2; rho < 0.95; rho += 0.1)
        for (double t : {0.01, 0.02, 0.1, 0.5, 1.0}) {
            const double fd = oracle::dml_fd(rho, t, 1e-6).value;
            const double d = dml_drho(rho, t);
            worst = std::max(worst, std::abs(d - fd) / std::abs(fd));
        }
    const double dt = seconds_since(t0);
    report(2, worst <= 1e-5 && dt < 10.0,
           fmt("derivative series vs reference fd: max rel err %.2e "
               "(tol 1e-5), %.2f s (budget 10 s)",
               worst, dt));
}

std::vector<double> rho_grid_from(double rho0) {
    std::vector<double> grid;
    for (int i = 0; i < 64; ++i) grid.push_back(rho0 + (0.999 - rho0) * i / 63.0);
    return grid;
}

void criterion_3() {
    bool ok = true;
    std::string detail = "increasing-kernel sign scan at threshold: ";
    for (double rho0 = 0.1; rho0 < 0.95; rho0 += 0.1) {
        const auto rep = scan_derivative_sign(rho_grid_from(rho0),
                                              threshold_increasing(rho0),
                                              DerivativeKind::Caputo1Param);
        if (!rep.all_positive) {
            ok = false;
            detail += fmt("rho0=%.1f violates (d=%.3e at rho=%.4f); ", rho0,
                          rep.first_violation->second, rep.first_violation->first);
        }
    }
    if (ok) detail += "all 9 rho0 values strictly positive over 64-point grids";
    report(3, ok, detail);
}

void criterion_4() {
    bool ok = true;
    std::string detail = "decreasing-kernel sign scan at threshold: ";
    for (double rho0 = 0.1; rho0 < 0.95; rho0 += 0.1) {
        const auto rep = scan_derivative_sign(rho_grid_from(rho0),
                                              threshold_decreasing(rho0),
                                              DerivativeKind::RL2Param);
        if (!rep.all_negative) {
            ok = false;
            detail += fmt("rho0=%.1f violates (d=%+.3e at rho=%.4f); ", rho0,
                          rep.first_violation->second, rep.first_violation->first);
        }
    }
    if (ok)
        detail += "all 9 rho0 values strictly negative over 64-point grids";
    else
        detail += "the asserted sign does not hold at this threshold";
    report(4, ok, detail);
}

void criterion_5() {
    std::mt19937 gen(424242);
    std::uniform_real_distribution<double> rd(0.1, 0.9), ud(0.05, 1.0);
    bool ok = true;
    std::string bad;
    for (int i = 0; i < 20; ++i) {
        const double rho = rd(gen);
        const double t = ud(gen) * threshold_increasing(rho);
        const auto rep = verify_term_monotonicity(rho, t, 500);
        if (rep.first_violation && ok) {
            ok = false;
            bad = fmt("first at rho=%.4f, t=%.3e, n=%.0f (small rho near the "
                      "threshold: |y_2| genuinely exceeds |y_1|)",
                      rho, t, rep.first_violation->first);
        }
    }
    report(5, ok,
           "term inequality y_{n+1} > y_n, 500 terms, 20 random in-regime "
           "(rho, t): " +
               (ok ? std::string("no violations") : bad));
}

void criterion_6() {
    bool ok = true;
    double prev_f = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i) {
        const double x = 0.1 * std::pow(1000.0, i / 999.0);
        const double phi = digamma(x);
        if (!(std::log(x) - 1.0 / x <= phi && phi <= std::log(x) - 0.5 / x))
            ok = false;
        const double f = x * (std::log(x) - phi);
        if (!(f >= 0.5 && f <= 1.0)) ok = false;
        if (f > prev_f + 1e-14) ok = false;
        prev_f = f;
    }
    report(6, ok,
           "digamma brackets and f(z) = z(ln z - digamma(z)) in [1/2, 1], "
           "nonincreasing, 1000-point log grid on [0.1, 100]: " +
               std::string(ok ? "zero violations" : "violations found"));
}

void criterion_7() {
    bool monotone = true, small_enough = true;
    std::string detail = "gamma-ratio decay: ";
    for (double rho : {0.3, 0.5, 0.9}) {
        double prev = std::numeric_limits<double>::infinity();
        for (int n = 1; n <= 10000; ++n) {
            const double r = gamma_ratio(rho * n, rho);
            if (r >= prev) monotone = false;
            prev = r;
        }
        const double n_min = std::ceil(std::pow(10.0, 2.0 / rho));
        const double at_boundary = gamma_ratio(rho * n_min, rho);
        if (!(at_boundary < 1e-2)) {
            small_enough = false;
            detail += fmt("rho=%.1f ratio %.4e at n=%.0f (claimed < 1e-2); ",
                          rho, at_boundary, n_min);
        }
    }
    detail += monotone ? "monotone decreasing over n in [1, 1e4]"
                       : "monotonicity violated";
    report(7, monotone && small_enough, detail);
}

void criterion_8() {
    const auto d = SpectralDomain::interval(1.0, 20);
    const auto f = project_initial(
        d, [](Point p) { return p.x * (1.0 - p.x); }, 20, 80);
    ForwardSolution sol{d, f, 1.0, FractionalKind::Caputo, 0, 0.0};
    double worst = 0.0;
    for (int ix = 1; ix <= 10; ++ix)
        for (int it = 0; it < 10; ++it) {
            const double x = ix / 11.0;
            const double t = 0.01 + (1.0 - 0.01) * it / 9.0;
            double heat = 0.0;
            for (int k = 1; k <= 20; ++k)
                heat += f.coefficient(k) * std::exp(-d.eigenvalue(k) * t) *
                        d.eigenfunction(k, {x, 0.0});
            worst = std::max(worst,
                             std::abs(forward_eval(sol, {x, 0.0}, t) - heat));
        }
    report(8, worst <= 1e-10,
           fmt("heat reduction at rho = 1, 20 modes, 10x10 grid: max abs err "
               "%.2e (tol 1e-10)",
               worst));
}

void criterion_9() {
    std::mt19937 gen(991);
    std::uniform_real_distribution<double> rho_star(0.55, 0.99);
    const auto d = SpectralDomain::interval(1.0, 8);
    double worst = 0.0, slowest = 0.0;
    bool all_unique = true;
    for (int trial = 0; trial < 25; ++trial) {
        const Point x0{0.15 + 0.04 * (trial % 10), 0.0};
        const auto f = admissible_field(d, x0, 8, gen);
        const double rs = rho_star(gen);
        PointObservation obs{x0, 0.02, g_map(rs, d, f, x0, 0.02, 8)};
        const auto t0 = std::chrono::steady_clock::now();
        const auto res = solve_point(obs, d, f, 0.5, 1e-10);
        slowest = std::max(slowest, seconds_since(t0));
        all_unique &= res.status == InverseStatus::Unique;
        worst = std::max(worst, std::abs(res.rho_hat - rs));
    }
    report(9, all_unique && worst <= 1e-6 && slowest < 0.5,
           fmt("point-observation round trips, 25 random problems: max "
               "|rho_hat - rho*| %.2e (tol 1e-6), slowest %.3f s (budget 0.5 s)",
               worst, slowest));
}

void criterion_10() {
    std::mt19937 gen(77);
    std::uniform_real_distribution<double> rho_star(0.55, 0.99);
    const auto d = SpectralDomain::interval(1.0, 8);
    double worst = 0.0;
    bool all_unique = true;
    for (int trial = 0; trial < 25; ++trial) {
        const auto f = admissible_field(d, {0.3, 0.0}, 8, gen);
        const double rs = rho_star(gen);
        ForwardSolution sol{d, f, rs, FractionalKind::Caputo, 0, 0.0};
        const double d0 = l2_norm_sq(sol, 0.02);
        const auto res = solve_norm(0.02, d0, d, f, 0.5, 1e-10);
        all_unique &= res.status == InverseStatus::Unique;
        worst = std::max(worst, std::abs(res.rho_hat - rs));
    }
    report(10, all_unique && worst <= 1e-6,
           fmt("norm-observation round trips, 25 random problems: max "
               "|rho_hat - rho*| %.2e (tol 1e-6)",
               worst));
}

void criterion_11() {
    std::vector<double> eig{-1.0};
    for (int k = 2; k <= 40; ++k) eig.push_back(static_cast<double>(k));
    const auto d = SpectralDomain::custom(eig, [](int, Point) { return 1.0; }, 1.0);
    const Point x0{0.0, 0.0};
    double worst = 0.0;
    bool ok = true;
    for (double phi1 : {1.0, -1.0}) {
        InitialField f;
        f.coefficients.assign(40, 0.05);
        f.coefficients[0] = phi1;
        for (double rs : {0.45, 0.6, 0.8, 0.95}) {
            ForwardSolution sol{d, f, rs, FractionalKind::RiemannLiouville, 0, 0.0};
            PointObservation obs{x0, 10.0, forward_eval(sol, x0, 10.0)};
            const auto res = solve_alimov(obs, d, f, 0.3, 1e-10);
            ok &= res.status == InverseStatus::Unique;
            worst = std::max(worst, std::abs(res.rho_hat - rs));
        }
        // Direction must match the sign of the first coefficient.
        auto U = [&](double rho) {
            ForwardSolution s{d, f, rho, FractionalKind::RiemannLiouville, 0, 0.0};
            return forward_eval(s, x0, 10.0);
        };
        const bool decreasing = U(0.5) > U(0.9);
        ok &= decreasing == (phi1 > 0.0);
    }
    report(11, ok && worst <= 1e-6,
           fmt("negative-first-eigenvalue round trips (40 modes, t0 = 10, "
               "phi_1 = +/-1): max |rho_hat - rho*| %.2e (tol 1e-6), "
               "direction matches sign of phi_1",
               worst));
}

void criterion_12() {
    double worst_pos = 0.0;
    bool pos_ok = true;
    std::string pos_detail;
    for (double lambda : {0.5, 2.0})
        for (double x0 : {0.2, 0.8})
            for (double rs : {0.3, 0.5, 0.8, 1.0}) {
                PskhuProblem p{1.3, lambda, x0, 0.0};
                p.u0 = p.phi * pskhu_map(rs, lambda, x0);
                const auto res = solve_pskhu(p, 0.2, 1e-12);
                const bool row_ok = res.status == InverseStatus::Unique &&
                                    std::abs(res.rho_hat - rs) <= 1e-8;
                if (!row_ok && pos_detail.empty())
                    pos_detail = fmt(" (first failure lambda=%.1f, x0=%.1f, "
                                     "rho*=%.1f: map is unimodal at small "
                                     "lambda, preimage not unique)",
                                     lambda, x0, rs);
                pos_ok &= row_ok;
                worst_pos = std::max(worst_pos, std::abs(res.rho_hat - rs));
            }
    pos_ok &= worst_pos <= 1e-8;

    PskhuProblem pb{2.0, 2.0, 0.8, 2.0 * std::exp(1.6)};
    const auto rb = solve_pskhu(pb, 0.2, 1e-12);
    const bool boundary_ok = std::abs(rb.rho_hat - 1.0) <= 1e-10;

    bool neg_ok = true;
    std::string neg_detail;
    for (double rs : {0.6, 0.75, 0.9}) {
        PskhuProblem p{1.0, -1.0, 0.1, 0.0};
        p.u0 = pskhu_map(rs, p.lambda, p.x0);
        const auto res = solve_pskhu(p, 0.5, 1e-12);
        const bool got = res.status == InverseStatus::Unique &&
                         std::abs(res.rho_hat - rs) <= 1e-8;
        if (!got) {
            neg_ok = false;
            neg_detail += fmt("rho*=%.2f -> status %.0f, rho_hat %.4f; ", rs,
                              static_cast<double>(static_cast<int>(res.status)),
                              res.rho_hat);
        }
    }

    std::string detail =
        fmt("scalar Cauchy-problem inversion: growing case max err %.2e "
            "(tol 1e-8), boundary |rho_hat - 1| %.1e",
            worst_pos, std::abs(rb.rho_hat - 1.0)) +
        pos_detail + "; ";
    detail += neg_ok ? "decaying case round trips"
                     : "decaying case fails (map not monotone on [0.5, 1] at "
                       "x0 = 0.1): " + neg_detail;
    report(12, pos_ok && boundary_ok && neg_ok, detail);
}

void criterion_13() {
    const auto d = SpectralDomain::interval(1.0, 2);
    const Point x0{0.25, 0.0};
    const double t0 = 0.02; // in-regime: rectified monotonicity is then owed
    const double v1 = d.eigenfunction(1, x0), v2 = d.eigenfunction(2, x0);
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (double rho = 0.3; rho <= 0.999; rho += 0.02) {
        const double ratio = (v1 * dml_general(rho, d.eigenvalue(1), t0)) /
                             (v2 * dml_general(rho, d.eigenvalue(2), t0));
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
    }
    const double c = 0.5 * (rmin + rmax);
    auto sample = [&](double c2) {
        InitialField f;
        f.coefficients = {1.0, c2};
        std::vector<double> vals;
        for (int i = 0; i <= 64; ++i)
            vals.push_back(g_map(0.3 + 0.7 * i / 64.0, d, f, x0, t0, 2));
        return vals;
    };
    const auto mixed = sample(-c);
    bool strict_decrease = false;
    for (std::size_t i = 1; i < mixed.size(); ++i)
        strict_decrease |= mixed[i] < mixed[i - 1];
    const auto rectified = sample(c);
    bool monotone = true;
    for (std::size_t i = 1; i < rectified.size(); ++i)
        monotone &= rectified[i] >= rectified[i - 1];
    report(13, strict_decrease && monotone,
           "mixed-sign second coefficient breaks monotonicity of the "
           "observation map while the sign-rectified field keeps it: " +
               std::string(strict_decrease && monotone ? "demonstrated"
                                                       : "not demonstrated"));
}

void criterion_14() {
    report(14, true,
           "no quantitative tables exist to reproduce; acceptance is "
           "property-based throughout, as stated");
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    criterion_13();
    criterion_14();
    std::printf("%d of 14 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
