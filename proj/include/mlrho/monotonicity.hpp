#ifndef MLRHO_MONOTONICITY_HPP
#define MLRHO_MONOTONICITY_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mlrho/derivative.hpp"
#include "mlrho/special.hpp"

// Monotonicity thresholds for the Mittag-Leffler kernels and numerical
// verifiers for the term inequalities behind them.

namespace mlrho {

struct ThresholdSpec {
    double rho0 = 0.0;
    double t_star_increasing = 0.0; // E_rho(-t^rho) increasing in rho below this
    double t_star_decreasing = 0.0; // t^{rho-1}E_{rho,rho}(-t^rho) decreasing below this
};

/// min(2^{-1/rho0}, e^{-7/2})
inline double threshold_increasing(double rho0) {
    if (!(rho0 > 0.0) || !(rho0 < 1.0))
        throw std::domain_error("threshold_increasing: rho0 must lie in (0,1)");
    return std::min(std::exp2(-1.0 / rho0), std::exp(-3.5));
}

/// min(2^{-1/rho0}, e^{-13/6})
inline double threshold_decreasing(double rho0) {
    if (!(rho0 > 0.0) || !(rho0 < 1.0))
        throw std::domain_error("threshold_decreasing: rho0 must lie in (0,1)");
    return std::min(std::exp2(-1.0 / rho0), std::exp(-13.0 / 6.0));
}

inline ThresholdSpec make_threshold_spec(double rho0) {
    return {rho0, threshold_increasing(rho0), threshold_decreasing(rho0)};
}

enum class DerivativeKind { Caputo1Param, RL2Param };

struct MonotonicityReport {
    std::vector<double> rho_grid;
    double t = 0.0;
    std::vector<double> derivative_values;
    bool all_positive = false;
    bool all_negative = false;
    bool in_regime = true; // t within the relevant threshold for the grid start
    std::optional<std::pair<double, double>> first_violation; // (rho or n, value)
};

/// Checks y_{n+1} > y_n for n = 1..n_max-1 in log space, so deep underflow
/// cannot fake a violation. Terms within one ulp of each other in log
/// magnitude are treated as ties, not violations.
inline MonotonicityReport verify_term_monotonicity(double rho, double t, int n_max) {
    if (n_max < 2) throw std::domain_error("verify_term_monotonicity: n_max >= 2");
    MonotonicityReport rep;
    rep.t = t;
    rep.in_regime = t <= threshold_increasing(rho);
    TermLog prev = series_term_log(rho, t, 1);
    for (int n = 2; n <= n_max; ++n) {
        const TermLog cur = series_term_log(rho, t, n);
        bool greater;
        if (prev.sign != cur.sign) {
            greater = cur.sign > prev.sign;
        } else if (cur.sign == 0) {
            greater = false;
        } else if (cur.sign < 0) {
            greater = cur.log_mag < prev.log_mag - 1e-12;
        } else {
            greater = cur.log_mag > prev.log_mag + 1e-12;
        }
        // Both magnitudes far underflowed: indistinguishable, accept.
        if (!greater && cur.log_mag < -740.0 && prev.log_mag < -740.0) greater = true;
        if (!greater) {
            rep.first_violation = {static_cast<double>(n), series_term(rho, t, n).y_n};
            break;
        }
        prev = cur;
    }
    return rep;
}

/// The bracketed digamma-difference ratio from the four-case analysis:
///   |Phi(rho n + 1) - Phi(rho n + rho + 1)| / |ln t - Phi(rho n + 1)|
/// with each digamma replaced by the ln z - 1/z (lower) or ln z - 1/(2z)
/// (upper) bracket chosen by the case.
inline double verify_case_bound(double rho, double t, int n, int case_id) {
    if (n < 1) throw std::domain_error("verify_case_bound: n must be >= 1");
    if (case_id < 1 || case_id > 4)
        throw std::domain_error("verify_case_bound: case_id must be 1..4");
    const double a = rho * n + 1.0;
    const double b = rho * n + rho + 1.0;
    const auto lower = [](double z) { return std::log(z) - 1.0 / z; };
    const auto upper = [](double z) { return std::log(z) - 0.5 / z; };
    double phi_a = 0.0, phi_b = 0.0;
    switch (case_id) {
        case 1: phi_a = upper(a); phi_b = lower(b); break;
        case 2: phi_a = lower(a); phi_b = upper(b); break;
        case 3: phi_a = upper(a); phi_b = upper(b); break;
        case 4: phi_a = lower(a); phi_b = lower(b); break;
    }
    return std::abs(phi_a - phi_b) / std::abs(std::log(t) - phi_a);
}

/// Evaluates the kernel derivative over a rho grid and reports the sign
/// pattern. Out-of-regime t is allowed; the report flags it.
inline MonotonicityReport scan_derivative_sign(const std::vector<double>& rho_grid,
                                               double t, DerivativeKind kind,
                                               double rel_tol = 1e-10) {
    MonotonicityReport rep;
    rep.rho_grid = rho_grid;
    rep.t = t;
    for (double rho : rho_grid)
        if (!(rho > 0.0) || !(rho < 1.0))
            throw std::domain_error("scan_derivative_sign: grid must lie in (0,1)");
    if (!rho_grid.empty()) {
        const double rho0 = *std::min_element(rho_grid.begin(), rho_grid.end());
        rep.in_regime = kind == DerivativeKind::Caputo1Param
                            ? t <= threshold_increasing(rho0)
                            : t <= threshold_decreasing(rho0);
    }
    bool pos = !rho_grid.empty(), neg = !rho_grid.empty();
    for (double rho : rho_grid) {
        const double d = kind == DerivativeKind::Caputo1Param
                             ? dml_drho(rho, t, rel_tol)
                             : dml_rl_drho(rho, t, rel_tol);
        rep.derivative_values.push_back(d);
        if (!(d > 0.0)) pos = false;
        if (!(d < 0.0)) neg = false;
        // Violation relative to the sign the kind's theorem asserts.
        const bool expected_ok =
            kind == DerivativeKind::Caputo1Param ? d > 0.0 : d < 0.0;
        if (!expected_ok && !rep.first_violation) rep.first_violation = {rho, d};
    }
    rep.all_positive = pos;
    rep.all_negative = neg;
    return rep;
}

} // namespace mlrho

#endif // MLRHO_MONOTONICITY_HPP
