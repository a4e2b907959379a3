#ifndef MLRHO_ML_HPP
#define MLRHO_ML_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "mlrho/quadrature.hpp"
#include "mlrho/special.hpp"

// Evaluation of the two-parameter Mittag-Leffler function
//   E_{rho,mu}(z) = sum_{k>=0} z^k / Gamma(rho k + mu)
// for real z, rho in (0,1], mu > 0.
//
// Three regimes:
//   * the defining power series, whenever its alternating cancellation stays
//     within the requested tolerance in double precision;
//   * the real-line integral representation (Gorenflo/Loutchko/Luchko) for
//     moderate negative z where the series is numerically unusable;
//   * the algebraic asymptotic expansion for z < -30.
// Positive arguments never cancel, so the series handles them up to the
// overflow boundary; past it log_ml_pos carries the log-scale value.

namespace mlrho {

enum class Method { Series, AsymptoticNeg, AsymptoticPos, ClosedForm, Integral };

struct MLQuery {
    double rho;
    double mu;
    double z;
    double rel_tol = 1e-12;

    void validate() const {
        if (!(rho > 0.0) || !(rho <= 1.0))
            throw std::domain_error("MLQuery: rho must lie in (0,1]");
        if (!(mu > 0.0))
            throw std::domain_error("MLQuery: mu must be positive");
        if (!(rel_tol > 0.0) || !(rel_tol <= 1e-3))
            throw std::domain_error("MLQuery: rel_tol must lie in (0, 1e-3]");
        if (!std::isfinite(z))
            throw std::domain_error("MLQuery: z must be finite");
    }
};

struct EvalResult {
    double value = 0.0;
    double abs_error_bound = 0.0;
    Method method = Method::Series;
    int terms_used = 0;
};

class accuracy_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when the requested value exceeds the double range; log_value holds
/// the natural log of the (positive) result.
class ml_overflow_error : public std::runtime_error {
public:
    ml_overflow_error(const std::string& what, double log_value)
        : std::runtime_error(what), log_value_(log_value) {}
    double log_value() const { return log_value_; }

private:
    double log_value_;
};

namespace detail {

inline double ln_series_term(double rho, double mu, double ln_r, double k) {
    return k * ln_r - std::lgamma(rho * k + mu);
}

/// Natural log of the largest term of the series at |z| = r.
inline double series_peak_log(double rho, double mu, double r) {
    if (r <= 0.0) return -std::lgamma(mu);
    const double ln_r = std::log(r);
    // Peak near k* = r^{1/rho} / rho; bracket it and take the max.
    const double k_star = std::min(std::pow(r, 1.0 / rho) / rho, 1e9);
    double peak = std::max(ln_series_term(rho, mu, ln_r, 0.0),
                           ln_series_term(rho, mu, ln_r, 1.0));
    for (double k : {0.5 * k_star, k_star, 1.5 * k_star})
        if (k >= 1.0) peak = std::max(peak, ln_series_term(rho, mu, ln_r, k));
    return peak;
}

/// Number of terms until the series terms drop below exp(ln_cut), or -1 if
/// that exceeds max_terms.
inline int series_length_estimate(double rho, double mu, double r, double ln_cut,
                                  int max_terms) {
    const double ln_r = std::log(std::max(r, 1e-300));
    const double k_star = std::pow(r, 1.0 / rho) / rho;
    double k = std::max(4.0, 2.0 * k_star);
    while (k <= max_terms) {
        if (ln_series_term(rho, mu, ln_r, k) < ln_cut) return static_cast<int>(k) + 1;
        k *= 1.5;
    }
    return -1;
}

inline EvalResult ml_series(double rho, double mu, double z, double rel_tol,
                            int max_terms = 10000) {
    kahan_sum sum;
    double peak = 0.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    int k = 0;
    double last_mag = 0.0;
    double ln_weight = 1.0; // largest |k ln r| + |lgamma|, drives term rounding
    const double ln_r = (z == 0.0) ? 0.0 : std::log(std::abs(z));
    for (; k < max_terms; ++k) {
        const double lg = std::lgamma(rho * k + mu);
        const double ln_t = k * ln_r - lg;
        double term = (ln_t < -745.0) ? 0.0 : std::exp(ln_t);
        if (z < 0.0 && (k & 1)) term = -term;
        sum.add(term);
        const double mag = std::abs(term);
        peak = std::max(peak, mag);
        ln_weight = std::max(ln_weight, std::abs(k * ln_r) + std::abs(lg));
        last_mag = mag;
        const double scale = std::max(std::abs(sum.value()),
                                      std::numeric_limits<double>::min());
        if (k >= 1 && mag <= prev_mag && mag <= 0.1 * rel_tol * scale) {
            ++k;
            break;
        }
        if (z == 0.0) {
            ++k;
            break;
        }
        prev_mag = mag;
    }
    EvalResult res;
    res.value = sum.value();
    // Rounding of individual terms (computed through exp/lgamma) dominates;
    // each carries relative error ~ eps * (|k ln r| + |lgamma|), so the sum
    // error scales with the largest term times that log magnitude.
    res.abs_error_bound = peak * ln_weight * 3e-15 + last_mag;
    res.method = Method::Series;
    res.terms_used = k;
    return res;
}

/// Integrand of the real-line representation for z < 0, mu < 1 + rho.
inline double ml_kernel(double rho, double mu, double z, double r) {
    const double k1 = std::pow(r, (1.0 - mu) / rho) * std::exp(-std::pow(r, 1.0 / rho)) /
                      (M_PI * rho);
    const double k2 = r * std::sin(M_PI * (1.0 - mu)) - z * std::sin(M_PI * (1.0 - mu + rho));
    const double k3 = r * r - 2.0 * r * z * std::cos(M_PI * rho) + z * z;
    return k1 * k2 / k3;
}

inline EvalResult ml_integral(double rho, double mu, double z, double rel_tol);

/// E_{rho,mu}(z) for z < 0 via the integral representation. mu > 1 is reduced
/// first with E_{rho,mu}(z) = (E_{rho,mu-rho}(z) - 1/Gamma(mu-rho)) / z: it is
/// required for validity at mu >= 1 + rho, and below that it still removes the
/// r^{(1-mu)/rho} endpoint singularity that degrades the quadrature.
inline EvalResult ml_integral(double rho, double mu, double z, double rel_tol) {
    if (mu > 1.0) {
        EvalResult inner = ml_integral(rho, mu - rho, z, rel_tol);
        EvalResult res = inner;
        res.value = (inner.value - reciprocal_gamma(mu - rho)) / z;
        res.abs_error_bound = inner.abs_error_bound / std::abs(z) + 1e-16;
        return res;
    }
    const double r_abs = -z;
    const double value_scale = 0.05 / (1.0 + r_abs);
    const double abs_tol = std::max(1e-15, 0.05 * rel_tol * value_scale);
    const double decay = std::max(50.0, -std::log(abs_tol) + 30.0);
    const double upper = std::max({1.0, 2.0 * r_abs, std::pow(decay, rho)});
    auto f = [&](double r) { return ml_kernel(rho, mu, z, r); };
    double total = 0.0;
    // Split at |z| where the denominator can develop a narrow minimum.
    if (r_abs < upper) {
        total = integrate_adaptive(f, 0.0, r_abs, 0.5 * abs_tol) +
                integrate_adaptive(f, r_abs, upper, 0.5 * abs_tol);
    } else {
        total = integrate_adaptive(f, 0.0, upper, abs_tol);
    }
    EvalResult res;
    res.value = total;
    res.abs_error_bound = 4.0 * abs_tol;
    res.method = Method::Integral;
    res.terms_used = 0;
    return res;
}

} // namespace detail

/// K-term algebraic expansion of E_{rho,mu}(-r) for r > 1:
///   E_{rho,mu}(-r) = sum_{k=1..} (-1)^{k+1} r^{-k} / Gamma(mu - rho k) + ...
/// Terms whose Gamma argument sits on a pole contribute nothing (1/Gamma is
/// entire and vanishes there); K counts the contributing terms.
inline EvalResult ml_asymptotic_neg(double rho, double mu, double r, int K) {
    if (!(rho > 0.0) || !(rho < 1.0))
        throw std::domain_error("ml_asymptotic_neg: rho must lie in (0,1)");
    if (!(r > 1.0)) throw std::domain_error("ml_asymptotic_neg: r must exceed 1");
    if (K < 1) throw std::domain_error("ml_asymptotic_neg: K must be >= 1");

    kahan_sum sum;
    int used = 0;
    int k = 1;
    double rk = 1.0 / r;
    double prev_mag = std::numeric_limits<double>::infinity();
    const int k_cap = K + 64;
    for (; k <= k_cap && used < K; ++k, rk /= r) {
        const double rg = reciprocal_gamma(mu - rho * k);
        if (rg == 0.0) continue; // pole: term vanishes, does not count toward K
        const double term = ((k & 1) ? 1.0 : -1.0) * rk * rg;
        // Divergent tail: stop at the smallest term (optimal truncation).
        if (std::abs(term) > prev_mag) break;
        prev_mag = std::abs(term);
        sum.add(term);
        ++used;
    }
    // Largest of the next few omitted terms bounds the algebraic truncation
    // error. A single term is not enough: when mu - rho*k sits near a Gamma
    // pole the stopping term is artificially depressed and the tail resurges
    // to its envelope a couple of terms later.
    double omitted = 0.0;
    int seen = 0;
    for (int j = k; j <= k + 64 && seen < 4; ++j) {
        const double rg = reciprocal_gamma(mu - rho * j);
        if (rg == 0.0) continue;
        omitted = std::max(omitted, std::abs(std::pow(r, -j) * rg));
        ++seen;
    }
    // For rho > 1/2 the expansion also omits an oscillatory-exponential
    // contribution of scale e^{r^{1/rho} cos(pi/rho)} (cos < 0 there); it
    // dominates the remainder at moderate r and must enter the bound.
    double exp_scale = 0.0;
    if (rho > 0.5) {
        const double w = std::pow(r, 1.0 / rho);
        const double ln_mag = w * std::cos(M_PI / rho) +
                              ((1.0 - mu) / rho) * std::log(r);
        if (ln_mag > -740.0) exp_scale = (2.0 / rho) * std::exp(ln_mag);
    }
    EvalResult res;
    res.value = sum.value();
    // The true remainder can exceed the first omitted term by a small factor.
    res.abs_error_bound =
        10.0 * (omitted + exp_scale) + 4e-16 * std::abs(sum.value());
    res.method = Method::AsymptoticNeg;
    res.terms_used = used;
    return res;
}

inline EvalResult ml(const MLQuery& q);

/// ln E_{rho,rho}(z) for z > 1. Exact (log of the series) while the series
/// fits in double range; the leading exponential term past it.
inline double log_ml_pos(double rho, double z) {
    if (!(rho > 0.0) || !(rho <= 1.0))
        throw std::domain_error("log_ml_pos: rho must lie in (0,1]");
    if (!(z > 1.0)) throw std::domain_error("log_ml_pos: z must exceed 1");
    const double growth = std::pow(z, 1.0 / rho);
    if (growth < 700.0) {
        MLQuery q{rho, rho, z, 1e-12};
        return std::log(ml(q).value);
    }
    return growth + (1.0 / rho - 1.0) * std::log(z) - std::log(rho);
}

inline EvalResult ml(const MLQuery& q) {
    q.validate();
    const double rho = q.rho, mu = q.mu, z = q.z;

    if (z == 0.0) {
        EvalResult res;
        res.value = 1.0 / gamma_fn(mu);
        res.abs_error_bound = std::abs(res.value) * 1e-15;
        res.method = Method::ClosedForm;
        res.terms_used = 1;
        return res;
    }
    if (rho == 1.0 && mu == 1.0) {
        if (z > 709.0)
            throw ml_overflow_error("ml: E_1(z) overflows double range", z);
        EvalResult res;
        res.value = std::exp(z);
        res.abs_error_bound = std::abs(res.value) * 1e-15;
        res.method = Method::ClosedForm;
        res.terms_used = 1;
        return res;
    }

    if (z > 0.0) {
        const double growth = std::pow(z, 1.0 / rho);
        if (growth > 700.0) {
            const double log_value =
                growth + ((1.0 - mu) / rho) * std::log(z) - std::log(rho);
            throw ml_overflow_error("ml: requested tolerance unachievable, value "
                                    "exceeds double range",
                                    log_value);
        }
        EvalResult res = detail::ml_series(rho, mu, z, q.rel_tol);
        if (res.terms_used >= 10000)
            throw accuracy_error("ml: series did not converge within 10000 terms");
        return res;
    }

    // z < 0: the series is self-validating through its error bound (driven by
    // the peak-term cancellation); fall through to the asymptotic expansion or
    // the integral representation when the bound misses the tolerance.
    const double r = -z;
    const double peak_log = detail::series_peak_log(rho, mu, r);
    EvalResult best;
    bool have_best = false;
    if (peak_log < 690.0) {
        EvalResult res = detail::ml_series(rho, mu, z, q.rel_tol);
        if (res.terms_used < 10000) {
            if (res.abs_error_bound <= q.rel_tol * std::abs(res.value)) return res;
            best = res;
            have_best = true;
        }
    }
    // The integral kernel develops a near-pole of width ~ (1 - rho) at
    // r = |z|; past this rho the asymptotic expansion takes over instead.
    const bool integral_usable = rho <= 0.9;
    if (rho < 1.0 && r > 1.0 && (r > 30.0 || !integral_usable)) {
        // Choose K so the first omitted term is below tolerance; cap at 20.
        EvalResult cand = ml_asymptotic_neg(rho, mu, r, 1);
        for (int K = 2; K <= 20; ++K) {
            EvalResult next = ml_asymptotic_neg(rho, mu, r, K);
            if (next.abs_error_bound < cand.abs_error_bound) cand = next;
            if (cand.abs_error_bound <= q.rel_tol * std::abs(cand.value)) break;
        }
        if (!have_best || cand.abs_error_bound < best.abs_error_bound) best = cand;
        have_best = true;
        if (r > 30.0 || best.abs_error_bound <= q.rel_tol * std::abs(best.value))
            return best;
    }
    if (rho < 1.0 && integral_usable)
        return detail::ml_integral(rho, mu, z, q.rel_tol);
    if (have_best) return best;

    // rho == 1 with mu != 1, or tiny r near rho = 1: series with an honest bound.
    return detail::ml_series(rho, mu, z, q.rel_tol);
}

/// Convenience wrapper: E_{rho,mu}(z) at default tolerance.
inline double ml_value(double rho, double mu, double z, double rel_tol = 1e-12) {
    return ml(MLQuery{rho, mu, z, rel_tol}).value;
}

} // namespace mlrho

#endif // MLRHO_ML_HPP
