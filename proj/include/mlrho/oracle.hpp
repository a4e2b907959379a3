#ifndef MLRHO_ORACLE_HPP
#define MLRHO_ORACLE_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include <mpfr.h>

// Extended-precision references, independent of the double-precision
// evaluation paths: the Mittag-Leffler series summed in MPFR arithmetic and
// finite-difference derivatives built on it. Test support only.

namespace mlrho::oracle {

struct PrecisionConfig {
    int working_digits = 60; // decimal digits carried through the summation
    int max_terms = 2000000;
    double fd_step = 1e-6;
};

/// Working digits needed for the alternating series at argument z: the peak
/// term has about |z|^{1/rho}/ln 10 decimal digits of cancellation headroom.
inline int suggested_digits(double rho, double z) {
    if (z >= 0.0) return 40;
    const double peak = std::pow(-z, 1.0 / rho) / std::log(10.0);
    return static_cast<int>(peak) + 40;
}

namespace detail {

inline mpfr_prec_t bits_for(int decimal_digits) {
    return static_cast<mpfr_prec_t>(decimal_digits * 3.3219280948873623) + 64;
}

} // namespace detail

/// E_{rho,mu}(z) by direct summation of the defining series at
/// working_digits decimal digits, rounded to nearest double.
inline double ml_reference(double rho, double mu, double z,
                           const PrecisionConfig& cfg = {}) {
    if (cfg.working_digits < 30)
        throw std::domain_error("ml_reference: working_digits must be >= 30");
    if (std::abs(z) > 100.0)
        throw std::domain_error("ml_reference: |z| must be <= 100 (oracle range)");
    const mpfr_prec_t prec = detail::bits_for(cfg.working_digits);
    mpfr_t sum, power, arg, gam, term, zz, tol;
    mpfr_inits2(prec, sum, power, arg, gam, term, zz, tol, (mpfr_ptr) nullptr);
    mpfr_set_d(zz, z, MPFR_RNDN);
    mpfr_set_zero(sum, 1);
    mpfr_set_ui(power, 1, MPFR_RNDN); // z^k
    mpfr_set_ui(tol, 10, MPFR_RNDN);
    mpfr_pow_si(tol, tol, -(cfg.working_digits + 5), MPFR_RNDN);

    bool converged = false;
    for (long k = 0; k < cfg.max_terms; ++k) {
        // arg = mu + rho * k, formed in extended precision: rho * k as a
        // double product already misses ulps that the peak term amplifies.
        mpfr_set_d(arg, rho, MPFR_RNDN);
        mpfr_mul_ui(arg, arg, static_cast<unsigned long>(k), MPFR_RNDN);
        mpfr_add_d(arg, arg, mu, MPFR_RNDN);
        mpfr_gamma(gam, arg, MPFR_RNDN);
        mpfr_div(term, power, gam, MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
        mpfr_mul(power, power, zz, MPFR_RNDN);

        // Stop once past the peak: |term| below tol both absolutely and
        // relative to the largest magnitude seen so far.
        mpfr_abs(term, term, MPFR_RNDN);
        if (k > 0 && mpfr_cmp(term, tol) < 0) {
            // The terms are unimodal in k; one sub-threshold term past the
            // peak means all later terms are smaller still.
            const double k_peak = std::pow(std::abs(z), 1.0 / rho) / rho;
            if (static_cast<double>(k) > k_peak) {
                converged = true;
                break;
            }
        }
    }
    const double out = mpfr_get_d(sum, MPFR_RNDN);
    mpfr_clears(sum, power, arg, gam, term, zz, tol, (mpfr_ptr) nullptr);
    if (!converged)
        throw std::runtime_error("ml_reference: max_terms exhausted (oracle "
                                 "infrastructure failure)");
    return out;
}

struct FdResult {
    double value = 0.0;
    bool step_warning = false; // step too small for the configured precision
};

/// Central difference [E_{rho+h}(-t^{rho+h}) - E_{rho-h}(-t^{rho-h})] / (2h)
/// via ml_reference.
inline FdResult dml_fd(double rho, double t, double step,
                       const PrecisionConfig& cfg = {}) {
    if (!(rho + step < 1.0) || !(rho - step > 0.0))
        throw std::domain_error("dml_fd: rho +/- step must lie in (0,1)");
    if (!(t > 0.0)) throw std::domain_error("dml_fd: t must be positive");
    FdResult res;
    // The difference loses about -log10(step) digits; warn when the working
    // precision cannot deliver a full double result after that loss.
    res.step_warning = -std::log10(step) > cfg.working_digits - 20;
    const double up = ml_reference(rho + step, 1.0, -std::pow(t, rho + step), cfg);
    const double dn = ml_reference(rho - step, 1.0, -std::pow(t, rho - step), cfg);
    res.value = (up - dn) / (2.0 * step);
    return res;
}

/// Gamma reference at extended precision (sanity anchor for gamma_fn).
inline double gamma_reference(double x, const PrecisionConfig& cfg = {}) {
    const mpfr_prec_t prec = detail::bits_for(cfg.working_digits);
    mpfr_t v;
    mpfr_init2(v, prec);
    mpfr_set_d(v, x, MPFR_RNDN);
    mpfr_gamma(v, v, MPFR_RNDN);
    const double out = mpfr_get_d(v, MPFR_RNDN);
    mpfr_clear(v);
    return out;
}

/// Digamma reference at extended precision.
inline double digamma_reference(double x, const PrecisionConfig& cfg = {}) {
    const mpfr_prec_t prec = detail::bits_for(cfg.working_digits);
    mpfr_t v;
    mpfr_init2(v, prec);
    mpfr_set_d(v, x, MPFR_RNDN);
    mpfr_digamma(v, v, MPFR_RNDN);
    const double out = mpfr_get_d(v, MPFR_RNDN);
    mpfr_clear(v);
    return out;
}

} // namespace mlrho::oracle

#endif // MLRHO_ORACLE_HPP
