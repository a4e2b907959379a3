#ifndef MLRHO_SPECIAL_HPP
#define MLRHO_SPECIAL_HPP

#include <cmath>
#include <stdexcept>
#include <string>

// Gamma and digamma evaluators used by every series in the library.

namespace mlrho {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

namespace detail {

[[noreturn]] inline void domain_fail(const char* fn, double x) {
    throw std::domain_error(std::string(fn) + ": argument must be positive, got " +
                            std::to_string(x));
}

} // namespace detail

/// Gamma function for x > 0. Thin wrapper over the C library implementation,
/// which is accurate to a few ulp on this range.
inline double gamma_fn(double x) {
    if (!(x > 0.0)) detail::domain_fail("gamma_fn", x);
    return std::tgamma(x);
}

/// log Gamma for x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0)) detail::domain_fail("log_gamma", x);
    return std::lgamma(x);
}

/// Gamma(x) / Gamma(x + a) for x, x+a > 0, computed through lgamma so that
/// large arguments do not overflow.
inline double gamma_ratio(double x, double a) {
    if (!(x > 0.0) || !(x + a > 0.0)) detail::domain_fail("gamma_ratio", x);
    return std::exp(std::lgamma(x) - std::lgamma(x + a));
}

/// 1 / Gamma(x) for any real x. Entire function; returns 0 at the poles
/// x = 0, -1, -2, ... For x <= 0.5 uses the reflection formula.
inline double reciprocal_gamma(double x) {
    if (x > 0.5) return 1.0 / std::tgamma(x);
    // Exact zero at the poles: sin(pi x) in rounded arithmetic misses it.
    if (x <= 0.0 && x == std::floor(x)) return 0.0;
    // 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi. Gamma(1-x) overflows for
    // x < -170 or so; callers stay far from that.
    const double s = std::sin(M_PI * x);
    if (s == 0.0) return 0.0;
    const double lg = std::lgamma(1.0 - x);
    if (lg > 700.0) return 0.0; // sin factor cannot rescue an overflow here
    return s * std::exp(lg) / M_PI;
}

/// Digamma function for x > 0, absolute error below 1e-12.
/// Recurrence pushes the argument to >= 10, then the asymptotic expansion
/// psi(x) ~ ln x - 1/(2x) - sum B_{2n}/(2n x^{2n}).
inline double digamma(double x) {
    if (!(x > 0.0)) detail::domain_fail("digamma", x);
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Bernoulli-number coefficients B_{2n}/(2n), n = 1..7.
    const double series =
        inv2 * (1.0 / 12.0 -
        inv2 * (1.0 / 120.0 -
        inv2 * (1.0 / 252.0 -
        inv2 * (1.0 / 240.0 -
        inv2 * (1.0 / 132.0 -
        inv2 * (691.0 / 32760.0 -
        inv2 * (1.0 / 12.0)))))));
    return acc + std::log(x) - 0.5 * inv - series;
}

/// f(z) = z (ln z - digamma(z)); strictly decreasing from 1 to 1/2 on (0, inf).
inline double digamma_gap(double z) {
    return z * (std::log(z) - digamma(z));
}

/// Compensated (Kahan) accumulator.
class kahan_sum {
public:
    void add(double v) {
        const double y = v - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace mlrho

#endif // MLRHO_SPECIAL_HPP
