#ifndef MLRHO_ROOT_FINDING_HPP
#define MLRHO_ROOT_FINDING_HPP

#include <cmath>
#include <functional>
#include <stdexcept>

namespace mlrho {

/// Bisection on [lo, hi] for a function with f(lo) and f(hi) of opposite
/// sign. Stops when the bracket is narrower than tol.
template <class F>
double bisect_monotone(const F& f, double lo, double hi, double tol,
                       int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::domain_error("bisect_monotone: endpoints do not bracket a root");
    for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace mlrho

#endif // MLRHO_ROOT_FINDING_HPP
