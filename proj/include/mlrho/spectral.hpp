#ifndef MLRHO_SPECTRAL_HPP
#define MLRHO_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mlrho/ml.hpp"
#include "mlrho/quadrature.hpp"
#include "mlrho/root_finding.hpp"
#include "mlrho/special.hpp"

// Separable domains with explicit Laplacian eigenpairs and the spectral
// forward solutions
//   Caputo:            u(x,t) = sum phi_k E_rho(-lambda_k t^rho) v_k(x)
//   Riemann-Liouville: u(x,t) = sum t^{rho-1} E_{rho,rho}(-lambda_k t^rho)
//                                   phi_k v_k(x)

namespace mlrho {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class DomainKind { Interval, Rectangle, Custom };
enum class FractionalKind { Caputo, RiemannLiouville };

class SpectralDomain {
public:
    using Evaluator = std::function<double(int, Point)>;

    /// Dirichlet interval (0, L): lambda_k = (k pi / L)^2,
    /// v_k = sqrt(2/L) sin(k pi x / L).
    static SpectralDomain interval(double length, int n_modes) {
        if (!(length > 0.0)) throw std::domain_error("interval: length must be positive");
        SpectralDomain d;
        d.kind_ = DomainKind::Interval;
        d.lx_ = length;
        d.eigenvalues_.reserve(n_modes);
        for (int k = 1; k <= n_modes; ++k) {
            const double w = k * M_PI / length;
            d.eigenvalues_.push_back(w * w);
        }
        return d;
    }

    /// Dirichlet rectangle (0,Lx)x(0,Ly), tensor modes sorted by eigenvalue.
    static SpectralDomain rectangle(double lx, double ly, int n_modes) {
        if (!(lx > 0.0) || !(ly > 0.0))
            throw std::domain_error("rectangle: sides must be positive");
        SpectralDomain d;
        d.kind_ = DomainKind::Rectangle;
        d.lx_ = lx;
        d.ly_ = ly;
        const int span = static_cast<int>(std::ceil(std::sqrt(4.0 * n_modes))) + 2;
        std::vector<std::pair<double, std::pair<int, int>>> modes;
        for (int i = 1; i <= span; ++i)
            for (int j = 1; j <= span; ++j) {
                const double wx = i * M_PI / lx, wy = j * M_PI / ly;
                modes.push_back({wx * wx + wy * wy, {i, j}});
            }
        std::sort(modes.begin(), modes.end());
        for (int k = 0; k < n_modes; ++k) {
            d.eigenvalues_.push_back(modes[k].first);
            d.rect_modes_.push_back(modes[k].second);
        }
        return d;
    }

    /// Explicit spectrum with a user-supplied eigenfunction evaluator
    /// (1-based mode index). The first eigenvalue may be negative.
    static SpectralDomain custom(std::vector<double> eigenvalues, Evaluator ev,
                                 double sup_bound = 1.0) {
        if (eigenvalues.empty())
            throw std::domain_error("custom: at least one eigenvalue required");
        for (std::size_t i = 1; i < eigenvalues.size(); ++i) {
            const bool ok = i == 1 ? eigenvalues[0] < eigenvalues[1]
                                   : eigenvalues[i - 1] <= eigenvalues[i];
            if (!ok) throw std::domain_error("custom: eigenvalues must be ascending");
        }
        SpectralDomain d;
        d.kind_ = DomainKind::Custom;
        d.eigenvalues_ = std::move(eigenvalues);
        d.custom_eval_ = std::move(ev);
        d.custom_sup_ = sup_bound;
        return d;
    }

    DomainKind kind() const { return kind_; }
    int mode_count() const { return static_cast<int>(eigenvalues_.size()); }
    double length() const { return lx_; }
    double length_y() const { return ly_; }
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }

    double eigenvalue(int k) const { return eigenvalues_.at(k - 1); }

    double eigenfunction(int k, Point p) const {
        switch (kind_) {
            case DomainKind::Interval:
                return std::sqrt(2.0 / lx_) * std::sin(k * M_PI * p.x / lx_);
            case DomainKind::Rectangle: {
                const auto [i, j] = rect_modes_.at(k - 1);
                return 2.0 / std::sqrt(lx_ * ly_) * std::sin(i * M_PI * p.x / lx_) *
                       std::sin(j * M_PI * p.y / ly_);
            }
            case DomainKind::Custom:
                if (!custom_eval_)
                    throw std::domain_error("custom domain has no eigenfunction evaluator");
                return custom_eval_(k, p);
        }
        return 0.0;
    }

    /// sup_x |v_k(x)|, used by tail bounds.
    double eigenfunction_sup(int /*k*/) const {
        switch (kind_) {
            case DomainKind::Interval: return std::sqrt(2.0 / lx_);
            case DomainKind::Rectangle: return 2.0 / std::sqrt(lx_ * ly_);
            case DomainKind::Custom: return custom_sup_;
        }
        return 1.0;
    }

private:
    DomainKind kind_ = DomainKind::Interval;
    double lx_ = 1.0, ly_ = 1.0;
    std::vector<double> eigenvalues_;
    std::vector<std::pair<int, int>> rect_modes_;
    Evaluator custom_eval_;
    double custom_sup_ = 1.0;
};

enum class FieldSource { Given, ProjectedFromFunction };

struct InitialField {
    std::vector<double> coefficients;
    FieldSource source = FieldSource::Given;
    double decay_exponent_estimate = 0.0; // p-hat with |phi_k| ~ lambda_k^{-(p+1)/2}
    double parseval_defect = 0.0;         // | ||f||^2 - sum phi_k^2 |, projections only
    bool quadrature_warning = false;      // defect failed to shrink under refinement

    double coefficient(int k) const {
        return k <= static_cast<int>(coefficients.size()) ? coefficients[k - 1] : 0.0;
    }
};

namespace detail {

template <class F>
double composite_gl(const F& f, double a, double b, int panels) {
    double s = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) s += gl16_panel(f, a + p * h, a + (p + 1) * h);
    return s;
}

inline double fit_decay_exponent(const SpectralDomain& domain,
                                 const std::vector<double>& phi) {
    // Least-squares slope of ln|phi_k| against ln lambda_k over the tail half.
    std::vector<double> lx, ly;
    for (std::size_t k = phi.size() / 2; k < phi.size(); ++k) {
        if (std::abs(phi[k]) > 1e-14 && domain.eigenvalue(static_cast<int>(k) + 1) > 0.0) {
            lx.push_back(std::log(domain.eigenvalue(static_cast<int>(k) + 1)));
            ly.push_back(std::log(std::abs(phi[k])));
        }
    }
    if (lx.size() < 2) return 0.0;
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    if (den == 0.0) return 0.0;
    const double slope = num / den; // = -(p+1)/2
    return std::max(0.0, -2.0 * slope - 1.0);
}

} // namespace detail

/// Fourier coefficients phi_k = (f, v_k) by composite Gauss-Legendre
/// quadrature, with panel doubling until the Parseval defect stabilizes.
inline InitialField project_initial(const SpectralDomain& domain,
                                    const std::function<double(Point)>& f,
                                    int n_modes, int quad_points) {
    if (n_modes < 1) throw std::domain_error("project_initial: n_modes >= 1");
    if (quad_points < 4 * n_modes)
        throw std::domain_error("project_initial: quad_points must be >= 4*n_modes");
    if (n_modes > domain.mode_count())
        throw std::domain_error("project_initial: domain has too few modes");
    if (domain.kind() == DomainKind::Custom)
        throw std::domain_error("project_initial: custom domains carry explicit "
                                "coefficients, nothing to project");

    auto project_once = [&](int panels, std::vector<double>& phi, double& norm_sq) {
        phi.assign(n_modes, 0.0);
        if (domain.kind() == DomainKind::Interval) {
            const double L = domain.length();
            for (int k = 1; k <= n_modes; ++k)
                phi[k - 1] = detail::composite_gl(
                    [&](double x) {
                        return f({x, 0.0}) * domain.eigenfunction(k, {x, 0.0});
                    },
                    0.0, L, panels);
            norm_sq = detail::composite_gl(
                [&](double x) {
                    const double v = f({x, 0.0});
                    return v * v;
                },
                0.0, L, panels);
        } else {
            const double Lx = domain.length(), Ly = domain.length_y();
            auto integ2 = [&](const std::function<double(Point)>& g) {
                return detail::composite_gl(
                    [&](double x) {
                        return detail::composite_gl(
                            [&](double y) { return g({x, y}); }, 0.0, Ly, panels);
                    },
                    0.0, Lx, panels);
            };
            for (int k = 1; k <= n_modes; ++k)
                phi[k - 1] = integ2(
                    [&](Point p) { return f(p) * domain.eigenfunction(k, p); });
            norm_sq = integ2([&](Point p) {
                const double v = f(p);
                return v * v;
            });
        }
    };

    const int base_panels =
        std::max(2, (quad_points + 15) / 16 / (domain.kind() == DomainKind::Rectangle ? 4 : 1));
    std::vector<double> phi, phi2;
    double norm_sq = 0.0, norm_sq2 = 0.0;
    project_once(base_panels, phi, norm_sq);
    project_once(2 * base_panels, phi2, norm_sq2);

    auto defect = [](const std::vector<double>& c, double nsq) {
        double s = 0.0;
        for (double v : c) s += v * v;
        return std::abs(nsq - s);
    };
    const double d1 = defect(phi, norm_sq);
    const double d2 = defect(phi2, norm_sq2);

    InitialField field;
    field.coefficients = std::move(phi2);
    field.source = FieldSource::ProjectedFromFunction;
    field.parseval_defect = d2;
    field.quadrature_warning = d2 > d1 + 1e-12 && d2 > 1e-10;
    field.decay_exponent_estimate = detail::fit_decay_exponent(domain, field.coefficients);
    return field;
}

struct ForwardSolution {
    SpectralDomain domain;
    InitialField field;
    double rho = 1.0;
    FractionalKind derivative_kind = FractionalKind::Caputo;
    int truncation = 0; // N modes used in evaluation
    double tail_bound = 0.0;
};

inline constexpr double rl_near_singular_t = 1e-8;

inline bool near_singular(const ForwardSolution& sol, double t) {
    return sol.derivative_kind == FractionalKind::RiemannLiouville &&
           t < rl_near_singular_t;
}

/// One spectral mode factor: E_rho(-lambda t^rho) for Caputo,
/// t^{rho-1} E_{rho,rho}(-lambda t^rho) for Riemann-Liouville. Negative
/// lambda (Alimov spectra) is combined in log scale once the argument
/// exceeds 1, so growing modes cannot overflow prematurely.
inline double mode_factor(double rho, double lambda, double t, FractionalKind kind) {
    const double z = -lambda * std::pow(t, rho);
    if (kind == FractionalKind::Caputo) {
        if (rho == 1.0) return std::exp(-lambda * t);
        return ml_value(rho, 1.0, z);
    }
    const double prefactor_log = (rho - 1.0) * std::log(t);
    if (z > 1.0) {
        const double lg = (rho == 1.0 ? z : log_ml_pos(rho, z)) + prefactor_log;
        if (lg > 709.0)
            throw ml_overflow_error("mode_factor: growing mode exceeds double range", lg);
        return std::exp(lg);
    }
    if (rho == 1.0) return std::exp(z);
    return std::exp(prefactor_log) * ml_value(rho, rho, z);
}

inline double forward_eval(const ForwardSolution& sol, Point x, double t) {
    if (!(t > 0.0))
        throw std::domain_error("forward_eval: t must be positive (the RL solution "
                                "is singular at t = 0)");
    const int N = sol.truncation > 0
                      ? std::min(sol.truncation, sol.domain.mode_count())
                      : sol.domain.mode_count();
    kahan_sum sum;
    for (int k = 1; k <= N; ++k) {
        const double phi = sol.field.coefficient(k);
        if (phi == 0.0) continue;
        const double v = sol.domain.eigenfunction(k, x);
        if (v == 0.0) continue;
        const double lambda = sol.domain.eigenvalue(k);
        sum.add(phi * v * mode_factor(sol.rho, lambda, t, sol.derivative_kind));
    }
    return sum.value();
}

struct TruncationBound {
    double value = 0.0;
    bool tail_extrapolated = false;
    bool conservative = false; // decay estimate unavailable past stored modes
};

/// Tail bound sum_{k>N} |phi_k| sup|v_k| C/(1 + lambda_k t^rho) with the
/// envelope C = 1 + 1/Gamma(1-rho), extrapolated past the stored modes with
/// the field's decay exponent.
inline TruncationBound truncation_bound(const SpectralDomain& domain,
                                        const InitialField& field, double rho,
                                        double t, int N) {
    if (N < 0) throw std::domain_error("truncation_bound: N must be >= 0");
    if (N + 1 <= domain.mode_count() && !(domain.eigenvalue(N + 1) > 0.0))
        throw std::domain_error("truncation_bound: lambda_{N+1} must be positive");
    const double C = 1.0 + 1.0 / gamma_fn(1.0 - rho);
    const double tp = std::pow(t, rho);
    const int K = std::min<int>(domain.mode_count(),
                                static_cast<int>(field.coefficients.size()));
    TruncationBound out;
    double last = 0.0, prev = 0.0;
    for (int k = N + 1; k <= K; ++k) {
        prev = last;
        last = std::abs(field.coefficient(k)) * domain.eigenfunction_sup(k) * C /
               (1.0 + domain.eigenvalue(k) * tp);
        out.value += last;
    }
    // Geometric extrapolation of the unavailable remainder.
    if (K > N) {
        const double ratio = (prev > 0.0 && last > 0.0) ? last / prev : 0.0;
        if (ratio > 0.0 && ratio < 0.999) {
            out.value += last * ratio / (1.0 - ratio);
            out.tail_extrapolated = true;
        } else if (field.decay_exponent_estimate > 1.0) {
            // |phi_k| ~ lambda_k^{-(p+1)/2} and lambda ~ k^2 give a summable
            // tail dominated by a geometric-like decay; double the last term.
            out.value += 2.0 * last;
            out.tail_extrapolated = true;
        } else if (last > 0.0) {
            out.value += 10.0 * last;
            out.conservative = true;
        }
    }
    return out;
}

/// First (negative) eigenvalue of the Alimov operator: lambda_1 = -mu^2 with
/// mu the unique positive root of mu tanh(mu) = h H.
inline double alimov_first_eigenvalue(double h, double H) {
    if (!(h > 0.0) || !(H > 0.0))
        throw std::domain_error("alimov_first_eigenvalue: h and H must be positive");
    const double target = h * H;
    const double hi = std::max(2.0, target + 1.0);
    const double mu = bisect_monotone(
        [&](double m) { return m * std::tanh(m) - target; }, 1e-12, hi, 1e-12, 200);
    return -mu * mu;
}

/// Parseval: || u(., t0) ||^2 = sum phi_k^2 E_rho(-lambda_k t0^rho)^2.
inline double l2_norm_sq(const ForwardSolution& sol, double t0) {
    if (sol.derivative_kind != FractionalKind::Caputo)
        throw std::domain_error("l2_norm_sq: defined for the Caputo solution");
    if (!(t0 > 0.0)) throw std::domain_error("l2_norm_sq: t0 must be positive");
    const int N = sol.truncation > 0
                      ? std::min(sol.truncation, sol.domain.mode_count())
                      : sol.domain.mode_count();
    kahan_sum sum;
    for (int k = 1; k <= N; ++k) {
        const double phi = sol.field.coefficient(k);
        if (phi == 0.0) continue;
        const double e = mode_factor(sol.rho, sol.domain.eigenvalue(k), t0,
                                     FractionalKind::Caputo);
        sum.add(phi * phi * e * e);
    }
    return sum.value();
}

} // namespace mlrho

#endif // MLRHO_SPECTRAL_HPP
