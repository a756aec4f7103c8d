#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <variant>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "clutterstat/error.hpp"

namespace clutterstat {

/// Candidate amplitude families, in the fixed tie-break order used when
/// ranking fits: Weibull < Rayleigh < Gamma < LogNormal.
enum class Family { Weibull = 0, Rayleigh = 1, Gamma = 2, LogNormal = 3 };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::Weibull:   return "weibull";
        case Family::Rayleigh:  return "rayleigh";
        case Family::Gamma:     return "gamma";
        case Family::LogNormal: return "lognormal";
    }
    return "?";
}

inline Family parse_family(const std::string& name) {
    if (name == "weibull")   return Family::Weibull;
    if (name == "rayleigh")  return Family::Rayleigh;
    if (name == "gamma")     return Family::Gamma;
    if (name == "lognormal") return Family::LogNormal;
    throw UnsupportedModelError("unknown family name: " + name);
}

/// Weibull shape/scale pair. alpha == 1 reduces to the exponential,
/// alpha == 2 to a Rayleigh with sigma = beta / sqrt(2).
struct WeibullParams {
    double alpha;  ///< shape, dimensionless
    double beta;   ///< scale, amplitude units

    WeibullParams(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
        if (!(std::isfinite(alpha) && alpha > 0.0))
            throw DomainError("WeibullParams: alpha must be finite and > 0");
        if (!(std::isfinite(beta) && beta > 0.0))
            throw DomainError("WeibullParams: beta must be finite and > 0");
    }
};

/// Log-normal parameters in the log domain: the underlying normal has
/// mean gamma_loc and standard deviation eta.
struct LogNormalParams {
    double eta;        ///< log-domain shape (std dev of log amplitude)
    double gamma_loc;  ///< log-domain location (mean of log amplitude)

    LogNormalParams(double eta_, double gamma_loc_) : eta(eta_), gamma_loc(gamma_loc_) {
        if (!(std::isfinite(eta) && eta > 0.0))
            throw DomainError("LogNormalParams: eta must be finite and > 0");
        if (!std::isfinite(gamma_loc))
            throw DomainError("LogNormalParams: gamma_loc must be finite");
    }
};

/// Gamma shape/scale pair.
struct GammaParams {
    double a;  ///< shape, dimensionless
    double b;  ///< scale, amplitude units

    GammaParams(double a_, double b_) : a(a_), b(b_) {
        if (!(std::isfinite(a) && a > 0.0))
            throw DomainError("GammaParams: a must be finite and > 0");
        if (!(std::isfinite(b) && b > 0.0))
            throw DomainError("GammaParams: b must be finite and > 0");
    }
};

/// Rayleigh scale parameter.
struct RayleighParams {
    double sigma;  ///< scale, amplitude units

    explicit RayleighParams(double sigma_) : sigma(sigma_) {
        if (!(std::isfinite(sigma) && sigma > 0.0))
            throw DomainError("RayleighParams: sigma must be finite and > 0");
    }
};

/// Tagged union over the four candidate clutter families. Exactly one
/// variant is populated; parameter invariants are enforced at construction.
class ClutterModel {
public:
    using Variant = std::variant<WeibullParams, RayleighParams, GammaParams, LogNormalParams>;

    ClutterModel(WeibullParams p) : v_(p) {}
    ClutterModel(RayleighParams p) : v_(p) {}
    ClutterModel(GammaParams p) : v_(p) {}
    ClutterModel(LogNormalParams p) : v_(p) {}

    Family family() const noexcept {
        switch (v_.index()) {
            case 0: return Family::Weibull;
            case 1: return Family::Rayleigh;
            case 2: return Family::Gamma;
            default: return Family::LogNormal;
        }
    }

    template <class T>
    const T& as() const { return std::get<T>(v_); }

    template <class T>
    bool holds() const noexcept { return std::holds_alternative<T>(v_); }

    const Variant& variant() const noexcept { return v_; }

private:
    Variant v_;
};

namespace detail {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.4142135623730950488;
inline constexpr double kSqrt2Pi = 2.5066282746310005024;
inline constexpr double kSqrtPiOver2 = 1.2533141373155002512;

inline double weibull_pdf(const WeibullParams& p, double x) {
    // pow(0, 0) == 1 makes the alpha == 1 origin value come out as 1/beta.
    const double t = x / p.beta;
    return (p.alpha / p.beta) * std::pow(t, p.alpha - 1.0) * std::exp(-std::pow(t, p.alpha));
}

inline double rayleigh_pdf(const RayleighParams& p, double x) {
    const double s2 = p.sigma * p.sigma;
    return (x / s2) * std::exp(-x * x / (2.0 * s2));
}

inline double lognormal_pdf(const LogNormalParams& p, double x) {
    if (x == 0.0) return 0.0;  // continuity convention at the support edge
    const double z = (std::log(x) - p.gamma_loc) / p.eta;
    return std::exp(-0.5 * z * z) / (x * p.eta * kSqrt2Pi);
}

inline double gamma_pdf(const GammaParams& p, double x) {
    if (x == 0.0) {
        if (p.a > 1.0) return 0.0;
        if (p.a == 1.0) return 1.0 / p.b;          // exponential origin value
        return std::numeric_limits<double>::infinity();  // integrable singularity
    }
    const double logpdf = (p.a - 1.0) * std::log(x) - x / p.b
                          - p.a * std::log(p.b) - std::lgamma(p.a);
    return std::exp(logpdf);
}

}  // namespace detail

/// Pointwise density of the selected family. x must be >= 0; families with
/// support on x > 0 return their limit value at x == 0 (0 for LogNormal).
inline double pdf(const ClutterModel& model, double x) {
    if (!(x >= 0.0))
        throw DomainError("pdf: amplitude must be >= 0");
    return std::visit(
        [x](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, WeibullParams>) return detail::weibull_pdf(p, x);
            else if constexpr (std::is_same_v<T, RayleighParams>) return detail::rayleigh_pdf(p, x);
            else if constexpr (std::is_same_v<T, GammaParams>) return detail::gamma_pdf(p, x);
            else return detail::lognormal_pdf(p, x);
        },
        model.variant());
}

/// Cumulative distribution; 0 for x <= 0 (or x < 0 for the x >= 0 families).
inline double cdf(const ClutterModel& model, double x) {
    if (x <= 0.0) return 0.0;
    return std::visit(
        [x](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, WeibullParams>) {
                return -std::expm1(-std::pow(x / p.beta, p.alpha));
            } else if constexpr (std::is_same_v<T, RayleighParams>) {
                return -std::expm1(-x * x / (2.0 * p.sigma * p.sigma));
            } else if constexpr (std::is_same_v<T, GammaParams>) {
                return boost::math::gamma_p(p.a, x / p.b);
            } else {
                const double z = (std::log(x) - p.gamma_loc) / (p.eta * detail::kSqrt2);
                return 0.5 * std::erfc(-z);
            }
        },
        model.variant());
}

/// Inverse CDF for p in [0, 1).
inline double quantile(const ClutterModel& model, double p) {
    if (!(p >= 0.0 && p < 1.0))
        throw DomainError("quantile: probability must lie in [0, 1)");
    if (p == 0.0) return 0.0;
    return std::visit(
        [p](const auto& par) -> double {
            using T = std::decay_t<decltype(par)>;
            if constexpr (std::is_same_v<T, WeibullParams>) {
                return par.beta * std::pow(-std::log1p(-p), 1.0 / par.alpha);
            } else if constexpr (std::is_same_v<T, RayleighParams>) {
                return par.sigma * std::sqrt(-2.0 * std::log1p(-p));
            } else if constexpr (std::is_same_v<T, GammaParams>) {
                return par.b * boost::math::gamma_p_inv(par.a, p);
            } else {
                return std::exp(par.gamma_loc
                                + par.eta * detail::kSqrt2 * boost::math::erf_inv(2.0 * p - 1.0));
            }
        },
        model.variant());
}

/// Mean amplitude of the fitted model (the mu-hat that normalizes the
/// detector design parameter).
inline double model_mean(const ClutterModel& model) {
    return std::visit(
        [](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, WeibullParams>) {
                return p.beta * std::tgamma(1.0 + 1.0 / p.alpha);
            } else if constexpr (std::is_same_v<T, RayleighParams>) {
                return p.sigma * detail::kSqrtPiOver2;
            } else if constexpr (std::is_same_v<T, GammaParams>) {
                return p.a * p.b;
            } else {
                return std::exp(p.gamma_loc + 0.5 * p.eta * p.eta);
            }
        },
        model.variant());
}

}  // namespace clutterstat
