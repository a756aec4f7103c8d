#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "clutterstat/distributions.hpp"
#include "clutterstat/error.hpp"
#include "clutterstat/samples.hpp"

namespace clutterstat {

/// Convergence controls for the iterative (Weibull, Gamma) estimators.
struct FitOptions {
    double tol = 1e-9;   ///< relative tolerance on the shape iterate
    int max_iter = 200;
};

struct WeibullEstimate {
    WeibullParams params;
    int iterations;
};

struct GammaEstimate {
    GammaParams params;
    int iterations;
};

namespace detail {

/// Shape-equation state for the Weibull profile likelihood, on samples
/// rescaled by their maximum so w^alpha never overflows. The score is
/// scale-invariant, so the rescaling does not move the root.
struct WeibullScore {
    const std::vector<double>& w;       // x / max(x), all in (0, 1]
    const std::vector<double>& logw;    // log of the above, all <= 0
    double mean_logw;

    // score(alpha) = 1/alpha + mean(log w) - sum(w^a log w)/sum(w^a);
    // strictly decreasing in alpha. Also reports the derivative and
    // sum(w^a) (needed afterwards for the scale estimate).
    void eval(double alpha, double& g, double& dg, double& s0) const {
        double s1 = 0.0, s2 = 0.0;
        s0 = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double wa = std::pow(w[i], alpha);
            s0 += wa;
            s1 += wa * logw[i];
            s2 += wa * logw[i] * logw[i];
        }
        const double ratio = s1 / s0;
        g = 1.0 / alpha + mean_logw - ratio;
        dg = -1.0 / (alpha * alpha) - (s2 / s0 - ratio * ratio);
    }
};

/// Safeguarded Newton iteration on a strictly decreasing score with a
/// supplied sign-changing bracket [lo, hi] (f(lo) > 0 > f(hi)).
/// Returns the root; reports iterations used via `iters`.
template <class F>
double newton_bisect(F&& f_df, double lo, double hi, double start,
                     const FitOptions& opts, int& iters, const char* what) {
    double a = std::clamp(start, lo, hi);
    bool converged = false;
    for (iters = 0; iters < opts.max_iter; ++iters) {
        double g, dg;
        f_df(a, g, dg);
        if (g > 0.0) lo = a; else hi = a;
        double next = a - g / dg;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double delta = std::abs(next - a);
        a = next;
        if (delta <= opts.tol * std::abs(a)) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError(std::string(what) + ": no convergence within max_iter",
                               a, opts.max_iter);
    // One polishing step so downstream residual checks see the score at
    // essentially machine level rather than at tol.
    double g, dg;
    f_df(a, g, dg);
    const double next = a - g / dg;
    if (next > 0.0 && std::isfinite(next)) a = next;
    return a;
}

}  // namespace detail

/// Maximum-likelihood Weibull fit. The scale is eliminated through its
/// stationarity equation and the shape is found as the root of the profile
/// score, bracketed on [0.02, 50] and refined by safeguarded Newton steps.
inline WeibullEstimate fit_weibull(const SampleSet& samples, const FitOptions& opts = {}) {
    if (samples.size() < 2)
        throw DomainError("fit_weibull: need at least 2 samples");
    if (!(samples.min() > 0.0))
        throw DomainError("fit_weibull: samples must be > 0 (floor or drop zeros first)");
    if (samples.all_equal())
        throw DivergenceError("fit_weibull: identical samples have no finite shape MLE");

    const double xmax = samples.max();
    const std::size_t n = samples.size();
    std::vector<double> w(n), logw(n);
    double mean_logw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = samples[i] / xmax;
        logw[i] = std::log(w[i]);
        mean_logw += logw[i];
    }
    mean_logw /= static_cast<double>(n);

    const detail::WeibullScore score{w, logw, mean_logw};
    auto eval = [&score](double alpha, double& g, double& dg) {
        double s0;
        score.eval(alpha, g, dg, s0);
    };

    constexpr double kAlphaLo = 0.02;
    constexpr double kAlphaHi = 50.0;
    double g, dg, s0;
    score.eval(kAlphaHi, g, dg, s0);
    if (g >= 0.0)
        throw DivergenceError("fit_weibull: shape estimate diverges beyond 50 "
                              "(near-degenerate samples)");
    score.eval(kAlphaLo, g, dg, s0);
    if (g <= 0.0)
        throw DivergenceError("fit_weibull: shape estimate below 0.02");

    // Moment-style start from the log-sample spread.
    double var_logw = 0.0;
    for (double l : logw) var_logw += (l - mean_logw) * (l - mean_logw);
    var_logw /= static_cast<double>(n);
    const double start = detail::kPi / std::sqrt(6.0 * var_logw);

    int iters = 0;
    const double alpha =
        detail::newton_bisect(eval, kAlphaLo, kAlphaHi, start, opts, iters, "fit_weibull");

    score.eval(alpha, g, dg, s0);
    const double beta = xmax * std::pow(s0 / static_cast<double>(n), 1.0 / alpha);
    return WeibullEstimate{WeibullParams(alpha, beta), iters};
}

/// Closed-form Rayleigh MLE: sigma = sqrt(sum(x^2) / (2N)).
inline RayleighParams fit_rayleigh(const SampleSet& samples) {
    double sumsq = 0.0;
    for (double x : samples.values()) sumsq += x * x;
    if (sumsq == 0.0)
        throw DegenerateDataError("fit_rayleigh: all samples are zero");
    return RayleighParams(std::sqrt(sumsq / (2.0 * static_cast<double>(samples.size()))));
}

/// Closed-form log-domain MLE: location = mean(log x), shape = population
/// standard deviation of log x.
inline LogNormalParams fit_lognormal(const SampleSet& samples) {
    if (samples.size() < 2)
        throw DomainError("fit_lognormal: need at least 2 samples");
    if (!(samples.min() > 0.0))
        throw DomainError("fit_lognormal: samples must be > 0 (floor or drop zeros first)");

    const std::size_t n = samples.size();
    std::vector<double> logs(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        logs[i] = std::log(samples[i]);
        mean += logs[i];
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double l : logs) var += (l - mean) * (l - mean);
    var /= static_cast<double>(n);
    if (var == 0.0)
        throw DegenerateDataError("fit_lognormal: zero variance in log domain");
    return LogNormalParams(std::sqrt(var), mean);
}

/// Maximum-likelihood Gamma fit: the shape solves
/// log(a) - digamma(a) = log(mean) - mean(log), by safeguarded Newton from a
/// method-of-moments start; the scale follows as mean/a.
inline GammaEstimate fit_gamma(const SampleSet& samples, const FitOptions& opts = {}) {
    if (samples.size() < 2)
        throw DomainError("fit_gamma: need at least 2 samples");
    if (!(samples.min() > 0.0))
        throw DomainError("fit_gamma: samples must be > 0 (floor or drop zeros first)");
    if (samples.all_equal())
        throw DegenerateDataError("fit_gamma: identical samples");

    const std::size_t n = samples.size();
    const double mean = samples.mean();
    double mean_log = 0.0;
    for (double x : samples.values()) mean_log += std::log(x);
    mean_log /= static_cast<double>(n);
    const double s = std::log(mean) - mean_log;   // > 0 by Jensen unless degenerate
    if (!(s > 0.0))
        throw DegenerateDataError("fit_gamma: samples carry no shape information");

    double var = 0.0;
    for (double x : samples.values()) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n);
    const double a0 = std::max(mean * mean / var, 1e-8);

    // h(a) = log(a) - digamma(a) - s decreases from +inf to -s; bracket the
    // sign change around the moment start.
    auto h = [s](double a) { return std::log(a) - boost::math::digamma(a) - s; };
    double lo = a0, hi = a0;
    if (h(a0) > 0.0) {
        int guard = 0;
        do {
            hi *= 4.0;
            if (++guard > 80)
                throw ConvergenceError("fit_gamma: failed to bracket the shape", hi, guard);
        } while (h(hi) > 0.0);
    } else {
        int guard = 0;
        do {
            lo *= 0.25;
            if (++guard > 80)
                throw ConvergenceError("fit_gamma: failed to bracket the shape", lo, guard);
        } while (h(lo) < 0.0);
    }

    auto eval = [&h](double a, double& g, double& dg) {
        g = h(a);
        dg = 1.0 / a - boost::math::trigamma(a);
    };
    int iters = 0;
    const double a = detail::newton_bisect(eval, lo, hi, std::sqrt(lo * hi), opts, iters,
                                           "fit_gamma");
    return GammaEstimate{GammaParams(a, mean / a), iters};
}

/// Fits the requested family and wraps the result as a ClutterModel.
inline ClutterModel fit_model(Family family, const SampleSet& samples,
                              const FitOptions& opts = {}) {
    switch (family) {
        case Family::Weibull:   return ClutterModel(fit_weibull(samples, opts).params);
        case Family::Rayleigh:  return ClutterModel(fit_rayleigh(samples));
        case Family::Gamma:     return ClutterModel(fit_gamma(samples, opts).params);
        case Family::LogNormal: return ClutterModel(fit_lognormal(samples));
    }
    throw DomainError("fit_model: unknown family");
}

}  // namespace clutterstat
