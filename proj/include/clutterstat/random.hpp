#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "clutterstat/distributions.hpp"
#include "clutterstat/error.hpp"
#include "clutterstat/samples.hpp"

namespace clutterstat {

/// Deterministic variate source. All transforms are written out explicitly
/// so a (model, n, seed) triple always reproduces the same sequence; nothing
/// here depends on implementation-defined standard-library distributions.
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1); never returns an exact 0 or 1,
    /// so logs of either u or 1-u are always finite.
    double uniform() {
        const std::uint64_t bits = engine_() >> 11;  // top 53 bits
        return (static_cast<double>(bits) + 0.5) * 0x1p-53;
    }

    /// Standard normal via Box-Muller. One draw consumes two uniforms.
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * detail::kPi * u2);
    }

    double weibull(const WeibullParams& p) {
        return p.beta * std::pow(-std::log(uniform()), 1.0 / p.alpha);
    }

    double rayleigh(const RayleighParams& p) {
        return p.sigma * std::sqrt(-2.0 * std::log(uniform()));
    }

    double lognormal(const LogNormalParams& p) {
        return std::exp(p.gamma_loc + p.eta * normal());
    }

    /// Marsaglia-Tsang squeeze for shape >= 1; the shape < 1 case boosts the
    /// shape by one and applies the u^(1/a) correction.
    double gamma(const GammaParams& p) {
        double a = p.a;
        double boost_factor = 1.0;
        if (a < 1.0) {
            boost_factor = std::pow(uniform(), 1.0 / a);
            a += 1.0;
        }
        const double d = a - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double z, v;
            do {
                z = normal();
                v = 1.0 + c * z;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * z * z * z * z) return p.b * d * v * boost_factor;
            if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v)))
                return p.b * d * v * boost_factor;
        }
    }

    double draw(const ClutterModel& model) {
        return std::visit(
            [this](const auto& p) -> double {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, WeibullParams>) return weibull(p);
                else if constexpr (std::is_same_v<T, RayleighParams>) return rayleigh(p);
                else if constexpr (std::is_same_v<T, GammaParams>) return gamma(p);
                else return lognormal(p);
            },
            model.variant());
    }

private:
    std::mt19937_64 engine_;
};

/// n i.i.d. draws from the model, reproducible per (model, n, seed).
inline SampleSet sample(const ClutterModel& model, std::size_t n, std::uint64_t seed) {
    if (n < 1)
        throw DomainError("sample: n must be >= 1");
    SampleRng rng(seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(rng.draw(model));
    return SampleSet(std::move(out));
}

}  // namespace clutterstat
