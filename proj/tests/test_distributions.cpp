#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "clutterstat/distributions.hpp"
#include "clutterstat/error.hpp"
#include "clutterstat/random.hpp"

using namespace clutterstat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Composite Simpson on geometrically spaced panels; the geometric spacing
// resolves the origin singularity of shape < 1 densities.
double integrate_pdf(const ClutterModel& model, double lo, double hi) {
    constexpr int kPanels = 4000;
    constexpr int kSteps = 16;   // per panel, even
    const double ratio = std::pow(hi / lo, 1.0 / kPanels);
    double total = 0.0;
    double a = lo;
    for (int p = 0; p < kPanels; ++p) {
        const double b = p + 1 == kPanels ? hi : a * ratio;
        const double h = (b - a) / kSteps;
        double acc = pdf(model, a) + pdf(model, b);
        for (int i = 1; i < kSteps; ++i)
            acc += pdf(model, a + i * h) * (i % 2 ? 4.0 : 2.0);
        total += acc * h / 3.0;
        a = b;
    }
    return total;
}

}  // namespace

TEST_CASE("parameter structs reject non-positive shapes and scales") {
    CHECK_THROWS_AS(WeibullParams(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(WeibullParams(1.0, -2.0), DomainError);
    CHECK_THROWS_AS(RayleighParams(0.0), DomainError);
    CHECK_THROWS_AS(GammaParams(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(LogNormalParams(0.0, 0.5), DomainError);
    CHECK_NOTHROW(LogNormalParams(0.5, -3.0));   // location may be negative
}

TEST_CASE("family names round-trip through the parser") {
    for (Family f : {Family::Weibull, Family::Rayleigh, Family::Gamma, Family::LogNormal})
        CHECK(parse_family(family_name(f)) == f);
    CHECK_THROWS_AS(parse_family("ricean"), UnsupportedModelError);
}

TEST_CASE("pdf point values") {
    CHECK_THAT(pdf(ClutterModel(WeibullParams(1.0, 1.0)), 0.0), WithinAbs(1.0, 1e-12));
    const double e_half = std::exp(-0.5);
    CHECK_THAT(pdf(ClutterModel(WeibullParams(2.0, std::sqrt(2.0))), 1.0),
               WithinAbs(e_half, 1e-9));
    CHECK_THAT(pdf(ClutterModel(RayleighParams(1.0)), 1.0), WithinAbs(e_half, 1e-9));
    CHECK_THAT(pdf(ClutterModel(GammaParams(1.0, 1.0)), 0.5), WithinAbs(e_half, 1e-9));
}

TEST_CASE("pdf domain handling") {
    const ClutterModel ln(LogNormalParams(0.5, 0.0));
    CHECK(pdf(ln, 0.0) == 0.0);   // continuity convention
    CHECK_THROWS_AS(pdf(ln, -0.1), DomainError);
    CHECK_THROWS_AS(pdf(ClutterModel(RayleighParams(1.0)), -1.0), DomainError);
    CHECK(pdf(ClutterModel(RayleighParams(1.0)), 0.0) == 0.0);
    // shape < 1 diverges at the origin but stays finite for x > 0
    CHECK(std::isfinite(pdf(ClutterModel(WeibullParams(0.8, 2.0)), 1e-6)));
}

TEST_CASE("pdf integrates to one") {
    const std::vector<ClutterModel> models = {
        ClutterModel(WeibullParams(1.7, 35.0)), ClutterModel(WeibullParams(0.8, 2.0)),
        ClutterModel(WeibullParams(3.0, 10.0)), ClutterModel(RayleighParams(20.0)),
        ClutterModel(GammaParams(2.0, 3.0)),    ClutterModel(GammaParams(0.5, 1.0)),
        ClutterModel(LogNormalParams(0.5, 1.0))};
    for (const ClutterModel& m : models) {
        const double lo = quantile(m, 1e-9);
        const double hi = quantile(m, 1.0 - 1e-7);
        CHECK_THAT(integrate_pdf(m, lo, hi), WithinAbs(1.0, 1e-6));
    }
}

TEST_CASE("Weibull with shape 2 coincides with Rayleigh") {
    const double beta = 7.0;
    const ClutterModel w(WeibullParams(2.0, beta));
    const ClutterModel r(RayleighParams(beta / std::sqrt(2.0)));
    for (int i = 1; i <= 1000; ++i) {
        const double x = 0.03 * beta * i;
        CHECK_THAT(pdf(w, x), WithinAbs(pdf(r, x), 1e-12));
    }
}

TEST_CASE("Weibull with shape 1 coincides with Gamma shape 1") {
    const double beta = 3.5;
    const ClutterModel w(WeibullParams(1.0, beta));
    const ClutterModel g(GammaParams(1.0, beta));
    for (int i = 0; i <= 1000; ++i) {
        const double x = 0.02 * beta * i;
        CHECK_THAT(pdf(w, x), WithinAbs(pdf(g, x), 1e-12));
    }
}

TEST_CASE("cdf and quantile invert each other") {
    const std::vector<ClutterModel> models = {
        ClutterModel(WeibullParams(1.7, 35.0)), ClutterModel(RayleighParams(20.0)),
        ClutterModel(GammaParams(2.0, 3.0)), ClutterModel(LogNormalParams(0.5, 1.0))};
    for (const ClutterModel& m : models) {
        for (double p : {0.001, 0.1, 0.5, 0.9, 0.999}) {
            const double x = quantile(m, p);
            CHECK_THAT(cdf(m, x), WithinAbs(p, 1e-9));
        }
        CHECK(cdf(m, 0.0) == 0.0);
        CHECK(quantile(m, 0.0) == 0.0);
        CHECK_THROWS_AS(quantile(m, 1.0), DomainError);
        CHECK_THROWS_AS(quantile(m, -0.1), DomainError);
    }
}

TEST_CASE("model means") {
    CHECK_THAT(model_mean(ClutterModel(WeibullParams(1.0, 2.0))), WithinAbs(2.0, 1e-12));
    CHECK_THAT(model_mean(ClutterModel(RayleighParams(1.0))),
               WithinAbs(1.253314137316, 1e-9));
    CHECK_THAT(model_mean(ClutterModel(WeibullParams(2.0, 1.0))),
               WithinAbs(0.886226925453, 1e-9));
    CHECK_THAT(model_mean(ClutterModel(GammaParams(2.0, 3.0))), WithinAbs(6.0, 1e-12));
    CHECK_THAT(model_mean(ClutterModel(LogNormalParams(0.5, 1.0))),
               WithinRel(std::exp(1.0 + 0.125), 1e-12));
}

TEST_CASE("sampling is deterministic per seed") {
    const ClutterModel m(WeibullParams(1.7, 35.0));
    const SampleSet a = sample(m, 5, 42);
    const SampleSet b = sample(m, 5, 42);
    const SampleSet c = sample(m, 5, 43);
    CHECK(a.values() == b.values());
    CHECK(a.values() != c.values());
}

TEST_CASE("sample means match model means") {
    const SampleSet r = sample(ClutterModel(RayleighParams(1.0)), 1000000, 6);
    CHECK(r.mean() > 1.249);
    CHECK(r.mean() < 1.257);
}

TEST_CASE("unit-exponential survival fractions") {
    const SampleSet s = sample(ClutterModel(WeibullParams(1.0, 1.0)), 1000000, 5);
    std::size_t over10 = 0, over100 = 0;
    for (double x : s.values()) {
        if (x > std::log(10.0)) ++over10;
        if (x > std::log(100.0)) ++over100;
    }
    const double f10 = static_cast<double>(over10) / 1e6;
    const double f100 = static_cast<double>(over100) / 1e6;
    // survival exp(-x): 0.1 at ln 10, 0.01 at ln 100; both at 3-sigma binomial
    CHECK(f10 > 0.0991);
    CHECK(f10 < 0.1009);
    CHECK(f100 > 0.0097);
    CHECK(f100 < 0.0103);
}

TEST_CASE("sampled quantiles follow the model cdf") {
    const std::vector<ClutterModel> models = {
        ClutterModel(WeibullParams(1.7, 35.0)), ClutterModel(RayleighParams(20.0)),
        ClutterModel(GammaParams(2.0, 3.0)), ClutterModel(LogNormalParams(0.5, 1.0))};
    for (const ClutterModel& m : models) {
        const SampleSet s = sample(m, 200000, 17);
        for (double p : {0.25, 0.5, 0.9}) {
            const double x = quantile(m, p);
            std::size_t below = 0;
            for (double v : s.values())
                if (v <= x) ++below;
            // 5-sigma binomial band
            const double tol = 5.0 * std::sqrt(p * (1 - p) / 200000.0);
            CHECK_THAT(static_cast<double>(below) / 200000.0, WithinAbs(p, tol));
        }
    }
}
