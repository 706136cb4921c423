#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpif/core.hpp"
#include "fpif/fpfilter.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace fpif;

namespace {

constexpr double pi = std::numbers::pi;

Signal sampled(std::size_t n, double a, double b, auto f, bool closed = true)
{
    const double dx = (b - a) / static_cast<double>(closed ? n - 1 : n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(a + static_cast<double>(i) * dx);
    return Signal(v, dx, a);
}

// Brute-force circular convolution.
std::vector<double> circular(const std::vector<double>& f, const DiscreteFilter& w)
{
    const auto n = static_cast<std::ptrdiff_t>(f.size());
    const auto r = static_cast<std::ptrdiff_t>(w.radius());
    std::vector<double> out(f.size(), 0.0);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (std::ptrdiff_t t = -r; t <= r; ++t) out[i] += w[t] * f[((i + t) % n + n) % n];
    }
    return out;
}

}  // namespace

TEST_CASE("signal validation")
{
    CHECK_THROWS_AS(Signal({1.0}), SignalTooShort);
    CHECK_THROWS_AS(Signal({1.0, 2.0}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(Signal({1.0, std::nan("")}), InvalidArgument);
    const Signal s({1.0, 2.0, 3.0}, 0.5, -1.0);
    CHECK(s.x(2) == doctest::Approx(0.0));
}

TEST_CASE("extrema of simple shapes")
{
    const Signal sine = sampled(100, 0.0, 1.0, [](double x) { return std::sin(2 * pi * x); }, false);
    const ExtremumList e = find_extrema(sine);
    REQUIRE(e.size() == 2);
    CHECK(e[0].kind == ExtremumKind::Max);
    CHECK(e[0].index == 25);
    CHECK(e[1].kind == ExtremumKind::Min);
    CHECK(e[1].index == 75);

    CHECK(find_extrema(Signal(std::vector<double>(50, 1.0))).empty());

    const Signal parabola = sampled(101, 0.0, 1.0, [](double x) { return 4 * (x - 0.5) * (x - 0.5); });
    const ExtremumList p = find_extrema(parabola);
    REQUIRE(p.size() == 1);
    CHECK(p[0].index == 50);
    CHECK(is_trend(parabola));
    CHECK(is_trend(sampled(50, 0.0, 1.0, [](double x) { return x; })));
    CHECK_FALSE(is_trend(sampled(200, 0.0, 1.0, [](double x) { return std::sin(4 * pi * x); })));
}

TEST_CASE("plateau extremum sits at its midpoint")
{
    const ExtremumList e = find_extrema(Signal({0.0, 1.0, 2.0, 2.0, 2.0, 2.0, 1.0, 0.0}));
    REQUIRE(e.size() == 1);
    CHECK(e[0].index == 3);
}

TEST_CASE("negation swaps extremum kinds and keeps indices")
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<double> v(300);
    for (double& x : v) x = g(rng);
    std::vector<double> neg(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
    const ExtremumList a = find_extrema(Signal(v));
    const ExtremumList b = find_extrema(Signal(neg));
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].index == b[k].index);
        CHECK(a[k].kind != b[k].kind);
        if (k > 0) CHECK(a[k].kind != a[k - 1].kind);
    }
}

TEST_CASE("moving average maps constants to themselves in every mode")
{
    const DiscreteFilter w = double_average_filter(7);
    for (auto mode : {BoundaryMode::Reflect, BoundaryMode::Periodic, BoundaryMode::Constant, BoundaryMode::Antisymmetric}) {
        const Signal out = moving_average(Signal(std::vector<double>(40, 2.5)), w, mode);  // kept alive for samples()
        for (double v : out.samples()) CHECK(v == doctest::Approx(2.5).epsilon(1e-15));
    }
}

TEST_CASE("periodic moving average of a Dirac reproduces the filter")
{
    const DiscreteFilter w = double_average_filter(3);
    std::vector<double> d(21, 0.0);
    d[10] = 1.0;
    const Signal out = moving_average(Signal(d), w, BoundaryMode::Periodic);
    for (std::ptrdiff_t t = -3; t <= 3; ++t) CHECK(out[static_cast<std::size_t>(10 + t)] == doctest::Approx(w[t]));
    CHECK(out[0] == 0.0);
}

TEST_CASE("periodic moving average scales a Fourier mode by the filter symbol")
{
    const std::size_t n = 64;
    const DiscreteFilter w = self_convolve(double_average_filter(4));
    for (std::size_t k : {1u, 5u, 11u}) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(2 * pi * static_cast<double>(k * i) / static_cast<double>(n));
        double symbol = 0.0;  // brute-force DFT of the taps
        for (std::ptrdiff_t t = -static_cast<std::ptrdiff_t>(w.radius()); t <= static_cast<std::ptrdiff_t>(w.radius()); ++t) {
            symbol += w[t] * std::cos(2 * pi * static_cast<double>(k) * static_cast<double>(t) / static_cast<double>(n));
        }
        const Signal out = moving_average(Signal(v), w, BoundaryMode::Periodic);
        for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx(symbol * v[i]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("periodic moving average equals brute-force circular convolution")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    for (std::size_t n : {17u, 64u, 100u}) {
        std::vector<double> v(n);
        for (double& x : v) x = u(rng);
        const DiscreteFilter w = default_filter_source().make(5.5);
        const Signal out = moving_average(Signal(v), w, BoundaryMode::Periodic);
        const auto ref = circular(v, w);
        double err = 0.0;
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            err += std::pow(out[i] - ref[i], 2);
            nrm += ref[i] * ref[i];
        }
        CHECK(std::sqrt(err / nrm) < 1e-12);
    }
}

TEST_CASE("moving average is linear")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> f(80), g(80), mix(80);
    const double a = 0.7, b = -1.3;
    for (std::size_t i = 0; i < 80; ++i) {
        f[i] = u(rng);
        g[i] = u(rng);
        mix[i] = a * f[i] + b * g[i];
    }
    const DiscreteFilter w = double_average_filter(6);
    for (auto mode : {BoundaryMode::Reflect, BoundaryMode::Periodic, BoundaryMode::Constant, BoundaryMode::Antisymmetric}) {
        const Signal lf = moving_average(Signal(f), w, mode);
        const Signal lg = moving_average(Signal(g), w, mode);
        const Signal lm = moving_average(Signal(mix), w, mode);
        for (std::size_t i = 0; i < 80; ++i) CHECK(lm[i] == doctest::Approx(a * lf[i] + b * lg[i]).scale(1.0).epsilon(1e-13));
    }
}

TEST_CASE("filter longer than the record is rejected")
{
    CHECK_THROWS_AS(moving_average(Signal(std::vector<double>(5, 1.0)), double_average_filter(6), BoundaryMode::Reflect),
                    FilterTooLong);
}

TEST_CASE("boundary extension rules")
{
    const std::vector<double> v{1.0, 2.0, 4.0};
    CHECK(extend(v, 2, BoundaryMode::Reflect) == std::vector<double>{4, 2, 1, 2, 4, 2, 1});
    CHECK(extend(v, 2, BoundaryMode::Periodic) == std::vector<double>{2, 4, 1, 2, 4, 1, 2});
    CHECK(extend(v, 2, BoundaryMode::Constant) == std::vector<double>{1, 1, 1, 2, 4, 4, 4});
    // point reflection: f(-k) = 2 f(0) - f(k)
    CHECK(extend(v, 2, BoundaryMode::Antisymmetric) == std::vector<double>{-2, 0, 1, 2, 4, 6, 7});
    CHECK(parse_boundary_mode("periodic") == BoundaryMode::Periodic);
    CHECK_THROWS_AS(parse_boundary_mode("mirror"), InvalidArgument);
}

TEST_CASE("derivative")
{
    const Signal ramp = sampled(20, 0.0, 2.0, [](double x) { return 3 * x - 1; });
    const Signal slope = derivative(ramp);
    for (double v : slope.samples()) CHECK(v == doctest::Approx(3.0));
    const Signal flat = derivative(Signal(std::vector<double>(10, 4.0)));
    for (double v : flat.samples()) CHECK(v == 0.0);

    const Signal sine = sampled(1001, 0.0, 1.0, [](double x) { return std::sin(2 * pi * x); });
    const Signal d = derivative(sine);
    double err = 0.0;
    for (std::size_t i = 1; i + 1 < sine.size(); ++i) err = std::max(err, std::abs(d[i] - 2 * pi * std::cos(2 * pi * sine.x(i))));
    CHECK(err < 1e-4);
    CHECK_THROWS_AS(derivative(Signal({1.0, 2.0})), SignalTooShort);
}

TEST_CASE("long filters take the FFT path and agree with the direct sum")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> v(700);
    for (double& x : v) x = u(rng);
    for (double L : {48.0, 150.5, 690.0}) {
        const DiscreteFilter w = default_filter_source().make(L);
        REQUIRE(w.size() >= fft_filter_taps);
        for (auto mode : {BoundaryMode::Reflect, BoundaryMode::Periodic, BoundaryMode::Antisymmetric}) {
            const std::vector<double> ext = extend(v, w.radius() + 3, mode);
            const std::vector<double> fast = apply_filter(ext, w.radius() + 3, v.size(), w);
            double worst = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(fast[i] - weighted_sum(ext, w.radius() + 3, i, w)));
            CHECK(worst < 1e-13);
        }
    }
    CHECK_THROWS_AS(apply_filter(std::vector<double>(10, 0.0), 1, 8, double_average_filter(3)), InvalidArgument);
}
