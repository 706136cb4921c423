#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpif/alif.hpp"
#include "fpif/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace fpif;

namespace {

constexpr double pi = std::numbers::pi;

Signal on_grid(std::size_t n, double a, double b, auto f)
{
    const double dx = (b - a) / static_cast<double>(n - 1);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(a + static_cast<double>(i) * dx);
    return Signal(v, dx, a);
}

MaskField constant_field(std::size_t n, double L)
{
    return MaskField{std::vector<double>(n, L), 2.0};
}

}  // namespace

TEST_CASE("raw mask field")
{
    // extrema of a pure tone sit half a period (500 samples) apart
    const Signal s = on_grid(4001, 0.0, 4.0, [](double x) { return std::sin(2 * pi * x); });
    const MaskField f = raw_mask_field(s, 2.0);
    REQUIRE(f.values.size() == s.size());
    for (std::size_t i = 500; i < 3500; ++i) CHECK(f.values[i] == doctest::Approx(1000.0).epsilon(0.005));

    // period shrinking with x: the field at each knot is the gap between the two extrema around it
    const Signal chirp = on_grid(4000, 0.0, 1.0, [](double x) { return std::sin(2 * pi * (5 * x + 10 * x * x)); });
    const MaskField c = raw_mask_field(chirp, 1.0);
    const ExtremumList e = find_extrema(chirp);
    for (std::size_t j = 0; j + 1 < e.size(); ++j) {
        const std::size_t knot = (e[j].index + e[j + 1].index) / 2;
        const auto gap = static_cast<double>(e[j + 1].index - e[j].index);
        if ((e[j].index + e[j + 1].index) % 2 == 0) CHECK(c.values[knot] == doctest::Approx(gap).epsilon(1e-9));
        if (j > 0) {
            const std::size_t prev = (e[j - 1].index + e[j].index) / 2;
            CHECK(c.values[knot] <= c.values[prev] + 1.0);
        }
    }

    const Signal two = on_grid(200, 0.0, 1.0, [](double x) { return std::sin(2 * pi * x); });
    CHECK_THROWS_AS(raw_mask_field(two, 2.0), TooFewExtrema);
}

TEST_CASE("mask smoothing")
{
    ALIFConfig cfg;
    const MaskField flat = constant_field(300, 17.0);
    CHECK(smooth_mask_field(flat, cfg).values == flat.values);

    // slow ramp plus a small fast ripple: the smoothed field is the ramp
    const std::size_t n = 2000;
    MaskField raw{std::vector<double>(n), 2.0};
    std::vector<double> ramp(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n - 1);
        ramp[i] = 50.0 + 40.0 * x;
        raw.values[i] = ramp[i] + 2.0 * std::sin(2 * pi * 40 * x);
    }
    cfg.smoothing.boundary = BoundaryMode::Antisymmetric;
    const MaskField sm = smooth_mask_field(raw, cfg);
    double err = 0.0;
    double nrm = 0.0;
    for (std::size_t i = n / 10; i < n - n / 10; ++i) {
        err += (sm.values[i] - ramp[i]) * (sm.values[i] - ramp[i]);
        nrm += ramp[i] * ramp[i];
    }
    CHECK(std::sqrt(err / nrm) < 0.05);

    MaskField low{std::vector<double>(n), 2.0};
    for (std::size_t i = 0; i < n; ++i) low.values[i] = 2.5 + 2.0 * std::sin(2 * pi * 7 * static_cast<double>(i) / static_cast<double>(n));
    const MaskField clamped = smooth_mask_field(low, cfg);
    CHECK(*std::min_element(clamped.values.begin(), clamped.values.end()) >= 2.0);
}

TEST_CASE("adaptive averaging")
{
    const Signal s = on_grid(400, 0.0, 1.0, [](double x) { return std::sin(9 * x) + x * x; });
    const FilterSource& src = default_filter_source();

    // a constant field reduces to the uniform moving average
    const Signal a = adaptive_moving_average(s, src, constant_field(400, 12.0), BoundaryMode::Reflect);
    const Signal b = moving_average(s, src.make(12.0), BoundaryMode::Reflect);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(a[i] == b[i]);

    MaskField varying{std::vector<double>(400), 2.0};
    for (std::size_t i = 0; i < 400; ++i) varying.values[i] = 3.0 + 20.0 * static_cast<double>(i) / 399.0;

    const Signal c = adaptive_moving_average(Signal(std::vector<double>(400, -1.5)), src, varying, BoundaryMode::Reflect);
    for (double v : c.samples()) CHECK(v == doctest::Approx(-1.5).epsilon(1e-14));

    // symmetric filters preserve a ramp wherever the stencil stays inside
    const Signal ramp = on_grid(400, 0.0, 1.0, [](double x) { return 2 * x - 0.3; });
    const Signal r = adaptive_moving_average(ramp, src, varying, BoundaryMode::Reflect);
    for (std::size_t i = 30; i < 350; ++i) CHECK(r[i] == doctest::Approx(ramp[i]).scale(1.0).epsilon(1e-12));
}

TEST_CASE("eps and delta ratios")
{
    const std::vector<double> p{0.0, 1.0, -2.0, 3.0, 0.5, -0.25, 1.0, 2.0, -1.0, 0.0, 0.3, 4.0};
    std::vector<double> half(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) half[i] = 0.5 * p[i];
    const auto [e1, d1] = eps_delta(p, p, p, p);
    CHECK(e1 == 1.0);
    CHECK(d1 == 1.0);
    const auto [e2, d2] = eps_delta(p, half, p, half);
    CHECK(e2 == doctest::Approx(0.5));
    CHECK(d2 == doctest::Approx(0.5));
    CHECK_THROWS_AS(eps_delta(std::vector<double>(12, 0.0), p, p, p), ZeroReference);
}

TEST_CASE("ALIF inner loop")
{
    const Signal s = on_grid(600, 0.0, 1.0, [](double x) { return std::sin(2 * pi * 30 * x) + 0.5 * std::sin(2 * pi * 3 * x); });
    ALIFConfig cfg;

    // a constant field is exactly IF with the matching filter
    const auto [imf, diag, conv] = alif_inner_loop(s, constant_field(600, 14.0), cfg);
    IFConfig icfg;
    icfg.boundary = cfg.boundary;
    const auto [ref, rdiag] = if_inner_loop(s, cfg.filter.make(14.0), icfg);
    CHECK(diag.iterations == rdiag.iterations);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(imf[i] == ref[i]);
    CHECK(conv.eps.size() == diag.iterations);
    CHECK(conv.eps_product.back() < 1e-2);

    // constants vanish in one step
    const auto [c, cd, cc] = alif_inner_loop(Signal(std::vector<double>(100, 2.0)), constant_field(100, 6.0), cfg);
    for (double v : c.samples()) CHECK(std::abs(v) < 1e-13);

    const auto [z, zd, zc] = alif_inner_loop(Signal(std::vector<double>(100, 0.0)), constant_field(100, 6.0), cfg);
    CHECK(zd.iterations <= 1);
    for (double v : z.samples()) CHECK(v == 0.0);
}

TEST_CASE("Example 3 with ALIF")
{
    ALIFConfig cfg;
    cfg.mask_multiplier = 8.0;
    cfg.max_inner = 400;
    cfg.max_imfs = 2;
    const ExampleCase ex = generate_example("ex3", 2000);
    const Decomposition d = alif_decompose(ex.signal, cfg);
    REQUIRE(d.imfs.size() == 2);
    CHECK(d.masks.size() == 2);
    CHECK(d.convergence.size() == 2);
    CHECK(reconstruction_error(ex.signal, d) < 1e-12);
    const MatchReport m = match_components(d, ex.truth);
    CHECK(m.correlation[0] > 0.95);  // the fast chirp
    for (const auto& cd : d.convergence) {
        CHECK(cd.eps_product.back() < 1e-2);
        CHECK(cd.delta_product.back() > 1e-6);
    }
    // the first mask follows the shrinking period of the fast chirp
    CHECK(d.masks[0].front() > d.masks[0].back());
}
