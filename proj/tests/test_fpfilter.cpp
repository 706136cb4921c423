#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpif/fpfilter.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

using namespace fpif;

namespace {

constexpr double pi = std::numbers::pi;

double total(std::span<const double> w)
{
    return std::accumulate(w.begin(), w.end(), 0.0);
}

// Mass in the central `fraction` of the profile support.
double central_mass(const FilterProfile& p, double fraction)
{
    const double mid = 0.5 * (p.a + p.b);
    const double half = 0.5 * fraction * (p.b - p.a);
    double m = 0.0;
    for (std::size_t j = 0; j < p.weights.size(); ++j) {
        const double x = p.a + (static_cast<double>(j) + 0.5) * p.interval_width();
        if (std::abs(x - mid) <= half) m += p.weights[j];
    }
    return m;
}

SteadyStateOptions coarse()
{
    SteadyStateOptions o;
    o.half_resolution = 150;
    return o;
}

}  // namespace

TEST_CASE("steady state of the experiment configuration")
{
    const FilterProfile p = solve_fp_steady_state(FPCoefficients::fig4_preset(0.005, 0.09, Fig4Shape::experiment()), coarse());
    CHECK(p.weights.size() == 2 * 150 + 1);
    CHECK(total(p.weights) == doctest::Approx(1.0).epsilon(1e-10));
    for (double w : p.weights) CHECK(w >= 0.0);
    // reflect the solution: h is odd and g^2 even, so the profile must be symmetric
    double asym = 0.0;
    for (std::size_t j = 0; j < p.weights.size(); ++j) {
        asym = std::max(asym, std::abs(p.weights[j] - p.weights[p.weights.size() - 1 - j]));
    }
    CHECK(asym < 1e-6);
}

TEST_CASE("stronger drift and weaker diffusion concentrate the mass")
{
    const FilterProfile tight = solve_fp_steady_state(FPCoefficients::fig4_preset(0.02, 0.008), coarse());
    const FilterProfile loose = solve_fp_steady_state(FPCoefficients::fig4_preset(0.003, 0.01), coarse());
    CHECK(central_mass(tight, 0.2) > central_mass(loose, 0.2));
}

TEST_CASE("invalid coefficients are rejected")
{
    FPCoefficients c = FPCoefficients::fig4_preset(0.005, 0.09);
    c.alpha = -1.0;
    CHECK_THROWS_AS(solve_fp_steady_state(c, coarse()), InvalidCoefficients);
    c = FPCoefficients::fig4_preset(0.005, 0.09);
    c.diffusion_sq = [](double) { return 1.0; };
    CHECK_THROWS_AS(solve_fp_steady_state(c, coarse()), InvalidCoefficients);
    c = FPCoefficients::fig4_preset(0.005, 0.09);
    c.drift = [](double x) { return -x; };
    CHECK_THROWS_AS(solve_fp_steady_state(c, coarse()), InvalidCoefficients);
}

TEST_CASE("rescaling")
{
    FilterProfile p;
    p.weights = {0.05, 0.1, 0.15, 0.4, 0.15, 0.1, 0.05};

    const DiscreteFilter same = rescale_filter(p, 3, 3.0);
    REQUIRE(same.size() == 7);
    for (std::size_t j = 0; j < 7; ++j) CHECK(same.weights()[j] == doctest::Approx(p.weights[j]).epsilon(1e-14));

    // 9 source cells onto 3 targets: each target covers exactly three sources
    p.weights = {0.01, 0.03, 0.11, 0.1, 0.5, 0.1, 0.08, 0.05, 0.02};
    const DiscreteFilter coarse3 = rescale_filter(p, 1, 1.0);
    REQUIRE(coarse3.size() == 3);
    CHECK(coarse3[-1] == doctest::Approx(0.15));
    CHECK(coarse3[0] == doctest::Approx(0.7));
    CHECK(coarse3[1] == doctest::Approx(0.15));

    for (std::size_t n : {2u, 5u, 17u, 40u}) CHECK(total(rescale_filter(p, n, static_cast<double>(n)).weights()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("realized filters keep unit mass at fractional lengths")
{
    const FilterProfile& p = default_filter_source().profile;
    for (double L : {1.0, 2.5, 7.3, 40.0, 123.9}) {
        const DiscreteFilter w = realize_filter(p, L);
        CHECK(total(w.weights()) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(w.radius() == static_cast<std::size_t>(std::ceil(L - 1e-12)));
        for (std::size_t t = 0; t < w.radius(); ++t) {
            CHECK(w[static_cast<std::ptrdiff_t>(t)] == doctest::Approx(w[-static_cast<std::ptrdiff_t>(t)]).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(realize_filter(p, 0.0), InvalidArgument);
}

TEST_CASE("self-convolution")
{
    // box * box = triangle
    const DiscreteFilter box(std::vector<double>(5, 0.2), 2.0);
    const DiscreteFilter tri = self_convolve(box);
    REQUIRE(tri.size() == 9);
    for (std::ptrdiff_t t = -4; t <= 4; ++t) {
        CHECK(tri[t] == doctest::Approx((5.0 - static_cast<double>(std::abs(t))) / 25.0));
    }
    const DiscreteFilter dirac({1.0}, 0.0);
    CHECK(self_convolve(dirac).weights()[0] == doctest::Approx(1.0));
    CHECK(self_convolve(dirac).size() == 1);
}

TEST_CASE("double average filter")
{
    const DiscreteFilter a = double_average_filter(2);
    const double expect[] = {1.0 / 9, 2.0 / 9, 3.0 / 9, 2.0 / 9, 1.0 / 9};
    for (std::size_t j = 0; j < 5; ++j) CHECK(a.weights()[j] == doctest::Approx(expect[j]));
    CHECK(total(a.weights()) == doctest::Approx(1.0));
}

TEST_CASE("spectrum report")
{
    // self-convolved symmetric unit-mass filters have symbols in [0, 1)
    const DiscreteFilter w = default_filter_source().make(12.0);
    const SpectrumReport r = spectrum_report(w, 256);
    CHECK(r.condition_met);
    CHECK(r.min_symbol > -1e-12);
    CHECK(r.symbol[0] == doctest::Approx(1.0));
    for (std::size_t k = 1; k < r.symbol.size(); ++k) CHECK(r.symbol[k] < 1.0);

    const SpectrumReport d = spectrum_report(DiscreteFilter({1.0}, 0.0), 16);
    CHECK(d.condition_met);
    CHECK(d.zero_set.empty());
    for (double s : d.symbol) CHECK(s == doctest::Approx(1.0));

    // brute-force DFT of the double average: zeros at xi = 1/3 and 2/3
    const DiscreteFilter a = double_average_filter(2);
    const SpectrumReport z = spectrum_report(a, 60);
    for (std::size_t k = 0; k < 60; ++k) {
        double ref = 0.0;
        for (std::ptrdiff_t t = -2; t <= 2; ++t) ref += a[t] * std::cos(2 * pi * static_cast<double>(k) * static_cast<double>(t) / 60.0);
        CHECK(z.symbol[k] == doctest::Approx(ref).scale(1.0).epsilon(1e-14));
    }
    CHECK(z.zero_set == std::vector<std::size_t>{20, 40});

    CHECK_THROWS_AS(spectrum_report(a, 4), GridTooSmall);
}

TEST_CASE("an unsigned symbol can violate the condition")
{
    // w = (1/2)(delta_{-1} + delta_{1}) has symbol cos(2 pi xi), reaching -1
    const SpectrumReport r = spectrum_report(DiscreteFilter({0.5, 0.0, 0.5}, 1.0), 8);
    CHECK_FALSE(r.condition_met);
    CHECK(r.min_symbol == doctest::Approx(-1.0));
}

TEST_CASE("filter export round trip")
{
    const DiscreteFilter w = default_filter_source().make(6.4);
    std::stringstream ss;
    write_filter(ss, w);
    const DiscreteFilter back = read_filter(ss);
    REQUIRE(back.size() == w.size());
    CHECK(back.half_length() == w.half_length());
    for (std::size_t j = 0; j < w.size(); ++j) CHECK(back.weights()[j] == w.weights()[j]);

    std::istringstream bad("# half_length=2 n=2\n0.1 0.2\n");
    CHECK_THROWS_AS(read_filter(bad), InvalidArgument);
}

TEST_CASE("re-solving at the target length matches the master shape")
{
    const FPCoefficients c = FPCoefficients::fig4_preset(0.005, 0.09, Fig4Shape::experiment());
    const DiscreteFilter direct = resolve_filter(c, 10.0, coarse());
    const DiscreteFilter rescaled = realize_filter(default_filter_source().profile, 10.0);
    REQUIRE(direct.size() == rescaled.size());
    CHECK(total(direct.weights()) == doctest::Approx(1.0).epsilon(1e-10));
    double diff = 0.0;
    for (std::size_t j = 0; j < direct.size(); ++j) diff += std::abs(direct.weights()[j] - rescaled.weights()[j]);
    CHECK(diff < 0.1);
}
