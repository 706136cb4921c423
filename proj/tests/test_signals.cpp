#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpif/signals.hpp"

#include <cmath>
#include <numbers>

using namespace fpif;

namespace {

constexpr double pi = std::numbers::pi;

Decomposition from_parts(std::vector<Signal> imfs, Signal remainder)
{
    return Decomposition{.imfs = std::move(imfs), .remainder = std::move(remainder)};
}

}  // namespace

TEST_CASE("every example sums to its signal")
{
    for (const std::string& id : example_ids()) {
        const ExampleCase ex = generate_example(id, 500, 3);
        CAPTURE(id);
        CHECK(ex.signal.size() == 500);
        CHECK(ex.truth.size() == ex.truth_names.size());
        for (std::size_t i = 0; i < ex.signal.size(); ++i) {
            double sum = 0.0;
            for (const Signal& t : ex.truth) sum += t[i];
            CHECK(ex.signal[i] == sum);
        }
    }
    CHECK_THROWS_AS(generate_example("ex7", 1000), UnknownExample);
}

TEST_CASE("closed forms")
{
    const ExampleCase ex3 = generate_example("ex3", 2000);
    CHECK(ex3.signal.x0() == 0.0);
    CHECK(ex3.signal.x(1999) == doctest::Approx(2 * pi));
    for (std::size_t i : {0u, 401u, 1333u, 1999u}) {
        const double x = ex3.signal.x(i);
        const double f1 = std::cos(-(8 / pi) * x * x - 20 * x);
        const double f2 = std::cos(-(8 / pi) * x * x - 4 * x);
        CHECK(ex3.truth[0][i] == doctest::Approx(f1));
        CHECK(ex3.truth[1][i] == doctest::Approx(f2));
        CHECK(ex3.truth[2][i] == 1.0);
        CHECK(ex3.signal[i] == doctest::Approx(f1 + f2 + 1.0));
    }

    const ExampleCase ex4 = generate_example("ex4a", 1000);
    REQUIRE(ex4.truth.size() == 2);
    CHECK(ex4.signal.x(999) == doctest::Approx(5.0));
    for (std::size_t i : {0u, 250u, 999u}) {
        const double x = ex4.signal.x(i);
        CHECK(ex4.signal[i] == doctest::Approx(std::sin(pi * x) + std::sin(4 * pi * x)).scale(1.0));
    }
}

TEST_CASE("seeded cases are reproducible")
{
    for (const char* id : {"ex4b", "ex6b"}) {
        const ExampleCase a = generate_example(id, 800, 9);
        const ExampleCase b = generate_example(id, 800, 9);
        const ExampleCase c = generate_example(id, 800, 10);
        CHECK(a.signal.values() == b.signal.values());
        CHECK(a.signal.values() != c.signal.values());
    }
}

TEST_CASE("SNR")
{
    const std::vector<double> s{1.0, -2.0, 0.5, 3.0};
    std::vector<double> tenth(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) tenth[i] = s[i] / 10;
    CHECK(snr_db(s, s) == doctest::Approx(0.0).scale(1.0));
    CHECK(snr_db(s, tenth) == doctest::Approx(20.0));
    CHECK_THROWS_AS(snr_db(s, std::vector<double>(4, 0.0)), ZeroNoise);

    const Signal clean = generate_example("ex6a", 1000).signal;
    const NoisySignal zero = add_noise_snr(clean, 0.0, 4);
    CHECK(std::abs(snr_db(clean.samples(), zero.noise.samples())) < 1e-6);
    const NoisySignal minus10 = add_noise_snr(clean, -10.0, 4);
    CHECK(l2_norm(minus10.noise.samples()) == doctest::Approx(std::pow(10.0, 0.5) * l2_norm(clean.samples())).epsilon(1e-12));
    for (std::size_t i = 0; i < clean.size(); ++i) CHECK(minus10.noisy[i] == clean[i] + minus10.noise[i]);
    CHECK(add_noise_snr(clean, 0.0, 4).noise.values() == zero.noise.values());
}

TEST_CASE("noise variance")
{
    const std::vector<double> g = gaussian_noise(200000, 0.01, 1);
    double m = 0.0;
    double v = 0.0;
    for (double x : g) m += x;
    m /= static_cast<double>(g.size());
    for (double x : g) v += (x - m) * (x - m);
    v /= static_cast<double>(g.size() - 1);
    CHECK(std::abs(m) < 5e-4);
    CHECK(v == doctest::Approx(0.01).epsilon(0.02));
}

TEST_CASE("correlation and interior window")
{
    CHECK(interior_window(100, 0.8) == std::pair<std::size_t, std::size_t>{10, 90});
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> b{2.0, 4.0, 6.0, 8.0, 10.0};
    const std::vector<double> nb{-1.0, -2.0, -3.0, -4.0, -5.0};
    CHECK(correlation(a, b, 1.0) == doctest::Approx(1.0));
    CHECK(correlation(a, nb, 1.0) == doctest::Approx(-1.0));
    CHECK(correlation(a, std::vector<double>(5, 0.0), 1.0) == 0.0);
}

TEST_CASE("component matching")
{
    const ExampleCase ex = generate_example("ex3", 1000);
    const Decomposition exact = from_parts({ex.truth[0], ex.truth[1]}, ex.truth[2]);
    const MatchReport m = match_components(exact, ex.truth);
    for (std::size_t t = 0; t < 3; ++t) {
        CHECK(m.pairing[t] == static_cast<int>(t));
        CHECK(m.correlation[t] == doctest::Approx(1.0));
        CHECK(m.rel_l2[t] == doctest::Approx(0.0).scale(1.0));
    }

    const Decomposition swapped = from_parts({ex.truth[1], ex.truth[0]}, ex.truth[2]);
    const MatchReport s = match_components(swapped, ex.truth);
    CHECK(s.pairing == std::vector<int>{1, 0, 2});
    CHECK(s.correlation == m.correlation);

    // one truth component missing: injective pairing, best correlation reported for the leftover
    const Decomposition short_dec = from_parts({ex.truth[0]}, ex.truth[2]);
    const MatchReport r = match_components(short_dec, ex.truth);
    CHECK(r.pairing[0] == 0);
    CHECK(r.pairing[2] == 1);
    CHECK(r.pairing[1] == -1);
    CHECK(r.correlation[1] < 0.9);
}
