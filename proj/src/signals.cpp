#include "fpif/signals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace fpif {

namespace {

constexpr double pi = std::numbers::pi;

using Component = std::function<double(double)>;

struct Grid {
    double a;
    double b;
    std::size_t n;
    double dx() const { return (b - a) / static_cast<double>(n - 1); }
    double x(std::size_t i) const { return a + static_cast<double>(i) * dx(); }
};

ExampleCase assemble(const std::string& id, const Grid& g, std::uint64_t seed,
                     const std::vector<std::pair<std::string, Component>>& parts,
                     const std::vector<double>* noise = nullptr)
{
    std::vector<Signal> truth;
    std::vector<std::string> names;
    std::vector<double> sum(g.n, 0.0);
    auto push = [&](const std::string& name, std::vector<double> v) {
        for (std::size_t i = 0; i < g.n; ++i) sum[i] += v[i];
        truth.emplace_back(std::move(v), g.dx(), g.a);
        names.push_back(name);
    };
    for (const auto& [name, fn] : parts) {
        std::vector<double> v(g.n);
        for (std::size_t i = 0; i < g.n; ++i) v[i] = fn(g.x(i));
        push(name, std::move(v));
    }
    if (noise) {
        push("noise", *noise);
    }
    return {id, g.n, Signal(std::move(sum), g.dx(), g.a), std::move(truth), std::move(names), seed};
}

std::vector<double> window(std::span<const double> v, double fraction)
{
    const auto [lo, hi] = interior_window(v.size(), fraction);
    return {v.begin() + static_cast<std::ptrdiff_t>(lo), v.begin() + static_cast<std::ptrdiff_t>(hi)};
}

}  // namespace

const std::vector<std::string>& example_ids()
{
    static const std::vector<std::string> ids{"ex1", "ex2",  "ex3",  "ex4a", "ex4b",  "ex4c",
                                              "ex5", "ex6a", "ex6b", "ex6c", "test1", "test2"};
    return ids;
}

std::vector<double> gaussian_noise(std::size_t n, double variance, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(variance));
    std::vector<double> v(n);
    for (double& x : v) x = normal(rng);
    return v;
}

ExampleCase generate_example(const std::string& id, std::size_t n, std::uint64_t seed)
{
    if (n < 256) {
        throw InvalidArgument("examples need at least 256 samples");
    }
    if (id == "ex1") {
        return assemble(id, {0.0, 1.0, n}, seed,
                        {{"fm", [](double x) {
                              return (2 * std::pow(x - 0.5, 2) + 0.2) * std::sin((20 * pi + 0.2 * std::cos(40 * pi * x)) * x);
                          }},
                         {"trend", [](double x) { return 4 * std::pow(x - 0.5, 2); }}});
    }
    if (id == "ex2") {
        return assemble(id, {-0.4, 0.4, n}, seed,
                        {{"chirp", [](double x) { return 0.5 * std::cos(50 * pi * std::abs(x) - 40 * pi * x * x); }},
                         {"tone", [](double x) { return std::sin(4 * pi * x); }}});
    }
    if (id == "ex3") {
        const double c = 8.0 / pi;
        return assemble(id, {0.0, 2 * pi, n}, seed,
                        {{"f1", [c](double x) { return std::cos(-c * x * x - 20 * std::abs(x)); }},
                         {"f2", [c](double x) { return std::cos(-c * x * x - 4 * std::abs(x)); }},
                         {"offset", [](double) { return 1.0; }}});
    }
    if (id == "ex4a" || id == "ex4b" || id == "ex4c") {
        const std::vector<std::pair<std::string, Component>> parts{
            {"sin4pi", [](double x) { return std::sin(4 * pi * x); }},
            {"sin1pi", [](double x) { return std::sin(pi * x); }}};
        const Grid g{0.0, 5.0, n};
        if (id == "ex4a") {
            return assemble(id, g, seed, parts);
        }
        const std::vector<double> noise = gaussian_noise(n, id == "ex4b" ? 0.01 : 1.0, seed);
        return assemble(id, g, seed, parts, &noise);
    }
    if (id == "ex5") {
        return assemble(id, {-1.0, 2.0, n}, seed,
                        {{"f1", [](double x) { return (std::sin(4 * pi * x) + 1.5) * std::cos(50 * pi * x); }},
                         {"f2", [](double x) {
                              return (5 * std::sin(2 * pi * (x + 1) / 6 + pi) + 5.6) *
                                     std::sin(2 * pi * (10 * x + 0.03 * std::cos(40 * pi * x)));
                          }},
                         {"f3", [](double x) { return (2 * std::cos(1.4 * pi * x) + 5) * std::sin(4 * pi * x); }}});
    }
    if (id == "ex6a" || id == "ex6b" || id == "ex6c") {
        const std::vector<std::pair<std::string, Component>> parts{
            {"g2", [](double x) { return std::cos(20 * std::cos(x / 10) - 7 * x); }},
            {"g1", [](double x) { return std::cos(20 * std::cos(x / 10) - 4 * x); }},
            {"offset", [](double) { return 1.0; }}};
        const Grid g{0.0, 20 * pi, n};
        ExampleCase clean = assemble(id, g, seed, parts);
        if (id == "ex6a") {
            return clean;
        }
        const NoisySignal ns = add_noise_snr(clean.signal, id == "ex6b" ? 0.0 : -10.0, seed);
        return assemble(id, g, seed, parts, &ns.noise.values());
    }
    if (id == "test1") {
        return assemble(id, {0.0, 40.0, n}, seed,
                        {{"signal", [](double x) {
                              return (1 + 0.2 * std::cos(0.06 * pi * x)) * std::sin((1 + 0.1 * x) * x);
                          }}});
    }
    if (id == "test2") {
        return assemble(id, {0.0, 10.0, n}, seed,
                        {{"signal", [](double x) {
                              const double a = (x >= 3.0 && x <= 6.0) ? 0.1 : 1.0;
                              return a * std::sin(2 * pi * x);
                          }}});
    }
    throw UnknownExample("unknown example id '" + id + "'");
}

double snr_db(std::span<const double> signal, std::span<const double> noise)
{
    if (signal.size() != noise.size()) {
        throw InvalidArgument("snr: length mismatch");
    }
    const double nn = l2_norm(noise);
    if (nn == 0.0) {
        throw ZeroNoise("snr: noise is identically zero");
    }
    return 20.0 * std::log10(l2_norm(signal) / nn);
}

NoisySignal add_noise_snr(const Signal& s, double target_db, std::uint64_t seed)
{
    const double sn = l2_norm(s.samples());
    if (sn == 0.0) {
        throw InvalidArgument("add_noise_snr: signal is identically zero");
    }
    std::vector<double> noise = gaussian_noise(s.size(), 1.0, seed);
    const double scale = sn / (l2_norm(noise) * std::pow(10.0, target_db / 20.0));
    for (double& v : noise) v *= scale;
    std::vector<double> noisy = s.values();
    for (std::size_t i = 0; i < noisy.size(); ++i) noisy[i] += noise[i];
    return {s.with_samples(std::move(noisy)), s.with_samples(std::move(noise))};
}

std::pair<std::size_t, std::size_t> interior_window(std::size_t n, double fraction)
{
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw InvalidArgument("interior fraction must lie in (0, 1]");
    }
    const auto cut = static_cast<std::size_t>(std::floor(0.5 * (1.0 - fraction) * static_cast<double>(n) + 1e-9));
    return {cut, std::max(cut + 1, n - cut)};
}

double correlation(std::span<const double> a, std::span<const double> b, double interior_fraction)
{
    if (a.size() != b.size()) {
        throw InvalidArgument("correlation: length mismatch");
    }
    const auto [lo, hi] = interior_window(a.size(), interior_fraction);
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0.0 || bb == 0.0) {
        return 0.0;
    }
    return std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
}

MatchReport match_components(const Decomposition& dec, const std::vector<Signal>& truth, double interior_fraction)
{
    std::vector<const Signal*> cand;
    for (const Signal& imf : dec.imfs) cand.push_back(&imf);
    cand.push_back(&dec.remainder);

    const std::size_t nt = truth.size();
    const std::size_t nc = cand.size();
    std::vector<std::vector<double>> corr(nt, std::vector<double>(nc));
    for (std::size_t t = 0; t < nt; ++t)
        for (std::size_t c = 0; c < nc; ++c)
            corr[t][c] = correlation(truth[t].samples(), cand[c]->samples(), interior_fraction);

    MatchReport r{std::vector<int>(nt, -1), std::vector<double>(nt, 0.0), std::vector<double>(nt, 1.0),
                  interior_fraction};
    std::vector<bool> t_done(nt, false), c_used(nc, false);
    // global greedy: repeatedly take the strongest remaining (truth, candidate) pair
    for (std::size_t round = 0; round < std::min(nt, nc); ++round) {
        double best = -1.0;
        std::size_t bt = 0, bc = 0;
        for (std::size_t t = 0; t < nt; ++t) {
            if (t_done[t]) continue;
            for (std::size_t c = 0; c < nc; ++c) {
                if (!c_used[c] && std::abs(corr[t][c]) > best) {
                    best = std::abs(corr[t][c]);
                    bt = t;
                    bc = c;
                }
            }
        }
        t_done[bt] = true;
        c_used[bc] = true;
        r.pairing[bt] = static_cast<int>(bc);
    }
    for (std::size_t t = 0; t < nt; ++t) {
        if (r.pairing[t] < 0) {
            double best = 0.0;
            for (std::size_t c = 0; c < nc; ++c) best = std::max(best, std::abs(corr[t][c]));
            r.correlation[t] = best;
            continue;
        }
        const Signal& c = *cand[static_cast<std::size_t>(r.pairing[t])];
        r.correlation[t] = corr[t][static_cast<std::size_t>(r.pairing[t])];
        const std::vector<double> tw = window(truth[t].samples(), interior_fraction);
        const std::vector<double> cw = window(c.samples(), interior_fraction);
        double diff = 0.0;
        for (std::size_t i = 0; i < tw.size(); ++i) diff += (cw[i] - tw[i]) * (cw[i] - tw[i]);
        const double ref = l2_norm(tw);
        r.rel_l2[t] = ref == 0.0 ? std::sqrt(diff) : std::sqrt(diff) / ref;
    }
    return r;
}

}  // namespace fpif
