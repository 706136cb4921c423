#include "fpif/bench.hpp"

#include "fpif/alif.hpp"
#include "fpif/fpfilter.hpp"
#include "fpif/instfreq.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

namespace fpif {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double interior = 0.8;

const char* default_suite = "ex1 ex2 ex3 alif.ex3 ex4a ex4b ex4c ex5 alif.ex6a alif.ex6b alif.ex6c lod";

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::vector<std::string> words(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

double rel_l2_window(std::span<const double> a, std::span<const double> ref, double fraction)
{
    const auto [lo, hi] = interior_window(a.size(), fraction);
    double num2 = 0.0;
    double den2 = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        num2 += (a[i] - ref[i]) * (a[i] - ref[i]);
        den2 += ref[i] * ref[i];
    }
    return std::sqrt(num2 / den2);
}

double mean_omega(const Signal& s)
{
    const FreqResult fr = local_instantaneous_frequency(s);
    const auto [lo, hi] = interior_window(s.size(), interior);
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) m += fr.omega[i];
    return m / static_cast<double>(hi - lo);
}

// Component paired with truth t, if any.
const Signal* paired(const Decomposition& d, const MatchReport& r, std::size_t t)
{
    const int k = r.pairing.at(t);
    if (k < 0) return nullptr;
    return static_cast<std::size_t>(k) < d.imfs.size() ? &d.imfs[static_cast<std::size_t>(k)] : &d.remainder;
}

CriterionResult make(int id, std::string title)
{
    CriterionResult r;
    r.id = id;
    r.title = std::move(title);
    return r;
}

CriterionResult filter_condition(const Config& cfg)
{
    auto r = make(1, "filter condition at half-lengths 8, 32, 128.5");
    const FilterSource src = if_config_from(cfg).filter;
    r.pass = true;
    double worst_min = 1.0;
    double worst_max = -1.0;
    for (double l : {8.0, 32.0, 128.5}) {
        const DiscreteFilter w = src.make(l);
        std::vector<std::size_t> grids{w.size()};
        for (std::size_t g = 1; g <= 4096; g *= 2) {
            if (g > w.size()) grids.push_back(g);
        }
        for (std::size_t g : grids) {
            const SpectrumReport rep = spectrum_report(w, g);
            const double top = *std::max_element(rep.symbol.begin() + 1, rep.symbol.end());
            worst_min = std::min(worst_min, rep.min_symbol);
            worst_max = std::max(worst_max, top);
            r.pass = r.pass && rep.condition_met && rep.min_symbol >= -1e-12 && top < 1.0;
        }
    }
    r.detail = "min symbol " + num(worst_min) + ", max non-DC symbol " + num(worst_max);
    return r;
}

CriterionResult spectral_equivalence(const Config& cfg)
{
    auto r = make(2, "spatial sifting equals the Fourier-domain product");
    std::mt19937_64 rng(cfg.get_size("oracle.seed", 2024));
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    std::uniform_real_distribution<double> length(3.0, 60.0);
    IFConfig ic = if_config_from(cfg);
    ic.boundary = BoundaryMode::Periodic;
    ic.sd_threshold = 0.0;
    ic.max_inner = 20;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> v(256);
        for (double& x : v) x = value(rng);
        const Signal s(v);
        const DiscreteFilter w = ic.filter.make(length(rng));
        const Signal spatial = if_inner_loop(s, w, ic).first;
        const Signal spectral = spectral_limit_oracle(s, w, 20);
        double d2 = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) d2 += std::pow(spatial[i] - spectral[i], 2);
        worst = std::max(worst, std::sqrt(d2) / l2_norm(spectral.samples()));
    }
    r.pass = worst < 1e-10;
    r.detail = "worst relative L2 " + num(worst);
    return r;
}

}  // namespace

std::vector<Signal> components(const Signal& input, const Decomposition& d)
{
    std::vector<Signal> out = d.imfs;
    if (l2_norm(d.remainder.samples()) > 1e-8 * l2_norm(input.samples())) out.push_back(d.remainder);
    return out;
}

Bench::Bench(Config cfg) : cfg_(std::move(cfg)) {}

std::size_t Bench::example_size(const std::string& id) const
{
    return cfg_.scoped_size(id, "n", 2000);
}

std::uint64_t Bench::example_seed(const std::string& id) const
{
    return cfg_.scoped_size(id, "seed", 1);
}

const Bench::Run& Bench::decomposition(const std::string& key)
{
    if (const auto it = runs_.find(key); it != runs_.end()) return it->second;

    const bool alif = key.starts_with("alif.");
    const std::string id = alif ? key.substr(5) : key;
    std::optional<Signal> input;
    std::vector<Signal> truth;
    std::vector<std::string> names;
    if (id == "lod") {
        TimeSeriesFormat fmt;
        fmt.time_column = 0;
        fmt.value_column = 1;
        fmt.header_rows = cfg_.get_size("lod.header_rows", 3);
        input = load_timeseries_csv(cfg_.get_string("lod.path", "data/lod_1973_1000d.csv"), fmt);
    } else {
        ExampleCase ex = generate_example(id, example_size(key), example_seed(key));
        input = std::move(ex.signal);
        truth = std::move(ex.truth);
        names = std::move(ex.truth_names);
    }
    const auto t0 = std::chrono::steady_clock::now();
    Decomposition dec =
        alif ? alif_decompose(*input, alif_config_from(cfg_, key)) : if_decompose(*input, if_config_from(cfg_, key));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Run run{key, std::move(*input), std::move(truth), std::move(names), std::move(dec), secs};
    return runs_.emplace(key, std::move(run)).first->second;
}

CriterionResult Bench::run(int id)
{
    switch (id) {
    case 1:
        return filter_condition(cfg_);
    case 2:
        return spectral_equivalence(cfg_);
    case 3: {
        auto r = make(3, "exact reconstruction of every suite decomposition");
        double worst = 0.0;
        std::string where;
        for (const std::string& key : words(cfg_.get_string("suite", default_suite))) {
            const Run& run = decomposition(key);
            const double e = reconstruction_error(run.input, run.dec);
            if (e >= worst) {
                worst = e;
                where = key;
            }
        }
        r.pass = worst < 1e-12;
        r.detail = "worst " + num(worst) + " (" + where + ")";
        return r;
    }
    case 4: {
        auto r = make(4, "Example 1: two components, trend and FM recovered");
        const Run& run = decomposition("ex1");
        const auto comps = components(run.input, run.dec);
        const MatchReport m = match_components(run.dec, run.truth, interior);
        const double trend_err = rel_l2_window(run.dec.remainder.samples(), run.truth[1].samples(), interior);
        r.pass = comps.size() == 2 && trend_err <= 0.05 && m.correlation[0] >= 0.99;
        r.detail = std::to_string(comps.size()) + " components, trend rel L2 " + num(trend_err) + ", FM corr " +
                   num(m.correlation[0]);
        return r;
    }
    case 5: {
        auto r = make(5, "Example 2: two IMFs with the expected instantaneous frequencies");
        const Run& run = decomposition("ex2");
        const auto comps = components(run.input, run.dec);
        const MatchReport m = match_components(run.dec, run.truth, interior);
        const Signal* chirp = paired(run.dec, m, 0);
        const Signal* tone = paired(run.dec, m, 1);
        double tone_err = 1.0;
        double chirp_err = 1.0;
        const auto [lo, hi] = interior_window(run.input.size(), interior);
        if (tone) {
            const FreqResult fr = local_instantaneous_frequency(*tone);
            tone_err = 0.0;
            for (std::size_t i = lo; i < hi; ++i) tone_err = std::max(tone_err, std::abs(fr.omega[i] / (4 * pi) - 1));
        }
        if (chirp) {
            const FreqResult fr = local_instantaneous_frequency(*chirp);
            chirp_err = 0.0;
            for (std::size_t i = lo; i < hi; ++i) {
                const double x = run.input.x(i);
                if (std::abs(x) <= 0.02) continue;
                // |d/dx (50 pi |x| - 40 pi x^2)|
                const double expect = 50 * pi - 80 * pi * std::abs(x);
                chirp_err = std::max(chirp_err, std::abs(std::abs(fr.omega[i]) / expect - 1));
            }
        }
        r.pass = comps.size() == 2 && tone_err <= 0.05 && chirp_err <= 0.05;
        r.detail = std::to_string(comps.size()) + " components, low-IMF omega max rel err " + num(tone_err) +
                   ", high-IMF " + num(chirp_err);
        return r;
    }
    case 6: {
        auto r = make(6, "Example 3: IF fails, ALIF separates the chirps");
        const Run& fi = decomposition("ex3");
        const MatchReport mi = match_components(fi.dec, fi.truth, interior);
        const double if_worst = *std::min_element(mi.correlation.begin(), mi.correlation.end());
        const Run& al = decomposition("alif.ex3");
        const MatchReport ma = match_components(al.dec, al.truth, interior);
        const auto [lo, hi] = interior_window(al.input.size(), interior);
        double rem_dev = 0.0;
        for (std::size_t i = lo; i < hi; ++i) rem_dev = std::max(rem_dev, std::abs(al.dec.remainder[i] - 1.0));
        r.pass = if_worst < 0.9 && ma.correlation[0] >= 0.95 && ma.correlation[1] >= 0.95 && rem_dev <= 0.1;
        r.detail = "IF worst corr " + num(if_worst) + "; ALIF corr " + num(ma.correlation[0]) + ", " +
                   num(ma.correlation[1]) + ", remainder max |r-1| " + num(rem_dev);
        return r;
    }
    case 7: {
        auto r = make(7, "Example 4: noisy tones, last two components and IMF counts");
        r.pass = true;
        for (const auto& [id, lo_n, hi_n, need] : {std::tuple{"ex4b", 5u, 9u, 0.95}, std::tuple{"ex4c", 7u, 11u, 0.90}}) {
            const Run& run = decomposition(id);
            const auto comps = components(run.input, run.dec);
            const std::size_t m = comps.size();
            double c4 = 0.0;
            double c1 = 0.0;
            if (m >= 2) {
                c4 = correlation(comps[m - 2].samples(), run.truth[0].samples(), interior);
                c1 = correlation(comps[m - 1].samples(), run.truth[1].samples(), interior);
            }
            r.pass = r.pass && m >= lo_n && m <= hi_n && c4 >= need && c1 >= need;
            r.detail += std::string(r.detail.empty() ? "" : "; ") + id + ": " + std::to_string(m) +
                        " components, corr " + num(c4) + ", " + num(c1);
        }
        return r;
    }
    case 8: {
        auto r = make(8, "Example 6: ALIF FM recovery and eps/delta diagnostics");
        r.pass = true;
        for (const auto& [key_c, need] : {std::pair{"alif.ex6a", 0.95}, std::pair{"alif.ex6b", 0.90}}) {
            const std::string key = key_c;
            const Run& run = decomposition(key);
            const MatchReport m = match_components(run.dec, run.truth, interior);
            double eps = 0.0;
            double delta = 1e300;
            for (const auto& c : run.dec.convergence) {
                eps = std::max(eps, c.eps_product.empty() ? 1.0 : c.eps_product.back());
                delta = std::min(delta, c.delta_product.empty() ? 0.0 : c.delta_product.back());
            }
            r.pass = r.pass && m.correlation[0] >= need && m.correlation[1] >= need && eps < 1e-2 && delta > 1e-6 &&
                     !run.dec.imfs.empty();
            r.detail += std::string(r.detail.empty() ? "" : "; ") + key.substr(5) + ": corr " + num(m.correlation[0]) +
                        ", " + num(m.correlation[1]) + ", max eps prod " + num(eps) + ", min delta prod " + num(delta);
        }
        return r;
    }
    case 9: {
        auto r = make(9, "Tests 1-2: local frequency with ENO vs Hilbert");
        const ExampleCase t2 = generate_example("test2", example_size("test2"), 1);
        const FreqResult local = local_instantaneous_frequency(t2.signal);
        const FreqResult hil = hilbert_instantaneous_frequency(t2.signal);
        std::size_t ok = 0;
        std::size_t total = 0;
        double hil_dev = 0.0;
        for (std::size_t i = 0; i < t2.signal.size(); ++i) {
            const double x = t2.signal.x(i);
            if (std::abs(x - 3.0) <= 0.2 || std::abs(x - 6.0) <= 0.2) {
                hil_dev = std::max(hil_dev, std::abs(hil.omega[i] / (2 * pi) - 1));
                continue;
            }
            ++total;
            if (std::abs(local.omega[i] / (2 * pi) - 1) <= 0.05) ++ok;
        }
        const double frac = static_cast<double>(ok) / static_cast<double>(total);

        const ExampleCase t1 = generate_example("test1", example_size("test1"), 1);
        const FreqResult l1 = local_instantaneous_frequency(t1.signal);
        const std::size_t n = t1.signal.size();
        const std::size_t half = std::max<std::size_t>(1, static_cast<std::size_t>(0.05 * static_cast<double>(n)) / 2);
        std::vector<double> med;
        for (std::size_t i = half; i + half < n; ++i) {
            std::vector<double> win(l1.omega.begin() + static_cast<std::ptrdiff_t>(i - half),
                                    l1.omega.begin() + static_cast<std::ptrdiff_t>(i + half + 1));
            std::nth_element(win.begin(), win.begin() + static_cast<std::ptrdiff_t>(half), win.end());
            med.push_back(win[half]);
        }
        std::size_t drops = 0;
        for (std::size_t i = 1; i < med.size(); ++i) drops += med[i] < med[i - 1] ? 1 : 0;
        r.pass = frac >= 0.95 && hil_dev >= 0.2 && drops == 0;
        r.detail = "Test 2 local within 5% on " + num(100 * frac) + "% of samples, Hilbert max dev near jumps " +
                   num(100 * hil_dev) + "%; Test 1 smoothed omega decreases at " + std::to_string(drops) + " samples";
        return r;
    }
    case 10: {
        auto r = make(10, "Examples 1-3: every inner loop reaches SD < 1e-5 within 200 iterations");
        r.pass = true;
        for (const char* key : {"ex1", "ex2", "alif.ex3"}) {
            const Run& run = decomposition(key);
            double worst = 0.0;
            std::size_t its = 0;
            for (const auto& g : run.dec.diagnostics) {
                const bool ok = g.final_sd < 1e-5 && g.iterations <= 200;
                r.pass = r.pass && ok;
                worst = std::max(worst, g.final_sd);
                its = std::max(its, g.iterations);
            }
            r.detail += std::string(r.detail.empty() ? "" : "; ") + key + ": worst final SD " + num(worst) + " at up to " +
                        std::to_string(its) + " iterations";
        }
        return r;
    }
    case 11: {
        auto r = make(11, "Examples 1-3: IMF maxima positive, minima negative");
        r.pass = true;
        for (const char* key : {"ex1", "ex2", "alif.ex3"}) {
            const Run& run = decomposition(key);
            std::size_t bad = 0;
            for (const Signal& imf : run.dec.imfs) {
                for (const Extremum& e : find_extrema(imf)) {
                    if ((e.kind == ExtremumKind::Max) != (e.value > 0.0)) ++bad;
                }
            }
            r.pass = r.pass && bad == 0;
            r.detail += std::string(r.detail.empty() ? "" : "; ") + key + ": " + std::to_string(bad) + " violations";
        }
        return r;
    }
    case 12: {
        auto r = make(12, "LOD sample: 4-6 components with half-monthly and monthly periods");
        const Run& run = decomposition("lod");
        const auto comps = components(run.input, run.dec);
        std::vector<double> periods;
        for (const Signal& imf : run.dec.imfs) periods.push_back(2 * pi / mean_omega(imf));
        bool increasing = true;
        bool half_month = false;
        bool month = false;
        for (std::size_t k = 0; k < periods.size(); ++k) {
            if (k > 0 && !(periods[k] > periods[k - 1])) increasing = false;
            half_month = half_month || (periods[k] >= 12 && periods[k] <= 16);
            month = month || (periods[k] >= 25 && periods[k] <= 35);
        }
        r.pass = comps.size() >= 4 && comps.size() <= 6 && increasing && half_month && month;
        r.detail = std::to_string(comps.size()) + " components, IMF mean periods";
        for (double p : periods) r.detail += " " + num(p);
        return r;
    }
    default:
        throw InvalidArgument("unknown criterion " + std::to_string(id));
    }
}

std::vector<CriterionResult> Bench::run_all()
{
    std::vector<CriterionResult> out;
    for (int id = 1; id <= criteria_count; ++id) out.push_back(run(id));
    return out;
}

void Bench::write_artifacts(const std::string& dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (const auto& [key, run] : runs_) {
        const std::string stem = (fs::path(dir) / key).string();
        write_decomposition_csv(run.input, run.dec, stem + "_decomposition.csv");
        auto diag = open_output(stem + "_diagnostics.csv");
        write_diagnostics(diag, run.dec);
        auto hist = open_output(stem + "_sd_history.csv");
        write_sd_history(hist, run.dec);
        if (!run.truth.empty()) {
            const MatchReport m = match_components(run.dec, run.truth, interior);
            auto os = open_output(stem + "_match.csv");
            os << "truth,component,correlation,rel_l2\n";
            for (std::size_t t = 0; t < run.truth.size(); ++t) {
                const int k = m.pairing[t];
                const std::string comp = k < 0                                            ? "none"
                                         : static_cast<std::size_t>(k) < run.dec.imfs.size() ? "imf_" + std::to_string(k + 1)
                                                                                            : "remainder";
                os << run.truth_names[t] << ',' << comp << ',' << num(m.correlation[t]) << ',' << num(m.rel_l2[t]) << '\n';
            }
        }
    }
    for (const char* id : {"test1", "test2"}) {
        const ExampleCase ex = generate_example(id, example_size(id), 1);
        write_freq_csv(ex.signal, local_instantaneous_frequency(ex.signal), (fs::path(dir) / id).string() + "_local.csv");
        write_freq_csv(ex.signal, hilbert_instantaneous_frequency(ex.signal),
                       (fs::path(dir) / id).string() + "_hilbert.csv");
    }
}

}  // namespace fpif
