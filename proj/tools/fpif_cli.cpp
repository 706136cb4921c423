// Command-line driver: decompose, filter-design, instfreq, bench.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 acceptance failure.

#include "fpif/alif.hpp"
#include "fpif/bench.hpp"
#include "fpif/fpfilter.hpp"
#include "fpif/instfreq.hpp"
#include "fpif/io.hpp"
#include "fpif/iterfilt.hpp"
#include "fpif/signals.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#ifndef FPIF_DEFAULT_CONFIG
#define FPIF_DEFAULT_CONFIG "configs/paper.cfg"
#endif

namespace fs = std::filesystem;
using namespace fpif;

namespace {

enum Exit { ok = 0, usage = 1, data = 2, acceptance = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputOptions {
    std::string path;
    char delimiter = ',';
    std::optional<std::size_t> time_column;
    std::size_t value_column = 0;
    std::size_t header_rows = 0;
    std::optional<double> dx;

    void add_to(CLI::App& cmd)
    {
        cmd.add_option("--delimiter", delimiter, "Field separator");
        cmd.add_option("--time-column", time_column, "0-based time column (omit for unit spacing)");
        cmd.add_option("--value-column", value_column, "0-based value column");
        cmd.add_option("--header-rows", header_rows, "Rows to skip before data");
        cmd.add_option("--dx", dx, "Sample spacing override")->check(CLI::PositiveNumber);
    }

    Signal load() const
    {
        TimeSeriesFormat fmt;
        fmt.delimiter = delimiter;
        fmt.time_column = time_column;
        fmt.value_column = value_column;
        fmt.header_rows = header_rows;
        fmt.dx_override = dx;
        return load_timeseries_csv(path, fmt);
    }
};

Config load_config(const std::string& path)
{
    return path.empty() ? Config{} : Config::load(path);
}

void write_masks(const fs::path& dir, const Signal& grid, const Decomposition& d)
{
    for (std::size_t k = 0; k < d.masks.size(); ++k) {
        auto os = open_output((dir / ("mask_" + std::to_string(k + 1) + ".csv")).string());
        write_columns(os, grid, {"l_samples"}, {d.masks[k]});
    }
}

int run_decompose(const std::string& method, const InputOptions& in, const std::string& example, std::size_t n,
                  std::uint64_t seed, const std::string& config_path, const std::string& out)
{
    if (in.path.empty() == example.empty()) {
        throw UsageError("decompose needs exactly one of --input or --example");
    }
    const Config cfg = load_config(config_path);
    std::optional<ExampleCase> ex;
    if (!example.empty()) ex = generate_example(example, n, seed);
    const Signal input = ex ? ex->signal : in.load();
    const std::string scope = example.empty() ? std::string{} : example;
    const Decomposition d = method == "if" ? if_decompose(input, if_config_from(cfg, scope))
                                           : alif_decompose(input, alif_config_from(cfg, "alif." + scope));
    for (const auto& key : cfg.unused_keys()) std::cerr << "note: config key '" << key << "' not used\n";

    const fs::path dir(out);
    fs::create_directories(dir);
    write_decomposition_csv(input, d, (dir / "decomposition.csv").string());
    auto diag = open_output((dir / "diagnostics.csv").string());
    write_diagnostics(diag, d);
    auto hist = open_output((dir / "sd_history.csv").string());
    write_sd_history(hist, d);
    write_masks(dir, input, d);
    if (ex) {
        const MatchReport m = match_components(d, ex->truth);
        auto os = open_output((dir / "match.csv").string());
        os << "truth,component,correlation,rel_l2\n";
        for (std::size_t t = 0; t < ex->truth.size(); ++t) {
            os << ex->truth_names[t] << ',' << m.pairing[t] << ',' << m.correlation[t] << ',' << m.rel_l2[t] << '\n';
        }
    }
    std::cout << d.imfs.size() << " IMFs (" << d.source << "), reconstruction error " << reconstruction_error(input, d)
              << (d.mask_exceeded ? ", stopped: mask exceeds record" : "")
              << (d.max_imfs_reached ? ", stopped: max_imfs" : "") << '\n';
    return ok;
}

int run_filter_design(double alpha, double beta, const std::string& preset, double half_length, std::size_t grid,
                      bool self_conv, const std::string& out)
{
    Fig4Shape shape;
    if (preset == "experiment") {
        shape = Fig4Shape::experiment();
    } else if (preset != "fig4") {
        throw UsageError("unknown preset '" + preset + "' (fig4 or experiment)");
    }
    SteadyStateInfo info;
    const FilterProfile p = solve_fp_steady_state(FPCoefficients::fig4_preset(alpha, beta, shape), {}, &info);
    const FilterSource src{p, self_conv};
    const DiscreteFilter w = src.make(half_length);
    write_filter_file(out, w);
    const SpectrumReport rep = spectrum_report(w, std::max(grid, w.size()));
    auto os = open_output(out + ".spectrum.csv");
    os << "k,symbol\n";
    os.precision(17);
    for (std::size_t k = 0; k < rep.symbol.size(); ++k) os << k << ',' << rep.symbol[k] << '\n';
    auto prof = open_output(out + ".profile.csv");
    prof << "x,weight\n";
    prof.precision(17);
    for (std::size_t j = 0; j < p.weights.size(); ++j) {
        prof << p.a + (static_cast<double>(j) + 0.5) * p.interval_width() << ',' << p.weights[j] << '\n';
    }
    std::cout << "steady state after " << info.steps << " steps; " << w.size() << " taps; symbol in ["
              << rep.min_symbol << ", " << rep.max_symbol << "]; condition " << (rep.condition_met ? "met" : "violated")
              << '\n';
    return ok;
}

int run_instfreq(const InputOptions& in, const std::string& method, double eno, bool prepass, const std::string& out)
{
    const Signal s = in.load();
    FreqResult fr;
    if (method == "local") {
        InstFreqConfig cfg;
        cfg.eno_threshold = eno;
        cfg.alif_prepass = prepass;
        fr = local_instantaneous_frequency(s, cfg);
    } else {
        fr = hilbert_instantaneous_frequency(s);
    }
    write_freq_csv(s, fr, out);
    return ok;
}

int run_bench(const std::string& suite, const std::string& config_path, const std::string& out)
{
    if (suite != "paper") {
        throw UsageError("unknown suite '" + suite + "'");
    }
    Bench bench(Config::load(config_path));
    const auto results = bench.run_all();
    bench.write_artifacts(out);
    auto os = open_output((fs::path(out) / "summary.csv").string());
    os << "criterion,pass,title,detail\n";
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        os << r.id << ',' << (r.pass ? "pass" : "fail") << ",\"" << r.title << "\",\"" << r.detail << "\"\n";
        std::cout << "criterion " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << " - " << r.title << " - " << r.detail
                  << '\n';
    }
    for (const auto& [key, run] : bench.runs()) {
        std::cout << "  " << key << ": " << run.dec.imfs.size() << " IMFs in " << run.seconds << " s\n";
    }
    return all ? ok : acceptance;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Iterative filtering with Fokker-Planck filters"};
    app.require_subcommand(1);

    auto* dec = app.add_subcommand("decompose", "IF or ALIF decomposition to CSV");
    std::string method = "if";
    std::string example;
    std::size_t n = 2000;
    std::uint64_t seed = 1;
    std::string config_path;
    std::string out;
    InputOptions dec_in;
    dec->add_option("--method", method)->check(CLI::IsMember({"if", "alif"}));
    dec->add_option("--input", dec_in.path, "Time-series CSV");
    dec->add_option("--example", example, "Built-in example id")->check(CLI::IsMember(example_ids()));
    dec->add_option("--n", n, "Example sample count");
    dec->add_option("--seed", seed, "Example noise seed");
    dec->add_option("--config", config_path, "key = value settings");
    dec->add_option("--out", out, "Output directory")->required();
    dec_in.add_to(*dec);

    auto* fd = app.add_subcommand("filter-design", "Solve the FP steady state and export a filter");
    double alpha = 0.005;
    double beta = 0.09;
    std::string preset = "fig4";
    double half_length = 32.0;
    std::size_t grid = 4096;
    bool no_self_conv = false;
    std::string fd_out;
    fd->add_option("--alpha", alpha)->check(CLI::PositiveNumber);
    fd->add_option("--beta", beta)->check(CLI::PositiveNumber);
    fd->add_option("--preset", preset)->check(CLI::IsMember({"fig4", "experiment"}));
    fd->add_option("--half-length", half_length, "Realized half-length in samples")->check(CLI::PositiveNumber);
    fd->add_option("--grid", grid, "Spectrum grid size");
    fd->add_flag("--no-self-convolve", no_self_conv);
    fd->add_option("--out", fd_out, "Filter file")->required();

    auto* ifq = app.add_subcommand("instfreq", "Instantaneous frequency of one IMF");
    InputOptions if_in;
    std::string freq_method = "local";
    double eno = 2.0;
    bool prepass = false;
    std::string if_out;
    ifq->add_option("--input", if_in.path)->required();
    ifq->add_option("--method", freq_method)->check(CLI::IsMember({"local", "hilbert"}));
    ifq->add_option("--eno-threshold", eno)->check(CLI::Range(1.0, 1e12));
    ifq->add_flag("--alif-prepass", prepass, "Strip much shorter oscillations first");
    ifq->add_option("--out", if_out)->required();
    if_in.add_to(*ifq);

    auto* bench = app.add_subcommand("bench", "Run the example suite with an acceptance summary");
    std::string suite = "paper";
    std::string bench_config = FPIF_DEFAULT_CONFIG;
    std::string bench_out;
    bench->add_option("--suite", suite);
    bench->add_option("--config", bench_config);
    bench->add_option("--out", bench_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        if (*dec) return run_decompose(method, dec_in, example, n, seed, config_path, out);
        if (*fd) return run_filter_design(alpha, beta, preset, half_length, grid, !no_self_conv, fd_out);
        if (*ifq) return run_instfreq(if_in, freq_method, eno, prepass, if_out);
        if (*bench) return run_bench(suite, bench_config, bench_out);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return data;
    }
    return usage;
}
