#ifndef FPIF_BENCH_HPP
#define FPIF_BENCH_HPP

#include "fpif/io.hpp"
#include "fpif/iterfilt.hpp"
#include "fpif/signals.hpp"

#include <map>
#include <string>
#include <vector>

namespace fpif {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
};

//! IMFs followed by the remainder when it carries more than 1e-8 of the input norm.
std::vector<Signal> components(const Signal& input, const Decomposition& d);

/**
 * The example suite: runs the examples named in the config, caches each
 * decomposition and evaluates the twelve acceptance criteria against them.
 *
 * Config keys (all optional, scoped as "<id>.key" for IF runs and
 * "alif.<id>.key" for ALIF runs): n, seed, chi, boundary, sd_threshold,
 * max_inner, max_imfs, mask_multiplier, filter.*; lod.path, lod.header_rows.
 */
class Bench {
public:
    explicit Bench(Config cfg);

    static constexpr int criteria_count = 12;
    CriterionResult run(int id);
    std::vector<CriterionResult> run_all();

    struct Run {
        std::string key;
        Signal input;
        std::vector<Signal> truth;
        std::vector<std::string> truth_names;
        Decomposition dec;
        double seconds = 0.0;
    };

    //! "ex1", ... for IF, "alif.ex3", ... for ALIF, "lod" for the bundled series.
    const Run& decomposition(const std::string& key);
    const std::map<std::string, Run>& runs() const noexcept { return runs_; }

    //! Decomposition, diagnostics and match CSVs for every cached run plus Test 1-2 frequencies.
    void write_artifacts(const std::string& dir);

private:
    std::size_t example_size(const std::string& id) const;
    std::uint64_t example_seed(const std::string& id) const;

    Config cfg_;
    std::map<std::string, Run> runs_;
};

}  // namespace fpif

#endif
