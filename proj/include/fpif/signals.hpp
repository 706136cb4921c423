#ifndef FPIF_SIGNALS_HPP
#define FPIF_SIGNALS_HPP

#include "fpif/core.hpp"
#include "fpif/iterfilt.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fpif {

class UnknownExample : public Error {
public:
    using Error::Error;
};

class ZeroNoise : public Error {
public:
    using Error::Error;
};

struct ExampleCase {
    std::string id;
    std::size_t n = 0;
    Signal signal;  // equals the left-to-right sum of `truth`
    //! Ground-truth components; they sum to `signal` (noise included as the last entry when present).
    std::vector<Signal> truth;
    std::vector<std::string> truth_names;
    std::uint64_t seed = 0;
};

//! ex1, ex2, ex3, ex4a, ex4b, ex4c, ex5, ex6a, ex6b, ex6c, test1, test2.
const std::vector<std::string>& example_ids();

ExampleCase generate_example(const std::string& id, std::size_t n, std::uint64_t seed = 1);

//! 20 log10(||signal|| / ||noise||).
double snr_db(std::span<const double> signal, std::span<const double> noise);

struct NoisySignal {
    Signal noisy;
    Signal noise;
};

//! Seeded Gaussian white noise scaled so that snr_db(s, noise) == target_db.
NoisySignal add_noise_snr(const Signal& s, double target_db, std::uint64_t seed);

//! Seeded N(0, variance) samples.
std::vector<double> gaussian_noise(std::size_t n, double variance, std::uint64_t seed);

struct MatchReport {
    //! For each truth component: index into [imfs..., remainder], or -1 when nothing was left to pair.
    std::vector<int> pairing;
    std::vector<double> correlation;
    std::vector<double> rel_l2;
    double interior_fraction = 0.8;
};

//! Half-open [first, last) window of the centered `fraction` of n samples.
std::pair<std::size_t, std::size_t> interior_window(std::size_t n, double fraction);

//! Cosine similarity <a,b>/(|a||b|) on the window; 0 when either side vanishes.
double correlation(std::span<const double> a, std::span<const double> b, double interior_fraction);

MatchReport match_components(const Decomposition& dec, const std::vector<Signal>& truth,
                             double interior_fraction = 0.8);

}  // namespace fpif

#endif
