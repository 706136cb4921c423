#ifndef FPIF_ITERFILT_HPP
#define FPIF_ITERFILT_HPP

#include "fpif/core.hpp"
#include "fpif/fpfilter.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fpif {

struct IFConfig {
    double chi = 1.6;
    double sd_threshold = 1e-5;
    std::size_t max_inner = 200;
    std::size_t max_imfs = 32;
    BoundaryMode boundary = BoundaryMode::Reflect;
    FilterSource filter = default_filter_source();
};

struct InnerDiagnostics {
    std::size_t iterations = 0;
    //! One SD value per sifting step, measured against the step's input.
    std::vector<double> sd_history;
    double final_sd = 0.0;
    double mask_half_length = 0.0;
    bool converged = false;
};

//! A-posteriori contraction ratios of an ALIF inner loop.
struct ConvergenceDiagnostics {
    std::vector<double> eps;
    std::vector<double> delta;
    std::vector<double> eps_product;
    std::vector<double> delta_product;
};

struct Decomposition {
    std::vector<Signal> imfs;
    Signal remainder;
    std::vector<InnerDiagnostics> diagnostics;
    //! Filled by ALIF only, one entry per IMF.
    std::vector<ConvergenceDiagnostics> convergence;
    //! Mask half-length per sample used for each IMF (ALIF only).
    std::vector<std::vector<double>> masks;
    //! Outer loop stopped on max_imfs with a non-trend remainder.
    bool max_imfs_reached = false;
    //! Outer loop stopped because the next mask would not fit in the record.
    bool mask_exceeded = false;
    std::string source;

    //! Sum of IMFs and remainder.
    std::vector<double> reconstruction() const;
};

//! 2 * floor(chi * N / k), at least 2; throws TooFewExtrema for k < 2.
std::size_t uniform_mask_length(const Signal& s, double chi);

//! ||curr - prev|| / ||prev||; throws ZeroReference on an all-zero reference.
double sd_metric(std::span<const double> prev, std::span<const double> curr);

std::pair<Signal, InnerDiagnostics> if_inner_loop(const Signal& s, const DiscreteFilter& w, const IFConfig& cfg);

/**
 * Fourier-domain sifting on the periodic record: every DFT mode k is scaled by
 * (1 - w^(k))^n. With no iteration count the infinite-iteration limit is returned: modes
 * with |w^(k)| < zero_tol are kept, all others removed.
 */
Signal spectral_limit_oracle(const Signal& s, const DiscreteFilter& w, std::optional<std::size_t> iterations,
                             double zero_tol = 1e-12);

Decomposition if_decompose(const Signal& s, const IFConfig& cfg = {});

//! Relative L2 reconstruction error ||input - (sum IMFs + remainder)|| / ||input||.
double reconstruction_error(const Signal& input, const Decomposition& d);

}  // namespace fpif

#endif
