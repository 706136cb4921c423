#ifndef FPIF_ALIF_HPP
#define FPIF_ALIF_HPP

#include "fpif/core.hpp"
#include "fpif/fpfilter.hpp"
#include "fpif/iterfilt.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace fpif {

//! Per-sample filter half-lengths (in samples) for adaptive averaging.
struct MaskField {
    std::vector<double> values;
    double min_clamp = 2.0;
};

struct ALIFConfig {
    //! Mask = multiplier x distance between consecutive extrema.
    double mask_multiplier = 2.0;
    double min_clamp = 2.0;
    double sd_threshold = 1e-5;
    std::size_t max_inner = 200;
    std::size_t max_imfs = 32;
    BoundaryMode boundary = BoundaryMode::Reflect;
    FilterSource filter = default_filter_source();
    //! IF settings used to pull the slowly varying trend out of the raw mask.
    IFConfig smoothing{};
};

MaskField raw_mask_field(const Signal& s, double multiplier, double min_clamp = 2.0);

MaskField smooth_mask_field(const MaskField& raw, const ALIFConfig& cfg);

/**
 * Position-dependent moving average with filters realized per distinct mask
 * length (rounded to 0.1 sample). Build once per mask, apply many times.
 */
class AdaptiveAverager {
public:
    AdaptiveAverager(const FilterSource& source, const MaskField& field, BoundaryMode mode);

    std::vector<double> operator()(std::span<const double> f) const;
    std::size_t distinct_filters() const noexcept { return filters_.size(); }

private:
    std::map<long, DiscreteFilter> filters_;
    std::vector<const DiscreteFilter*> per_sample_;
    std::size_t pad_ = 0;
    BoundaryMode mode_;
};

Signal adaptive_moving_average(const Signal& s, const FilterSource& source, const MaskField& field, BoundaryMode mode);

//! Interior fraction used for the sup norms in eps/delta.
inline constexpr double eps_delta_interior = 0.9;

/**
 * eps = |curr_ma| / |prev_ma|, delta = |curr_abs_ma| / |prev_abs_ma| in the max
 * norm over the central 90% of samples. Throws ZeroReference when a
 * denominator vanishes.
 */
std::pair<double, double> eps_delta(std::span<const double> prev_ma, std::span<const double> curr_ma,
                                    std::span<const double> prev_abs_ma, std::span<const double> curr_abs_ma);

std::tuple<Signal, InnerDiagnostics, ConvergenceDiagnostics> alif_inner_loop(const Signal& s, const MaskField& field,
                                                                            const ALIFConfig& cfg);

Decomposition alif_decompose(const Signal& s, const ALIFConfig& cfg = {});

}  // namespace fpif

#endif
