#ifndef FPIF_INSTFREQ_HPP
#define FPIF_INSTFREQ_HPP

#include "fpif/alif.hpp"
#include "fpif/core.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace fpif {

class DegenerateSegment : public Error {
public:
    using Error::Error;
};

struct Envelope {
    std::vector<double> values;
    //! Extremum indices used as spline knots, all segments together.
    std::vector<std::size_t> knots;
    //! Segment starts; the first is always 0.
    std::vector<std::size_t> segments;
    //! Segments that had fewer than two extrema and fell back to max|s|.
    std::vector<std::size_t> degenerate_segments;
};

enum class FreqMethod { Local, Hilbert };

std::string to_string(FreqMethod m);

struct FreqResult {
    std::vector<double> theta;
    std::vector<double> omega;
    std::vector<double> f1;
    std::vector<double> f2;
    std::vector<std::size_t> eno_breaks;
    FreqMethod method = FreqMethod::Local;
    //! End samples (one-sided differences) and filled phase holes.
    std::vector<bool> low_confidence;
    std::vector<std::size_t> phase_holes;
};

/**
 * Sudden amplitude changes. Consecutive extrema give peak-to-peak gaps; where
 * two neighbouring gaps differ by more than ratio_threshold, the sample in
 * their span with the largest |forward - backward difference| is a break.
 */
std::vector<std::size_t> eno_breakpoints(const Signal& s, double ratio_threshold = 2.0);

/**
 * Spline through |s| at the extrema of each segment, held constant past the
 * outer knots, then raised to max(env, |s|, 1e-12 max|s|).
 */
Envelope envelope(const Signal& s, const std::vector<std::size_t>& breaks);

struct NormalizedIMF {
    Signal f1;
    Signal f2;
    Envelope q;
    Envelope r;
    std::vector<std::size_t> breaks;
};

//! f1 = s/q and f2 = s'/r; the derivative's envelope uses the breaks of s.
NormalizedIMF normalize_imf(const Signal& s, double eno_threshold = 2.0);

//! Samples where |f1| and |f2| are both below this are phase holes.
inline constexpr double phase_hole_tol = 1e-8;

/**
 * theta = -atan2(f2, f1), unwrapped. Holes are bridged linearly between the
 * nearest valid samples (held constant past the ends) and reported in `holes`.
 */
Signal instantaneous_phase(const Signal& f1, const Signal& f2, std::vector<std::size_t>* holes = nullptr);

Signal instantaneous_frequency(const Signal& theta);

struct InstFreqConfig {
    double eno_threshold = 2.0;
    //! Remove oscillations much shorter than the IMF's own before normalizing.
    bool alif_prepass = false;
    //! Prepass mask as a fraction of the local extremum spacing.
    double prepass_mask_fraction = 0.25;
    ALIFConfig prepass{};
};

FreqResult local_instantaneous_frequency(const Signal& s, const InstFreqConfig& cfg = {});

//! Angle of the FFT-built analytic signal of the periodically extended record.
FreqResult hilbert_instantaneous_frequency(const Signal& s);

}  // namespace fpif

#endif
