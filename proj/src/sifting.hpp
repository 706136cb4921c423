#ifndef FPIF_SRC_SIFTING_HPP
#define FPIF_SRC_SIFTING_HPP

// Inner sifting loop shared by IF and ALIF so a constant mask field reproduces
// IF exactly.

#include "fpif/core.hpp"
#include "fpif/iterfilt.hpp"

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace fpif::detail {

struct LoopLimits {
    double sd_threshold;
    std::size_t max_inner;
};

// iterate's norm below this fraction of the input norm means "annihilated"
inline constexpr double annihilation_ratio = 1e-14;

// `average(f)` returns the moving average of f as a vector; `observe(f, avg)`
// sees every iterate together with its average before the update.
template <class Average, class Observe>
std::pair<Signal, InnerDiagnostics> sift(const Signal& s, Average&& average, Observe&& observe, LoopLimits limits,
                                        double mask_half_length)
{
    InnerDiagnostics diag;
    diag.mask_half_length = mask_half_length;
    const double input_norm = l2_norm(s.samples());
    if (input_norm == 0.0) {
        diag.converged = true;
        return {s, std::move(diag)};
    }
    std::vector<double> f = s.values();
    for (std::size_t it = 1; it <= limits.max_inner; ++it) {
        const std::vector<double> avg = average(f);
        observe(f, avg);
        const double f_norm = l2_norm(f);
        for (std::size_t i = 0; i < f.size(); ++i) {
            f[i] -= avg[i];
        }
        diag.iterations = it;
        const double sd = l2_norm(avg) / f_norm;
        diag.sd_history.push_back(sd);
        diag.final_sd = sd;
        if (l2_norm(f) < annihilation_ratio * input_norm || sd < limits.sd_threshold) {
            diag.converged = true;
            break;
        }
    }
    return {s.with_samples(std::move(f)), std::move(diag)};
}

}  // namespace fpif::detail

#endif
