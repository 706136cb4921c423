#ifndef FPIF_FPFILTER_HPP
#define FPIF_FPFILTER_HPP

#include "fpif/core.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace fpif {

class NoSteadyState : public Error {
public:
    using Error::Error;
};

class InvalidCoefficients : public Error {
public:
    using Error::Error;
};

class GridTooSmall : public Error {
public:
    using Error::Error;
};

/**
 * Free parameters of the fig4 preset: g^2 = diffusion_scale * step(x) with
 * step(x) = (1 + tanh(step_sharpness * (2 step_center - 2|x|))) / 2, shifted to
 * vanish at +-1. The defaults give the unit-height step centred at |x| = 1/2.
 */
struct Fig4Shape {
    double diffusion_scale = 1.0;
    double step_sharpness = 10.0;
    double step_center = 0.5;

    //! Weak, wide diffusion: a smooth centred bump with a short stopband.
    static Fig4Shape experiment() { return {3e-3, 4.0, 0.9}; }
};

/**
 * Coefficients of the filter-design Fokker-Planck problem on [a, b].
 *
 * `drift` is the restoring field h (h(a) < 0 < h(b)); the transport velocity is
 * -alpha*h(x), so mass is pushed toward the middle of the interval.
 * `diffusion_sq` is g^2, vanishing at both endpoints and positive inside.
 */
struct FPCoefficients {
    std::function<double(double)> drift;
    std::function<double(double)> diffusion_sq;
    double alpha = 0.005;
    double beta = 0.09;
    double a = -1.0;
    double b = 1.0;

    //! h(x) = x^3 and a tanh step for g^2 on [-1, 1]; approximates the published shapes.
    static FPCoefficients fig4_preset(double alpha, double beta, Fig4Shape shape = {});
};

/**
 * Master filter shape: per-interval masses on a uniform partition of [a, b]
 * with 2s+2 nodes (2s+1 intervals).
 */
struct FilterProfile {
    double a = -1.0;
    double b = 1.0;
    std::vector<double> weights;

    std::size_t half_resolution() const noexcept { return (weights.size() - 1) / 2; }
    double interval_width() const noexcept { return (b - a) / static_cast<double>(weights.size()); }
};

struct SteadyStateOptions {
    std::size_t half_resolution = 1000;
    //! <= 0 selects 1e-4 * (b - a)^2 / (beta * max g^2), the diffusive time scale of one cell pair.
    double time_step = 0.0;
    double steady_tol = 1e-9;
    std::size_t max_steps = 5'000'000;
};

struct SteadyStateInfo {
    std::size_t steps = 0;
    double final_rate = 0.0;
    double max_mass_drift = 0.0;
};

/**
 * Crank-Nicolson time stepping of the filter PDE from a discrete delta in
 * the central interval until the L1 time derivative drops below steady_tol.
 */
FilterProfile solve_fp_steady_state(const FPCoefficients& c, const SteadyStateOptions& opts = {},
                                    SteadyStateInfo* info = nullptr);

/**
 * Riemann-sum interpolation of a profile onto 2n+1 equal target intervals
 * spanning the whole profile support. Weights sum to one.
 */
DiscreteFilter rescale_filter(const FilterProfile& p, std::size_t n, double target_half_length);

/**
 * Profile resampled onto the sample grid for a support half-length of
 * `half_length` samples (any positive real). Sample j owns the cell
 * [j - 1/2, j + 1/2) clipped to [-(L + 1/2), L + 1/2]; a non-integer length
 * gives two fractional end cells.
 */
DiscreteFilter realize_filter(const FilterProfile& p, double half_length);

//! w * w, renormalized to unit mass.
DiscreteFilter self_convolve(const DiscreteFilter& w);

//! a(t) = (l + 1 - |t|) / (l + 1)^2 on t = -l..l.
DiscreteFilter double_average_filter(std::size_t l);

//! A profile viewed as a filter over its own cells (for chaining rescales).
FilterProfile as_profile(const DiscreteFilter& w);

/**
 * Filter factory used by the decomposition loops. With self_convolve the
 * profile is realized at half the requested length and convolved with itself,
 * so the result spans the requested half-length and has a nonnegative symbol.
 */
struct FilterSource {
    FilterProfile profile;
    bool self_convolve = true;

    DiscreteFilter make(double half_length) const;
};

//! FP filter with alpha = 0.005, beta = 0.09 on the fig4 preset (experiment shape), self-convolved. Solved once.
const FilterSource& default_filter_source();

/**
 * Alternative length realization: re-solve the PDE on [-(L+1/2), L+1/2] with one
 * cell per sample, coefficients evaluated at the mapped argument. The drift
 * coefficient is scaled with the support so the steady shape matches the
 * master profile's.
 */
DiscreteFilter resolve_filter(const FPCoefficients& c, double half_length, const SteadyStateOptions& opts = {});

struct SpectrumReport {
    std::size_t grid_size = 0;
    std::vector<double> symbol;
    double max_deviation = 0.0;
    double min_symbol = 0.0;
    double max_symbol = 0.0;
    std::vector<std::size_t> zero_set;
    bool condition_met = false;
};

//! Real DFT symbol of w embedded in a periodic grid: sum_t w[t] cos(2 pi k t / grid).
std::vector<double> filter_symbol(const DiscreteFilter& w, std::size_t grid_size);

SpectrumReport spectrum_report(const DiscreteFilter& w, std::size_t grid_size, double zero_tol = 1e-12);

// Text export: "# half_length=<L> n=<n>" then 2n+1 weights at 17 significant digits.
void write_filter(std::ostream& os, const DiscreteFilter& w);
DiscreteFilter read_filter(std::istream& is);
void write_filter_file(const std::string& path, const DiscreteFilter& w);
DiscreteFilter read_filter_file(const std::string& path);

}  // namespace fpif

#endif
