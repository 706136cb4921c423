#ifndef FPIF_CORE_HPP
#define FPIF_CORE_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpif {

//! Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class FilterTooLong : public Error {
public:
    using Error::Error;
};

class SignalTooShort : public Error {
public:
    using Error::Error;
};

class TooFewExtrema : public Error {
public:
    using Error::Error;
};

class ZeroReference : public Error {
public:
    using Error::Error;
};

/**
 * Uniformly sampled real-valued series.
 *
 * Sample i sits at x0 + i*dx. At least two finite samples and a positive
 * spacing are required; the constructor enforces this.
 */
class Signal {
public:
    explicit Signal(std::vector<double> samples, double dx = 1.0, double x0 = 0.0);

    std::size_t size() const noexcept { return samples_.size(); }
    double dx() const noexcept { return dx_; }
    double x0() const noexcept { return x0_; }
    double x(std::size_t i) const noexcept { return x0_ + static_cast<double>(i) * dx_; }

    double operator[](std::size_t i) const noexcept { return samples_[i]; }
    std::span<const double> samples() const noexcept { return samples_; }
    const std::vector<double>& values() const noexcept { return samples_; }

    //! Same grid, new values.
    Signal with_samples(std::vector<double> samples) const;

    friend bool operator==(const Signal&, const Signal&) = default;

private:
    std::vector<double> samples_;
    double dx_;
    double x0_;
};

enum class ExtremumKind { Max, Min };

struct Extremum {
    std::size_t index;
    ExtremumKind kind;
    double value;
};

using ExtremumList = std::vector<Extremum>;

//! Antisymmetric is point reflection about each end sample, f(-k) = 2 f(0) - f(k).
enum class BoundaryMode { Reflect, Periodic, Constant, Antisymmetric };

BoundaryMode parse_boundary_mode(const std::string& name);
std::string to_string(BoundaryMode mode);

/**
 * Symmetric, nonnegative, unit-mass moving-average kernel.
 *
 * weights() has 2*radius()+1 entries; entry radius()+t is the weight applied
 * to offset t. half_length() is the (possibly non-integer) support half-length
 * in samples the filter was designed for and is informational only.
 */
class DiscreteFilter {
public:
    DiscreteFilter(std::vector<double> weights, double half_length);

    std::size_t radius() const noexcept { return (weights_.size() - 1) / 2; }
    std::size_t size() const noexcept { return weights_.size(); }
    double half_length() const noexcept { return half_length_; }
    std::span<const double> weights() const noexcept { return weights_; }
    double operator[](std::ptrdiff_t offset) const noexcept
    {
        return weights_[static_cast<std::size_t>(offset + static_cast<std::ptrdiff_t>(radius()))];
    }

    friend bool operator==(const DiscreteFilter&, const DiscreteFilter&) = default;

private:
    std::vector<double> weights_;
    double half_length_;
};

//! Strict interior extrema; a flat extremal plateau yields one entry at its midpoint.
ExtremumList find_extrema(std::span<const double> samples);
ExtremumList find_extrema(const Signal& s);

//! At most one interior extremum.
bool is_trend(const Signal& s);

//! Map an arbitrary (possibly out-of-range) index into [0, n) per the boundary rule.
//! Antisymmetric extension is not an index map; it is treated as Reflect here.
std::size_t extend_index(std::ptrdiff_t i, std::size_t n, BoundaryMode mode) noexcept;

/**
 * Signal padded by `pad` samples on each side per the boundary rule.
 * Element k of the result corresponds to original index k - pad.
 */
std::vector<double> extend(std::span<const double> samples, std::size_t pad, BoundaryMode mode);

//! Centered weighted sum at original index i of an extended buffer with padding `pad`.
inline double weighted_sum(std::span<const double> extended, std::size_t pad, std::size_t i,
                           const DiscreteFilter& w) noexcept
{
    const auto taps = w.weights();
    const double* base = extended.data() + (pad + i - w.radius());
    // four independent chains so the adds pipeline
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t t = 0;
    for (; t + 4 <= taps.size(); t += 4) {
        acc[0] += taps[t] * base[t];
        acc[1] += taps[t + 1] * base[t + 1];
        acc[2] += taps[t + 2] * base[t + 2];
        acc[3] += taps[t + 3] * base[t + 3];
    }
    for (; t < taps.size(); ++t) acc[0] += taps[t] * base[t];
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

//! weighted_sum at i = 0..n-1; filters of fft_filter_taps or more go through an FFT.
std::vector<double> apply_filter(std::span<const double> extended, std::size_t pad, std::size_t n,
                                 const DiscreteFilter& w);
inline constexpr std::size_t fft_filter_taps = 97;

//! output[i] = sum_t s_ext[i+t] * w[t]; throws FilterTooLong if radius > size.
Signal moving_average(const Signal& s, const DiscreteFilter& w, BoundaryMode mode);

//! Central differences inside, first-order one-sided differences at both ends.
Signal derivative(const Signal& s);

double l2_norm(std::span<const double> v) noexcept;
double max_abs(std::span<const double> v) noexcept;

}  // namespace fpif

#endif
