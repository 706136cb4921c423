#include "fpif/core.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

namespace fpif {

Signal::Signal(std::vector<double> samples, double dx, double x0)
    : samples_(std::move(samples)), dx_(dx), x0_(x0)
{
    if (samples_.size() < 2) {
        throw SignalTooShort("signal needs at least 2 samples");
    }
    if (!(dx_ > 0.0) || !std::isfinite(dx_)) {
        throw InvalidArgument("sample spacing must be positive and finite");
    }
    if (!std::isfinite(x0_)) {
        throw InvalidArgument("signal origin must be finite");
    }
    if (!std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); })) {
        throw InvalidArgument("signal samples must be finite");
    }
}

Signal Signal::with_samples(std::vector<double> samples) const
{
    if (samples.size() != samples_.size()) {
        throw InvalidArgument("with_samples: length mismatch");
    }
    return Signal(std::move(samples), dx_, x0_);
}

BoundaryMode parse_boundary_mode(const std::string& name)
{
    if (name == "reflect") return BoundaryMode::Reflect;
    if (name == "periodic") return BoundaryMode::Periodic;
    if (name == "constant") return BoundaryMode::Constant;
    if (name == "antisymmetric") return BoundaryMode::Antisymmetric;
    throw InvalidArgument("unknown boundary mode '" + name + "'");
}

std::string to_string(BoundaryMode mode)
{
    switch (mode) {
    case BoundaryMode::Reflect: return "reflect";
    case BoundaryMode::Periodic: return "periodic";
    case BoundaryMode::Constant: return "constant";
    case BoundaryMode::Antisymmetric: return "antisymmetric";
    }
    return "?";
}

DiscreteFilter::DiscreteFilter(std::vector<double> weights, double half_length)
    : weights_(std::move(weights)), half_length_(half_length)
{
    if (weights_.empty() || weights_.size() % 2 == 0) {
        throw InvalidArgument("filter needs an odd number of weights");
    }
    for (double v : weights_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidArgument("filter weights must be finite and nonnegative");
        }
    }
    const double mass = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (std::abs(mass - 1.0) > 1e-10) {
        throw InvalidArgument("filter weights must sum to 1");
    }
    const std::size_t n = weights_.size();
    for (std::size_t j = 0; j < n / 2; ++j) {
        if (std::abs(weights_[j] - weights_[n - 1 - j]) > 1e-12) {
            throw InvalidArgument("filter weights must be symmetric");
        }
    }
}

ExtremumList find_extrema(std::span<const double> s)
{
    ExtremumList out;
    const std::size_t n = s.size();
    if (n < 3) {
        return out;
    }
    // Walk runs of equal values; a run is an extremum when both neighbours
    // lie on the same side of it. Runs touching either end are never counted.
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && s[j + 1] == s[i]) {
            ++j;
        }
        if (i == 0 || j == n - 1) {
            i = j + 1;
            continue;
        }
        const double left = s[i - 1];
        const double right = s[j + 1];
        const double v = s[i];
        const std::size_t mid = i + (j - i) / 2;
        if (v > left && v > right) {
            out.push_back({mid, ExtremumKind::Max, v});
        } else if (v < left && v < right) {
            out.push_back({mid, ExtremumKind::Min, v});
        }
        i = j + 1;
    }
    return out;
}

ExtremumList find_extrema(const Signal& s)
{
    return find_extrema(s.samples());
}

bool is_trend(const Signal& s)
{
    return find_extrema(s).size() <= 1;
}

std::size_t extend_index(std::ptrdiff_t i, std::size_t n, BoundaryMode mode) noexcept
{
    const auto sn = static_cast<std::ptrdiff_t>(n);
    switch (mode) {
    case BoundaryMode::Periodic: {
        std::ptrdiff_t m = i % sn;
        return static_cast<std::size_t>(m < 0 ? m + sn : m);
    }
    case BoundaryMode::Constant:
        return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, sn - 1));
    case BoundaryMode::Reflect:
    case BoundaryMode::Antisymmetric: {
        // whole-sample symmetric extension, period 2n-2
        const std::ptrdiff_t period = 2 * sn - 2;
        std::ptrdiff_t m = i % period;
        if (m < 0) m += period;
        return static_cast<std::size_t>(m < sn ? m : period - m);
    }
    }
    return 0;
}

std::vector<double> extend(std::span<const double> samples, std::size_t pad, BoundaryMode mode)
{
    const std::size_t n = samples.size();
    std::vector<double> out(n + 2 * pad);
    if (mode == BoundaryMode::Antisymmetric) {
        // value at i < 0 is 2 f(0) - value(-i); beyond the right end likewise about f(n-1)
        const auto last = static_cast<std::ptrdiff_t>(n) - 1;
        for (std::size_t k = 0; k < out.size(); ++k) {
            std::ptrdiff_t i = static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(pad);
            double offset = 0.0;
            double sign = 1.0;
            while (i < 0 || i > last) {
                if (i < 0) {
                    offset += sign * 2.0 * samples[0];
                    i = -i;
                } else {
                    offset += sign * 2.0 * samples[static_cast<std::size_t>(last)];
                    i = 2 * last - i;
                }
                sign = -sign;
            }
            out[k] = offset + sign * samples[static_cast<std::size_t>(i)];
        }
        return out;
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto i = static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(pad);
        out[k] = samples[extend_index(i, n, mode)];
    }
    return out;
}

Signal moving_average(const Signal& s, const DiscreteFilter& w, BoundaryMode mode)
{
    const std::size_t n = s.size();
    if (w.radius() > n) {
        throw FilterTooLong("filter half-width " + std::to_string(w.radius()) +
                            " exceeds signal length " + std::to_string(n));
    }
    const std::size_t pad = w.radius();
    return s.with_samples(apply_filter(extend(s.samples(), pad, mode), pad, n, w));
}

std::vector<double> apply_filter(std::span<const double> extended, std::size_t pad, std::size_t n,
                                 const DiscreteFilter& w)
{
    const std::size_t r = w.radius();
    if (pad < r || extended.size() < n + 2 * pad) {
        throw InvalidArgument("apply_filter: padding narrower than the filter");
    }
    std::vector<double> out(n);
    if (w.size() < fft_filter_taps) {
        for (std::size_t i = 0; i < n; ++i) out[i] = weighted_sum(extended, pad, i, w);
        return out;
    }
    // out[i] = (a * reversed taps)[i + 2r] with a the stretch the stencils touch;
    // a transform of at least |a| samples keeps those outputs free of wrap-around
    const double* a = extended.data() + (pad - r);
    const std::size_t m = n + 2 * r;
    std::size_t len = 1;
    while (len < m) len *= 2;
    const std::size_t bins = len / 2 + 1;
    using Real = std::unique_ptr<double[], decltype(&fftw_free)>;
    using Complex = std::unique_ptr<fftw_complex[], decltype(&fftw_free)>;
    Real buf(fftw_alloc_real(len), &fftw_free);
    Complex fa(fftw_alloc_complex(bins), &fftw_free);
    Complex fb(fftw_alloc_complex(bins), &fftw_free);
    const int ilen = static_cast<int>(len);
    fftw_plan fwd_a = fftw_plan_dft_r2c_1d(ilen, buf.get(), fa.get(), FFTW_ESTIMATE);
    fftw_plan fwd_b = fftw_plan_dft_r2c_1d(ilen, buf.get(), fb.get(), FFTW_ESTIMATE);
    fftw_plan inv = fftw_plan_dft_c2r_1d(ilen, fa.get(), buf.get(), FFTW_ESTIMATE);

    std::fill(buf.get(), buf.get() + len, 0.0);
    std::copy(a, a + m, buf.get());
    fftw_execute(fwd_a);
    std::fill(buf.get(), buf.get() + len, 0.0);
    const auto taps = w.weights();
    for (std::size_t k = 0; k < taps.size(); ++k) buf[k] = taps[taps.size() - 1 - k];
    fftw_execute(fwd_b);
    for (std::size_t k = 0; k < bins; ++k) {
        const double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
        const double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
        fa[k][0] = re;
        fa[k][1] = im;
    }
    fftw_execute(inv);
    const double scale = 1.0 / static_cast<double>(len);
    for (std::size_t i = 0; i < n; ++i) out[i] = buf[i + 2 * r] * scale;

    fftw_destroy_plan(fwd_a);
    fftw_destroy_plan(fwd_b);
    fftw_destroy_plan(inv);
    return out;
}

Signal derivative(const Signal& s)
{
    const std::size_t n = s.size();
    if (n < 3) {
        throw SignalTooShort("derivative needs at least 3 samples");
    }
    const double h = s.dx();
    std::vector<double> d(n);
    d[0] = (s[1] - s[0]) / h;
    d[n - 1] = (s[n - 1] - s[n - 2]) / h;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d[i] = (s[i + 1] - s[i - 1]) / (2.0 * h);
    }
    return s.with_samples(std::move(d));
}

double l2_norm(std::span<const double> v) noexcept
{
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

double max_abs(std::span<const double> v) noexcept
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace fpif
