#include "fpif/instfreq.hpp"

#include "interp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>

namespace fpif {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Segment boundaries [starts[k], starts[k+1]) from break indices.
std::vector<std::size_t> segment_starts(const std::vector<std::size_t>& breaks, std::size_t n)
{
    std::vector<std::size_t> starts{0};
    for (std::size_t b : breaks) {
        if (b > starts.back() && b < n) starts.push_back(b);
    }
    return starts;
}

std::vector<double> unwrap(std::vector<double> phase)
{
    for (std::size_t i = 1; i < phase.size(); ++i) {
        const double step = std::remainder(phase[i] - phase[i - 1], two_pi);
        phase[i] = phase[i - 1] + step;
    }
    return phase;
}

std::vector<bool> edge_flags(std::size_t n)
{
    std::vector<bool> flags(n, false);
    for (std::size_t i = 0; i < std::min<std::size_t>(2, n); ++i) {
        flags[i] = true;
        flags[n - 1 - i] = true;
    }
    return flags;
}

NormalizedIMF normalize_pair(const Signal& s, const Signal& ds, double eno_threshold)
{
    std::vector<std::size_t> breaks = eno_breakpoints(s, eno_threshold);
    Envelope q = envelope(s, breaks);
    Envelope r = envelope(ds, breaks);
    std::vector<double> f1(s.size());
    std::vector<double> f2(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        f1[i] = std::clamp(s[i] / q.values[i], -1.0, 1.0);
        f2[i] = std::clamp(ds[i] / r.values[i], -1.0, 1.0);
    }
    return {s.with_samples(std::move(f1)), s.with_samples(std::move(f2)), std::move(q), std::move(r),
            std::move(breaks)};
}

// Removes the ALIF component at a fraction of the signal's own scale.
Signal remove_small_scales(const Signal& s, const InstFreqConfig& cfg)
{
    if (find_extrema(s).size() < 3) {
        return s;
    }
    const MaskField field =
        smooth_mask_field(raw_mask_field(s, cfg.prepass_mask_fraction, cfg.prepass.min_clamp), cfg.prepass);
    const auto [fine, diag, conv] = alif_inner_loop(s, field, cfg.prepass);
    std::vector<double> out = s.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= fine[i];
    return s.with_samples(std::move(out));
}

}  // namespace

std::string to_string(FreqMethod m)
{
    return m == FreqMethod::Local ? "local" : "hilbert";
}

std::vector<std::size_t> eno_breakpoints(const Signal& s, double ratio_threshold)
{
    if (!(ratio_threshold > 1.0)) {
        throw InvalidArgument("ENO ratio threshold must exceed 1");
    }
    const ExtremumList ext = find_extrema(s);
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (std::size_t j = 0; j + 2 < ext.size(); ++j) {
        const double g0 = std::abs(ext[j + 1].value - ext[j].value);
        const double g1 = std::abs(ext[j + 2].value - ext[j + 1].value);
        const double lo = std::min(g0, g1);
        const double hi = std::max(g0, g1);
        if (hi > ratio_threshold * lo) {
            const std::size_t a = ext[j].index;
            const std::size_t b = ext[j + 2].index;
            if (!spans.empty() && a <= spans.back().second) {
                spans.back().second = b;  // overlapping flags describe one change
            } else {
                spans.emplace_back(a, b);
            }
        }
    }
    std::vector<std::size_t> breaks;
    for (const auto& [a, b] : spans) {
        std::size_t best = a;
        double best_jump = -1.0;
        for (std::size_t i = std::max<std::size_t>(a, 1); i <= b && i + 1 < s.size(); ++i) {
            const double jump = std::abs((s[i + 1] - s[i]) - (s[i] - s[i - 1]));
            if (jump > best_jump) {
                best_jump = jump;
                best = i;
            }
        }
        if (breaks.empty() || best > breaks.back()) breaks.push_back(best);
    }
    return breaks;
}

Envelope envelope(const Signal& s, const std::vector<std::size_t>& breaks)
{
    const std::size_t n = s.size();
    Envelope env;
    env.values.assign(n, 0.0);
    env.segments = segment_starts(breaks, n);
    const ExtremumList ext = find_extrema(s);
    const double floor = 1e-12 * max_abs(s.samples());

    for (std::size_t k = 0; k < env.segments.size(); ++k) {
        const std::size_t first = env.segments[k];
        const std::size_t last = k + 1 < env.segments.size() ? env.segments[k + 1] : n;
        std::vector<double> xs;
        std::vector<double> ys;
        for (const Extremum& e : ext) {
            if (e.index >= first && e.index < last) {
                xs.push_back(static_cast<double>(e.index));
                ys.push_back(std::abs(e.value));
                env.knots.push_back(e.index);
            }
        }
        if (xs.size() < 2) {
            env.degenerate_segments.push_back(k);
            const double m = max_abs(s.samples().subspan(first, last - first));
            std::fill(env.values.begin() + static_cast<std::ptrdiff_t>(first),
                      env.values.begin() + static_cast<std::ptrdiff_t>(last), m);
            continue;
        }
        const std::vector<double> part = detail::spline_on_grid(xs, ys, first, last);
        std::copy(part.begin(), part.end(), env.values.begin() + static_cast<std::ptrdiff_t>(first));
    }
    for (std::size_t i = 0; i < n; ++i) {
        env.values[i] = std::max({env.values[i], std::abs(s[i]), floor});
    }
    if (floor == 0.0) {
        // all-zero input: any positive constant keeps the ratio defined
        for (double& v : env.values) v = std::max(v, std::numeric_limits<double>::min());
    }
    return env;
}

NormalizedIMF normalize_imf(const Signal& s, double eno_threshold)
{
    return normalize_pair(s, derivative(s), eno_threshold);
}

Signal instantaneous_phase(const Signal& f1, const Signal& f2, std::vector<std::size_t>* holes)
{
    if (f1.size() != f2.size()) {
        throw InvalidArgument("phase: f1 and f2 lengths differ");
    }
    const std::size_t n = f1.size();
    std::vector<std::size_t> valid;
    std::vector<std::size_t> missing;
    std::vector<double> raw;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(f1[i]) < phase_hole_tol && std::abs(f2[i]) < phase_hole_tol) {
            missing.push_back(i);
        } else {
            valid.push_back(i);
            raw.push_back(-std::atan2(f2[i], f1[i]));
        }
    }
    std::vector<double> theta(n, 0.0);
    if (!valid.empty()) {
        const std::vector<double> un = unwrap(std::move(raw));
        for (std::size_t k = 0; k < valid.size(); ++k) theta[valid[k]] = un[k];
        std::size_t next = 0;  // first valid index not before i
        for (std::size_t i : missing) {
            while (next < valid.size() && valid[next] < i) ++next;
            if (next == 0) {
                theta[i] = theta[valid.front()];
            } else if (next == valid.size()) {
                theta[i] = theta[valid.back()];
            } else {
                const auto a = static_cast<double>(valid[next - 1]);
                const auto b = static_cast<double>(valid[next]);
                const double t = (static_cast<double>(i) - a) / (b - a);
                theta[i] = (1.0 - t) * theta[valid[next - 1]] + t * theta[valid[next]];
            }
        }
    }
    if (holes) *holes = std::move(missing);
    return f1.with_samples(std::move(theta));
}

Signal instantaneous_frequency(const Signal& theta)
{
    return derivative(theta);
}

FreqResult local_instantaneous_frequency(const Signal& s, const InstFreqConfig& cfg)
{
    Signal base = s;
    Signal ds = derivative(s);
    if (cfg.alif_prepass) {
        base = remove_small_scales(s, cfg);
        ds = remove_small_scales(derivative(base), cfg);
    }
    NormalizedIMF norm = normalize_pair(base, ds, cfg.eno_threshold);
    FreqResult out;
    const Signal theta = instantaneous_phase(norm.f1, norm.f2, &out.phase_holes);
    out.omega = instantaneous_frequency(theta).values();
    out.theta = theta.values();
    out.f1 = norm.f1.values();
    out.f2 = norm.f2.values();
    out.eno_breaks = std::move(norm.breaks);
    out.method = FreqMethod::Local;
    out.low_confidence = edge_flags(s.size());
    for (std::size_t i : out.phase_holes) out.low_confidence[i] = true;
    return out;
}

FreqResult hilbert_instantaneous_frequency(const Signal& s)
{
    const std::size_t n = s.size();
    using Buffer = std::unique_ptr<fftw_complex[], decltype(&fftw_free)>;
    Buffer buf(fftw_alloc_complex(n), &fftw_free);
    for (std::size_t i = 0; i < n; ++i) {
        buf[i][0] = s[i];
        buf[i][1] = 0.0;
    }
    const int len = static_cast<int>(n);
    fftw_plan fwd = fftw_plan_dft_1d(len, buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_plan inv = fftw_plan_dft_1d(len, buf.get(), buf.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(fwd);
    // DC (and Nyquist for even n) kept once, positive frequencies doubled, negative zeroed
    for (std::size_t k = 1; k < n; ++k) {
        double gain = 0.0;
        if (2 * k < n) {
            gain = 2.0;
        } else if (2 * k == n) {
            gain = 1.0;
        }
        buf[k][0] *= gain;
        buf[k][1] *= gain;
    }
    fftw_execute(inv);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);

    FreqResult out;
    out.method = FreqMethod::Hilbert;
    std::vector<double> phase(n);
    out.f1.resize(n);
    out.f2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double> z(buf[i][0] / static_cast<double>(n), buf[i][1] / static_cast<double>(n));
        phase[i] = std::arg(z);
        const double m = std::abs(z);
        out.f1[i] = m > 0.0 ? z.real() / m : 1.0;
        out.f2[i] = m > 0.0 ? z.imag() / m : 0.0;
    }
    const Signal theta = s.with_samples(unwrap(std::move(phase)));
    out.omega = instantaneous_frequency(theta).values();
    out.theta = theta.values();
    out.low_confidence = edge_flags(n);
    return out;
}

}  // namespace fpif
