#include "fpif/alif.hpp"

#include "interp.hpp"
#include "sifting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fpif {

namespace {

// mask lengths are realized on a 0.1-sample grid
constexpr double key_scale = 10.0;

long mask_key(double l) { return std::lround(l * key_scale); }

double mean(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double interior_sup(std::span<const double> v)
{
    const std::size_t n = v.size();
    const auto cut = static_cast<std::size_t>(std::floor(0.5 * (1.0 - eps_delta_interior) * static_cast<double>(n)));
    const std::size_t lo = std::min(cut, n > 0 ? n - 1 : 0);
    const std::size_t hi = std::max(lo + 1, n - cut);
    return max_abs(v.subspan(lo, hi - lo));
}

std::vector<double> abs_values(std::span<const double> f)
{
    std::vector<double> a(f.size());
    std::transform(f.begin(), f.end(), a.begin(), [](double v) { return std::abs(v); });
    return a;
}

MaskField clamp_above(MaskField field, double limit)
{
    for (double& v : field.values) v = std::min(v, limit);
    return field;
}

}  // namespace

MaskField raw_mask_field(const Signal& s, double multiplier, double min_clamp)
{
    if (!(multiplier > 0.0) || !(min_clamp > 0.0)) {
        throw InvalidArgument("mask multiplier and clamp must be positive");
    }
    const ExtremumList ext = find_extrema(s);
    if (ext.size() < 3) {
        throw TooFewExtrema("adaptive mask needs at least 3 extrema, found " + std::to_string(ext.size()));
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t j = 0; j + 1 < ext.size(); ++j) {
        const auto a = static_cast<double>(ext[j].index);
        const auto b = static_cast<double>(ext[j + 1].index);
        xs.push_back(0.5 * (a + b));
        ys.push_back(multiplier * (b - a));
    }
    MaskField field{detail::spline_on_grid(xs, ys, 0, s.size()), min_clamp};
    for (double& v : field.values) v = std::max(v, min_clamp);
    return field;
}

MaskField smooth_mask_field(const MaskField& raw, const ALIFConfig& cfg)
{
    const auto [lo, hi] = std::minmax_element(raw.values.begin(), raw.values.end());
    if (*hi - *lo <= 1e-12 * std::max(1.0, std::abs(*hi))) {
        return raw;
    }
    const Signal as_signal(raw.values);
    std::vector<double> trend = as_signal.values();
    if (!is_trend(as_signal)) {
        trend = if_decompose(as_signal, cfg.smoothing).remainder.values();
    }
    const double floor = std::max(raw.min_clamp, 0.1 * mean(raw.values));
    for (double& v : trend) v = std::max(v, floor);
    return {std::move(trend), raw.min_clamp};
}

AdaptiveAverager::AdaptiveAverager(const FilterSource& source, const MaskField& field, BoundaryMode mode)
    : mode_(mode)
{
    const std::size_t n = field.values.size();
    if (n < 2) {
        throw SignalTooShort("mask field needs at least 2 samples");
    }
    for (double l : field.values) {
        if (!std::isfinite(l) || l <= 0.0) {
            throw InvalidArgument("mask field values must be positive and finite");
        }
        const long key = mask_key(l);
        if (!filters_.contains(key)) {
            filters_.emplace(key, source.make(static_cast<double>(key) / key_scale));
        }
    }
    per_sample_.reserve(n);
    for (double l : field.values) {
        const DiscreteFilter& w = filters_.at(mask_key(l));
        if (w.radius() > n) {
            throw FilterTooLong("adaptive filter half-width " + std::to_string(w.radius()) +
                                " exceeds signal length " + std::to_string(n));
        }
        pad_ = std::max(pad_, w.radius());
        per_sample_.push_back(&w);
    }
}

std::vector<double> AdaptiveAverager::operator()(std::span<const double> f) const
{
    if (f.size() != per_sample_.size()) {
        throw InvalidArgument("adaptive average: signal and mask lengths differ");
    }
    const std::vector<double> ext = extend(f, pad_, mode_);
    if (filters_.size() == 1) {
        // one length everywhere: the uniform moving average, computed the same way
        return apply_filter(ext, pad_, f.size(), filters_.begin()->second);
    }
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        out[i] = weighted_sum(ext, pad_, i, *per_sample_[i]);
    }
    return out;
}

Signal adaptive_moving_average(const Signal& s, const FilterSource& source, const MaskField& field, BoundaryMode mode)
{
    if (field.values.size() != s.size()) {
        throw InvalidArgument("adaptive average: signal and mask lengths differ");
    }
    return s.with_samples(AdaptiveAverager(source, field, mode)(s.samples()));
}

std::pair<double, double> eps_delta(std::span<const double> prev_ma, std::span<const double> curr_ma,
                                    std::span<const double> prev_abs_ma, std::span<const double> curr_abs_ma)
{
    const double p = interior_sup(prev_ma);
    const double pa = interior_sup(prev_abs_ma);
    if (p == 0.0 || pa == 0.0) {
        throw ZeroReference("eps/delta: previous moving average vanishes on the interior");
    }
    return {interior_sup(curr_ma) / p, interior_sup(curr_abs_ma) / pa};
}

std::tuple<Signal, InnerDiagnostics, ConvergenceDiagnostics> alif_inner_loop(const Signal& s, const MaskField& field,
                                                                            const ALIFConfig& cfg)
{
    if (field.values.size() != s.size()) {
        throw InvalidArgument("alif: signal and mask lengths differ");
    }
    const AdaptiveAverager average(cfg.filter, field, cfg.boundary);
    ConvergenceDiagnostics conv;
    std::vector<double> prev_ma;
    std::vector<double> prev_abs_ma;
    bool stalled = false;  // reference average vanished; later ratios undefined

    auto record = [&](const std::vector<double>& ma, std::vector<double> abs_ma) {
        if (!prev_ma.empty() && !stalled) {
            try {
                const auto [e, d] = eps_delta(prev_ma, ma, prev_abs_ma, abs_ma);
                conv.eps.push_back(e);
                conv.delta.push_back(d);
                conv.eps_product.push_back(conv.eps_product.empty() ? e : conv.eps_product.back() * e);
                conv.delta_product.push_back(conv.delta_product.empty() ? d : conv.delta_product.back() * d);
            } catch (const ZeroReference&) {
                stalled = true;
            }
        }
        prev_ma = ma;
        prev_abs_ma = std::move(abs_ma);
    };
    auto observe = [&](const std::vector<double>& f, const std::vector<double>& avg) {
        record(avg, average(abs_values(f)));
    };

    const double mean_mask = mean(field.values);
    auto [imf, diag] = detail::sift(s, average, observe, {cfg.sd_threshold, cfg.max_inner}, mean_mask);
    if (diag.iterations > 0) {
        // close the chain with the average of the final iterate
        record(average(imf.samples()), average(abs_values(imf.samples())));
    }
    return {std::move(imf), std::move(diag), std::move(conv)};
}

Decomposition alif_decompose(const Signal& s, const ALIFConfig& cfg)
{
    Decomposition d{{}, s, {}, {}, {}, false, false, "alif"};
    const double input_energy = std::pow(l2_norm(s.samples()), 2);
    const double limit = static_cast<double>(2 * (s.size() / 2));
    std::size_t quiet_imfs = 0;
    while (d.imfs.size() < cfg.max_imfs && !is_trend(d.remainder)) {
        MaskField field;
        if (find_extrema(d.remainder).size() >= 3) {
            field = smooth_mask_field(raw_mask_field(d.remainder, cfg.mask_multiplier, cfg.min_clamp), cfg);
        } else {
            const auto l = static_cast<double>(uniform_mask_length(d.remainder, cfg.smoothing.chi));
            field = {std::vector<double>(s.size(), l), cfg.min_clamp};
        }
        std::vector<double> sorted = field.values;
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
        if (sorted[sorted.size() / 2] > static_cast<double>(s.size())) {
            // most of the record cannot hold the filter; keep the remainder whole as in IF
            d.mask_exceeded = true;
            break;
        }
        field = clamp_above(std::move(field), limit);
        auto [imf, diag, conv] = alif_inner_loop(d.remainder, field, cfg);
        std::vector<double> rest = d.remainder.values();
        for (std::size_t i = 0; i < rest.size(); ++i) {
            rest[i] -= imf[i];
        }
        d.remainder = s.with_samples(std::move(rest));
        const double energy = std::pow(l2_norm(imf.samples()), 2);
        d.imfs.push_back(std::move(imf));
        d.diagnostics.push_back(std::move(diag));
        d.convergence.push_back(std::move(conv));
        d.masks.push_back(std::move(field.values));
        quiet_imfs = energy < 1e-10 * input_energy ? quiet_imfs + 1 : 0;
        if (quiet_imfs >= 2) {
            break;
        }
    }
    d.max_imfs_reached = d.imfs.size() >= cfg.max_imfs && !is_trend(d.remainder);
    return d;
}

}  // namespace fpif
