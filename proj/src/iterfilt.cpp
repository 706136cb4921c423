#include "fpif/iterfilt.hpp"

#include "sifting.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>

namespace fpif {

std::vector<double> Decomposition::reconstruction() const
{
    std::vector<double> sum = remainder.values();
    for (const Signal& imf : imfs) {
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += imf[i];
        }
    }
    return sum;
}

std::size_t uniform_mask_length(const Signal& s, double chi)
{
    if (!(chi > 0.0)) {
        throw InvalidArgument("chi must be positive");
    }
    const std::size_t k = find_extrema(s).size();
    if (k < 2) {
        throw TooFewExtrema("uniform mask length needs at least 2 extrema, found " + std::to_string(k));
    }
    const double ratio = chi * static_cast<double>(s.size()) / static_cast<double>(k);
    return std::max<std::size_t>(2, 2 * static_cast<std::size_t>(std::floor(ratio)));
}

double sd_metric(std::span<const double> prev, std::span<const double> curr)
{
    if (prev.size() != curr.size()) {
        throw InvalidArgument("sd_metric: length mismatch");
    }
    const double ref = l2_norm(prev);
    if (ref == 0.0) {
        throw ZeroReference("sd_metric: reference signal is identically zero");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < prev.size(); ++i) {
        const double d = curr[i] - prev[i];
        acc += d * d;
    }
    return std::sqrt(acc) / ref;
}

std::pair<Signal, InnerDiagnostics> if_inner_loop(const Signal& s, const DiscreteFilter& w, const IFConfig& cfg)
{
    auto average = [&](const std::vector<double>& f) {
        return moving_average(s.with_samples(f), w, cfg.boundary).values();
    };
    auto ignore = [](const std::vector<double>&, const std::vector<double>&) {};
    return detail::sift(s, average, ignore, {cfg.sd_threshold, cfg.max_inner}, w.half_length());
}

namespace {

struct FftwPlanDeleter {
    void operator()(fftw_plan_s* p) const noexcept { fftw_destroy_plan(p); }
};
using FftwPlan = std::unique_ptr<fftw_plan_s, FftwPlanDeleter>;

}  // namespace

Signal spectral_limit_oracle(const Signal& s, const DiscreteFilter& w, std::optional<std::size_t> iterations,
                             double zero_tol)
{
    const std::size_t n = s.size();
    if (w.radius() > n) {
        throw FilterTooLong("oracle: filter half-width exceeds signal length");
    }
    if (iterations && *iterations == 0) {
        return s;
    }
    std::vector<double> in = s.values();
    std::vector<std::complex<double>> spec(n / 2 + 1);
    const auto ni = static_cast<int>(n);
    auto* spec_ptr = reinterpret_cast<fftw_complex*>(spec.data());
    FftwPlan forward(fftw_plan_dft_r2c_1d(ni, in.data(), spec_ptr, FFTW_ESTIMATE));
    fftw_execute(forward.get());

    const std::vector<double> symbol = filter_symbol(w, n);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        double factor;
        if (iterations) {
            factor = std::pow(1.0 - symbol[k], static_cast<double>(*iterations));
        } else {
            factor = std::abs(symbol[k]) < zero_tol ? 1.0 : 0.0;
        }
        spec[k] *= factor;
    }
    std::vector<double> out(n);
    FftwPlan backward(fftw_plan_dft_c2r_1d(ni, spec_ptr, out.data(), FFTW_ESTIMATE));
    fftw_execute(backward.get());
    for (double& v : out) v /= static_cast<double>(n);
    return s.with_samples(std::move(out));
}

Decomposition if_decompose(const Signal& s, const IFConfig& cfg)
{
    Decomposition d{{}, s, {}, {}, {}, false, false, "if"};
    const double input_energy = std::pow(l2_norm(s.samples()), 2);
    std::size_t quiet_imfs = 0;
    while (d.imfs.size() < cfg.max_imfs && !is_trend(d.remainder)) {
        const std::size_t mask = uniform_mask_length(d.remainder, cfg.chi);
        if (mask > s.size()) {
            // the record is too short to average this remainder; sifting it
            // would only erode it, so it is kept whole
            d.mask_exceeded = true;
            break;
        }
        const DiscreteFilter w = cfg.filter.make(static_cast<double>(mask));
        auto [imf, diag] = if_inner_loop(d.remainder, w, cfg);
        std::vector<double> rest = d.remainder.values();
        for (std::size_t i = 0; i < rest.size(); ++i) {
            rest[i] -= imf[i];
        }
        d.remainder = s.with_samples(std::move(rest));
        const double energy = std::pow(l2_norm(imf.samples()), 2);
        d.imfs.push_back(std::move(imf));
        d.diagnostics.push_back(std::move(diag));
        quiet_imfs = energy < 1e-10 * input_energy ? quiet_imfs + 1 : 0;
        if (quiet_imfs >= 2) {
            break;
        }
    }
    d.max_imfs_reached = d.imfs.size() >= cfg.max_imfs && !is_trend(d.remainder);
    return d;
}

double reconstruction_error(const Signal& input, const Decomposition& d)
{
    const std::vector<double> sum = d.reconstruction();
    double acc = 0.0;
    for (std::size_t i = 0; i < sum.size(); ++i) {
        const double e = input[i] - sum[i];
        acc += e * e;
    }
    const double ref = l2_norm(input.samples());
    return ref == 0.0 ? std::sqrt(acc) : std::sqrt(acc) / ref;
}

}  // namespace fpif
