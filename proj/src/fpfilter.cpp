#include "fpif/fpfilter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

namespace fpif {

namespace {

// Thomas algorithm; lower[0] and upper[n-1] are ignored.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<const double> rhs, std::span<double> x,
                       std::vector<double>& scratch)
{
    const std::size_t n = diag.size();
    scratch.resize(n);
    scratch[0] = upper[0] / diag[0];
    x[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double factor = 1.0 / (diag[i] - lower[i] * scratch[i - 1]);
        scratch[i] = upper[i] * factor;
        x[i] = (rhs[i] - lower[i] * x[i - 1]) * factor;
    }
    for (std::size_t i = n - 1; i > 0; --i) {
        x[i - 1] -= scratch[i - 1] * x[i];
    }
}

struct Operator {
    std::vector<double> lower, diag, upper;
};

// Conservative finite-volume operator dm/dt = A m on cell masses. Interface
// flux J = v (u_i + u_{i+1}) / 2 - beta (g2_{i+1} u_{i+1} - g2_i u_i) / dx with
// u = m / dx and v = -alpha h; both outer faces carry zero flux.
Operator build_operator(const FPCoefficients& c, std::size_t cells)
{
    const double dx = (c.b - c.a) / static_cast<double>(cells);
    std::vector<double> g2(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        g2[i] = c.diffusion_sq(c.a + (static_cast<double>(i) + 0.5) * dx);
    }
    Operator op{std::vector<double>(cells, 0.0), std::vector<double>(cells, 0.0),
                std::vector<double>(cells, 0.0)};
    for (std::size_t f = 0; f + 1 < cells; ++f) {
        const double v = -c.alpha * c.drift(c.a + static_cast<double>(f + 1) * dx);
        // J_f = cl * m_f + cr * m_{f+1}
        const double cl = v / (2.0 * dx) + c.beta * g2[f] / (dx * dx);
        const double cr = v / (2.0 * dx) - c.beta * g2[f + 1] / (dx * dx);
        // cell f loses J_f, cell f+1 gains J_f
        op.diag[f] -= cl;
        op.upper[f] -= cr;
        op.lower[f + 1] += cl;
        op.diag[f + 1] += cr;
    }
    return op;
}

void check_coefficients(const FPCoefficients& c, std::size_t cells)
{
    if (!c.drift || !c.diffusion_sq) {
        throw InvalidCoefficients("drift and diffusion functions are required");
    }
    if (!(c.alpha > 0.0) || !(c.beta > 0.0)) {
        throw InvalidCoefficients("alpha and beta must be positive");
    }
    if (!(c.a < 0.0 && 0.0 < c.b)) {
        throw InvalidCoefficients("support must satisfy a < 0 < b");
    }
    if (!(c.drift(c.a) < 0.0 && c.drift(c.b) > 0.0)) {
        throw InvalidCoefficients("drift must satisfy h(a) < 0 < h(b)");
    }
    const double scale = std::max(std::abs(c.diffusion_sq(0.5 * (c.a + c.b))), 1.0);
    if (std::abs(c.diffusion_sq(c.a)) > 1e-12 * scale || std::abs(c.diffusion_sq(c.b)) > 1e-12 * scale) {
        throw InvalidCoefficients("g^2 must vanish at both endpoints");
    }
    const double dx = (c.b - c.a) / static_cast<double>(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        if (!(c.diffusion_sq(c.a + (static_cast<double>(i) + 0.5) * dx) > 0.0)) {
            throw InvalidCoefficients("g^2 must be positive inside the support");
        }
    }
}

// Mass of a piecewise-constant density (cell masses over [0, 1]) on [0, y].
double cumulative_mass(std::span<const double> cdf, double y)
{
    const std::size_t cells = cdf.size() - 1;
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return cdf[cells];
    const double pos = y * static_cast<double>(cells);
    const auto k = std::min(static_cast<std::size_t>(pos), cells - 1);
    const double frac = pos - static_cast<double>(k);
    return cdf[k] + frac * (cdf[k + 1] - cdf[k]);
}

std::vector<double> profile_cdf(const FilterProfile& p)
{
    std::vector<double> cdf(p.weights.size() + 1, 0.0);
    std::partial_sum(p.weights.begin(), p.weights.end(), cdf.begin() + 1);
    return cdf;
}

// Bin the profile onto consecutive cuts in [0, 1], symmetrize and normalize.
DiscreteFilter bin_profile(const FilterProfile& p, std::span<const double> cuts, double half_length)
{
    const auto cdf = profile_cdf(p);
    std::vector<double> w(cuts.size() - 1);
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        w[j] = std::max(0.0, cumulative_mass(cdf, cuts[j + 1]) - cumulative_mass(cdf, cuts[j]));
    }
    const std::size_t n = w.size();
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double avg = 0.5 * (w[j] + w[n - 1 - j]);
        w[j] = avg;
        w[n - 1 - j] = avg;
    }
    const double mass = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= mass;
    return DiscreteFilter(std::move(w), half_length);
}

}  // namespace

FPCoefficients FPCoefficients::fig4_preset(double alpha, double beta, Fig4Shape shape)
{
    FPCoefficients c;
    c.alpha = alpha;
    c.beta = beta;
    c.drift = [](double x) { return x * x * x; };
    // step(x) - step(1) written as sinh(a - b) / (2 cosh a cosh b) so it stays positive near +-1
    const double k = shape.step_sharpness;
    const double c2 = 2.0 * shape.step_center;
    const auto step_minus_edge = [k, c2](double ax) {
        return 0.5 * std::sinh(2.0 * k * (1.0 - ax)) / (std::cosh(k * (c2 - 2.0 * ax)) * std::cosh(k * (c2 - 2.0)));
    };
    const double norm = step_minus_edge(0.0);
    c.diffusion_sq = [step_minus_edge, norm, scale = shape.diffusion_scale](double x) {
        const double ax = std::abs(x);
        if (ax >= 1.0) return 0.0;
        return scale * step_minus_edge(ax) / norm;
    };
    return c;
}

FilterProfile solve_fp_steady_state(const FPCoefficients& c, const SteadyStateOptions& opts, SteadyStateInfo* info)
{
    const std::size_t cells = 2 * opts.half_resolution + 1;
    if (opts.half_resolution < 1) {
        throw InvalidArgument("half_resolution must be at least 1");
    }
    check_coefficients(c, cells);
    const double width = c.b - c.a;
    double g2_peak = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        g2_peak = std::max(g2_peak, c.diffusion_sq(c.a + (static_cast<double>(i) + 0.5) * width / static_cast<double>(cells)));
    }
    const double dt = opts.time_step > 0.0 ? opts.time_step : 1e-4 * width * width / (c.beta * g2_peak);

    const Operator op = build_operator(c, cells);

    // (I - theta dt A) m' = (I + (1 - theta) dt A) m
    auto lhs_for = [&](double theta_dt) {
        Operator l = op;
        for (std::size_t i = 0; i < cells; ++i) {
            l.lower[i] *= -theta_dt;
            l.upper[i] *= -theta_dt;
            l.diag[i] = 1.0 - theta_dt * op.diag[i];
        }
        return l;
    };
    const Operator cn = lhs_for(0.5 * dt);
    // Rannacher start-up: a few implicit Euler half steps damp the delta's
    // highest modes, which Crank-Nicolson alone barely attenuates.
    const Operator euler = lhs_for(0.5 * dt);
    constexpr std::size_t startup_half_steps = 4;

    std::vector<double> m(cells, 0.0), next(cells), rhs(cells), scratch;
    m[cells / 2] = 1.0;

    SteadyStateInfo local;
    for (std::size_t k = 0; k < startup_half_steps; ++k) {
        solve_tridiagonal(euler.lower, euler.diag, euler.upper, m, next, scratch);
        m.swap(next);
    }
    local.steps = startup_half_steps / 2;

    for (std::size_t step = local.steps; step < opts.max_steps; ++step) {
        for (std::size_t i = 0; i < cells; ++i) {
            double acc = (1.0 + 0.5 * dt * op.diag[i]) * m[i];
            if (i > 0) acc += 0.5 * dt * op.lower[i] * m[i - 1];
            if (i + 1 < cells) acc += 0.5 * dt * op.upper[i] * m[i + 1];
            rhs[i] = acc;
        }
        solve_tridiagonal(cn.lower, cn.diag, cn.upper, rhs, next, scratch);

        const double mass = std::accumulate(next.begin(), next.end(), 0.0);
        const double drift = std::abs(mass - 1.0);
        local.max_mass_drift = std::max(local.max_mass_drift, drift);
        if (drift > 1e-8) {
            throw NoSteadyState("mass drift " + std::to_string(drift) + " exceeds 1e-8 in one step");
        }
        double change = 0.0;
        for (std::size_t i = 0; i < cells; ++i) {
            next[i] /= mass;
            change += std::abs(next[i] - m[i]);
        }
        m.swap(next);
        ++local.steps;
        local.final_rate = change / dt;
        if (local.final_rate < opts.steady_tol) {
            break;
        }
    }
    if (info) *info = local;
    if (!(local.final_rate < opts.steady_tol)) {
        throw NoSteadyState("no steady state after " + std::to_string(opts.max_steps) + " steps");
    }
    // The centered drift stencil can leave round-off sized negative masses
    // where g^2 is tiny; the true steady state is nonnegative.
    for (double& v : m) {
        if (v < 0.0) v = 0.0;
    }
    const double mass = std::accumulate(m.begin(), m.end(), 0.0);
    for (double& v : m) v /= mass;
    return FilterProfile{c.a, c.b, std::move(m)};
}

DiscreteFilter rescale_filter(const FilterProfile& p, std::size_t n, double target_half_length)
{
    if (n < 1) {
        throw InvalidArgument("rescale_filter: n must be at least 1");
    }
    const std::size_t cells = 2 * n + 1;
    std::vector<double> cuts(cells + 1);
    for (std::size_t j = 0; j <= cells; ++j) {
        cuts[j] = static_cast<double>(j) / static_cast<double>(cells);
    }
    return bin_profile(p, cuts, target_half_length);
}

DiscreteFilter realize_filter(const FilterProfile& p, double half_length)
{
    if (!(half_length > 0.0) || !std::isfinite(half_length)) {
        throw InvalidArgument("filter half-length must be positive");
    }
    const double whole = std::floor(half_length);
    const double extra = half_length - whole;
    // sub-1e-9 fractions are treated as integer lengths
    const bool integral = extra < 1e-9 || 1.0 - extra < 1e-9;
    const auto radius = static_cast<std::size_t>(integral ? std::round(half_length) : whole + 1.0);
    const double span = 2.0 * half_length + 1.0;
    const double left = -(half_length + 0.5);
    std::vector<double> cuts(2 * radius + 2);
    const auto r = static_cast<double>(radius);
    for (std::size_t j = 0; j < cuts.size(); ++j) {
        const double edge = std::clamp(static_cast<double>(j) - r - 0.5, left, -left);
        cuts[j] = (edge - left) / span;
    }
    cuts.front() = 0.0;
    cuts.back() = 1.0;
    return bin_profile(p, cuts, half_length);
}

DiscreteFilter self_convolve(const DiscreteFilter& w)
{
    const auto a = w.weights();
    std::vector<double> out(2 * a.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            out[i + j] += a[i] * a[j];
        }
    }
    const std::size_t n = out.size();
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double avg = 0.5 * (out[j] + out[n - 1 - j]);
        out[j] = avg;
        out[n - 1 - j] = avg;
    }
    const double mass = std::accumulate(out.begin(), out.end(), 0.0);
    for (double& v : out) v /= mass;
    return DiscreteFilter(std::move(out), 2.0 * w.half_length());
}

DiscreteFilter double_average_filter(std::size_t l)
{
    if (l < 1) {
        throw InvalidArgument("double_average_filter: l must be at least 1");
    }
    const double denom = static_cast<double>((l + 1) * (l + 1));
    std::vector<double> w(2 * l + 1);
    for (std::size_t k = 0; k < w.size(); ++k) {
        const auto t = static_cast<double>(k) - static_cast<double>(l);
        w[k] = (static_cast<double>(l) + 1.0 - std::abs(t)) / denom;
    }
    return DiscreteFilter(std::move(w), static_cast<double>(l));
}

FilterProfile as_profile(const DiscreteFilter& w)
{
    const double h = w.half_length();
    return FilterProfile{-h, h, std::vector<double>(w.weights().begin(), w.weights().end())};
}

DiscreteFilter FilterSource::make(double half_length) const
{
    if (!self_convolve) {
        return realize_filter(profile, half_length);
    }
    return fpif::self_convolve(realize_filter(profile, 0.5 * half_length));
}

const FilterSource& default_filter_source()
{
    static const FilterSource source{solve_fp_steady_state(FPCoefficients::fig4_preset(0.005, 0.09, Fig4Shape::experiment())), true};
    return source;
}

DiscreteFilter resolve_filter(const FPCoefficients& c, double half_length, const SteadyStateOptions& opts)
{
    if (!(half_length >= 1.0) || std::abs(half_length - std::round(half_length)) > 1e-12) {
        throw InvalidArgument("resolve_filter needs an integer half-length >= 1");
    }
    const double target = half_length + 0.5;
    const double mid = 0.5 * (c.a + c.b);
    const double scale = (c.b - c.a) / (2.0 * target);  // source length per target length
    FPCoefficients scaled;
    scaled.a = -target;
    scaled.b = target;
    scaled.alpha = c.alpha * scale;
    scaled.beta = c.beta;
    scaled.drift = [c, scale, mid](double y) { return c.drift(mid + y * scale); };
    scaled.diffusion_sq = [c, scale, mid](double y) { return c.diffusion_sq(mid + y * scale); };
    SteadyStateOptions o = opts;
    o.half_resolution = static_cast<std::size_t>(std::round(half_length));
    FilterProfile p = solve_fp_steady_state(scaled, o);
    return DiscreteFilter(std::move(p.weights), half_length);
}

std::vector<double> filter_symbol(const DiscreteFilter& w, std::size_t grid_size)
{
    const auto taps = w.weights();
    const auto r = static_cast<std::ptrdiff_t>(w.radius());
    std::vector<double> symbol(grid_size);
    for (std::size_t k = 0; k < grid_size; ++k) {
        double acc = taps[static_cast<std::size_t>(r)];
        for (std::ptrdiff_t t = 1; t <= r; ++t) {
            // exact integer phase reduction keeps large grids accurate
            const auto phase = static_cast<double>((static_cast<std::size_t>(t) * k) % grid_size);
            acc += 2.0 * taps[static_cast<std::size_t>(r + t)] *
                   std::cos(2.0 * std::numbers::pi * phase / static_cast<double>(grid_size));
        }
        symbol[k] = acc;
    }
    return symbol;
}

SpectrumReport spectrum_report(const DiscreteFilter& w, std::size_t grid_size, double zero_tol)
{
    if (grid_size < w.size()) {
        throw GridTooSmall("grid of " + std::to_string(grid_size) + " points cannot hold a filter of " +
                           std::to_string(w.size()) + " taps");
    }
    SpectrumReport r;
    r.grid_size = grid_size;
    r.symbol = filter_symbol(w, grid_size);
    r.condition_met = true;
    r.min_symbol = r.symbol.front();
    r.max_symbol = r.symbol.front();
    for (std::size_t k = 0; k < grid_size; ++k) {
        const double s = r.symbol[k];
        r.min_symbol = std::min(r.min_symbol, s);
        r.max_symbol = std::max(r.max_symbol, s);
        const double dev = std::abs(1.0 - s);
        r.max_deviation = std::max(r.max_deviation, dev);
        const bool zero = std::abs(s) < zero_tol;
        if (zero) r.zero_set.push_back(k);
        if (!(dev < 1.0 || zero)) r.condition_met = false;
    }
    return r;
}

void write_filter(std::ostream& os, const DiscreteFilter& w)
{
    os << "# half_length=" << std::setprecision(17) << w.half_length() << " n=" << w.radius() << '\n';
    const auto taps = w.weights();
    for (std::size_t i = 0; i < taps.size(); ++i) {
        os << std::setprecision(17) << taps[i] << (i + 1 == taps.size() ? '\n' : ' ');
    }
}

DiscreteFilter read_filter(std::istream& is)
{
    std::string header;
    if (!std::getline(is, header)) {
        throw InvalidArgument("filter file: missing header");
    }
    double half_length = 0.0;
    std::size_t n = 0;
    if (std::sscanf(header.c_str(), "# half_length=%lf n=%zu", &half_length, &n) != 2) {
        throw InvalidArgument("filter file: malformed header '" + header + "'");
    }
    std::vector<double> w;
    w.reserve(2 * n + 1);
    double v = 0.0;
    while (is >> v) w.push_back(v);
    if (w.size() != 2 * n + 1) {
        throw InvalidArgument("filter file: expected " + std::to_string(2 * n + 1) + " weights, got " +
                              std::to_string(w.size()));
    }
    return DiscreteFilter(std::move(w), half_length);
}

void write_filter_file(const std::string& path, const DiscreteFilter& w)
{
    std::ofstream os(path);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    write_filter(os, w);
    if (!os) throw Error("write failed for '" + path + "'");
}

DiscreteFilter read_filter_file(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw Error("cannot open '" + path + "'");
    return read_filter(is);
}

}  // namespace fpif
