#include "fpif/io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fpif {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char delim)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(trim(field));
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

bool parse_number(const std::string& text, double& out)
{
    if (text.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtod(text.c_str(), &end);
    return end == text.c_str() + text.size() && errno == 0 && std::isfinite(out);
}

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

FilterSource filter_from(const Config& c, const std::string& scope)
{
    bool custom = false;
    for (const char* k : {"filter.alpha", "filter.beta", "filter.shape", "filter.self_convolve"}) {
        custom = custom || c.has(c.resolve(scope, k));
    }
    if (!custom) {
        return default_filter_source();
    }
    const double alpha = c.scoped_double(scope, "filter.alpha", 0.005);
    const double beta = c.scoped_double(scope, "filter.beta", 0.09);
    const std::string shape = c.scoped_string(scope, "filter.shape", "experiment");
    Fig4Shape s;
    if (shape == "experiment") {
        s = Fig4Shape::experiment();
    } else if (shape != "fig4") {
        throw ConfigError("filter.shape must be fig4 or experiment, got '" + shape + "'");
    }
    FilterSource src{solve_fp_steady_state(FPCoefficients::fig4_preset(alpha, beta, s)), true};
    src.self_convolve = c.get_bool(c.resolve(scope, "filter.self_convolve"), true);
    return src;
}

}  // namespace

ParseError::ParseError(std::size_t row, const std::string& reason)
    : Error("row " + std::to_string(row) + ": " + reason), row_(row)
{
}

Signal parse_timeseries(std::istream& in, const TimeSeriesFormat& fmt)
{
    if (fmt.dx_override && !(*fmt.dx_override > 0.0)) {
        throw InvalidArgument("dx override must be positive");
    }
    std::vector<double> times;
    std::vector<double> values;
    std::string line;
    std::size_t row = 0;
    for (; std::getline(in, line); ++row) {
        if (row < fmt.header_rows || trim(line).empty()) continue;
        const std::vector<std::string> fields = split(line, fmt.delimiter);
        auto column = [&](std::size_t c, const char* what) {
            if (c >= fields.size()) {
                throw ParseError(row, std::string(what) + " column " + std::to_string(c) + " missing");
            }
            double v;
            if (!parse_number(fields[c], v)) {
                throw ParseError(row, std::string("cannot parse ") + what + " '" + fields[c] + "'");
            }
            return v;
        };
        values.push_back(column(fmt.value_column, "value"));
        if (fmt.time_column) times.push_back(column(*fmt.time_column, "time"));
    }
    if (values.empty()) {
        throw ParseError(0, "no data rows");
    }
    if (values.size() < 2) {
        throw ParseError(row, "need at least two samples");
    }
    double dx = 1.0;
    double x0 = 0.0;
    if (fmt.time_column) {
        x0 = times.front();
        dx = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
        if (!fmt.dx_override) {
            for (std::size_t i = 1; i < times.size(); ++i) {
                const double step = times[i] - times[i - 1];
                if (!(dx > 0.0) || std::abs(step - dx) > spacing_tolerance * std::abs(dx)) {
                    throw NonUniformSpacing("time column is not uniformly increasing near sample " +
                                            std::to_string(i));
                }
            }
        }
    }
    if (fmt.dx_override) dx = *fmt.dx_override;
    return Signal(std::move(values), dx, x0);
}

Signal load_timeseries_csv(const std::string& path, const TimeSeriesFormat& fmt)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    return parse_timeseries(in, fmt);
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw IoError("cannot write '" + path + "'");
    }
    return os;
}

void write_columns(std::ostream& os, const Signal& grid, const std::vector<std::string>& names,
                   const std::vector<std::vector<double>>& columns)
{
    os << "x";
    for (const auto& n : names) os << ',' << n;
    os << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
        os << fmt17(grid.x(i));
        for (const auto& c : columns) os << ',' << fmt17(c.at(i));
        os << '\n';
    }
}

void write_decomposition(std::ostream& os, const Signal& input, const Decomposition& d)
{
    std::vector<std::string> names{"input"};
    std::vector<std::vector<double>> cols{input.values()};
    for (std::size_t k = 0; k < d.imfs.size(); ++k) {
        names.push_back("imf_" + std::to_string(k + 1));
        cols.push_back(d.imfs[k].values());
    }
    names.emplace_back("remainder");
    cols.push_back(d.remainder.values());
    write_columns(os, input, names, cols);
}

void write_decomposition_csv(const Signal& input, const Decomposition& d, const std::string& path)
{
    auto os = open_output(path);
    write_decomposition(os, input, d);
    if (!os) throw IoError("write failed for '" + path + "'");
}

void write_diagnostics(std::ostream& os, const Decomposition& d)
{
    os << "imf,iterations,converged,final_sd,mask_half_length,eps_product,delta_product\n";
    for (std::size_t k = 0; k < d.diagnostics.size(); ++k) {
        const InnerDiagnostics& g = d.diagnostics[k];
        os << k + 1 << ',' << g.iterations << ',' << (g.converged ? 1 : 0) << ',' << fmt17(g.final_sd) << ','
           << fmt17(g.mask_half_length) << ',';
        if (k < d.convergence.size() && !d.convergence[k].eps_product.empty()) {
            os << fmt17(d.convergence[k].eps_product.back()) << ',' << fmt17(d.convergence[k].delta_product.back());
        } else {
            os << ',';
        }
        os << '\n';
    }
}

void write_sd_history(std::ostream& os, const Decomposition& d)
{
    os << "imf,iteration,sd,eps,delta,eps_product,delta_product\n";
    for (std::size_t k = 0; k < d.diagnostics.size(); ++k) {
        const auto& sd = d.diagnostics[k].sd_history;
        const ConvergenceDiagnostics* c = k < d.convergence.size() ? &d.convergence[k] : nullptr;
        for (std::size_t i = 0; i < sd.size(); ++i) {
            os << k + 1 << ',' << i + 1 << ',' << fmt17(sd[i]);
            if (c && i < c->eps.size()) {
                os << ',' << fmt17(c->eps[i]) << ',' << fmt17(c->delta[i]) << ',' << fmt17(c->eps_product[i]) << ','
                   << fmt17(c->delta_product[i]);
            } else {
                os << ",,,,";
            }
            os << '\n';
        }
    }
}

void write_freq(std::ostream& os, const Signal& grid, const FreqResult& fr)
{
    os << "x,theta,omega,f1,f2,method,low_confidence_flag\n";
    const std::string method = to_string(fr.method);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        os << fmt17(grid.x(i)) << ',' << fmt17(fr.theta.at(i)) << ',' << fmt17(fr.omega.at(i)) << ','
           << fmt17(fr.f1.at(i)) << ',' << fmt17(fr.f2.at(i)) << ',' << method << ','
           << (fr.low_confidence.at(i) ? 1 : 0) << '\n';
    }
}

void write_freq_csv(const Signal& grid, const FreqResult& fr, const std::string& path)
{
    auto os = open_output(path);
    write_freq(os, grid, fr);
    if (!os) throw IoError("write failed for '" + path + "'");
}

Config Config::parse(std::istream& in)
{
    Config c;
    std::string line;
    for (std::size_t row = 1; std::getline(in, line); ++row) {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(row) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(row) + ": empty key");
        }
        c.values_[key] = trim(line.substr(eq + 1));
    }
    return c;
}

Config Config::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config '" + path + "'");
    }
    return parse(in);
}

const std::string* Config::find(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const
{
    const std::string* v = find(key);
    return v ? *v : fallback;
}

double Config::get_double(const std::string& key, double fallback) const
{
    const std::string* v = find(key);
    if (!v) return fallback;
    double out;
    if (!parse_number(*v, out)) {
        throw ConfigError("config key '" + key + "': not a number: '" + *v + "'");
    }
    return out;
}

std::size_t Config::get_size(const std::string& key, std::size_t fallback) const
{
    const std::string* v = find(key);
    if (!v) return fallback;
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || ptr != v->data() + v->size()) {
        throw ConfigError("config key '" + key + "': not a non-negative integer: '" + *v + "'");
    }
    return out;
}

bool Config::get_bool(const std::string& key, bool fallback) const
{
    const std::string* v = find(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError("config key '" + key + "': not a boolean: '" + *v + "'");
}

std::string Config::resolve(const std::string& scope, const std::string& key) const
{
    std::string prefix = scope;
    while (!prefix.empty()) {
        const std::string full = prefix + "." + key;
        if (has(full)) return full;
        const auto dot = prefix.rfind('.');
        prefix = dot == std::string::npos ? std::string{} : prefix.substr(0, dot);
    }
    return key;
}

double Config::scoped_double(const std::string& scope, const std::string& key, double fallback) const
{
    return get_double(resolve(scope, key), fallback);
}

std::string Config::scoped_string(const std::string& scope, const std::string& key,
                                  const std::string& fallback) const
{
    return get_string(resolve(scope, key), fallback);
}

std::size_t Config::scoped_size(const std::string& scope, const std::string& key, std::size_t fallback) const
{
    return get_size(resolve(scope, key), fallback);
}

std::set<std::string> Config::unused_keys() const
{
    std::set<std::string> out;
    for (const auto& [k, v] : values_) {
        if (!used_.contains(k)) out.insert(k);
    }
    return out;
}

IFConfig if_config_from(const Config& c, const std::string& scope)
{
    IFConfig cfg;
    cfg.chi = c.scoped_double(scope, "chi", cfg.chi);
    cfg.sd_threshold = c.scoped_double(scope, "sd_threshold", cfg.sd_threshold);
    cfg.max_inner = c.scoped_size(scope, "max_inner", cfg.max_inner);
    cfg.max_imfs = c.scoped_size(scope, "max_imfs", cfg.max_imfs);
    cfg.boundary = parse_boundary_mode(c.scoped_string(scope, "boundary", to_string(cfg.boundary)));
    cfg.filter = filter_from(c, scope);
    return cfg;
}

ALIFConfig alif_config_from(const Config& c, const std::string& scope)
{
    ALIFConfig cfg;
    cfg.mask_multiplier = c.scoped_double(scope, "mask_multiplier", cfg.mask_multiplier);
    cfg.min_clamp = c.scoped_double(scope, "min_clamp", cfg.min_clamp);
    cfg.sd_threshold = c.scoped_double(scope, "sd_threshold", cfg.sd_threshold);
    cfg.max_inner = c.scoped_size(scope, "max_inner", cfg.max_inner);
    cfg.max_imfs = c.scoped_size(scope, "max_imfs", cfg.max_imfs);
    cfg.boundary = parse_boundary_mode(c.scoped_string(scope, "boundary", to_string(cfg.boundary)));
    cfg.filter = filter_from(c, scope);
    cfg.smoothing.chi = c.scoped_double(scope, "smoothing.chi", cfg.smoothing.chi);
    cfg.smoothing.boundary = parse_boundary_mode(c.scoped_string(scope, "smoothing.boundary", to_string(cfg.smoothing.boundary)));
    cfg.smoothing.filter = cfg.filter;
    return cfg;
}

}  // namespace fpif
