#ifndef FPIF_IO_HPP
#define FPIF_IO_HPP

#include "fpif/core.hpp"
#include "fpif/instfreq.hpp"
#include "fpif/iterfilt.hpp"

#include <cstddef>
#include <fstream>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>

namespace fpif {

class ParseError : public Error {
public:
    ParseError(std::size_t row, const std::string& reason);
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class NonUniformSpacing : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

struct TimeSeriesFormat {
    char delimiter = ',';
    std::optional<std::size_t> time_column;
    std::size_t value_column = 0;
    std::size_t header_rows = 0;
    std::optional<double> dx_override;
};

//! Relative tolerance on the spacing of the time column.
inline constexpr double spacing_tolerance = 1e-6;

//! Rows are counted from 0 including skipped header rows; blank lines are ignored.
Signal parse_timeseries(std::istream& in, const TimeSeriesFormat& fmt);
Signal load_timeseries_csv(const std::string& path, const TimeSeriesFormat& fmt);

//! x,input,imf_1..imf_m,remainder at 17 significant digits.
void write_decomposition(std::ostream& os, const Signal& input, const Decomposition& d);
void write_decomposition_csv(const Signal& input, const Decomposition& d, const std::string& path);

//! One row per IMF: iterations, convergence, final SD, mask, eps/delta products.
void write_diagnostics(std::ostream& os, const Decomposition& d);
//! Long form: imf,iteration,sd,eps,delta,eps_product,delta_product (ratios empty for IF).
void write_sd_history(std::ostream& os, const Decomposition& d);

//! x,theta,omega,f1,f2,method,low_confidence_flag.
void write_freq(std::ostream& os, const Signal& grid, const FreqResult& fr);
void write_freq_csv(const Signal& grid, const FreqResult& fr, const std::string& path);

//! "x,<name>..." table of equally long columns.
void write_columns(std::ostream& os, const Signal& grid, const std::vector<std::string>& names,
                   const std::vector<std::vector<double>>& columns);

//! Opens for writing or throws IoError.
std::ofstream open_output(const std::string& path);

/**
 * key = value text config. '#' starts a comment; keys may be dotted
 * ("ex4.chi", "alif.ex3.max_imfs"). Lookups record which keys were read so callers can reject
 * unused ones.
 */
class Config {
public:
    static Config parse(std::istream& in);
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.contains(key); }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::size_t get_size(const std::string& key, std::size_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    //! First present of "a.b.key", "a.key", "key" for scope "a.b"; the last one when none is.
    std::string resolve(const std::string& scope, const std::string& key) const;
    double scoped_double(const std::string& scope, const std::string& key, double fallback) const;
    std::string scoped_string(const std::string& scope, const std::string& key, const std::string& fallback) const;
    std::size_t scoped_size(const std::string& scope, const std::string& key, std::size_t fallback) const;

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    std::set<std::string> unused_keys() const;

private:
    const std::string* find(const std::string& key) const;

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;
};

IFConfig if_config_from(const Config& c, const std::string& scope = "");
ALIFConfig alif_config_from(const Config& c, const std::string& scope = "");

}  // namespace fpif

#endif
