#pragma once

// Run configuration: flat `key = value` text with `#` comments. Decimal
// values stay strings until they are turned into intervals, so literals
// such as 0.132737 never pass through binary floating point.

#include <gmpxx.h>

#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "zdc/contour.hpp"
#include "zdc/error.hpp"
#include "zdc/rigor/interval.hpp"

namespace zdc {

struct RunConfig {
    std::string zeros_path;                   // empty: <data dir>/zeros.txt
    std::optional<std::string> declared_ulp;  // empty: last printed place
    int N = 21;
    int Nprime = 9998;
    std::string delta = "0.132737";
    std::string Y0 = "0.0468918";
    std::string Y1 = "0.14";
    long m = 12000;
    std::string alpha = "0:0, 1/32:0.489819, 1/8:1.85802, 3/16:2.04829, 3/8:2.90189, 1/2:pi";
    int lll_digits = 1000;
    std::string lll_delta = "1/4";
    std::string coeff_bound = "1e300";
    std::string d_target = "1.66e-13";  // or "auto": twice the certified lattice sum, rounded up
    long ell = 16000;
    std::string kappa_target = "1/60";  // claim 5 threshold for the increment; "0" asks for positivity
    long precision_bits = 256;
    unsigned parallelism = 1;
};

inline RunConfig paper_config() { return {}; }

inline RunConfig reduced_config() {
    RunConfig c;
    c.N = 8;
    c.Nprime = 2000;
    c.m = 1500;
    c.ell = 400;
    c.lll_digits = 200;
    c.coeff_bound = "1e100";
    c.d_target = "auto";
    c.kappa_target = "0";
    return c;
}

namespace config_detail {

inline std::string trim(std::string s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline long to_long(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    long x = 0;
    try {
        x = std::stol(v, &used);
    } catch (const std::exception&) {
        throw ArgumentError(key + ": '" + v + "' is not an integer");
    }
    if (used != v.size()) throw ArgumentError(key + ": '" + v + "' is not an integer");
    return x;
}

}  // namespace config_detail

/// Integer literal: plain digits, "1e300" or "10^300".
inline mpz_class parse_integer_literal(const std::string& text) {
    std::string s = config_detail::trim(text);
    auto pow_at = s.find('^');
    auto e_at = s.find_first_of("eE");
    mpz_class r;
    try {
        if (pow_at != std::string::npos || e_at != std::string::npos) {
            bool caret = pow_at != std::string::npos;
            std::string base = s.substr(0, caret ? pow_at : e_at);
            std::string exp = s.substr((caret ? pow_at : e_at) + 1);
            long ex = config_detail::to_long("exponent", exp);
            if (ex < 0) throw ArgumentError("negative exponent in integer '" + s + "'");
            mpz_class b(base);
            if (caret) {
                mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(ex));
            } else {
                mpz_class p;
                mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(ex));
                r = b * p;
            }
        } else {
            r = mpz_class(s);
        }
    } catch (const std::invalid_argument&) {
        throw ArgumentError("'" + s + "' is not an integer literal");
    }
    return r;
}

/// Rational literal "p/q" or a plain integer.
inline mpq_class parse_rational(const std::string& text) {
    std::string s = config_detail::trim(text);
    mpq_class q;
    try {
        q = mpq_class(s);
    } catch (const std::invalid_argument&) {
        throw ArgumentError("'" + s + "' is not a rational literal");
    }
    if (q.get_den() == 0) throw ArgumentError("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

/// Exact decimal (or "pi") as an outward-rounded interval.
inline Interval parse_value(const std::string& text, mpfr_prec_t prec) {
    std::string s = config_detail::trim(text);
    if (s == "pi") return Interval::pi(prec);
    if (s.find('/') != std::string::npos) return Interval::from_mpq(parse_rational(s), prec);
    if (!rigor::detail::valid_decimal(s)) throw ArgumentError("'" + s + "' is not a decimal literal");
    return Interval::from_decimal(s, prec);
}

/// "0:0, 1/32:0.489819, ..., 1/2:pi".
inline std::vector<contour::Breakpoint> parse_breakpoints(const std::string& text, mpfr_prec_t prec) {
    std::vector<contour::Breakpoint> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = config_detail::trim(item);
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos) throw ArgumentError("alpha breakpoint '" + item + "' lacks ':'");
        out.push_back({parse_rational(item.substr(0, colon)), parse_value(item.substr(colon + 1), prec)});
    }
    return out;
}

/// Sets one key. Unknown keys are errors.
inline void set_config_value(RunConfig& c, const std::string& key, const std::string& raw) {
    using config_detail::to_long;
    std::string v = config_detail::trim(raw);
    if (key == "zeros") {
        c.zeros_path = v;
    } else if (key == "declared_ulp") {
        if (v.empty() || v == "auto") {
            c.declared_ulp.reset();
        } else {
            c.declared_ulp = v;
        }
    } else if (key == "N") {
        c.N = static_cast<int>(to_long(key, v));
    } else if (key == "Nprime") {
        c.Nprime = static_cast<int>(to_long(key, v));
    } else if (key == "delta") {
        c.delta = v;
    } else if (key == "Y0") {
        c.Y0 = v;
    } else if (key == "Y1") {
        c.Y1 = v;
    } else if (key == "m") {
        c.m = to_long(key, v);
    } else if (key == "alpha") {
        c.alpha = v;
    } else if (key == "lll_digits") {
        c.lll_digits = static_cast<int>(to_long(key, v));
    } else if (key == "lll_delta") {
        c.lll_delta = v;
    } else if (key == "M") {
        c.coeff_bound = v;
    } else if (key == "d_target") {
        c.d_target = v;
    } else if (key == "ell") {
        c.ell = to_long(key, v);
    } else if (key == "kappa_target") {
        c.kappa_target = v;
    } else if (key == "precision") {
        c.precision_bits = to_long(key, v);
    } else if (key == "parallelism") {
        long p = to_long(key, v);
        if (p < 0) throw ArgumentError("parallelism must be >= 0");
        c.parallelism = static_cast<unsigned>(p);
    } else {
        throw ArgumentError("unknown config key '" + key + "'");
    }
}

/// Every key with its current value, in a fixed order.
inline std::vector<std::pair<std::string, std::string>> config_pairs(const RunConfig& c) {
    return {
        {"zeros", c.zeros_path},
        {"declared_ulp", c.declared_ulp.value_or("auto")},
        {"N", std::to_string(c.N)},
        {"Nprime", std::to_string(c.Nprime)},
        {"delta", c.delta},
        {"Y0", c.Y0},
        {"Y1", c.Y1},
        {"m", std::to_string(c.m)},
        {"alpha", c.alpha},
        {"lll_digits", std::to_string(c.lll_digits)},
        {"lll_delta", c.lll_delta},
        {"M", c.coeff_bound},
        {"d_target", c.d_target},
        {"ell", std::to_string(c.ell)},
        {"kappa_target", c.kappa_target},
        {"precision", std::to_string(c.precision_bits)},
        {"parallelism", std::to_string(c.parallelism)},
    };
}

/// Applies the lines of a config file on top of `base`.
inline RunConfig parse_config(std::istream& in, RunConfig base = {}) {
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = config_detail::trim(line);
        if (s.empty() || s.front() == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
        std::string key = config_detail::trim(s.substr(0, eq));
        try {
            set_config_value(base, key, s.substr(eq + 1));
        } catch (const ArgumentError& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    return base;
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open config '" + path + "'");
    return parse_config(in, std::move(base));
}

inline void save_config(const RunConfig& c, std::ostream& out) {
    for (const auto& [k, v] : config_pairs(c)) {
        if (k == "zeros" && v.empty()) continue;
        out << k << " = " << v << '\n';
    }
}

/// Directory of the bundled zero table: $ZDC_DATA_DIR, else the build-time default.
inline std::string data_dir(const std::string& fallback = "") {
    if (const char* env = std::getenv("ZDC_DATA_DIR"); env && *env) return env;
    return fallback;
}

inline std::string resolve_zeros_path(const RunConfig& c, const std::string& fallback_dir = "") {
    if (!c.zeros_path.empty()) return c.zeros_path;
    std::string dir = data_dir(fallback_dir);
    if (dir.empty()) throw ArgumentError("no zero table: set 'zeros' or ZDC_DATA_DIR");
    return dir + "/zeros.txt";
}

inline contour::ContourConfig contour_config(const RunConfig& c, mpfr_prec_t prec) {
    contour::ContourConfig cc;
    cc.delta = parse_value(c.delta, prec);
    cc.Y0 = parse_value(c.Y0, prec);
    cc.Y1 = parse_value(c.Y1, prec);
    cc.m = c.m;
    cc.alpha_breakpoints = parse_breakpoints(c.alpha, prec);
    cc.validate();
    return cc;
}

}  // namespace zdc
