#pragma once

// Tables of zeta-zero ordinates and the amplitudes/frequencies derived from
// them under the Riemann Hypothesis (every zero is 1/2 + i*gamma).
//
// Text format: UTF-8, one decimal ordinate per line, gamma_0 first. Lines
// whose first non-blank character is '#' are comments; blank lines are
// skipped. Each literal d becomes [d - u, d + u] where u is either the
// declared ulp passed by the caller or, by default, one unit in the last
// printed decimal place of that literal.

#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "zdc/error.hpp"
#include "zdc/rigor/interval.hpp"

namespace zdc {

using rigor::Interval;

struct ZeroTable {
    std::vector<Interval> ordinates;  // gamma_0, gamma_1, ...
    std::vector<std::string> literals;
    std::optional<std::string> declared_ulp;  // nullopt: per-literal last place

    std::size_t count() const { return ordinates.size(); }
    const Interval& gamma(std::size_t n) const { return ordinates.at(n); }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Digits after the decimal point, adjusted by any exponent suffix.
inline long decimal_places(std::string_view lit) {
    long places = 0;
    auto dot = lit.find('.');
    auto e = lit.find_first_of("eE");
    if (dot != std::string_view::npos) {
        auto end = e == std::string_view::npos ? lit.size() : e;
        places = static_cast<long>(end - dot - 1);
    }
    if (e != std::string_view::npos) places -= std::stol(std::string(lit.substr(e + 1)));
    return places;
}

inline mpfr_prec_t precision_for_places(long places, mpfr_prec_t floor_bits) {
    auto bits = static_cast<mpfr_prec_t>(std::ceil(std::max(places, 0L) * 3.3219280948873623)) + 64;
    return std::max(bits, floor_bits);
}

}  // namespace detail

/// Checks ordering, positivity and the anchor gamma_0 ~ 14.134725.
inline void validate_zero_table(const ZeroTable& t) {
    if (t.count() == 0) throw ValidationError("zero table is empty");
    Interval anchor_lo = Interval::from_decimal("14.134625", 64);
    Interval anchor_hi = Interval::from_decimal("14.134825", 64);
    const Interval& g0 = t.ordinates.front();
    if (!(rigor::certainly(anchor_lo, rigor::Rel::le, g0) && rigor::certainly(g0, rigor::Rel::le, anchor_hi))) {
        throw ValidationError("first ordinate " + g0.str() + " does not enclose 14.134725 +/- 1e-4");
    }
    for (std::size_t n = 0; n < t.count(); ++n) {
        if (!rigor::certainly_positive(t.ordinates[n])) {
            throw ValidationError("ordinate " + std::to_string(n) + " is not certainly positive");
        }
        if (n > 0 && !rigor::certainly(t.ordinates[n - 1], rigor::Rel::lt, t.ordinates[n])) {
            throw ValidationError("ordinates " + std::to_string(n - 1) + " and " + std::to_string(n) +
                                  " are not certainly increasing: " + t.ordinates[n - 1].str() + " vs " +
                                  t.ordinates[n].str());
        }
    }
}

/// Parses and validates a zero table. `min_precision` is a floor; each entry
/// gets enough bits to represent its literal.
inline ZeroTable load_zero_table(std::istream& in, std::optional<std::string> declared_ulp = std::nullopt,
                                 mpfr_prec_t min_precision = rigor::default_precision()) {
    ZeroTable t;
    t.declared_ulp = declared_ulp;
    std::optional<Interval> ulp;
    long ulp_places = 0;
    if (declared_ulp) {
        ulp = Interval::from_decimal(*declared_ulp, 128);
        if (!rigor::certainly_positive(*ulp)) throw ArgumentError("declared ulp must be positive");
        ulp_places = detail::decimal_places(*declared_ulp) + 2;
    }
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = detail::trim(line);
        if (s.empty() || s.front() == '#') continue;
        if (!rigor::detail::valid_decimal(s)) throw ParseError("malformed ordinate '" + std::string(s) + "'", lineno);
        long places = detail::decimal_places(s);
        mpfr_prec_t prec = detail::precision_for_places(std::max(places, ulp_places), min_precision);
        Interval d = Interval::from_decimal(s, prec);
        Interval half = ulp ? ulp->with_precision(prec)
                            : Interval::from_decimal("1e" + std::to_string(-places), prec);
        t.ordinates.push_back(Interval::hull(d - half, d + half));
        t.literals.emplace_back(s);
    }
    validate_zero_table(t);
    return t;
}

inline ZeroTable load_zero_table_file(const std::string& path, std::optional<std::string> declared_ulp = std::nullopt,
                                      mpfr_prec_t min_precision = rigor::default_precision()) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open zero table '" + path + "'");
    return load_zero_table(in, std::move(declared_ulp), min_precision);
}

/// Writes the table back in the text format; reloading it with the same
/// declared ulp reproduces identical intervals.
inline void save_zero_table(const ZeroTable& t, std::ostream& out) {
    out << "# " << t.count() << " zeta zero ordinates\n";
    for (const auto& lit : t.literals) out << lit << '\n';
}

/// Frequencies and amplitudes of the normalized k-function, n = 1..count-1.
struct WeightSet {
    int N = 0;
    Interval gamma0;
    Interval rho0_abs;  // |rho_0| = sqrt(1/4 + gamma_0^2)
    std::vector<Interval> omegas;  // omega_n = gamma_n - gamma_0, stored at n-1
    std::vector<Interval> amps;    // |rho_0 / rho_n|
    std::vector<Interval> etas;    // pi - arg(rho_0 / rho_n)

    const Interval& omega(int n) const { return omegas.at(static_cast<std::size_t>(n - 1)); }
    const Interval& amp(int n) const { return amps.at(static_cast<std::size_t>(n - 1)); }
    const Interval& eta(int n) const { return etas.at(static_cast<std::size_t>(n - 1)); }
    int available() const { return static_cast<int>(omegas.size()); }
};

/// Derives omega_n, |rho_0/rho_n| and eta_n for n = 1..upto (default: the
/// whole table) at precision `prec`.
inline WeightSet derive_weights(const ZeroTable& table, int N, mpfr_prec_t prec = rigor::default_precision(),
                                int upto = -1) {
    if (N < 1 || static_cast<std::size_t>(N) >= table.count()) {
        throw ArgumentError("N = " + std::to_string(N) + " must satisfy 1 <= N < table count " +
                            std::to_string(table.count()));
    }
    int last = upto < 0 ? static_cast<int>(table.count()) - 1 : upto;
    if (last < N || static_cast<std::size_t>(last) >= table.count()) {
        throw ArgumentError("cannot derive weights up to index " + std::to_string(last));
    }
    WeightSet w;
    w.N = N;
    Interval quarter = Interval::from_rational(1, 4, prec);
    w.gamma0 = table.gamma(0).with_precision(prec);
    w.rho0_abs = rigor::sqrt(quarter + rigor::sqr(w.gamma0));
    Interval arg0 = rigor::atan(mul_2si(w.gamma0, 1));
    Interval pi = Interval::pi(prec);
    w.omegas.reserve(static_cast<std::size_t>(last));
    w.amps.reserve(static_cast<std::size_t>(last));
    w.etas.reserve(static_cast<std::size_t>(last));
    for (int n = 1; n <= last; ++n) {
        Interval g = table.gamma(static_cast<std::size_t>(n)).with_precision(prec);
        w.omegas.push_back(g - w.gamma0);
        w.amps.push_back(w.rho0_abs / rigor::sqrt(quarter + rigor::sqr(g)));
        // arg(1/2 + i gamma) = atan(2 gamma)
        w.etas.push_back(pi - (arg0 - rigor::atan(mul_2si(g, 1))));
    }
    Interval one(1L, prec);
    for (int n = 1; n <= last; ++n) {
        const Interval& om = w.omega(n);
        const Interval& a = w.amp(n);
        if (!rigor::certainly_positive(om)) throw ValidationError("omega_" + std::to_string(n) + " not positive");
        if (n > 1 && !rigor::certainly(w.omega(n - 1), rigor::Rel::lt, om)) {
            throw ValidationError("omega_" + std::to_string(n) + " not strictly increasing");
        }
        if (!(rigor::certainly_positive(a) && rigor::certainly(a, rigor::Rel::lt, one))) {
            throw ValidationError("amplitude " + std::to_string(n) + " not certainly in (0, 1): " + a.str());
        }
        if (n > 1 && !rigor::certainly(a, rigor::Rel::lt, w.amp(n - 1))) {
            throw ValidationError("amplitude " + std::to_string(n) + " not certainly decreasing");
        }
    }
    return w;
}

}  // namespace zdc
