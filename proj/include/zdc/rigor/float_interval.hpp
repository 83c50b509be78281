#pragma once

// Double-precision intervals for hot loops. Each operation is evaluated in
// round-to-nearest and then widened by one ulp, which encloses the exact
// result because a single IEEE operation errs by at most half an ulp.

#include <cmath>
#include <limits>

#include "zdc/rigor/interval.hpp"

namespace zdc::rigor {

inline double next_up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
inline double next_down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }

struct FloatInterval {
    double lo = 0.0;
    double hi = 0.0;

    static FloatInterval point(double v) { return {v, v}; }

    /// Outward conversion from a multiprecision interval.
    static FloatInterval from(const Interval& x) { return {x.lo(), x.hi()}; }

    /// Exact conversion back to a multiprecision interval.
    Interval to_interval(mpfr_prec_t prec = default_precision()) const {
        Interval a = Interval::from_double(lo, std::max<mpfr_prec_t>(prec, 53));
        Interval b = Interval::from_double(hi, std::max<mpfr_prec_t>(prec, 53));
        return Interval::hull(a, b);
    }

    bool contains(double x) const { return lo <= x && x <= hi; }

    friend FloatInterval operator+(FloatInterval a, FloatInterval b) {
        return {next_down(a.lo + b.lo), next_up(a.hi + b.hi)};
    }
    friend FloatInterval operator-(FloatInterval a, FloatInterval b) {
        return {next_down(a.lo - b.hi), next_up(a.hi - b.lo)};
    }
    friend FloatInterval operator*(FloatInterval a, FloatInterval b) {
        if (a.lo >= 0 && b.lo >= 0) return {next_down(a.lo * b.lo), next_up(a.hi * b.hi)};
        double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
        double mn = p[0], mx = p[0];
        for (double v : p) {
            mn = std::fmin(mn, v);
            mx = std::fmax(mx, v);
        }
        return {next_down(mn), next_up(mx)};
    }
    FloatInterval& operator+=(FloatInterval o) { return *this = *this + o; }
};

/// acc + a * b for non-negative operands, with a single rounding per endpoint.
inline FloatInterval fma_nonneg(FloatInterval a, FloatInterval b, FloatInterval acc) {
    return {next_down(std::fma(a.lo, b.lo, acc.lo)), next_up(std::fma(a.hi, b.hi, acc.hi))};
}

}  // namespace zdc::rigor
