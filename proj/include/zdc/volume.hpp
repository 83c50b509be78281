#pragma once

// Grid inversion of the weight functions and the truncated convolution that
// lower-bounds the volume of the shrunk solution set.

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <vector>

#include "zdc/error.hpp"
#include "zdc/parallel.hpp"
#include "zdc/penalty.hpp"
#include "zdc/rigor/float_interval.hpp"
#include "zdc/rigor/interval.hpp"

namespace zdc::volume {

using rigor::FloatInterval;
using rigor::Interval;
using rigor::Rel;

struct GridFamily {
    long ell = 0;
    Interval eps;
    std::vector<std::vector<double>> x;  // [n-1][i], i = 0..ell; exact dyadic values

    int N() const { return static_cast<int>(x.size()); }
    Interval x_interval(int n, long i) const {
        double v = x.at(static_cast<std::size_t>(n - 1)).at(static_cast<std::size_t>(i));
        return Interval::from_double(v, 64);
    }
};

struct InvertOptions {
    unsigned workers = 1;
    int tolerance_bits = 40;
    mpfr_prec_t angle_precision = 64;
};

/// Certified upper bound of w_n(eps + x) using the pruned fast tables.
inline double w_upper_at(const std::vector<penalty::FastPair>& pairs, const Interval& eps, double x,
                         mpfr_prec_t prec) {
    Interval arg = eps.with_precision(prec) + Interval::from_double(x, prec);
    Interval psi = mul_2si(Interval::pi(prec), 1) * arg;
    return penalty::w_upper(pairs, penalty::angle_of(psi));
}

/// For i = 1..ell, the largest x (to `tol`) in [x_{i-1}, xmax] with
/// upper(x) <= level[i], where `upper` is a certified non-decreasing upper
/// bound. Levels that fail even at x = 0 give x_i = 0. Returns x_0..x_ell.
template <class Upper>
std::vector<double> invert_monotone(Upper&& upper, const std::vector<double>& level, double xmax, double tol) {
    const std::size_t ell = level.size() - 1;
    std::vector<double> row(ell + 1, 0.0);
    double prev = 0.0;
    bool top = false;
    for (std::size_t i = 1; i <= ell; ++i) {
        const double t = level[i];
        if (top) {
            row[i] = xmax;
            continue;
        }
        if (prev == 0.0 && !(upper(0.0) <= t)) continue;
        if (upper(xmax) <= t) {
            row[i] = prev = xmax;
            top = true;
            continue;
        }
        double lo = prev, hi = xmax;
        while (hi - lo > tol) {
            double mid = lo + (hi - lo) / 2;
            if (mid <= lo || mid >= hi) break;
            if (upper(mid) <= t) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        row[i] = prev = lo;
    }
    return row;
}

/// i/ell rounded down to doubles, index 0..ell.
inline std::vector<double> grid_levels(long ell) {
    std::vector<double> level(static_cast<std::size_t>(ell) + 1, 0.0);
    for (long i = 1; i <= ell; ++i) level[static_cast<std::size_t>(i)] = Interval::from_rational(i, ell, 64).lo();
    return level;
}

/// invert_monotone applied to every w_n(eps + x) on [0, 1/2 - eps].
inline GridFamily invert_w(const penalty::PenaltyFamily& fam, long ell, const Interval& eps,
                           const InvertOptions& opt = {}) {
    if (ell < 1) throw ArgumentError("invert_w: ell must be positive");
    Interval half = Interval::from_rational(1, 2, eps.precision());
    if (!rigor::certainly_positive(eps) || !rigor::certainly(eps, Rel::lt, half)) {
        throw ArgumentError("invert_w: eps = " + eps.str() + " not certainly in (0, 1/2)");
    }
    GridFamily g;
    g.ell = ell;
    g.eps = eps;
    g.x.assign(static_cast<std::size_t>(fam.N), {});
    const double xmax = (half - eps).lo();
    const double tol = std::ldexp(1.0, -opt.tolerance_bits);
    const auto level = grid_levels(ell);
    parallel_for(static_cast<std::size_t>(fam.N), opt.workers, [&](std::size_t idx) {
        const auto& pairs = fam.fast[idx];
        auto upper = [&](double x) { return w_upper_at(pairs, eps, x, opt.angle_precision); };
        g.x[idx] = invert_monotone(upper, level, xmax, tol);
    });
    return g;
}

/// Re-checks the grid hypotheses: ordering, the upper limit 1/2 - eps and
/// w_n(eps + x_{n,i}) <= i/ell. Returns an empty string or a description of
/// the first violation. Zero entries are exempt from the w check (their
/// boxes have no volume).
inline std::string verify_grid(const penalty::PenaltyFamily& fam, const GridFamily& g, mpfr_prec_t prec = 64) {
    Interval half = Interval::from_rational(1, 2, g.eps.precision());
    Interval cap = half - g.eps;
    for (int n = 1; n <= g.N(); ++n) {
        const auto& row = g.x[static_cast<std::size_t>(n - 1)];
        if (row[0] != 0.0) return "x_{" + std::to_string(n) + ",0} != 0";
        for (long i = 1; i <= g.ell; ++i) {
            double x = row[static_cast<std::size_t>(i)];
            if (x < row[static_cast<std::size_t>(i - 1)]) return "row " + std::to_string(n) + " decreases at " + std::to_string(i);
            if (!rigor::certainly(Interval::from_double(x, 64), Rel::le, cap)) {
                return "x_{" + std::to_string(n) + "," + std::to_string(i) + "} exceeds 1/2 - eps";
            }
            if (x == 0.0) continue;
            Interval lvl = Interval::from_rational(i, g.ell, prec);
            if (!(w_upper_at(fam.fast[static_cast<std::size_t>(n - 1)], g.eps, x, prec) <= lvl.lo())) {
                return "w_" + std::to_string(n) + "(eps + x_{" + std::to_string(n) + "," + std::to_string(i) +
                       "}) not certainly <= i/ell";
            }
        }
    }
    return {};
}

/// g_0 = unit at 0; g_n[i] = sum_{k=1..min(ell,i)} g_{n-1}[i-k] * steps[n][k-1];
/// returns g_N[0..ell]. `fma(a, b, acc)` returns acc + a * b.
template <class T, class Fma>
std::vector<T> truncated_convolution(const std::vector<std::vector<T>>& steps, std::size_t ell, const T& zero,
                                     const T& one, Fma&& fma, unsigned workers = 1) {
    std::vector<T> g(ell + 1, zero), next(ell + 1, zero);
    g[0] = one;
    std::size_t first = 0;  // g[i] = 0 for i < first
    for (const auto& d : steps) {
        if (d.size() < ell) throw ArgumentError("truncated_convolution: step row shorter than ell");
        const std::size_t nfirst = first + 1;
        parallel_for(ell + 1, workers, [&](std::size_t i) {
            T acc = zero;
            if (i >= nfirst) {
                for (std::size_t k = 1; k <= i - first; ++k) acc = fma(g[i - k], d[k - 1], acc);
            }
            next[i] = acc;
        });
        std::swap(g, next);
        first = nfirst;
    }
    return g;
}

/// Interval steps x_{n,k} - x_{n,k-1}, k = 1..ell, clamped below at 0.
inline std::vector<std::vector<FloatInterval>> grid_steps(const GridFamily& g) {
    std::vector<std::vector<FloatInterval>> steps;
    steps.reserve(g.x.size());
    for (const auto& row : g.x) {
        std::vector<FloatInterval> d(static_cast<std::size_t>(g.ell));
        for (long k = 1; k <= g.ell; ++k) {
            FloatInterval s = FloatInterval::point(row[static_cast<std::size_t>(k)]) -
                              FloatInterval::point(row[static_cast<std::size_t>(k - 1)]);
            s.lo = std::max(s.lo, 0.0);
            d[static_cast<std::size_t>(k - 1)] = s;
        }
        steps.push_back(std::move(d));
    }
    return steps;
}

/// Sum_{i<=ell} r_i as an enclosure.
inline Interval convolve_volume(const GridFamily& g, unsigned workers = 1) {
    auto steps = grid_steps(g);
    auto out = truncated_convolution<FloatInterval>(steps, static_cast<std::size_t>(g.ell), FloatInterval{},
                                                    FloatInterval::point(1.0), rigor::fma_nonneg, workers);
    FloatInterval sum{};
    for (const auto& v : out) sum = sum + v;
    sum.lo = std::max(sum.lo, 0.0);
    return sum.to_interval(64);
}

/// The same sum in exact rational arithmetic; rows hold x_{n,0..ell}.
inline mpq_class convolve_volume_exact(const std::vector<std::vector<mpq_class>>& x, std::size_t ell) {
    std::vector<std::vector<mpq_class>> steps;
    for (const auto& row : x) {
        std::vector<mpq_class> d(ell);
        for (std::size_t k = 1; k <= ell; ++k) d[k - 1] = row.at(k) - row.at(k - 1);
        steps.push_back(std::move(d));
    }
    auto out = truncated_convolution<mpq_class>(
        steps, ell, mpq_class(0), mpq_class(1),
        [](const mpq_class& a, const mpq_class& b, const mpq_class& acc) { return mpq_class(acc + a * b); });
    mpq_class s = 0;
    for (const auto& v : out) s += v;
    return s;
}

struct VolumeResult {
    Interval sum_r;
    Interval kappa_increment;  // (2/delta) 2^N sum_r
    Interval kappa0_lower;     // gamma_0/pi + kappa_increment
    bool meets_one_sixtieth = false;
};

inline VolumeResult final_bound(const Interval& sum_r, const Interval& delta, int N, const Interval& gamma0) {
    mpfr_prec_t p = std::max({sum_r.precision(), delta.precision(), gamma0.precision()});
    VolumeResult r;
    r.sum_r = sum_r.with_precision(p);
    r.kappa_increment = mul_2si(r.sum_r, N + 1) / delta.with_precision(p);
    r.kappa0_lower = gamma0.with_precision(p) / Interval::pi(p) + r.kappa_increment;
    r.meets_one_sixtieth = rigor::certainly(r.kappa_increment, Rel::ge, Interval::from_rational(1, 60, p));
    return r;
}

}  // namespace zdc::volume
