#pragma once

// The penalty kernel v(phi, psi), the envelope constants c_{n,j} and the
// weight functions w_n(x) = max_j c_{n,j} max(v(phi'_{n,j}, 2 pi x), v(phi''_{n,j}, 2 pi x)).

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "zdc/contour.hpp"
#include "zdc/error.hpp"
#include "zdc/parallel.hpp"
#include "zdc/rigor/float_interval.hpp"
#include "zdc/rigor/interval.hpp"
#include "zdc/zeta_data.hpp"

namespace zdc::penalty {

using rigor::FloatInterval;
using rigor::Interval;
using rigor::Rel;

/// v(phi, psi) = cos(phi) - cos(min(phi + psi, pi)) for phi, psi in [0, pi].
inline Interval v_penalty(const Interval& phi, const Interval& psi) {
    mpfr_prec_t p = std::max(phi.precision(), psi.precision());
    Interval pi = Interval::pi(p);
    auto inside = [&](const Interval& a) { return mpfr_sgn(a.lower()) >= 0 && mpfr_lessequal_p(a.upper(), pi.upper()); };
    if (!inside(phi)) throw ArgumentError("v_penalty: phi = " + phi.str() + " not within [0, pi]");
    if (!inside(psi)) throw ArgumentError("v_penalty: psi = " + psi.str() + " not within [0, pi]");
    Interval s = phi + psi;
    Interval c = rigor::cos(phi);
    Interval capped = c + 1L;
    if (rigor::certainly(s, Rel::le, pi)) return c - rigor::cos(s);
    if (rigor::certainly(s, Rel::ge, pi)) return capped;
    return Interval::hull(c - rigor::cos(s), capped);
}

enum class EnvelopeCase { narrow, upper, straddle, aggregate };

inline const char* case_name(EnvelopeCase c) {
    switch (c) {
        case EnvelopeCase::narrow: return "i";
        case EnvelopeCase::upper: return "ii";
        case EnvelopeCase::straddle: return "iii";
        case EnvelopeCase::aggregate: return "aggregate";
    }
    return "?";
}

/// Case factor of the envelope lemma for a band [phi', phi''], and which
/// case was certified.
struct CaseFactor {
    Interval factor;
    EnvelopeCase kind;
};

inline CaseFactor case_factor(const Interval& phi_lo, const Interval& phi_hi) {
    mpfr_prec_t p = std::max(phi_lo.precision(), phi_hi.precision());
    Interval half_pi = mul_2si(Interval::pi(p), -1);
    if (rigor::certainly(phi_hi, Rel::le, half_pi)) {
        return {Interval(1L, p) / rigor::cos(mul_2si(phi_hi - phi_lo, -1)), EnvelopeCase::narrow};
    }
    if (rigor::certainly(phi_lo, Rel::ge, half_pi)) return {Interval(1L, p), EnvelopeCase::upper};
    return {Interval(1L, p) / rigor::cos(mul_2si(half_pi - phi_lo, -1)), EnvelopeCase::straddle};
}

struct PenaltyEntry {
    Interval phi_lo;
    Interval phi_hi;
    Interval c;
    EnvelopeCase kind = EnvelopeCase::narrow;
};

/// A (phi, c) pair contributing c * v(phi, psi) to w_n.
struct PenaltyPair {
    enum class Anchor { none, zero, half_pi, pi };
    Interval phi;
    Interval c;
    Anchor anchor = Anchor::none;  // phi is exactly 0, pi/2 or pi
};

// Double-precision coefficients for the upper bound of c * v(phi, psi).
struct FastPair {
    double a_hi;  // c cos(phi)
    double b_hi;  // c sin(phi)
    double k_hi;  // c (1 + cos(phi)), an upper bound for all psi
    double thr;   // psi <= thr implies phi + psi <= pi
};

struct PenaltyFamily {
    int N = 0;
    long m = 0;
    std::vector<std::vector<PenaltyEntry>> entries;  // [n-1][j], j = 0..m
    std::vector<std::vector<PenaltyPair>> pruned;    // [n-1]
    std::vector<std::vector<FastPair>> fast;         // [n-1], parallel to pruned
    std::vector<std::size_t> unpruned_count;         // pairs before pruning, per n

    const std::vector<PenaltyEntry>& row(int n) const { return entries.at(static_cast<std::size_t>(n - 1)); }
};

namespace detail {

inline FastPair make_fast(const PenaltyPair& p) {
    mpfr_prec_t prec = p.phi.precision();
    Interval cphi = rigor::cos(p.phi);
    Interval a = p.c * cphi;
    Interval b = p.c * rigor::sin(p.phi);
    Interval k = p.c * (cphi + 1L);
    Interval thr = Interval::pi(prec) - p.phi;
    return {a.hi(), std::max(b.hi(), 0.0), std::max(k.hi(), 0.0), thr.lo()};
}

/// Drops pairs whose contribution is dominated for every psi in [0, pi].
/// For phi < phi*, c v(phi, .) <= c* v(phi*, .) iff c (1 + cos phi) <= c* (1 + cos phi*);
/// for phi > phi*, iff c sin phi <= c* sin phi*. Pairs with the same exact
/// anchor angle are merged into one with the interval maximum of their c.
inline std::vector<PenaltyPair> prune_pairs(std::vector<PenaltyPair> pairs) {
    using Anchor = PenaltyPair::Anchor;
    std::vector<PenaltyPair> merged;
    for (Anchor a : {Anchor::zero, Anchor::half_pi, Anchor::pi}) {
        const PenaltyPair* first = nullptr;
        Interval c;
        for (const auto& p : pairs) {
            if (p.anchor != a) continue;
            c = first ? rigor::max(c, p.c) : p.c;
            if (!first) first = &p;
        }
        if (first) merged.push_back({first->phi, c, a});
    }
    for (auto& p : pairs) {
        if (p.anchor == Anchor::none) merged.push_back(std::move(p));
    }
    const std::size_t P = merged.size();
    struct Key {
        double phi_lo, phi_hi, k1_lo, k1_hi, k2_lo, k2_hi;
    };
    std::vector<Key> keys(P);
    for (std::size_t i = 0; i < P; ++i) {
        const auto& p = merged[i];
        Interval k1 = p.c * (rigor::cos(p.phi) + 1L);
        Interval k2 = p.c * rigor::sin(p.phi);
        keys[i] = {p.phi.lo(), p.phi.hi(), k1.lo(), k1.hi(), k2.lo(), k2.hi()};
    }
    std::vector<bool> dominated(P, false);
    std::vector<std::size_t> order(P);
    // dominated by a pair with certainly larger phi
    for (std::size_t i = 0; i < P; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a].phi_lo < keys[b].phi_lo; });
    std::vector<double> suffix(P + 1, -std::numeric_limits<double>::infinity());
    for (std::size_t r = P; r-- > 0;) suffix[r] = std::max(suffix[r + 1], keys[order[r]].k1_lo);
    for (std::size_t i = 0; i < P; ++i) {
        auto it = std::upper_bound(order.begin(), order.end(), keys[i].phi_hi,
                                   [&](double v, std::size_t b) { return v < keys[b].phi_lo; });
        std::size_t r = static_cast<std::size_t>(it - order.begin());
        if (suffix[r] >= keys[i].k1_hi) dominated[i] = true;
    }
    // dominated by a pair with certainly smaller phi
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a].phi_hi < keys[b].phi_hi; });
    std::vector<double> prefix(P + 1, -std::numeric_limits<double>::infinity());
    for (std::size_t r = 0; r < P; ++r) prefix[r + 1] = std::max(prefix[r], keys[order[r]].k2_lo);
    for (std::size_t i = 0; i < P; ++i) {
        auto it = std::lower_bound(order.begin(), order.end(), keys[i].phi_lo,
                                   [&](std::size_t b, double v) { return keys[b].phi_hi < v; });
        std::size_t r = static_cast<std::size_t>(it - order.begin());
        if (prefix[r] >= keys[i].k2_hi) dominated[i] = true;
    }
    std::vector<PenaltyPair> out;
    for (std::size_t i = 0; i < P; ++i) {
        if (!dominated[i]) out.push_back(std::move(merged[i]));
    }
    return out;
}

}  // namespace detail

/// All (phi, c) pairs of row n with c not identically zero.
inline std::vector<PenaltyPair> row_pairs(const std::vector<PenaltyEntry>& row,
                                          const std::vector<contour::Straddle>* kinds = nullptr) {
    using Anchor = PenaltyPair::Anchor;
    using contour::Straddle;
    std::vector<PenaltyPair> pairs;
    for (std::size_t j = 0; j < row.size(); ++j) {
        const auto& e = row[j];
        if (mpfr_sgn(e.c.upper()) == 0) continue;
        if (j == 0) {
            pairs.push_back({e.phi_lo, e.c, Anchor::half_pi});
            continue;
        }
        Anchor lo = Anchor::none, hi = Anchor::none;
        if (kinds) {
            Straddle k = (*kinds)[j - 1];
            if (k == Straddle::even || k == Straddle::ambiguous_even || k == Straddle::ambiguous) lo = Anchor::zero;
            if (k == Straddle::odd || k == Straddle::ambiguous_odd || k == Straddle::ambiguous) hi = Anchor::pi;
        }
        pairs.push_back({e.phi_lo, e.c, lo});
        pairs.push_back({e.phi_hi, e.c, hi});
    }
    return pairs;
}

/// c_{n,j} for j = 1..m and the aggregate c_{n,0}. Requires u_j certainly
/// positive; uses its certified lower endpoint.
inline PenaltyFamily envelope_constants(const contour::ContourMesh& mesh, const contour::Bands& bands,
                                        const WeightSet& w, unsigned workers = 1) {
    const long m = mesh.m();
    for (long j = 1; j <= m; ++j) {
        if (!rigor::certainly_positive(mesh.segment(j).u)) {
            throw CertificationError("envelope_constants: u_" + std::to_string(j) + " = " + mesh.segment(j).u.str() +
                                     " not certainly positive");
        }
    }
    PenaltyFamily fam;
    fam.N = mesh.N;
    fam.m = m;
    const auto N = static_cast<std::size_t>(fam.N);
    fam.entries.resize(N);
    fam.pruned.resize(N);
    fam.fast.resize(N);
    fam.unpruned_count.resize(N);
    parallel_for(N, workers, [&](std::size_t idx) {
        int n = static_cast<int>(idx) + 1;
        auto& row = fam.entries[idx];
        row.resize(static_cast<std::size_t>(m) + 1);
        mpfr_prec_t p = mesh.alpha[0].precision();
        Interval half_pi = mul_2si(Interval::pi(p), -1);
        Interval c0(0L, p);
        bool any_straddle = false;
        std::vector<contour::Straddle> kinds(static_cast<std::size_t>(m));
        for (long j = 1; j <= m; ++j) {
            const auto& s = mesh.segment(j);
            const auto& b = bands.at(n, j);
            kinds[static_cast<std::size_t>(j - 1)] = b.kind;
            Interval base = w.amp(n) * rigor::exp(-(w.omega(n) * s.y)) / mesh.u_lower(j);
            CaseFactor cf = case_factor(b.phi_lo, b.phi_hi);
            PenaltyEntry& e = row[static_cast<std::size_t>(j)];
            e.phi_lo = b.phi_lo;
            e.phi_hi = b.phi_hi;
            e.c = base * cf.factor;
            e.kind = cf.kind;
            if (cf.kind == EnvelopeCase::straddle) {
                c0 = any_straddle ? rigor::max(c0, e.c) : e.c;
                any_straddle = true;
            }
        }
        row[0] = {half_pi, half_pi, c0, EnvelopeCase::aggregate};
        auto pairs = row_pairs(row, &kinds);
        fam.unpruned_count[idx] = pairs.size();
        fam.pruned[idx] = detail::prune_pairs(std::move(pairs));
        fam.fast[idx].reserve(fam.pruned[idx].size());
        for (const auto& pr : fam.pruned[idx]) fam.fast[idx].push_back(detail::make_fast(pr));
    });
    return fam;
}

/// Builds a family directly from per-row entries (j = 0 first). Used for
/// hand-made families; pairs are pruned like in envelope_constants.
inline PenaltyFamily family_from_entries(std::vector<std::vector<PenaltyEntry>> rows) {
    PenaltyFamily fam;
    fam.N = static_cast<int>(rows.size());
    fam.m = rows.empty() ? 0 : static_cast<long>(rows[0].size()) - 1;
    fam.entries = std::move(rows);
    for (const auto& row : fam.entries) {
        auto pairs = row_pairs(row);
        fam.unpruned_count.push_back(pairs.size());
        fam.pruned.push_back(detail::prune_pairs(std::move(pairs)));
        std::vector<FastPair> f;
        for (const auto& pr : fam.pruned.back()) f.push_back(detail::make_fast(pr));
        fam.fast.push_back(std::move(f));
    }
    return fam;
}

namespace detail {

inline Interval max_contribution(const std::vector<PenaltyPair>& pairs, const Interval& psi) {
    Interval best(0L, psi.precision());
    for (const auto& p : pairs) best = rigor::max(best, p.c * v_penalty(p.phi, psi));
    return best;
}

inline Interval psi_of(const Interval& x) {
    Interval pi = Interval::pi(x.precision());
    Interval half = Interval::from_rational(1, 2, x.precision());
    if (mpfr_sgn(x.lower()) < 0 || !rigor::certainly(x, Rel::le, half)) {
        throw ArgumentError("w_eval: x = " + x.str() + " not within [0, 1/2]");
    }
    return mul_2si(pi, 1) * x;
}

}  // namespace detail

/// Enclosure of w_n(x) over the pruned pairs.
inline Interval w_eval(const PenaltyFamily& fam, int n, const Interval& x) {
    return detail::max_contribution(fam.pruned.at(static_cast<std::size_t>(n - 1)), detail::psi_of(x));
}

/// Enclosure of w_n(x) straight from the definition, without pruning.
inline Interval w_eval_unpruned(const PenaltyFamily& fam, int n, const Interval& x) {
    return detail::max_contribution(row_pairs(fam.row(n)), detail::psi_of(x));
}

/// Enclosures of 1 - cos(psi) and sin(psi) plus psi's upper endpoint, in doubles.
struct Angle {
    FloatInterval one_minus_cos;
    FloatInterval sin;
    double psi_hi;
};

inline Angle angle_of(const Interval& psi) {
    Interval h = rigor::sin(mul_2si(psi, -1));
    return {FloatInterval::from(mul_2si(rigor::sqr(h), 1)), FloatInterval::from(rigor::sin(psi)), psi.hi()};
}

/// Certified upper bound for w_n at angle psi = 2 pi x, in double precision.
inline double w_upper(const std::vector<FastPair>& pairs, const Angle& a) {
    using rigor::next_up;
    double best = 0.0;
    const double s_hi = std::max(a.sin.hi, 0.0);
    for (const auto& p : pairs) {
        double v = p.k_hi;
        if (a.psi_hi <= p.thr) {
            double t1 = next_up(p.a_hi * (p.a_hi >= 0 ? a.one_minus_cos.hi : a.one_minus_cos.lo));
            double t2 = next_up(p.b_hi * s_hi);
            v = std::min(v, next_up(t1 + t2));
        }
        best = std::max(best, v);
    }
    return best;
}

inline double w_upper(const PenaltyFamily& fam, int n, const Interval& x) {
    return w_upper(fam.fast.at(static_cast<std::size_t>(n - 1)), angle_of(detail::psi_of(x)));
}

}  // namespace zdc::penalty
