#pragma once

// Upper bounds for the truncation error R*_N(y) = sum_{n>N} |rho_0/rho_n| e^{-omega_n y}.

#include <string>

#include "zdc/error.hpp"
#include "zdc/rigor/interval.hpp"
#include "zdc/zeta_data.hpp"

namespace zdc::tail {

using rigor::Interval;

struct TailBoundConfig {
    int N = 0;
    int Nprime = 0;
    Interval T1;

    /// T1 = (gamma_{N'} + gamma_{N'+1}) / 2, checked to lie strictly between.
    static TailBoundConfig make(const ZeroTable& table, int N, int Nprime,
                                mpfr_prec_t prec = rigor::default_precision()) {
        if (Nprime <= N) throw ArgumentError("N' must exceed N");
        if (static_cast<std::size_t>(Nprime) + 1 >= table.count()) {
            throw ArgumentError("zero table has " + std::to_string(table.count()) + " entries; N' = " +
                                std::to_string(Nprime) + " needs gamma_{N'+1}");
        }
        TailBoundConfig cfg;
        cfg.N = N;
        cfg.Nprime = Nprime;
        const Interval& a = table.gamma(static_cast<std::size_t>(Nprime));
        const Interval& b = table.gamma(static_cast<std::size_t>(Nprime) + 1);
        cfg.T1 = rigor::mul_2si(a.with_precision(prec) + b.with_precision(prec), -1);
        cfg.validate(table);
        return cfg;
    }

    void validate(const ZeroTable& table) const {
        if (Nprime <= N) throw ArgumentError("N' must exceed N");
        const Interval& a = table.gamma(static_cast<std::size_t>(Nprime));
        const Interval& b = table.gamma(static_cast<std::size_t>(Nprime) + 1);
        if (!(rigor::certainly(a, rigor::Rel::lt, T1) && rigor::certainly(T1, rigor::Rel::lt, b))) {
            throw ValidationError("T1 = " + T1.str() + " is not certainly between gamma_N' and gamma_{N'+1}");
        }
    }
};

enum class Branch { first, second };

inline const char* branch_name(Branch b) { return b == Branch::first ? "first" : "second"; }

struct ClosedFormResult {
    Interval bound;
    Interval first;
    Interval second;  // meaningful only when second_evaluated
    bool second_evaluated = false;
    Branch active = Branch::first;
};

/// Closed-form bound on the tail beyond T1. The result encloses the printed
/// expression (or the smaller of the two when T1*y <= 1 is certified), with
/// its lower endpoint clamped at 0.
inline ClosedFormResult lemma5_tail_detail(const Interval& y, const Interval& T1, const Interval& rho0_abs,
                                       const Interval& gamma0) {
    if (!rigor::certainly_positive(y)) throw DomainError("lemma5_tail: y = " + y.str() + " not certainly positive");
    if (!rigor::certainly_positive(T1)) throw DomainError("lemma5_tail: T1 not certainly positive");
    mpfr_prec_t prec = std::max({y.precision(), T1.precision(), rho0_abs.precision()});
    Interval pi = Interval::pi(prec);
    Interval logT = rigor::log(T1);
    Interval Ty = T1 * y;
    // e^{gamma0 y} / e^{T1 y} folded into one exponent
    Interval decay = rigor::exp((gamma0 - T1) * y);

    ClosedFormResult r;
    Interval bracket = logT / (mul_2si(pi, 1) * y) + 4L * logT + Interval(2L, prec) / Ty;
    r.first = rho0_abs * decay / T1 * bracket;

    if (rigor::certainly(Ty, rigor::Rel::le, Interval(1L, prec))) {
        r.second_evaluated = true;
        Interval logy = rigor::log(y);
        Interval inner = rigor::sqr(logy) / mul_2si(pi, 2) + 4L * logT / T1 + Interval(2L, prec) / T1;
        Interval extra = rho0_abs * rigor::exp(gamma0 * y - 1L) / mul_2si(pi, 1) * rigor::abs(logy);
        r.second = rho0_abs * decay * inner + extra;
        r.bound = rigor::min(r.first, r.second);
        r.active = mpfr_cmp(r.second.upper(), r.first.upper()) < 0 ? Branch::second : Branch::first;
    } else {
        r.bound = r.first;
    }
    if (mpfr_sgn(r.bound.lower()) < 0) {
        rigor::detail::Mpfr zero(prec);
        mpfr_set_zero(zero.v, 1);
        r.bound = Interval::from_endpoints(zero.v, r.bound.upper(), r.bound.precision());
    }
    return r;
}

inline Interval lemma5_tail(const Interval& y, const Interval& T1, const Interval& rho0_abs, const Interval& gamma0) {
    return lemma5_tail_detail(y, T1, rho0_abs, gamma0).bound;
}

/// Sum_{n=from..to} amp_n e^{-omega_n y} for y > 0, evaluated endpoint-wise
/// (every summand is positive and decreasing in y and omega). `prec` = 0
/// uses the precision of the inputs. With `lower` false the lower endpoint
/// is returned as 0 and only the upper sum is computed.
inline Interval exponential_sum(const Interval& y, const WeightSet& w, int from, int to, mpfr_prec_t prec = 0,
                                bool lower = true) {
    if (!rigor::certainly_positive(y)) throw DomainError("exponential_sum: y not certainly positive");
    if (to > w.available()) throw ArgumentError("weights cover only n <= " + std::to_string(w.available()));
    if (prec == 0) prec = std::max(y.precision(), w.gamma0.precision());
    rigor::detail::Mpfr lo(prec), hi(prec), t(prec), e(prec);
    mpfr_set_zero(lo.v, 1);
    mpfr_set_zero(hi.v, 1);
    for (int n = from; n <= to; ++n) {
        const Interval& om = w.omega(n);
        const Interval& a = w.amp(n);
        if (lower) {
            mpfr_mul(t.v, om.upper(), y.upper(), MPFR_RNDU);
            mpfr_neg(t.v, t.v, MPFR_RNDD);
            mpfr_exp(e.v, t.v, MPFR_RNDD);
            mpfr_mul(e.v, e.v, a.lower(), MPFR_RNDD);
            mpfr_add(lo.v, lo.v, e.v, MPFR_RNDD);
        }
        mpfr_mul(t.v, om.lower(), y.lower(), MPFR_RNDD);
        mpfr_neg(t.v, t.v, MPFR_RNDU);
        mpfr_exp(e.v, t.v, MPFR_RNDU);
        mpfr_mul(e.v, e.v, a.upper(), MPFR_RNDU);
        mpfr_add(hi.v, hi.v, e.v, MPFR_RNDU);
    }
    return Interval::from_endpoints(lo.v, hi.v, prec);
}

struct TailBound {
    Interval value;
    Interval truncated;
    ClosedFormResult closed_form;
};

/// `sum_precision` bounds the working precision of the truncated sum (0:
/// input precision); `lower` false skips its lower endpoint (then 0).
inline TailBound tail_bound_detail(const Interval& y, const WeightSet& w, const TailBoundConfig& cfg,
                                   mpfr_prec_t sum_precision = 0, bool lower = true) {
    if (!rigor::certainly_positive(y)) throw DomainError("tail_bound: y = " + y.str() + " not certainly positive");
    TailBound t;
    t.truncated = exponential_sum(y, w, cfg.N + 1, cfg.Nprime, sum_precision, lower);
    t.closed_form = lemma5_tail_detail(y, cfg.T1, w.rho0_abs, w.gamma0);
    t.value = t.truncated + t.closed_form.bound;
    return t;
}

/// R~_N(y): an upper enclosure of R*_N(y).
inline Interval tail_bound(const Interval& y, const WeightSet& w, const TailBoundConfig& cfg) {
    return tail_bound_detail(y, w, cfg).value;
}

}  // namespace zdc::tail
