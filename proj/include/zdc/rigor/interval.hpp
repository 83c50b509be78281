#pragma once

// Closed real intervals with MPFR endpoints and outward rounding.
//
// Every operation returns an enclosure of the exact image of its inputs: the
// lower endpoint is rounded toward -inf, the upper toward +inf. Each value
// carries its own binary precision; binary operations produce a result at the
// larger of the operand precisions.

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "zdc/error.hpp"

namespace zdc::rigor {

namespace detail {
inline std::atomic<long>& default_precision_slot() {
    static std::atomic<long> prec{256};
    return prec;
}
}  // namespace detail

/// Process-wide precision (bits) used when a constructor is not given one.
inline mpfr_prec_t default_precision() {
    return static_cast<mpfr_prec_t>(detail::default_precision_slot().load(std::memory_order_relaxed));
}

inline void set_default_precision(mpfr_prec_t bits) {
    if (bits < 53 || bits > (1L << 24)) {
        throw ArgumentError("working precision must be in [53, 2^24] bits, got " + std::to_string(bits));
    }
    detail::default_precision_slot().store(bits, std::memory_order_relaxed);
}

/// Restores the previous default precision on scope exit.
class ScopedPrecision {
public:
    explicit ScopedPrecision(mpfr_prec_t bits) : saved_(default_precision()) { set_default_precision(bits); }
    ~ScopedPrecision() { set_default_precision(saved_); }
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    mpfr_prec_t saved_;
};

namespace detail {

// RAII scratch register.
struct Mpfr {
    mpfr_t v;
    explicit Mpfr(mpfr_prec_t p) { mpfr_init2(v, p); }
    ~Mpfr() { mpfr_clear(v); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
};

inline bool valid_decimal(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
    }
    if (digits == 0) return false;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        std::size_t exp_digits = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++exp_digits;
        if (exp_digits == 0) return false;
    }
    return i == s.size();
}

// Exact decimal expansion of a finite binary floating-point value.
inline std::string exact_decimal(mpfr_srcptr x) {
    if (mpfr_nan_p(x)) return "nan";
    if (mpfr_inf_p(x)) return mpfr_sgn(x) > 0 ? "inf" : "-inf";
    if (mpfr_zero_p(x)) return "0";
    mpz_class mant;
    mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), x);
    bool neg = mant < 0;
    if (neg) mant = -mant;
    std::string out;
    if (e >= 0) {
        mant <<= static_cast<mp_bitcnt_t>(e);
        out = mant.get_str();
    } else {
        // mant * 2^e = mant * 5^-e / 10^-e
        mpz_class five;
        mpz_ui_pow_ui(five.get_mpz_t(), 5, static_cast<unsigned long>(-e));
        mpz_class scaled = mant * five;
        std::string digits = scaled.get_str();
        std::size_t frac = static_cast<std::size_t>(-e);
        if (digits.size() <= frac) digits.insert(0, frac - digits.size() + 1, '0');
        out = digits.substr(0, digits.size() - frac) + "." + digits.substr(digits.size() - frac);
        while (!out.empty() && out.back() == '0') out.pop_back();
        if (!out.empty() && out.back() == '.') out.pop_back();
    }
    return neg ? "-" + out : out;
}

// Scientific notation with `digits` significant digits, rounded in direction `rnd`.
inline std::string format_decimal(mpfr_srcptr x, int digits, mpfr_rnd_t rnd) {
    if (mpfr_nan_p(x)) return "nan";
    if (mpfr_inf_p(x)) return mpfr_sgn(x) > 0 ? "inf" : "-inf";
    if (mpfr_zero_p(x)) return "0";
    mpfr_exp_t e = 0;
    char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<std::size_t>(digits), x, rnd);
    std::string m(raw);
    mpfr_free_str(raw);
    bool neg = !m.empty() && m[0] == '-';
    if (neg) m.erase(0, 1);
    std::string out = m.substr(0, 1);
    std::string rest = m.substr(1);
    while (!rest.empty() && rest.back() == '0') rest.pop_back();
    if (!rest.empty()) out += "." + rest;
    long exponent = static_cast<long>(e) - 1;
    if (exponent != 0) out += "e" + std::to_string(exponent);
    return neg ? "-" + out : out;
}

}  // namespace detail

enum class Rel { lt, le, gt, ge };

class Interval {
public:
    /// The point interval [0, 0].
    Interval() : Interval(0L) {}

    explicit Interval(long v, mpfr_prec_t prec = default_precision()) : Interval(Uninit{}, prec) {
        mpfr_set_si(lo_, v, MPFR_RNDD);
        mpfr_set_si(hi_, v, MPFR_RNDU);
    }

    /// Smallest enclosure of a double at the given precision (exact when prec >= 53).
    static Interval from_double(double v, mpfr_prec_t prec = default_precision()) {
        if (!std::isfinite(v)) throw DomainError("non-finite double cannot start an interval");
        Interval r(Uninit{}, prec);
        mpfr_set_d(r.lo_, v, MPFR_RNDD);
        mpfr_set_d(r.hi_, v, MPFR_RNDU);
        return r;
    }

    /// Outward-rounded enclosure of a decimal literal such as "0.132737" or "1.66e-13".
    static Interval from_decimal(std::string_view text, mpfr_prec_t prec = default_precision()) {
        if (!detail::valid_decimal(text)) throw ParseError("not a decimal literal: '" + std::string(text) + "'");
        std::string s(text);
        Interval r(Uninit{}, prec);
        mpfr_strtofr(r.lo_, s.c_str(), nullptr, 10, MPFR_RNDD);
        mpfr_strtofr(r.hi_, s.c_str(), nullptr, 10, MPFR_RNDU);
        return r;
    }

    /// Enclosure of num/den.
    static Interval from_rational(long num, long den, mpfr_prec_t prec = default_precision()) {
        if (den == 0) throw DomainError("zero denominator");
        return Interval(num, prec) / Interval(den, prec);
    }

    static Interval from_mpz(const mpz_class& z, mpfr_prec_t prec = default_precision()) {
        Interval r(Uninit{}, prec);
        mpfr_set_z(r.lo_, z.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(r.hi_, z.get_mpz_t(), MPFR_RNDU);
        return r;
    }

    static Interval from_mpq(const mpq_class& q, mpfr_prec_t prec = default_precision()) {
        Interval r(Uninit{}, prec);
        mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
        return r;
    }

    /// [lo, hi] from two MPFR values (rounded outward to `prec`).
    static Interval from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi, mpfr_prec_t prec) {
        Interval r(Uninit{}, prec);
        mpfr_set(r.lo_, lo, MPFR_RNDD);
        mpfr_set(r.hi_, hi, MPFR_RNDU);
        r.check_order();
        return r;
    }

    /// Interval from two decimal endpoint literals, each rounded outward.
    static Interval from_decimal_endpoints(std::string_view lo, std::string_view hi,
                                           mpfr_prec_t prec = default_precision()) {
        Interval a = from_decimal(lo, prec);
        Interval b = from_decimal(hi, prec);
        Interval r(Uninit{}, prec);
        mpfr_set(r.lo_, a.lo_, MPFR_RNDD);
        mpfr_set(r.hi_, b.hi_, MPFR_RNDU);
        if (mpfr_greater_p(r.lo_, r.hi_)) throw ArgumentError("interval endpoints out of order");
        return r;
    }

    /// Enclosure of pi, widened by one ulp on each side.
    static Interval pi(mpfr_prec_t prec = default_precision()) {
        Interval r(Uninit{}, prec);
        mpfr_const_pi(r.lo_, MPFR_RNDD);
        mpfr_const_pi(r.hi_, MPFR_RNDU);
        mpfr_nextbelow(r.lo_);
        mpfr_nextabove(r.hi_);
        return r;
    }

    /// Smallest interval containing both arguments.
    static Interval hull(const Interval& a, const Interval& b) {
        Interval r(Uninit{}, std::max(a.precision(), b.precision()));
        mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }

    Interval(const Interval& o) : Interval(Uninit{}, o.precision()) {
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }

    Interval(Interval&& o) noexcept {
        lo_[0] = o.lo_[0];
        hi_[0] = o.hi_[0];
        o.lo_[0]._mpfr_d = nullptr;
        o.hi_[0]._mpfr_d = nullptr;
    }

    Interval& operator=(const Interval& o) {
        if (this != &o) {
            if (!lo_[0]._mpfr_d) {
                mpfr_init2(lo_, o.precision());
                mpfr_init2(hi_, o.precision());
            } else {
                mpfr_set_prec(lo_, o.precision());
                mpfr_set_prec(hi_, o.precision());
            }
            mpfr_set(lo_, o.lo_, MPFR_RNDD);
            mpfr_set(hi_, o.hi_, MPFR_RNDU);
        }
        return *this;
    }

    Interval& operator=(Interval&& o) noexcept {
        if (this != &o) {
            std::swap(lo_[0], o.lo_[0]);
            std::swap(hi_[0], o.hi_[0]);
        }
        return *this;
    }

    ~Interval() {
        if (lo_[0]._mpfr_d) mpfr_clear(lo_);
        if (hi_[0]._mpfr_d) mpfr_clear(hi_);
    }

    mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }
    mpfr_srcptr lower() const { return lo_; }
    mpfr_srcptr upper() const { return hi_; }

    /// Lower endpoint rounded down to a double.
    double lo() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    /// Upper endpoint rounded up to a double.
    double hi() const { return mpfr_get_d(hi_, MPFR_RNDU); }
    /// Midpoint rounded to nearest double; for diagnostics only.
    double mid() const {
        detail::Mpfr m(precision() + 1);
        mpfr_add(m.v, lo_, hi_, MPFR_RNDN);
        mpfr_div_2ui(m.v, m.v, 1, MPFR_RNDN);
        return mpfr_get_d(m.v, MPFR_RNDN);
    }

    bool is_finite() const { return mpfr_number_p(lo_) && mpfr_number_p(hi_); }
    bool is_point() const { return mpfr_equal_p(lo_, hi_); }
    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
    bool contains(const Interval& o) const { return mpfr_lessequal_p(lo_, o.lo_) && mpfr_lessequal_p(o.hi_, hi_); }
    bool contains(mpfr_srcptr x) const { return mpfr_lessequal_p(lo_, x) && mpfr_lessequal_p(x, hi_); }
    bool contains(double x) const { return mpfr_cmp_d(lo_, x) <= 0 && mpfr_cmp_d(hi_, x) >= 0; }

    /// Same endpoints and precision.
    bool identical(const Interval& o) const {
        return precision() == o.precision() && mpfr_equal_p(lo_, o.lo_) && mpfr_equal_p(hi_, o.hi_);
    }

    /// Outward re-rounding to another precision.
    Interval with_precision(mpfr_prec_t prec) const {
        Interval r(Uninit{}, prec);
        mpfr_set(r.lo_, lo_, MPFR_RNDD);
        mpfr_set(r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    Interval lower_point() const { return from_endpoints(lo_, lo_, precision()); }
    Interval upper_point() const { return from_endpoints(hi_, hi_, precision()); }

    /// Upper bound on hi - lo, as a double.
    double width() const {
        detail::Mpfr w(precision());
        mpfr_sub(w.v, hi_, lo_, MPFR_RNDU);
        return mpfr_get_d(w.v, MPFR_RNDU);
    }

    /// "[lo, hi]" with `digits` significant digits, rounded outward.
    std::string str(int digits = 17) const {
        return "[" + detail::format_decimal(lo_, digits, MPFR_RNDD) + ", " +
               detail::format_decimal(hi_, digits, MPFR_RNDU) + "]";
    }
    std::string lo_str(int digits = 17) const { return detail::format_decimal(lo_, digits, MPFR_RNDD); }
    std::string hi_str(int digits = 17) const { return detail::format_decimal(hi_, digits, MPFR_RNDU); }
    /// Exact decimal expansions of the endpoints (bit-exact round trip).
    std::string lo_exact() const { return detail::exact_decimal(lo_); }
    std::string hi_exact() const { return detail::exact_decimal(hi_); }

    Interval operator-() const {
        Interval r(Uninit{}, precision());
        mpfr_neg(r.lo_, hi_, MPFR_RNDD);
        mpfr_neg(r.hi_, lo_, MPFR_RNDU);
        return r;
    }

    friend Interval operator+(const Interval& a, const Interval& b) {
        Interval r(Uninit{}, std::max(a.precision(), b.precision()));
        mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }

    friend Interval operator-(const Interval& a, const Interval& b) {
        Interval r(Uninit{}, std::max(a.precision(), b.precision()));
        mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
        return r;
    }

    friend Interval operator*(const Interval& a, const Interval& b) {
        mpfr_prec_t p = std::max(a.precision(), b.precision());
        Interval r(Uninit{}, p);
        if (mpfr_sgn(a.lo_) >= 0 && mpfr_sgn(b.lo_) >= 0) {
            mpfr_mul(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
            mpfr_mul(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
            return r;
        }
        corner_extremes(r, a, b, mpfr_mul);
        return r;
    }

    friend Interval operator/(const Interval& a, const Interval& b) {
        if (b.contains_zero()) throw DomainError("division by an interval containing 0: " + b.str());
        mpfr_prec_t p = std::max(a.precision(), b.precision());
        Interval r(Uninit{}, p);
        corner_extremes(r, a, b, mpfr_div);
        return r;
    }

    friend Interval operator+(const Interval& a, long b) { return a + Interval(b, a.precision()); }
    friend Interval operator-(const Interval& a, long b) { return a - Interval(b, a.precision()); }
    friend Interval operator-(long a, const Interval& b) { return Interval(a, b.precision()) - b; }
    friend Interval operator*(const Interval& a, long b) { return a * Interval(b, a.precision()); }
    friend Interval operator*(long a, const Interval& b) { return Interval(a, b.precision()) * b; }
    friend Interval operator/(const Interval& a, long b) { return a / Interval(b, a.precision()); }
    friend Interval operator/(long a, const Interval& b) { return Interval(a, b.precision()) / b; }

    Interval& operator+=(const Interval& o) { return *this = *this + o; }
    Interval& operator-=(const Interval& o) { return *this = *this - o; }
    Interval& operator*=(const Interval& o) { return *this = *this * o; }
    Interval& operator/=(const Interval& o) { return *this = *this / o; }

    friend std::ostream& operator<<(std::ostream& os, const Interval& x) { return os << x.str(); }

    // Monotone and piecewise-monotone functions need raw endpoint access.
    friend Interval exp(const Interval& x);
    friend Interval log(const Interval& x);
    friend Interval sqrt(const Interval& x);
    friend Interval atan(const Interval& x);
    friend Interval abs(const Interval& x);
    friend Interval sqr(const Interval& x);
    friend Interval cos(const Interval& x);
    friend Interval sin(const Interval& x);
    friend Interval min(const Interval& a, const Interval& b);
    friend Interval max(const Interval& a, const Interval& b);
    friend Interval nearest_int_distance(const Interval& x);
    friend Interval mul_2si(const Interval& x, long k);

private:
    struct Uninit {};
    Interval(Uninit, mpfr_prec_t prec) {
        mpfr_init2(lo_, prec);
        mpfr_init2(hi_, prec);
    }

    void check_order() const {
        if (mpfr_greater_p(lo_, hi_)) throw ArgumentError("interval endpoints out of order");
    }

    template <class Op>
    static void corner_extremes(Interval& r, const Interval& a, const Interval& b, Op op) {
        mpfr_prec_t p = r.precision();
        detail::Mpfr t(p);
        mpfr_srcptr as[2] = {a.lo_, a.hi_};
        mpfr_srcptr bs[2] = {b.lo_, b.hi_};
        bool first = true;
        for (auto x : as) {
            for (auto y : bs) {
                op(t.v, x, y, MPFR_RNDD);
                if (first || mpfr_less_p(t.v, r.lo_)) mpfr_set(r.lo_, t.v, MPFR_RNDD);
                op(t.v, x, y, MPFR_RNDU);
                if (first || mpfr_greater_p(t.v, r.hi_)) mpfr_set(r.hi_, t.v, MPFR_RNDU);
                first = false;
            }
        }
    }

    mpfr_t lo_;
    mpfr_t hi_;
};

inline Interval exp(const Interval& x) {
    Interval r(Interval::Uninit{}, x.precision());
    mpfr_exp(r.lo_, x.lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

inline Interval log(const Interval& x) {
    if (mpfr_sgn(x.lo_) <= 0) throw DomainError("log of an interval not certainly positive: " + x.str());
    Interval r(Interval::Uninit{}, x.precision());
    mpfr_log(r.lo_, x.lo_, MPFR_RNDD);
    mpfr_log(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

inline Interval sqrt(const Interval& x) {
    if (mpfr_sgn(x.lo_) < 0) throw DomainError("sqrt of an interval not certainly non-negative: " + x.str());
    Interval r(Interval::Uninit{}, x.precision());
    mpfr_sqrt(r.lo_, x.lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

inline Interval atan(const Interval& x) {
    Interval r(Interval::Uninit{}, x.precision());
    mpfr_atan(r.lo_, x.lo_, MPFR_RNDD);
    mpfr_atan(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

inline Interval abs(const Interval& x) {
    if (mpfr_sgn(x.lo_) >= 0) return x;
    if (mpfr_sgn(x.hi_) <= 0) return -x;
    Interval r(Interval::Uninit{}, x.precision());
    mpfr_set_zero(r.lo_, 1);
    mpfr_neg(r.hi_, x.lo_, MPFR_RNDU);
    if (mpfr_less_p(r.hi_, x.hi_)) mpfr_set(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

inline Interval sqr(const Interval& x) {
    Interval a = abs(x);
    Interval r(Interval::Uninit{}, x.precision());
    mpfr_sqr(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_sqr(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

/// x * 2^k, exact.
inline Interval mul_2si(const Interval& x, long k) {
    Interval r(Interval::Uninit{}, x.precision());
    mpfr_mul_2si(r.lo_, x.lo_, k, MPFR_RNDD);
    mpfr_mul_2si(r.hi_, x.hi_, k, MPFR_RNDU);
    return r;
}

namespace detail {

// Integers k with k in [q.lo, q.hi]: returns (kmin, kmax); empty when kmin > kmax.
inline std::pair<mpz_class, mpz_class> integer_span(const Interval& q) {
    mpz_class kmin, kmax;
    mpfr_get_z(kmin.get_mpz_t(), q.lower(), MPFR_RNDU);
    mpfr_get_z(kmax.get_mpz_t(), q.upper(), MPFR_RNDD);
    return {kmin, kmax};
}

// Range of cos (shift = 0) or sin (shift = 1/2) over x, where extremes of the
// function sit at (k + shift) * pi with value (-1)^k.
template <class Eval>
inline Interval trig_range(const Interval& x, Interval q, Eval eval) {
    if (!x.is_finite()) return Interval::from_endpoints(Interval(-1L).lower(), Interval(1L).upper(), x.precision());
    auto [kmin, kmax] = integer_span(q);
    mpfr_prec_t p = x.precision();
    Mpfr a(p), b(p), lo(p), hi(p);
    if (kmax - kmin >= 1) {
        mpfr_set_si(lo.v, -1, MPFR_RNDD);
        mpfr_set_si(hi.v, 1, MPFR_RNDU);
        return Interval::from_endpoints(lo.v, hi.v, p);
    }
    eval(a.v, x.lower(), MPFR_RNDD);
    eval(b.v, x.upper(), MPFR_RNDD);
    mpfr_min(lo.v, a.v, b.v, MPFR_RNDD);
    eval(a.v, x.lower(), MPFR_RNDU);
    eval(b.v, x.upper(), MPFR_RNDU);
    mpfr_max(hi.v, a.v, b.v, MPFR_RNDU);
    if (kmin == kmax) {
        if (mpz_even_p(kmin.get_mpz_t())) {
            mpfr_set_si(hi.v, 1, MPFR_RNDU);
        } else {
            mpfr_set_si(lo.v, -1, MPFR_RNDD);
        }
    }
    // Correctly rounded endpoints never leave [-1, 1].
    return Interval::from_endpoints(lo.v, hi.v, p);
}

}  // namespace detail

inline Interval cos(const Interval& x) {
    Interval q = x.is_finite() ? x / Interval::pi(x.precision()) : Interval();
    return detail::trig_range(x, q, [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) { mpfr_cos(r, a, rnd); });
}

inline Interval sin(const Interval& x) {
    Interval q = x.is_finite() ? x / Interval::pi(x.precision()) - Interval::from_rational(1, 2, x.precision())
                               : Interval();
    return detail::trig_range(x, q, [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) { mpfr_sin(r, a, rnd); });
}

/// Interval extension of min(x, y).
inline Interval min(const Interval& a, const Interval& b) {
    Interval r(Interval::Uninit{}, std::max(a.precision(), b.precision()));
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

/// Interval extension of max(x, y).
inline Interval max(const Interval& a, const Interval& b) {
    Interval r(Interval::Uninit{}, std::max(a.precision(), b.precision()));
    mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

/// Image of x under t -> ||t||, the distance from t to the nearest integer.
inline Interval nearest_int_distance(const Interval& x) {
    mpfr_prec_t p = x.precision();
    Interval r(Interval::Uninit{}, p);
    if (!x.is_finite()) {
        mpfr_set_zero(r.lo_, 1);
        mpfr_set_d(r.hi_, 0.5, MPFR_RNDU);
        return r;
    }
    // ||t|| = |t - round(t)|, evaluated at an endpoint with rounding `rnd`.
    auto fold = [p](mpfr_ptr out, mpfr_srcptr t, mpfr_rnd_t rnd) {
        detail::Mpfr n(std::max<mpfr_prec_t>(p, mpfr_get_prec(t)));
        mpfr_rint(n.v, t, MPFR_RNDN);
        mpfr_sub(out, t, n.v, rnd == MPFR_RNDD ? MPFR_RNDZ : MPFR_RNDA);
        mpfr_abs(out, out, rnd);
    };
    detail::Mpfr a(p), b(p);
    fold(a.v, x.lo_, MPFR_RNDD);
    fold(b.v, x.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, a.v, b.v, MPFR_RNDD);
    fold(a.v, x.lo_, MPFR_RNDU);
    fold(b.v, x.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, a.v, b.v, MPFR_RNDU);

    // An integer inside x pulls the minimum to 0; a half-integer pushes the maximum to 1/2.
    auto [kmin, kmax] = detail::integer_span(x);
    if (kmin <= kmax) mpfr_set_zero(r.lo_, 1);
    Interval shifted = x - Interval::from_rational(1, 2, p);
    auto [hmin, hmax] = detail::integer_span(shifted);
    if (hmin <= hmax) mpfr_set_d(r.hi_, 0.5, MPFR_RNDU);
    if (mpfr_cmp_d(r.hi_, 0.5) > 0) mpfr_set_d(r.hi_, 0.5, MPFR_RNDU);
    if (mpfr_sgn(r.lo_) < 0) mpfr_set_zero(r.lo_, 1);
    return r;
}

/// True only if the relation holds for every pair (x, y) in a x b.
inline bool certainly(const Interval& a, Rel rel, const Interval& b) {
    switch (rel) {
    case Rel::lt: return mpfr_less_p(a.upper(), b.lower());
    case Rel::le: return mpfr_lessequal_p(a.upper(), b.lower());
    case Rel::gt: return mpfr_greater_p(a.lower(), b.upper());
    case Rel::ge: return mpfr_greaterequal_p(a.lower(), b.upper());
    }
    return false;
}

inline bool certainly_positive(const Interval& a) { return mpfr_sgn(a.lower()) > 0; }
inline bool certainly_negative(const Interval& a) { return mpfr_sgn(a.upper()) < 0; }

enum class RingOp { add, sub, mul, div };

inline Interval iv_ring(const Interval& a, const Interval& b, RingOp op) {
    switch (op) {
    case RingOp::add: return a + b;
    case RingOp::sub: return a - b;
    case RingOp::mul: return a * b;
    case RingOp::div: return a / b;
    }
    throw ArgumentError("unknown ring operation");
}

enum class Elementary { exp, log, cos, sin, sqrt, abs, neg };

inline Interval iv_elementary(const Interval& x, Elementary fn) {
    switch (fn) {
    case Elementary::exp: return exp(x);
    case Elementary::log: return log(x);
    case Elementary::cos: return cos(x);
    case Elementary::sin: return sin(x);
    case Elementary::sqrt: return sqrt(x);
    case Elementary::abs: return abs(x);
    case Elementary::neg: return -x;
    }
    throw ArgumentError("unknown elementary function");
}

}  // namespace zdc::rigor
