#pragma once

// The rectangular contour z1(t), the rotation schedule alpha_j and the
// per-segment quantities of the mesh t_j = j/m.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zdc/error.hpp"
#include "zdc/parallel.hpp"
#include "zdc/rigor/interval.hpp"
#include "zdc/tail.hpp"
#include "zdc/zeta_data.hpp"

namespace zdc::contour {

using rigor::Interval;
using rigor::Rel;

/// A complex enclosure as a pair of real intervals.
struct Complex {
    Interval re;
    Interval im;

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
};

/// Re(a * e^{-i alpha}) given cos(alpha), sin(alpha).
inline Interval rotated_real(const Complex& a, const Interval& ca, const Interval& sa) {
    return a.re * ca + a.im * sa;
}

inline Interval modulus(const Complex& a) { return rigor::sqrt(rigor::sqr(a.re) + rigor::sqr(a.im)); }

struct Breakpoint {
    mpq_class abscissa;
    Interval value;
};

struct ContourConfig {
    Interval delta;
    Interval Y0;
    Interval Y1;
    long m = 0;
    std::vector<Breakpoint> alpha_breakpoints;

    void validate() const {
        if (!rigor::certainly_positive(delta)) throw ArgumentError("contour: delta must be positive");
        if (!rigor::certainly_positive(Y0) || !rigor::certainly(Y0, Rel::lt, Y1)) {
            throw ArgumentError("contour: need 0 < Y0 < Y1");
        }
        if (m < 2 || m % 2 != 0) throw ArgumentError("contour: m must be even and >= 2");
        const auto& bp = alpha_breakpoints;
        if (bp.size() < 2) throw ArgumentError("contour: need at least two alpha breakpoints");
        if (bp.front().abscissa != 0 || !bp.front().value.contains(Interval(0L).lower())) {
            throw ArgumentError("contour: alpha breakpoints must start at (0, 0)");
        }
        Interval pi = Interval::pi(bp.back().value.precision());
        if (bp.back().abscissa != mpq_class(1, 2) || !(bp.back().value.contains(pi) || pi.contains(bp.back().value))) {
            throw ArgumentError("contour: alpha breakpoints must end at (1/2, pi)");
        }
        for (std::size_t i = 1; i < bp.size(); ++i) {
            if (!(bp[i - 1].abscissa < bp[i].abscissa)) {
                throw ArgumentError("contour: breakpoint abscissas must be strictly increasing");
            }
        }
    }
};

/// z1(t) for rational t in [0, 1].
inline Complex z1_point(const mpq_class& t, const ContourConfig& cfg) {
    if (t < 0 || t > 1) throw ArgumentError("z1_point: t outside [0, 1]");
    mpfr_prec_t p = std::max({cfg.delta.precision(), cfg.Y0.precision(), cfg.Y1.precision()});
    auto q = [p](const mpq_class& v) { return Interval::from_mpq(v, p); };
    const Interval& d = cfg.delta;
    if (t <= mpq_class(1, 8)) return {q(4 * t) * d, cfg.Y0};
    if (t <= mpq_class(3, 8)) return {mul_2si(d, -1), cfg.Y0 + q(4 * (t - mpq_class(1, 8))) * (cfg.Y1 - cfg.Y0)};
    if (t <= mpq_class(5, 8)) return {-(q(4 * (t - mpq_class(1, 2))) * d), cfg.Y1};
    if (t <= mpq_class(7, 8)) return {-mul_2si(d, -1), cfg.Y1 + q(4 * (t - mpq_class(5, 8))) * (cfg.Y0 - cfg.Y1)};
    return {q(4 * (t - 1)) * d, cfg.Y0};
}

/// The rational s in [0, 1] with Im z1(t) = Y0 + s (Y1 - Y0).
inline mpq_class height_parameter(const mpq_class& t) {
    if (t <= mpq_class(1, 8) || t >= mpq_class(7, 8)) return 0;
    if (t <= mpq_class(3, 8)) return 4 * (t - mpq_class(1, 8));
    if (t <= mpq_class(5, 8)) return 1;
    mpq_class s = 1 - 4 * (t - mpq_class(5, 8));
    s.canonicalize();
    return s;
}

/// The piecewise-linear alpha(s) for rational s in [0, 1/2].
inline Interval alpha_at(const mpq_class& s, const ContourConfig& cfg) {
    const auto& bp = cfg.alpha_breakpoints;
    if (s < bp.front().abscissa || s > bp.back().abscissa) throw ArgumentError("alpha: argument outside [0, 1/2]");
    std::size_t i = 1;
    while (i + 1 < bp.size() && s > bp[i].abscissa) ++i;
    const Breakpoint& a = bp[i - 1];
    const Breakpoint& b = bp[i];
    mpq_class frac = (s - a.abscissa) / (b.abscissa - a.abscissa);
    frac.canonicalize();
    return a.value + Interval::from_mpq(frac, a.value.precision()) * (b.value - a.value);
}

/// alpha_0 .. alpha_{m+1}.
inline std::vector<Interval> alpha_schedule(const ContourConfig& cfg) {
    cfg.validate();
    const long m = cfg.m;
    mpfr_prec_t p = cfg.alpha_breakpoints.back().value.precision();
    Interval pi = Interval::pi(p);
    std::vector<Interval> a(static_cast<std::size_t>(m + 2));
    for (long j = 1; j <= m; ++j) {
        if (j <= m / 2) {
            a[j] = -pi + alpha_at(mpq_class(2 * j - 1, 2 * m), cfg);
        } else {
            a[j] = pi - alpha_at(mpq_class(2 * m + 1 - 2 * j, 2 * m), cfg);
        }
    }
    a[m + 1] = mul_2si(pi, 1) + a[1];
    a[0] = a[m] - mul_2si(pi, 1);
    return a;
}

/// F_N^eta(z) = 1 - sum_{n<=N} amp_n e^{i omega_n z}.
inline Complex eval_FNeta(const Complex& z, const WeightSet& w) {
    if (!rigor::certainly_positive(z.im)) throw DomainError("eval_FNeta: Im z not certainly positive");
    mpfr_prec_t p = z.re.precision();
    Interval re(1L, p), im(0L, p);
    for (int n = 1; n <= w.N; ++n) {
        Interval e = w.amp(n) * rigor::exp(-(w.omega(n) * z.im));
        Interval th = w.omega(n) * z.re;
        re = re - e * rigor::cos(th);
        im = im - e * rigor::sin(th);
    }
    return {re, im};
}

/// f(z) = -sum_{n<=N} i omega_n amp_n e^{i omega_n z}, the derivative of F_N^eta.
inline Complex eval_f(const Complex& z, const WeightSet& w) {
    if (!rigor::certainly_positive(z.im)) throw DomainError("eval_f: Im z not certainly positive");
    mpfr_prec_t p = z.re.precision();
    Interval re(0L, p), im(0L, p);
    for (int n = 1; n <= w.N; ++n) {
        Interval e = w.omega(n) * w.amp(n) * rigor::exp(-(w.omega(n) * z.im));
        Interval th = w.omega(n) * z.re;
        re = re + e * rigor::sin(th);
        im = im - e * rigor::cos(th);
    }
    return {re, im};
}

/// M(y) = sum_{n<=N} amp_n omega_n^2 e^{-omega_n y}, bounding |f'| on Im z >= y.
inline Interval derivative_bound(const Interval& y, const WeightSet& w) {
    if (!rigor::certainly_positive(y)) throw DomainError("derivative_bound: y not certainly positive");
    Interval s(0L, y.precision());
    for (int n = 1; n <= w.N; ++n) s = s + w.amp(n) * rigor::sqr(w.omega(n)) * rigor::exp(-(w.omega(n) * y));
    return s;
}

struct FAndBound {
    Complex f;
    Interval M;
};

inline FAndBound eval_f_and_fprime_bound(const Complex& z, const Interval& y, const WeightSet& w) {
    return {eval_f(z, w), derivative_bound(y, w)};
}

struct Segment {
    Interval b;
    Interval x_lo;  // x'_j
    Interval x_hi;  // x''_j
    Interval y;
    Interval M;
    Interval tail;  // R~_N(y_j)
    tail::Branch tail_branch = tail::Branch::first;
    Interval start_term;  // Re(F e^{-i alpha_j}) + min(0, ...) at t_{j-1}
    Interval end_term;    // same at t_j
    Interval u;
};

struct ClaimStatus {
    bool certified = false;
    long worst_j = 0;
    std::string worst_margin;  // lower endpoint of the smallest margin
    std::string failure;       // empty when certified
};

struct ContourMesh {
    ContourConfig cfg;
    int N = 0;
    std::vector<Complex> points;  // z1(t_j), j = 0..m
    std::vector<Complex> F;       // F_N^eta at the points
    std::vector<Complex> f;       // f at the points
    std::vector<Interval> alpha;  // alpha_0 .. alpha_{m+1}
    std::vector<Segment> segments;  // index j-1
    ClaimStatus claim1;
    ClaimStatus claim2;

    long m() const { return cfg.m; }
    const Segment& segment(long j) const { return segments.at(static_cast<std::size_t>(j - 1)); }
    /// Certified lower bound for u_j, as a point interval.
    Interval u_lower(long j) const { return segment(j).u.lower_point(); }
};

struct MeshOptions {
    unsigned workers = 1;
    mpfr_prec_t tail_sum_precision = 64;
};

namespace detail {

inline std::string margin_text(const Interval& v) { return v.lo_str(10); }

}  // namespace detail

/// Builds every per-segment quantity and evaluates Claims 1 and 2 without
/// throwing; see build_mesh for the certifying variant.
inline ContourMesh build_mesh_unchecked(const ContourConfig& cfg, const WeightSet& w,
                                        const tail::TailBoundConfig& tcfg, const MeshOptions& opt = {}) {
    cfg.validate();
    if (tcfg.N != w.N) throw ArgumentError("tail config N differs from weight set N");
    ContourMesh mesh;
    mesh.cfg = cfg;
    mesh.N = w.N;
    const long m = cfg.m;
    const auto M = static_cast<std::size_t>(m);
    mesh.alpha = alpha_schedule(cfg);
    mesh.points.resize(M + 1);
    mesh.F.resize(M + 1);
    mesh.f.resize(M + 1);
    parallel_for(M + 1, opt.workers, [&](std::size_t j) {
        mesh.points[j] = z1_point(mpq_class(static_cast<long>(j), m), cfg);
        mesh.F[j] = eval_FNeta(mesh.points[j], w);
        mesh.f[j] = eval_f(mesh.points[j], w);
    });

    mesh.segments.resize(M);
    for (std::size_t j = 1; j <= M; ++j) {
        Segment& s = mesh.segments[j - 1];
        const Complex& a = mesh.points[j - 1];
        const Complex& b = mesh.points[j];
        Complex d = a - b;
        s.b = mul_2si(rigor::sqrt(rigor::sqr(d.re) + rigor::sqr(d.im)), -1);
        s.x_lo = rigor::min(a.re, b.re);
        s.x_hi = rigor::max(a.re, b.re);
        s.y = rigor::min(a.im, b.im);
    }

    // y_j takes few distinct real values (both vertical sides share them);
    // M and the tail are evaluated once per value, on the hull of its
    // enclosures.
    std::map<mpq_class, std::size_t> index;
    std::vector<Interval> distinct;
    std::vector<std::size_t> key_of(M);
    for (std::size_t j = 1; j <= M; ++j) {
        mpq_class h = std::min(height_parameter(mpq_class(static_cast<long>(j) - 1, m)),
                               height_parameter(mpq_class(static_cast<long>(j), m)));
        auto [it, fresh] = index.emplace(h, distinct.size());
        if (fresh) {
            distinct.push_back(mesh.segments[j - 1].y);
        } else {
            distinct[it->second] = Interval::hull(distinct[it->second], mesh.segments[j - 1].y);
        }
        key_of[j - 1] = it->second;
    }
    std::vector<Interval> Ms(distinct.size()), tails(distinct.size());
    std::vector<tail::Branch> branches(distinct.size());
    parallel_for(distinct.size(), opt.workers, [&](std::size_t k) {
        Ms[k] = derivative_bound(distinct[k], w);
        auto tb = tail::tail_bound_detail(distinct[k], w, tcfg, opt.tail_sum_precision, false);
        tails[k] = tb.value;
        branches[k] = tb.closed_form.active;
    });

    parallel_for(M, opt.workers, [&](std::size_t i) {
        Segment& s = mesh.segments[i];
        std::size_t k = key_of[i];
        s.M = Ms[k];
        s.tail = tails[k];
        s.tail_branch = branches[k];
        const Interval& al = mesh.alpha[i + 1];
        Interval ca = rigor::cos(al), sa = rigor::sin(al);
        // half of the directed step z1(t_j) - z1(t_{j-1}); its modulus is b_j
        Complex h{mul_2si(mesh.points[i + 1].re - mesh.points[i].re, -1),
                  mul_2si(mesh.points[i + 1].im - mesh.points[i].im, -1)};
        Interval zero(0L, s.b.precision());
        Interval lin0 = rotated_real(mesh.f[i] * h, ca, sa);
        Interval lin1 = -rotated_real(mesh.f[i + 1] * h, ca, sa);
        s.start_term = rotated_real(mesh.F[i], ca, sa) + rigor::min(zero, lin0);
        s.end_term = rotated_real(mesh.F[i + 1], ca, sa) + rigor::min(zero, lin1);
        s.u = rigor::min(s.start_term, s.end_term) - mul_2si(rigor::sqr(s.b) * s.M, -1) - s.tail;
    });

    // Claim 1
    {
        mpfr_prec_t p = mesh.alpha[0].precision();
        Interval pi = Interval::pi(p);
        Interval step_cap = pi / w.omega(w.N);
        ClaimStatus& c = mesh.claim1;
        c.certified = true;
        std::optional<Interval> worst;
        for (long j = 1; j <= m; ++j) {
            Interval jump = rigor::abs(mesh.alpha[j] - mesh.alpha[j - 1]);
            Interval len = mul_2si(mesh.segment(j).b, 1);
            Interval margin = rigor::min(pi - jump, step_cap - len);
            if (!worst || mpfr_cmp(margin.lower(), worst->lower()) < 0) {
                worst = margin;
                c.worst_j = j;
            }
            if (c.certified && !rigor::certainly(jump, Rel::lt, pi)) {
                c.certified = false;
                c.failure = "j = " + std::to_string(j) + ": |alpha_j - alpha_{j-1}| = " + jump.str() +
                            " not certainly < pi";
            }
            if (c.certified && !rigor::certainly(len, Rel::lt, step_cap)) {
                c.certified = false;
                c.failure = "j = " + std::to_string(j) + ": |z1(t_j) - z1(t_{j-1})| = " + len.str() +
                            " not certainly < pi/omega_N = " + step_cap.str();
            }
        }
        c.worst_margin = detail::margin_text(*worst);
    }
    // Claim 2
    {
        ClaimStatus& c = mesh.claim2;
        c.certified = true;
        const Interval* worst = nullptr;
        for (long j = 1; j <= m; ++j) {
            const Segment& s = mesh.segment(j);
            if (!worst || mpfr_cmp(s.u.lower(), worst->lower()) < 0) {
                worst = &s.u;
                c.worst_j = j;
            }
            if (c.certified && !rigor::certainly_positive(s.u)) {
                c.certified = false;
                std::ostringstream os;
                os << "j = " << j << ": u_j = " << s.u.str() << " not certainly > 0 (y_j = " << s.y.str()
                   << ", tail = " << s.tail.str() << ", b_j^2 M_j / 2 = " << mul_2si(rigor::sqr(s.b) * s.M, -1).str()
                   << ")";
                c.failure = os.str();
            }
        }
        c.worst_margin = detail::margin_text(*worst);
    }
    return mesh;
}

/// Builds the mesh and certifies Claims 1 and 2; throws CertificationError
/// naming the first failing j otherwise.
inline ContourMesh build_mesh(const ContourConfig& cfg, const WeightSet& w, const tail::TailBoundConfig& tcfg,
                              const MeshOptions& opt = {}) {
    ContourMesh mesh = build_mesh_unchecked(cfg, w, tcfg, opt);
    if (!mesh.claim1.certified) throw CertificationError("claim 1 failed at " + mesh.claim1.failure);
    if (!mesh.claim2.certified) throw CertificationError("claim 2 failed at " + mesh.claim2.failure);
    return mesh;
}

enum class Straddle { none, even, odd, ambiguous_even, ambiguous_odd, ambiguous };

inline const char* straddle_name(Straddle s) {
    switch (s) {
        case Straddle::none: return "none";
        case Straddle::even: return "even";
        case Straddle::odd: return "odd";
        case Straddle::ambiguous_even: return "possibly-even";
        case Straddle::ambiguous_odd: return "possibly-odd";
        case Straddle::ambiguous: return "ambiguous";
    }
    return "?";
}

struct BandAngle {
    Interval beta_lo;  // beta'_{n,j}
    Interval beta_hi;  // beta''_{n,j}
    Interval phi_lo;   // phi'_{n,j}
    Interval phi_hi;   // phi''_{n,j}
    Straddle kind = Straddle::none;
};

struct Bands {
    int N = 0;
    long m = 0;
    std::vector<BandAngle> data;  // (n-1) * m + (j-1)
    ClaimStatus claim3;

    const BandAngle& at(int n, long j) const {
        return data.at(static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(m) + static_cast<std::size_t>(j - 1));
    }
};

namespace detail {

// Whether some integer k lies in [a, b] for all (certain) or some (possible)
// values of the enclosures a, b.
struct IntegerInside {
    bool certain;
    bool possible;
};

inline IntegerInside integer_inside(const Interval& a, const Interval& b) {
    auto whole = [](mpfr_srcptr lo, mpfr_srcptr hi) {
        mpz_class kmin, kmax;
        mpfr_get_z(kmin.get_mpz_t(), lo, MPFR_RNDU);
        mpfr_get_z(kmax.get_mpz_t(), hi, MPFR_RNDD);
        return kmin <= kmax && mpfr_lessequal_p(lo, hi);
    };
    return {whole(a.upper(), b.lower()), whole(a.lower(), b.upper())};
}

}  // namespace detail

/// Fills phi', phi'' and the straddle kind of `b` from beta', beta''.
inline void classify_band(BandAngle& b) {
    mpfr_prec_t p = std::max(b.beta_lo.precision(), b.beta_hi.precision());
    Interval pi = Interval::pi(p);
    Interval two_pi = mul_2si(pi, 1);
    Interval zero(0L, p);
    Interval qa = b.beta_lo / two_pi;
    Interval qb = b.beta_hi / two_pi;
    Interval na = rigor::nearest_int_distance(qa);
    Interval nb = rigor::nearest_int_distance(qb);
    Interval lo = two_pi * rigor::min(na, nb);
    Interval hi = two_pi * rigor::max(na, nb);
    auto even = detail::integer_inside(qa, qb);
    Interval half(Interval::from_rational(1, 2, p));
    auto odd = detail::integer_inside(qa - half, qb - half);
    if (even.certain) {
        b.kind = Straddle::even;
        b.phi_lo = zero;
        b.phi_hi = hi;
    } else if (odd.certain) {
        b.kind = Straddle::odd;
        b.phi_lo = lo;
        b.phi_hi = pi;
    } else if (!even.possible && !odd.possible) {
        b.kind = Straddle::none;
        b.phi_lo = lo;
        b.phi_hi = hi;
    } else if (!odd.possible) {
        b.kind = Straddle::ambiguous_even;
        b.phi_lo = zero;
        b.phi_hi = hi;
    } else if (!even.possible) {
        b.kind = Straddle::ambiguous_odd;
        b.phi_lo = lo;
        b.phi_hi = pi;
    } else {
        b.kind = Straddle::ambiguous;
        b.phi_lo = zero;
        b.phi_hi = pi;
    }
}

/// phi'_{n,j} and phi''_{n,j} with the straddle cases decided in interval
/// arithmetic. Throws CertificationError if beta'' - beta' < pi (Claim 3)
/// cannot be certified.
inline Bands band_angles(const ContourMesh& mesh, const WeightSet& w, unsigned workers = 1) {
    Bands out;
    out.N = mesh.N;
    out.m = mesh.m();
    const auto M = static_cast<std::size_t>(out.m);
    out.data.resize(static_cast<std::size_t>(out.N) * M);
    mpfr_prec_t p = mesh.alpha[0].precision();
    Interval pi = Interval::pi(p);
    std::vector<std::string> failures(static_cast<std::size_t>(out.N));
    parallel_for(static_cast<std::size_t>(out.N), workers, [&](std::size_t idx) {
        int n = static_cast<int>(idx) + 1;
        const Interval& om = w.omega(n);
        for (std::size_t j = 1; j <= M; ++j) {
            const Segment& s = mesh.segments[j - 1];
            BandAngle& b = out.data[idx * M + (j - 1)];
            const Interval& al = mesh.alpha[j];
            b.beta_lo = pi + om * s.x_lo - al;
            b.beta_hi = pi + om * s.x_hi - al;
            if (failures[idx].empty() && !rigor::certainly(b.beta_hi - b.beta_lo, Rel::lt, pi)) {
                failures[idx] = "n = " + std::to_string(n) + ", j = " + std::to_string(j) +
                                ": beta'' - beta' = " + (b.beta_hi - b.beta_lo).str() + " not certainly < pi";
            }
            classify_band(b);
        }
    });
    out.claim3.certified = true;
    for (const auto& f : failures) {
        if (!f.empty()) {
            out.claim3.certified = false;
            out.claim3.failure = f;
            throw CertificationError("claim 3 failed at " + f);
        }
    }
    // smallest pi - (beta'' - beta') over all (n, j)
    std::optional<Interval> worst;
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        Interval margin = pi - (out.data[i].beta_hi - out.data[i].beta_lo);
        if (!worst || mpfr_cmp(margin.lower(), worst->lower()) < 0) {
            worst = margin;
            out.claim3.worst_j = static_cast<long>(i % M) + 1;
        }
    }
    if (worst) out.claim3.worst_margin = detail::margin_text(*worst);
    return out;
}

}  // namespace zdc::contour
