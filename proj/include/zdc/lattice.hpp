#pragma once

// Small integer combinations of the projected unit vectors (bounded LLL
// heuristic on high-precision point values) and their rigorous
// certification in interval arithmetic.

#include <gmpxx.h>
#include <mpfr.h>

#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "zdc/error.hpp"
#include "zdc/parallel.hpp"
#include "zdc/rigor/interval.hpp"
#include "zdc/zeta_data.hpp"

namespace zdc::lattice {

using rigor::Interval;
using rigor::Rel;

/// Round-to-nearest multiprecision point value. Only the heuristic uses it.
class Real {
public:
    explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        *v_ = *o.v_;
        o.v_->_mpfr_d = nullptr;
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        std::swap(*v_, *o.v_);
        return *this;
    }
    ~Real() {
        if (v_->_mpfr_d) mpfr_clear(v_);
    }

    static Real from_mpz(const mpz_class& z, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_z(r.v_, z.get_mpz_t(), MPFR_RNDN);
        return r;
    }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    /// Nearest integer, ties to even.
    mpz_class round() const {
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
        return z;
    }

    friend Real operator+(const Real& a, const Real& b) { return a.binary(b, mpfr_add); }
    friend Real operator-(const Real& a, const Real& b) { return a.binary(b, mpfr_sub); }
    friend Real operator*(const Real& a, const Real& b) { return a.binary(b, mpfr_mul); }
    friend Real operator/(const Real& a, const Real& b) { return a.binary(b, mpfr_div); }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_); }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_); }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_); }

private:
    using Op = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
    Real binary(const Real& b, Op op) const {
        Real r(std::max(precision(), b.precision()));
        op(r.v_, v_, b.v_, MPFR_RNDN);
        return r;
    }

    mpfr_t v_;
};

using RealVector = std::vector<Real>;
using CoeffMatrix = std::vector<std::vector<mpz_class>>;

inline Real dot(const RealVector& a, const RealVector& b) {
    Real s(a.at(0).precision());
    for (std::size_t i = 0; i < a.size(); ++i) s = s + a[i] * b[i];
    return s;
}

inline mpfr_prec_t digits_to_bits(int digits) {
    return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 16;
}

struct ProjectionSet {
    int N = 0;
    std::vector<Interval> theta;           // omega_n / 2 pi
    std::vector<Interval> mu;              // theta_j / (theta . theta)
    std::vector<std::vector<Interval>> u;  // u[j][n] = delta_{jn} - mu_j theta_n
    mpfr_prec_t shadow_bits = 0;
    std::vector<RealVector> shadow;  // point values of u for the heuristic
};

/// Builds the projections from interval theta. The point shadow is computed
/// separately from the midpoints of theta at `precision_digits`.
inline ProjectionSet make_projections_from_theta(const std::vector<Interval>& theta, int precision_digits) {
    const int N = static_cast<int>(theta.size());
    if (N < 2) throw ArgumentError("make_projections: need N >= 2");
    ProjectionSet ps;
    ps.N = N;
    ps.theta = theta;
    mpfr_prec_t p = theta[0].precision();
    Interval tt(0L, p);
    for (const auto& t : theta) tt = tt + rigor::sqr(t);
    for (int j = 0; j < N; ++j) ps.mu.push_back(theta[j] / tt);
    ps.u.assign(N, std::vector<Interval>(N));
    for (int j = 0; j < N; ++j) {
        for (int n = 0; n < N; ++n) ps.u[j][n] = Interval(j == n ? 1L : 0L, p) - ps.mu[j] * theta[n];
    }
    for (int j = 0; j < N; ++j) {
        Interval d(0L, p);
        for (int n = 0; n < N; ++n) d = d + ps.u[j][n] * theta[n];
        Interval slack = rigor::abs(d);
        bool ok = d.contains_zero() || mpfr_cmp_d(slack.upper(), 10.0 * d.width()) <= 0;
        if (!ok) throw ValidationError("projection " + std::to_string(j + 1) + " not orthogonal to theta: " + d.str());
    }

    ps.shadow_bits = digits_to_bits(precision_digits);
    const mpfr_prec_t sb = ps.shadow_bits;
    RealVector th;
    for (const auto& t : theta) {
        Real r(sb);
        mpfr_add(r.get(), t.lower(), t.upper(), MPFR_RNDN);
        mpfr_div_2ui(r.get(), r.get(), 1, MPFR_RNDN);
        th.push_back(std::move(r));
    }
    Real tts = dot(th, th);
    ps.shadow.assign(N, RealVector());
    for (int j = 0; j < N; ++j) {
        Real m = th[j] / tts;
        for (int n = 0; n < N; ++n) {
            Real e = Real::from_mpz(j == n ? 1 : 0, sb);
            ps.shadow[j].push_back(e - m * th[n]);
        }
    }
    return ps;
}

inline ProjectionSet make_projections(const WeightSet& w, int precision_digits) {
    if (w.N < 2) throw ArgumentError("make_projections: need N >= 2");
    mpfr_prec_t p = w.gamma0.precision();
    Interval two_pi = mul_2si(Interval::pi(p), 1);
    std::vector<Interval> theta;
    for (int n = 1; n <= w.N; ++n) theta.push_back(w.omega(n) / two_pi);
    return make_projections_from_theta(theta, precision_digits);
}

struct LllOp {
    enum class Kind { reduce, swap };
    Kind kind;
    int k;  // 1-based rows
    int j;
    mpz_class q;  // reduce: row k -= q * row j
};

struct LllResult {
    CoeffMatrix C;
    bool early_return = false;
    long iterations = 0;
    long reductions = 0;
    long swaps = 0;
    std::vector<LllOp> log;
    double seconds = 0;
};

struct LllOptions {
    mpq_class delta = mpq_class(1, 4);
    mpz_class M;
    bool keep_log = false;
};

/// Algorithm 1 on arbitrary input vectors u_1..u_N (rows of `u`).
inline LllResult lll_reduce(const std::vector<RealVector>& u, const LllOptions& opt) {
    auto start = std::chrono::steady_clock::now();
    const int N = static_cast<int>(u.size());
    if (N < 1) throw ArgumentError("lll: no input vectors");
    const mpfr_prec_t prec = u[0][0].precision();
    const std::size_t D = u[0].size();

    LllResult res;
    CoeffMatrix& c = res.C;
    c.assign(N, std::vector<mpz_class>(N, 0));
    for (int k = 0; k < N; ++k) c[k][k] = 1;
    std::vector<RealVector> v = u, vs(N, RealVector(D, Real(prec)));
    std::vector<std::vector<Real>> mu(N, std::vector<Real>(N, Real(prec)));
    std::vector<Real> B(N, Real(prec));
    Real delta(prec);
    mpfr_set_q(delta.get(), opt.delta.get_mpq_t(), MPFR_RNDN);

    // A squared norm below this is round-off, given the coefficient sizes.
    auto noise_floor = [&](int a) {
        mpz_class s = 1;
        for (const auto& x : c[a - 1]) s += abs(x);
        Real f = Real::from_mpz(s, prec);
        mpfr_mul_2si(f.get(), f.get(), -(prec - 40), MPFR_RNDN);
        return f * f;
    };
    auto recompute = [&](int k) {
        RealVector r(D, Real(prec));
        for (int i = 1; i <= N; ++i) {
            if (c[k - 1][i - 1] == 0) continue;
            Real ci = Real::from_mpz(c[k - 1][i - 1], prec);
            for (std::size_t t = 0; t < D; ++t) r[t] = r[t] + ci * u[i - 1][t];
        }
        v[k - 1] = std::move(r);
    };
    auto divide_by_B = [&](const Real& x, int a) {
        if (mpfr_zero_p(B[a - 1].get()) || B[a - 1] <= noise_floor(a)) {
            throw HeuristicFailure("division by B_" + std::to_string(a) + " which is numerically zero");
        }
        return x / B[a - 1];
    };
    // Update(l, m), 1-based as in the pseudo-code.
    auto update = [&](int l, int m) {
        for (int a = 1; a <= l - 1; ++a) {
            for (int b = l; b <= m; ++b) mu[b - 1][a - 1] = divide_by_B(dot(v[b - 1], vs[a - 1]), a);
        }
        for (int a = l; a <= N; ++a) {
            RealVector s = v[a - 1];
            for (int b = 1; b <= a - 1; ++b) {
                for (std::size_t t = 0; t < D; ++t) s[t] = s[t] - mu[a - 1][b - 1] * vs[b - 1][t];
            }
            vs[a - 1] = std::move(s);
            B[a - 1] = dot(vs[a - 1], vs[a - 1]);
            for (int b = a + 1; b <= N; ++b) mu[b - 1][a - 1] = divide_by_B(dot(v[b - 1], vs[a - 1]), a);
        }
    };
    auto finish = [&] {
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return res;
    };

    update(1, N);
    int k = 2;
    while (k != N + 1) {
        ++res.iterations;
        for (int j = k - 1; j >= 1; --j) {
            mpz_class q = mu[k - 1][j - 1].round();
            for (int i = 0; i < N; ++i) {
                if (abs(c[k - 1][i] - q * c[j - 1][i]) > opt.M) {
                    res.early_return = true;
                    return finish();
                }
            }
            if (q == 0) continue;  // row unchanged, nothing to recompute
            for (int i = 0; i < N; ++i) c[k - 1][i] -= q * c[j - 1][i];
            if (opt.keep_log) res.log.push_back({LllOp::Kind::reduce, k, j, q});
            ++res.reductions;
            recompute(k);
            if (dot(v[k - 1], v[k - 1]) <= noise_floor(k)) {
                throw HeuristicFailure("combination " + std::to_string(k) +
                                       " vanished numerically; the input looks dependent over Q");
            }
            update(k, k);
        }
        Real m2 = mu[k - 1][k - 2] * mu[k - 1][k - 2];
        if (B[k - 1] >= (delta - m2) * B[k - 2]) {
            ++k;
        } else {
            std::swap(c[k - 2], c[k - 1]);
            std::swap(v[k - 2], v[k - 1]);
            if (opt.keep_log) res.log.push_back({LllOp::Kind::swap, k - 1, k, 0});
            ++res.swaps;
            update(k - 1, k);
            k = std::max(2, k - 1);
        }
    }
    return finish();
}

/// Algorithm 1 on the projected unit vectors. Because these span only N-1
/// dimensions, a proper run always ends at the coefficient bound; ending
/// any other way is reported as a heuristic failure.
inline LllResult lll_bounded(const ProjectionSet& proj, const mpq_class& lll_delta, const mpz_class& M,
                             bool keep_log = false) {
    LllOptions opt;
    opt.delta = lll_delta;
    opt.M = M;
    opt.keep_log = keep_log;
    LllResult r = lll_reduce(proj.shadow, opt);
    if (!r.early_return) {
        throw HeuristicFailure("reduction terminated before reaching the coefficient bound; the input looks dependent over Q");
    }
    return r;
}

/// Re-applies a recorded operation log to the identity matrix.
inline CoeffMatrix replay(const std::vector<LllOp>& log, int N) {
    CoeffMatrix c(N, std::vector<mpz_class>(N, 0));
    for (int k = 0; k < N; ++k) c[k][k] = 1;
    for (const auto& op : log) {
        if (op.kind == LllOp::Kind::swap) {
            std::swap(c[op.k - 1], c[op.j - 1]);
        } else {
            for (int i = 0; i < N; ++i) c[op.k - 1][i] -= op.q * c[op.j - 1][i];
        }
    }
    return c;
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline mpz_class exact_determinant(CoeffMatrix a) {
    const int n = static_cast<int>(a.size());
    if (n == 0) return 1;
    int sign = 1;
    mpz_class prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int r = k + 1;
            while (r < n && a[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

struct TilingCertificate {
    CoeffMatrix C;
    Interval d;
    std::vector<Interval> sums;  // sum_k |sum_j c_{kj} u_{jn}|, n = 1..N
    mpz_class det;
    bool det_nonzero = false;
    int worst_n = 0;
    Interval max_sum;
};

inline std::size_t max_bits(const CoeffMatrix& C) {
    std::size_t b = 1;
    for (const auto& row : C) {
        for (const auto& x : row) b = std::max(b, mpz_sizeinbase(x.get_mpz_t(), 2));
    }
    return b;
}

/// Per-coordinate sums in interval arithmetic from the interval theta, via
/// sum_j c_{kj} u_{jn} = c_{kn} - theta_n sum_j c_{kj} mu_j.
inline std::vector<Interval> coordinate_sums(const CoeffMatrix& C, const ProjectionSet& proj, unsigned workers = 1,
                                             mpfr_prec_t extra_bits = 0) {
    const int N = proj.N;
    if (static_cast<int>(C.size()) != N) throw ArgumentError("certify: matrix size differs from N");
    mpfr_prec_t p = proj.theta[0].precision() + static_cast<mpfr_prec_t>(max_bits(C)) + 64 + extra_bits;
    std::vector<Interval> s(N);
    for (int k = 0; k < N; ++k) {
        Interval acc(0L, p);
        for (int j = 0; j < N; ++j) {
            if (C[k][j] != 0) acc = acc + Interval::from_mpz(C[k][j], p) * proj.mu[j].with_precision(p);
        }
        s[k] = acc;
    }
    std::vector<Interval> sums(N);
    parallel_for(static_cast<std::size_t>(N), workers, [&](std::size_t n) {
        Interval t(0L, p);
        Interval th = proj.theta[n].with_precision(p);
        for (int k = 0; k < N; ++k) t = t + rigor::abs(Interval::from_mpz(C[k][n], p) - s[k] * th);
        sums[n] = t;
    });
    return sums;
}

/// Certifies sum_k |sum_j c_{kj} u_{jn}| < d_target for every n and det(C) != 0.
inline TilingCertificate certify(const CoeffMatrix& C, const ProjectionSet& proj, const Interval& d_target,
                                 unsigned workers = 1) {
    TilingCertificate cert;
    cert.C = C;
    cert.d = d_target;
    cert.sums = coordinate_sums(C, proj, workers);
    cert.max_sum = cert.sums[0];
    for (int n = 0; n < proj.N; ++n) {
        if (mpfr_cmp(cert.sums[n].upper(), cert.max_sum.upper()) > 0 || n == 0) {
            cert.max_sum = cert.sums[n];
            cert.worst_n = n + 1;
        }
    }
    for (int n = 0; n < proj.N; ++n) {
        if (!rigor::certainly(cert.sums[n], Rel::lt, d_target)) {
            throw CertificationError("tiling bound not certified at coordinate n = " + std::to_string(n + 1) +
                                     ": sum = " + cert.sums[n].str() + " vs d = " + d_target.str() +
                                     " (worst coordinate " + std::to_string(cert.worst_n) + ")");
        }
    }
    cert.det = exact_determinant(C);
    cert.det_nonzero = cert.det != 0;
    if (!cert.det_nonzero) throw CertificationError("coefficient matrix is singular (exact determinant 0)");
    return cert;
}

}  // namespace zdc::lattice
