#pragma once

// Shared fixtures and an independent high-precision oracle for the tests.

#include <gmpxx.h>
#include <mpfr.h>

#include <random>
#include <string>

#include "zdc/config.hpp"
#include "zdc/contour.hpp"
#include "zdc/penalty.hpp"
#include "zdc/tail.hpp"
#include "zdc/zeta_data.hpp"

#ifndef ZDC_TEST_DATA_DIR
#define ZDC_TEST_DATA_DIR "data"
#endif

namespace testing_support {

using zdc::rigor::Interval;

inline const zdc::ZeroTable& fixture() {
    static const zdc::ZeroTable t = zdc::load_zero_table_file(std::string(ZDC_TEST_DATA_DIR) + "/zeros.txt");
    return t;
}

/// Round-to-nearest MPFR scalar for oracle computations, default 640 bits.
class Big {
public:
    explicit Big(mpfr_prec_t prec = 640) { mpfr_init2(v, prec); mpfr_set_zero(v, 1); }
    Big(const char* dec, mpfr_prec_t prec = 640) : Big(prec) { mpfr_set_str(v, dec, 10, MPFR_RNDN); }
    Big(double x, mpfr_prec_t prec = 640) : Big(prec) { mpfr_set_d(v, x, MPFR_RNDN); }
    Big(const Big& o) : Big(mpfr_get_prec(o.v)) { mpfr_set(v, o.v, MPFR_RNDN); }
    Big& operator=(const Big& o) {
        mpfr_set(v, o.v, MPFR_RNDN);
        return *this;
    }
    ~Big() { mpfr_clear(v); }

    double d() const { return mpfr_get_d(v, MPFR_RNDN); }

    mpfr_t v;
};

inline Big operator+(const Big& a, const Big& b) { Big r; mpfr_add(r.v, a.v, b.v, MPFR_RNDN); return r; }
inline Big operator-(const Big& a, const Big& b) { Big r; mpfr_sub(r.v, a.v, b.v, MPFR_RNDN); return r; }
inline Big operator*(const Big& a, const Big& b) { Big r; mpfr_mul(r.v, a.v, b.v, MPFR_RNDN); return r; }
inline Big operator/(const Big& a, const Big& b) { Big r; mpfr_div(r.v, a.v, b.v, MPFR_RNDN); return r; }

template <int (*F)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)>
inline Big apply(const Big& a) {
    Big r;
    F(r.v, a.v, MPFR_RNDN);
    return r;
}
inline Big bexp(const Big& a) { return apply<mpfr_exp>(a); }
inline Big blog(const Big& a) { return apply<mpfr_log>(a); }
inline Big bcos(const Big& a) { return apply<mpfr_cos>(a); }
inline Big bsin(const Big& a) { return apply<mpfr_sin>(a); }
inline Big bsqrt(const Big& a) { return apply<mpfr_sqrt>(a); }
inline Big bpi() {
    Big r;
    mpfr_const_pi(r.v, MPFR_RNDN);
    return r;
}

/// Whether the enclosure contains the oracle value.
inline bool holds(const Interval& x, const Big& b) { return x.contains(b.v); }

inline zdc::contour::ContourConfig paper_contour(long m, mpfr_prec_t prec = zdc::rigor::default_precision()) {
    zdc::RunConfig c = zdc::paper_config();
    c.m = m;
    return zdc::contour_config(c, prec);
}

/// Mesh, bands and penalty family at a small scale, built once per process.
struct Reduced {
    int N;
    zdc::WeightSet w;
    zdc::tail::TailBoundConfig tcfg;
    zdc::contour::ContourMesh mesh;
    zdc::contour::Bands bands;
    zdc::penalty::PenaltyFamily fam;
};

inline const Reduced& reduced() {
    static const Reduced r = [] {
        const int N = 8;
        auto w = zdc::derive_weights(fixture(), N, zdc::rigor::default_precision(), 2000);
        auto tcfg = zdc::tail::TailBoundConfig::make(fixture(), N, 2000);
        auto mesh = zdc::contour::build_mesh(paper_contour(1500), w, tcfg);
        auto bands = zdc::contour::band_angles(mesh, w);
        auto fam = zdc::penalty::envelope_constants(mesh, bands, w);
        return Reduced{N, std::move(w), tcfg, std::move(mesh), std::move(bands), std::move(fam)};
    }();
    return r;
}

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20240611);
    return g;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

}  // namespace testing_support
