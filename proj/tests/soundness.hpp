#pragma once

// Randomized containment checks of the interval layer against a 640-bit
// oracle. Shared by the unit tests (small counts) and the acceptance run.

#include <functional>
#include <string>
#include <vector>

#include "support.hpp"
#include "zdc/rigor/interval.hpp"

namespace testing_support {

struct SoundnessCase {
    std::string name;
    long checks = 0;
    long violations = 0;
    std::string first_violation;
};

namespace soundness_detail {

struct Sample {
    double lo, hi;
};

inline Sample draw(double a, double b, double max_width) {
    double x = uniform(a, b);
    double w = std::abs(uniform(0, max_width)) * (uniform(0, 1) < 0.2 ? 0.0 : 1.0);
    return {x, std::min(b, x + w)};
}

inline Interval make(const Sample& s, mpfr_prec_t p) {
    return Interval::hull(Interval::from_double(s.lo, p), Interval::from_double(s.hi, p));
}

// lo, hi and the exact midpoint.
inline std::vector<Big> probes(const Sample& s) {
    Big a(s.lo), b(s.hi);
    Big m = (a + b);
    mpfr_div_2ui(m.v, m.v, 1, MPFR_RNDN);
    return {a, m, b};
}

}  // namespace soundness_detail

/// Runs `count` random checks for every operation and returns per-op tallies.
inline std::vector<SoundnessCase> interval_soundness(long count) {
    using namespace soundness_detail;
    namespace r = zdc::rigor;
    std::vector<SoundnessCase> out;
    auto precision = [] { return static_cast<mpfr_prec_t>(53 + (rng()() % 4) * 64); };

    auto unary = [&](const std::string& name, double a, double b, double width,
                     std::function<Interval(const Interval&)> f, std::function<Big(const Big&)> g) {
        SoundnessCase c;
        c.name = name;
        for (long i = 0; i < count; ++i) {
            Sample s = draw(a, b, width);
            Interval y = f(make(s, precision()));
            for (const Big& x : probes(s)) {
                ++c.checks;
                Big v = g(x);
                if (!holds(y, v)) {
                    if (c.violations++ == 0) c.first_violation = "x = " + std::to_string(x.d()) + ", got " + y.str();
                }
            }
        }
        out.push_back(c);
    };
    auto binary = [&](const std::string& name, double a, double b, double c2a, double c2b,
                      std::function<Interval(const Interval&, const Interval&)> f,
                      std::function<Big(const Big&, const Big&)> g) {
        SoundnessCase c;
        c.name = name;
        for (long i = 0; i < count; ++i) {
            Sample s = draw(a, b, (b - a) / 4), t = draw(c2a, c2b, (c2b - c2a) / 4);
            mpfr_prec_t p = precision();
            Interval y = f(make(s, p), make(t, p));
            for (const Big& x : probes(s)) {
                for (const Big& z : probes(t)) {
                    ++c.checks;
                    if (!holds(y, g(x, z))) {
                        if (c.violations++ == 0) c.first_violation = "got " + y.str();
                    }
                }
            }
        }
        out.push_back(c);
    };

    binary("add", -1e6, 1e6, -1e6, 1e6, [](auto& x, auto& y) { return x + y; }, [](auto& x, auto& y) { return x + y; });
    binary("sub", -1e6, 1e6, -1e6, 1e6, [](auto& x, auto& y) { return x - y; }, [](auto& x, auto& y) { return x - y; });
    binary("mul", -1e3, 1e3, -1e3, 1e3, [](auto& x, auto& y) { return x * y; }, [](auto& x, auto& y) { return x * y; });
    binary("div", -1e3, 1e3, 0.5, 1e3, [](auto& x, auto& y) { return x / y; }, [](auto& x, auto& y) { return x / y; });
    unary("exp", -60, 60, 2, [](auto& x) { return r::exp(x); }, bexp);
    unary("log", 1e-6, 1e6, 10, [](auto& x) { return r::log(x); }, blog);
    unary("cos", -100, 100, 8, [](auto& x) { return r::cos(x); }, bcos);
    unary("sin", -100, 100, 8, [](auto& x) { return r::sin(x); }, bsin);
    unary("sqrt", 0, 1e6, 100, [](auto& x) { return r::sqrt(x); }, bsqrt);
    unary("abs", -10, 10, 5, [](auto& x) { return r::abs(x); }, [](const Big& x) {
        Big y;
        mpfr_abs(y.v, x.v, MPFR_RNDN);
        return y;
    });
    unary("neg", -1e6, 1e6, 10, [](auto& x) { return -x; }, [](const Big& x) {
        Big y;
        mpfr_neg(y.v, x.v, MPFR_RNDN);
        return y;
    });
    unary("nearest_int_distance", -50, 50, 1.5, [](auto& x) { return r::nearest_int_distance(x); },
          [](const Big& x) {
              Big n, y;
              mpfr_rint(n.v, x.v, MPFR_RNDN);
              mpfr_sub(y.v, x.v, n.v, MPFR_RNDN);
              mpfr_abs(y.v, y.v, MPFR_RNDN);
              return y;
          });
    return out;
}

}  // namespace testing_support
