#include <gtest/gtest.h>

#include <vector>

#include "soundness.hpp"
#include "support.hpp"
#include "zdc/parallel.hpp"
#include "zdc/rigor/float_interval.hpp"
#include "zdc/rigor/interval.hpp"

using namespace zdc::rigor;
using testing_support::Big;

namespace {

Interval iv(double a, double b) { return Interval::hull(Interval::from_double(a), Interval::from_double(b)); }

bool same(const Interval& a, const Interval& b) { return a.identical(b); }

}  // namespace

TEST(Ring, ExactIntegerSum) {
    Interval r = iv_ring(Interval(1L), Interval(2L), RingOp::add);
    EXPECT_TRUE(same(r, Interval(3L)));
}

TEST(Ring, MixedSignProduct) {
    Interval r = iv_ring(iv(-1, 2), Interval(3L), RingOp::mul);
    EXPECT_TRUE(same(r, iv(-3, 6)));
}

TEST(Ring, DivisionByIntervalContainingZeroThrows) {
    EXPECT_THROW(iv_ring(iv(1, 2), iv(0, 1), RingOp::div), zdc::DomainError);
}

TEST(Elementary, ExpOfZeroIsTight) {
    Interval r = iv_elementary(Interval(0L), Elementary::exp);
    EXPECT_TRUE(r.contains(1.0));
    mpfr_t ulp;
    mpfr_init2(ulp, 64);
    mpfr_sub(ulp, r.upper(), r.lower(), MPFR_RNDU);
    // 2 ulp of 1 at the working precision
    EXPECT_LE(mpfr_get_d(ulp, MPFR_RNDU), std::ldexp(2.0, 1 - static_cast<int>(r.precision())));
    mpfr_clear(ulp);
}

TEST(Elementary, CosOverZeroToPiCoversFullRange) {
    Interval x = Interval::hull(Interval(0L), Interval::pi());
    Interval r = iv_elementary(x, Elementary::cos);
    EXPECT_TRUE(r.contains(iv(-1, 1)));
}

TEST(Elementary, LogTwoMatchesOracle) {
    Interval r = iv_elementary(Interval(2L), Elementary::log);
    EXPECT_TRUE(testing_support::holds(r, testing_support::blog(Big(2.0))));
    EXPECT_LT(r.width(), 1e-70);
}

TEST(Elementary, DomainErrors) {
    EXPECT_THROW(iv_elementary(iv(-1, 1), Elementary::log), zdc::DomainError);
    EXPECT_THROW(iv_elementary(iv(0, 0), Elementary::log), zdc::DomainError);
    EXPECT_THROW(iv_elementary(iv(-1e-9, 1), Elementary::sqrt), zdc::DomainError);
    EXPECT_NO_THROW(iv_elementary(iv(0, 1), Elementary::sqrt));
}

TEST(Elementary, WideTrigArgumentsClampToUnitRange) {
    Interval r = sin(iv(-10, 10));
    EXPECT_TRUE(same(r, iv(-1, 1)));
}

TEST(NearestInt, Examples) {
    EXPECT_TRUE(same(nearest_int_distance(iv(0.25, 0.25)), iv(0.25, 0.25)));
    EXPECT_TRUE(same(nearest_int_distance(iv(-0.5, -0.5)), iv(0.5, 0.5)));
    Interval r = nearest_int_distance(Interval::from_decimal_endpoints("0.4", "0.6"));
    EXPECT_TRUE(r.contains(Interval::from_decimal_endpoints("0.4", "0.5")));
    EXPECT_TRUE(certainly(r, Rel::le, Interval::from_rational(1, 2)));
    EXPECT_TRUE(certainly(Interval::from_decimal("0.39999999"), Rel::le, r));
}

TEST(NearestInt, StaysWithinHalf) {
    for (int i = 0; i < 500; ++i) {
        double a = testing_support::uniform(-20, 20);
        Interval r = nearest_int_distance(iv(a, a + testing_support::uniform(0, 3)));
        EXPECT_GE(mpfr_sgn(r.lower()), 0);
        EXPECT_LE(mpfr_cmp_d(r.upper(), 0.5), 0);
    }
}

TEST(Certainly, Examples) {
    EXPECT_TRUE(certainly(iv(1, 2), Rel::lt, iv(3, 4)));
    EXPECT_FALSE(certainly(iv(1, 3), Rel::lt, iv(2, 4)));
    EXPECT_TRUE(certainly(iv(0, 0), Rel::le, iv(0, 0)));
    EXPECT_FALSE(certainly(iv(0, 0), Rel::lt, iv(0, 0)));
    EXPECT_TRUE(certainly(iv(3, 4), Rel::gt, iv(1, 2)));
    EXPECT_TRUE(certainly(iv(2, 4), Rel::ge, iv(1, 2)));
}

TEST(Decimal, LiteralIsEnclosedNotRounded) {
    Interval d = Interval::from_decimal("0.132737");
    EXPECT_TRUE(testing_support::holds(d, Big("0.132737")));
    EXPECT_FALSE(d.is_point());
    EXPECT_THROW(Interval::from_decimal("0.13x"), zdc::ParseError);
}

TEST(Properties, ContainmentAgainstOracle) {
    for (const auto& c : testing_support::interval_soundness(300)) {
        EXPECT_EQ(c.violations, 0) << c.name << ": " << c.first_violation;
        EXPECT_GT(c.checks, 0) << c.name;
    }
}

TEST(Properties, MonotoneWidening) {
    using Fn = Interval (*)(const Interval&);
    const Fn fns[] = {exp, cos, sin, abs, sqr, nearest_int_distance};
    for (int i = 0; i < 400; ++i) {
        double a = testing_support::uniform(0.1, 5);
        double w = testing_support::uniform(0, 2);
        Interval inner = iv(a, a + w);
        Interval outer = iv(a - testing_support::uniform(0, 0.1), a + w + testing_support::uniform(0, 1));
        for (Fn f : fns) EXPECT_TRUE(f(outer).contains(f(inner)));
        EXPECT_TRUE(log(outer).contains(log(inner)));
        EXPECT_TRUE(sqrt(outer).contains(sqrt(inner)));
        Interval b = iv(1, 2);
        EXPECT_TRUE((outer * b).contains(inner * b));
        EXPECT_TRUE((b / outer).contains(b / inner));
    }
}

TEST(Properties, DeterministicAcrossThreads) {
    std::vector<Interval> xs;
    for (int i = 0; i < 64; ++i) xs.push_back(iv(i * 0.37, i * 0.37 + 0.01));
    auto eval = [&](unsigned workers) {
        std::vector<Interval> out(xs.size());
        zdc::parallel_for(xs.size(), workers, [&](std::size_t i) { out[i] = exp(cos(xs[i]) * sin(xs[i])) / (xs[i] + 1L); });
        return out;
    };
    auto a = eval(1), b = eval(4);
    for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_TRUE(same(a[i], b[i]));
}

TEST(FloatInterval, EnclosesMultiprecisionResult) {
    for (int i = 0; i < 1000; ++i) {
        double a = testing_support::uniform(0, 3), b = testing_support::uniform(0, 3), c = testing_support::uniform(0, 3);
        FloatInterval r = fma_nonneg(FloatInterval::point(a), FloatInterval::point(b), FloatInterval::point(c));
        Interval exact = Interval::from_double(a) * Interval::from_double(b) + Interval::from_double(c);
        EXPECT_TRUE(r.to_interval().contains(exact));
        FloatInterval s = FloatInterval::point(a) - FloatInterval::point(b);
        EXPECT_TRUE(s.to_interval().contains(Interval::from_double(a) - Interval::from_double(b)));
    }
}
