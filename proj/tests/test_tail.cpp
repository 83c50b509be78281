#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "zdc/tail.hpp"

using namespace zdc;
using namespace zdc::tail;
using rigor::Rel;
using testing_support::Big;
using testing_support::fixture;

namespace {

struct Setup {
    WeightSet w;
    TailBoundConfig cfg;
};

const Setup& paper() {
    static const Setup s{derive_weights(fixture(), 21), TailBoundConfig::make(fixture(), 21, 9998)};
    return s;
}

}  // namespace

TEST(Config, T1StrictlyBetweenNeighbours) {
    const auto& c = paper().cfg;
    EXPECT_TRUE(rigor::certainly(fixture().gamma(9998), Rel::lt, c.T1));
    EXPECT_TRUE(rigor::certainly(c.T1, Rel::lt, fixture().gamma(9999)));
    EXPECT_THROW(TailBoundConfig::make(fixture(), 21, 21), ArgumentError);
    EXPECT_THROW(TailBoundConfig::make(fixture(), 21, static_cast<int>(fixture().count()) - 1), ArgumentError);
}

TEST(TailBound, AntitoneInY) {
    Interval a = tail_bound(Interval::from_decimal("0.2"), paper().w, paper().cfg);
    Interval b = tail_bound(Interval::from_decimal("0.1"), paper().w, paper().cfg);
    EXPECT_TRUE(rigor::certainly(a, Rel::le, b));
}

TEST(TailBound, DominatesTruncatedDirectSumAtY0) {
    // the closed-form part is about 1e-202 here, so both sides need enclosures
    // far narrower than that: the fixture carries 240 places past its head
    const mpfr_prec_t p = 1024;
    WeightSet w = derive_weights(fixture(), 21, p, 9998);
    Interval y = Interval::from_decimal("0.0468918", p);
    Interval t = tail_bound_detail(y, w, paper().cfg, p).value;
    // direct interval sum, evaluated term by term with the generic interval ops
    Interval direct(0L, p);
    for (int n = 22; n <= 9998; ++n) direct = direct + w.amp(n) * rigor::exp(-(w.omega(n) * y));
    EXPECT_TRUE(rigor::certainly(t, Rel::ge, direct)) << t.str() << " vs " << direct.str();
}

TEST(TailBound, ZeroYIsDomainError) {
    EXPECT_THROW(tail_bound(Interval(0L), paper().w, paper().cfg), DomainError);
}

TEST(ClosedFormTail, FirstBranchMatchesTranscriptionOracle) {
    Interval y = Interval::from_decimal("0.1");
    Interval T1(100L);
    const WeightSet& w = paper().w;
    ClosedFormResult r = lemma5_tail_detail(y, T1, w.rho0_abs, w.gamma0);
    EXPECT_FALSE(r.second_evaluated);
    // |rho0| e^{0.1 gamma0} / (100 e^{10}) ((log 100)/(2 pi 0.1) + 4 log 100 + 2/10)
    Big g0(fixture().literals[0].c_str()), q("0.25"), yy("0.1"), T("100");
    Big rho = testing_support::bsqrt(q + g0 * g0);
    Big L = testing_support::blog(T);
    Big two(2.0), four(4.0);
    Big bracket = L / (two * testing_support::bpi() * yy) + four * L + two / (T * yy);
    Big v = rho * testing_support::bexp(yy * g0) / (T * testing_support::bexp(T * yy)) * bracket;
    EXPECT_TRUE(testing_support::holds(r.first, v));
    EXPECT_TRUE(testing_support::holds(r.bound, v));
}

TEST(ClosedFormTail, BothBranchesAtBoundary) {
    const WeightSet& w = paper().w;
    Interval T1(64L);
    Interval y = Interval::from_rational(1, 64);  // T1 y = 1 exactly
    ClosedFormResult r = lemma5_tail_detail(y, T1, w.rho0_abs, w.gamma0);
    ASSERT_TRUE(r.second_evaluated);
    Interval m = rigor::min(r.first, r.second);
    EXPECT_EQ(mpfr_cmp(r.bound.upper(), m.upper()), 0);
    EXPECT_GE(mpfr_sgn(r.bound.lower()), 0);
    Interval y2 = Interval::from_rational(2, 64);
    EXPECT_FALSE(lemma5_tail_detail(y2, T1, w.rho0_abs, w.gamma0).second_evaluated);
}

TEST(ClosedFormTail, WidenedInputStillBoundsRemainingZeros) {
    const WeightSet& w = paper().w;
    Interval y = Interval::from_decimal("0.05");
    Interval wide = Interval::hull(Interval::from_decimal("0.0495"), Interval::from_decimal("0.0505"));
    Interval narrow = lemma5_tail(y, paper().cfg.T1, w.rho0_abs, w.gamma0);
    Interval widened = lemma5_tail(wide, paper().cfg.T1, w.rho0_abs, w.gamma0);
    EXPECT_GT(widened.width(), narrow.width());
    EXPECT_TRUE(widened.contains(narrow.upper()));
    Interval rest = exponential_sum(wide, w, 9999, w.available());
    EXPECT_TRUE(rigor::certainly(widened.upper_point(), Rel::ge, rest));
}

// The bound splits into the shared truncated sum over N < n <= N' and the
// closed form; the closed form alone must cover every fixture zero past N'.
TEST(Properties, ClosedFormCoversRemainingFixtureZeros) {
    const WeightSet& w = paper().w;
    for (int k = 0; k < 12; ++k) {
        Interval y = rigor::exp(Interval::from_rational(k, 11) * rigor::log(Interval(1000L))) / Interval(1000L);
        TailBound tb = tail_bound_detail(y, w, paper().cfg);
        Interval rest = exponential_sum(y, w, 9999, w.available());
        EXPECT_TRUE(rigor::certainly(tb.closed_form.bound, Rel::ge, rest)) << "y = " << y.str();
        Interval truncated = exponential_sum(y, w, 22, 9998);
        EXPECT_TRUE(tb.truncated.identical(truncated));
    }
}

TEST(Properties, AntitoneOnDisjointInputs) {
    Interval prev;
    for (int k = 0; k < 8; ++k) {
        Interval y = Interval::from_decimal("0.03") + Interval::from_rational(k, 40);
        Interval t = tail_bound(y, paper().w, paper().cfg);
        if (k > 0) {
            EXPECT_TRUE(rigor::certainly(t, Rel::le, prev)) << k;
        }
        prev = t;
    }
}

TEST(Properties, RaisingNprimeAddsAtMostTheDroppedTerm) {
    const WeightSet& w = paper().w;
    for (int Np : {2000, 5000, 9000}) {
        auto c0 = TailBoundConfig::make(fixture(), 21, Np);
        auto c1 = TailBoundConfig::make(fixture(), 21, Np + 1);
        for (const char* ys : {"0.0468918", "0.1", "0.14"}) {
            Interval y = Interval::from_decimal(ys);
            Interval a = tail_bound(y, w, c0), b = tail_bound(y, w, c1);
            Interval term = w.amp(Np + 1) * rigor::exp(-(w.omega(Np + 1) * y));
            Interval slack = Interval::from_decimal("1e-60");
            EXPECT_TRUE(rigor::certainly(b.upper_point(), Rel::le, a.upper_point() + term + slack))
                << "N' = " << Np << ", y = " << ys;
        }
    }
}
