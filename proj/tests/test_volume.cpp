#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"
#include "zdc/volume.hpp"

using namespace zdc;
using namespace zdc::volume;
using rigor::Rel;
using testing_support::reduced;

namespace {

GridFamily grid_of(std::vector<std::vector<double>> rows, double eps = 1e-13) {
    GridFamily g;
    g.ell = static_cast<long>(rows.at(0).size()) - 1;
    g.eps = Interval::from_double(eps);
    g.x = std::move(rows);
    return g;
}

std::vector<std::vector<mpq_class>> exact_rows(const GridFamily& g) {
    std::vector<std::vector<mpq_class>> out;
    for (const auto& row : g.x) {
        std::vector<mpq_class> r;
        for (double v : row) r.emplace_back(v);
        out.push_back(std::move(r));
    }
    return out;
}

const GridFamily& reduced_grid() {
    static const GridFamily g = invert_w(reduced().fam, 60, Interval::from_decimal("1e-13"));
    return g;
}

}  // namespace

TEST(Convolution, TwoRowExample) {
    std::vector<std::vector<mpq_class>> x{{0, mpq_class(1, 10), mpq_class(2, 10), mpq_class(3, 10)},
                                          {0, mpq_class(5, 100), mpq_class(5, 100), mpq_class(1, 10)}};
    EXPECT_EQ(convolve_volume_exact(x, 3), mpq_class(1, 100));
    EXPECT_EQ(testing_support::volume_brute_force(x, 3), mpq_class(1, 100));
    Interval s = convolve_volume(grid_of({{0, 0.1, 0.2, 0.3}, {0, 0.05, 0.05, 0.1}}));
    EXPECT_TRUE(s.contains(Interval::from_decimal("0.01")));
    EXPECT_LT(s.width(), 1e-15);
}

TEST(Convolution, ZeroRowAnnihilates) {
    Interval s = convolve_volume(grid_of({{0, 0.1, 0.2, 0.3}, {0, 0, 0, 0}, {0, 0.1, 0.1, 0.2}}));
    EXPECT_TRUE(s.contains(0.0));
    EXPECT_LT(s.hi(), 1e-300);
}

TEST(Convolution, SingleRowTelescopes) {
    std::vector<double> row{0, 0.01, 0.03, 0.07, 0.11, 0.2};
    Interval s = convolve_volume(grid_of({row}));
    EXPECT_TRUE(s.contains(Interval::from_double(0.2)));
    EXPECT_LT(s.width(), 1e-15);
}

TEST(Convolution, IndependentOfWorkerCount) {
    const auto& g = reduced_grid();
    EXPECT_TRUE(convolve_volume(g, 1).identical(convolve_volume(g, 3)));
}

TEST(Properties, DynamicProgramEqualsEnumeration) {
    for (int trial = 0; trial < 30; ++trial) {
        int N = 1 + trial % 4;
        int ell = 1 + (trial / 4) % 6;
        std::vector<std::vector<mpq_class>> x;
        for (int n = 0; n < N; ++n) x.push_back(testing_support::random_rational_row(ell));
        EXPECT_EQ(convolve_volume_exact(x, static_cast<std::size_t>(ell)), testing_support::volume_brute_force(x, ell))
            << "N = " << N << ", ell = " << ell;
    }
}

TEST(Properties, IntervalDynamicProgramEnclosesExact) {
    const auto& g = reduced_grid();
    Interval s = convolve_volume(g);
    mpq_class exact = convolve_volume_exact(exact_rows(g), static_cast<std::size_t>(g.ell));
    EXPECT_TRUE(s.contains(Interval::from_mpq(exact, 512)));
}

TEST(Invert, LinearToy) {
    auto row = invert_monotone([](double x) { return 2 * x; }, grid_levels(4), 0.5, std::ldexp(1.0, -40));
    ASSERT_EQ(row.size(), 5u);
    for (int i = 0; i <= 4; ++i) EXPECT_NEAR(row[static_cast<std::size_t>(i)], i / 8.0, std::ldexp(1.0, -39)) << i;
    for (int i = 1; i <= 4; ++i) EXPECT_LE(2 * row[static_cast<std::size_t>(i)], i / 4.0);
}

TEST(Invert, LargeWeightGivesZeroRow) {
    Interval hp = mul_2si(Interval::pi(), -1);
    std::vector<penalty::PenaltyEntry> row{{hp, hp, Interval(0L), penalty::EnvelopeCase::aggregate},
                                           {hp, hp, Interval(1000000L), penalty::EnvelopeCase::upper}};
    auto fam = penalty::family_from_entries({row});
    GridFamily g = invert_w(fam, 10, Interval::from_decimal("0.01"));
    for (double x : g.x[0]) EXPECT_EQ(x, 0.0);
    EXPECT_EQ(verify_grid(fam, g), "");
    EXPECT_TRUE(convolve_volume(g).contains(0.0));
}

TEST(Invert, RejectsBadEpsilon) {
    EXPECT_THROW(invert_w(reduced().fam, 10, Interval(0L)), ArgumentError);
    EXPECT_THROW(invert_w(reduced().fam, 10, Interval::from_decimal("0.6")), ArgumentError);
    EXPECT_THROW(invert_w(reduced().fam, 0, Interval::from_decimal("0.01")), ArgumentError);
}

TEST(Invert, ReducedGridIsCertifiedAndMonotone) {
    const auto& g = reduced_grid();
    EXPECT_EQ(verify_grid(reduced().fam, g), "");
    for (const auto& row : g.x) {
        EXPECT_EQ(row[0], 0.0);
        for (std::size_t i = 1; i < row.size(); ++i) EXPECT_LE(row[i - 1], row[i]);
    }
    GridFamily h = invert_w(reduced().fam, 60, Interval::from_decimal("1e-13"), {3, 40, 64});
    EXPECT_EQ(g.x, h.x);
}

TEST(Invert, VerifyCatchesTamperedGrid) {
    GridFamily g = reduced_grid();
    g.x[0][5] = 0.49;
    EXPECT_NE(verify_grid(reduced().fam, g), "");
}

TEST(FinalBound, OneSixtiethThreshold) {
    Interval delta = Interval::from_decimal("0.132737");
    const int N = 21;
    // sum_r = delta / (120 2^N) is the exact threshold
    Interval edge = delta / Interval(120L) / mul_2si(Interval(1L), N);
    EXPECT_TRUE(final_bound(edge * Interval::from_decimal("1.000001"), delta, N, Interval(14L)).meets_one_sixtieth);
    EXPECT_FALSE(final_bound(edge * Interval::from_decimal("0.999999"), delta, N, Interval(14L)).meets_one_sixtieth);
}

TEST(FinalBound, ZeroVolume) {
    Interval g0 = Interval::from_decimal("14.134725141734693790457251983562470270784257115699");
    VolumeResult r = final_bound(Interval(0L), Interval::from_decimal("0.132737"), 8, g0);
    EXPECT_TRUE(r.kappa0_lower.contains(g0 / Interval::pi()));
    EXPECT_TRUE(r.kappa_increment.contains(0.0));
    EXPECT_FALSE(r.meets_one_sixtieth);
}

TEST(FinalBound, SymmetryFactorAppliedOnce) {
    std::vector<double> row{0, 0.01, 0.03, 0.07, 0.11, 0.2};
    Interval delta = Interval::from_decimal("0.132737");
    VolumeResult r = final_bound(convolve_volume(grid_of({row})), delta, 1, Interval(14L));
    Interval expect = Interval(4L) * Interval::from_double(0.2) / delta;
    EXPECT_TRUE(r.kappa_increment.contains(expect));
    EXPECT_LT(r.kappa_increment.width(), 1e-12);
}

TEST(Properties, SmallerGridNeverRaisesCertifiedVolume) {
    const auto& g = reduced_grid();
    double base = convolve_volume(g).lo();
    for (int trial = 0; trial < 20; ++trial) {
        GridFamily h = g;
        auto n = static_cast<std::size_t>(testing_support::rng()() % h.x.size());
        auto i = 1 + static_cast<std::size_t>(testing_support::rng()() % static_cast<unsigned long>(h.ell));
        h.x[n][i] = h.x[n][i - 1];
        for (std::size_t k = i + 1; k <= static_cast<std::size_t>(h.ell); ++k) h.x[n][k] = std::max(h.x[n][k], h.x[n][i]);
        EXPECT_LE(convolve_volume(h).lo(), base);
    }
}

// Random points of a box P_k, moved by at most eps per coordinate, keep
// sum_n w_n <= 1.
TEST(Properties, HyperrectanglesStayInsideTheSolutionSet) {
    const auto& g = reduced_grid();
    const auto& fam = reduced().fam;
    const int N = g.N();
    int sampled = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<long> k(static_cast<std::size_t>(N));
        long budget = g.ell;
        for (int n = 0; n < N; ++n) {
            long rest = N - n - 1;
            long cap = std::max(1L, std::min(budget - rest, 2 * g.ell / N));
            k[static_cast<std::size_t>(n)] = 1 + static_cast<long>(testing_support::rng()() % static_cast<unsigned long>(cap));
            budget -= k[static_cast<std::size_t>(n)];
        }
        if (budget < 0) continue;
        ++sampled;
        Interval total(0L);
        for (int n = 1; n <= N; ++n) {
            const auto& row = g.x[static_cast<std::size_t>(n - 1)];
            long kn = k[static_cast<std::size_t>(n - 1)];
            double a = row[static_cast<std::size_t>(kn - 1)], b = row[static_cast<std::size_t>(kn)];
            double x = a + (b - a) * testing_support::uniform(0, 1);
            Interval shift = g.eps * Interval::from_double(testing_support::uniform(-1, 1));
            Interval y = rigor::abs(Interval::from_double(x) + shift);
            total = total + Interval::from_double(penalty::w_upper(fam, n, y));
        }
        ASSERT_TRUE(rigor::certainly(total, Rel::le, Interval(1L))) << "trial " << trial << ": " << total.str();
    }
    EXPECT_GT(sampled, 50);
}
