#include <gtest/gtest.h>

#include <sstream>

#include "zdc/config.hpp"
#include "zdc/pipeline.hpp"
#include "zdc/report.hpp"

using namespace zdc;

namespace {

RunConfig tiny() {
    RunConfig c = reduced_config();
    c.ell = 60;
    c.lll_digits = 80;
    c.coeff_bound = "1e30";
    return c;
}

PipelineOptions options() {
    PipelineOptions o;
    o.fallback_data_dir = ZDC_TEST_DATA_DIR;
    return o;
}

}  // namespace

TEST(Config, PresetsDiffer) {
    RunConfig p = paper_config(), r = reduced_config();
    EXPECT_EQ(p.N, 21);
    EXPECT_EQ(p.m, 12000);
    EXPECT_EQ(p.ell, 16000);
    EXPECT_EQ(p.Nprime, 9998);
    EXPECT_EQ(p.d_target, "1.66e-13");
    EXPECT_EQ(r.N, 8);
    EXPECT_EQ(r.m, 1500);
    EXPECT_EQ(r.ell, 400);
    EXPECT_EQ(r.Nprime, 2000);
    EXPECT_EQ(r.lll_digits, 200);
    EXPECT_EQ(r.d_target, "auto");
}

TEST(Config, ParsesKeyValueLines) {
    std::istringstream in("# comment\nN = 5\n\nm=400\nalpha = 0:0, 1/4:1, 1/2:pi\nd_target = auto\n");
    RunConfig c = parse_config(in);
    EXPECT_EQ(c.N, 5);
    EXPECT_EQ(c.m, 400);
    EXPECT_EQ(c.d_target, "auto");
    auto bp = parse_breakpoints(c.alpha, 128);
    ASSERT_EQ(bp.size(), 3u);
    EXPECT_EQ(bp[1].abscissa, mpq_class(1, 4));
    EXPECT_TRUE(bp[2].value.contains(rigor::Interval::pi(128)));
}

TEST(Config, UnknownKeyAndBadLine) {
    std::istringstream a("bogus = 1\n");
    EXPECT_THROW(parse_config(a), Error);
    std::istringstream b("N = 4\nno equals sign\n");
    try {
        parse_config(b);
        FAIL() << "accepted a line without '='";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2);
    }
    RunConfig c;
    EXPECT_THROW(set_config_value(c, "N", "four"), Error);
    EXPECT_THROW(set_config_value(c, "nope", "1"), ArgumentError);
}

TEST(Config, IntegerLiterals) {
    mpz_class big;
    mpz_ui_pow_ui(big.get_mpz_t(), 10, 300);
    EXPECT_EQ(parse_integer_literal("1e300"), big);
    EXPECT_EQ(parse_integer_literal("10^300"), big);
    EXPECT_EQ(parse_integer_literal("12345"), 12345);
    EXPECT_EQ(parse_rational("1/4"), mpq_class(1, 4));
    EXPECT_THROW(parse_integer_literal("1.5e3x"), Error);
}

TEST(Config, SaveAndParseRoundTrip) {
    RunConfig c = reduced_config();
    c.declared_ulp = "1e-20";
    std::stringstream buf;
    save_config(c, buf);
    RunConfig d = parse_config(buf);
    EXPECT_EQ(config_pairs(c), config_pairs(d));
}

TEST(Report, JsonRoundTrip) {
    CertificateReport r;
    r.mode = "run";
    r.status = "CERTIFIED";
    r.config = config_pairs(reduced_config());
    r.zero_count = 10200;
    r.gamma0 = Enclosure{"14.1347", "14.1348"};
    r.claims[0].status = "certified";
    r.claims[0].worst_index = 179;
    r.claims[0].margin = Enclosure{"0.0924", ""};
    LatticeReport l;
    l.N = 2;
    l.C = {{"5", "-7"}, {"1", "0"}};
    l.d = "4.63e-14";
    l.det = "-1";
    r.lattice = l;
    r.timings = {{"mesh", 1.5}};
    std::ostringstream out;
    out << report_json(r).dump(2);
    std::istringstream in(out.str());
    CertificateReport back = parse_report(in);
    EXPECT_EQ(report_json(back).dump(), report_json(r).dump());
    EXPECT_NE(render_text(back).find(">= 0.0924"), std::string::npos);
}

TEST(Report, MalformedJson) {
    std::istringstream in("{ not json");
    EXPECT_THROW(parse_report(in), ParseError);
}

TEST(Pipeline, MissingZeroTableFailsAtLoad) {
    RunConfig c = tiny();
    c.zeros_path = "/nonexistent/zeros.txt";
    CertificateReport r = run_pipeline(c, Mode::run, options());
    EXPECT_FALSE(r.certified());
    EXPECT_EQ(r.failed_stage, "load");
}

TEST(Pipeline, VolumeModeNeedsCertificate) {
    CertificateReport r = run_pipeline(tiny(), Mode::volume, options());
    EXPECT_FALSE(r.certified());
    EXPECT_FALSE(r.failure.empty());
}

TEST(Pipeline, CheckZerosReportsTable) {
    CertificateReport r = run_pipeline(tiny(), Mode::check_zeros, options());
    EXPECT_TRUE(r.certified()) << r.failure;
    EXPECT_GE(r.zero_count, 10000u);
    ASSERT_TRUE(r.gamma0.has_value());
    auto g0 = rigor::Interval::hull(rigor::Interval::from_decimal(r.gamma0->lo), rigor::Interval::from_decimal(r.gamma0->hi));
    EXPECT_TRUE(g0.contains(rigor::Interval::from_decimal("14.134725141734693790457251983562470270784257115699")));
    EXPECT_LT(g0.width(), 1e-15);
}

TEST(Pipeline, DeterministicModuloTimings) {
    CertificateReport a = run_pipeline(tiny(), Mode::run, options());
    RunConfig c = tiny();
    c.parallelism = 3;
    CertificateReport b = run_pipeline(c, Mode::run, options());
    auto ja = report_json(a), jb = report_json(b);
    ja.erase("timings");
    jb.erase("timings");
    ja["config"].erase("parallelism");
    jb["config"].erase("parallelism");
    EXPECT_EQ(ja.dump(), jb.dump());
}

TEST(Pipeline, CertificateReuseMatchesFullRun) {
    CertificateReport full = run_pipeline(tiny(), Mode::run, options());
    ASSERT_TRUE(full.lattice.has_value()) << full.failure;
    PipelineOptions o = options();
    o.certificate = full.lattice;
    CertificateReport vol = run_pipeline(tiny(), Mode::volume, o);
    EXPECT_TRUE(full.certified()) << full.failure;
    ASSERT_TRUE(full.volume && vol.volume) << vol.failure;
    EXPECT_EQ(full.volume->sum_r.lo, vol.volume->sum_r.lo);
    EXPECT_EQ(full.status, vol.status);
}
