#pragma once

// Certificate reports: a JSON document (exact integers, outward-rounded
// decimal endpoints) and its plain-text rendering.

#include <json.hpp>

#include <array>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "zdc/error.hpp"
#include "zdc/rigor/interval.hpp"

namespace zdc {

/// Both endpoints of an enclosure as decimals rounded outward.
struct Enclosure {
    std::string lo;
    std::string hi;  // empty when only a lower bound is recorded

    static Enclosure of(const rigor::Interval& x, int digits = 20) { return {x.lo_str(digits), x.hi_str(digits)}; }
    std::string str() const { return hi.empty() ? ">= " + lo : "[" + lo + ", " + hi + "]"; }
};

struct ClaimReport {
    int number = 0;
    std::string title;
    std::string status = "not run";  // certified, failed, not run
    long worst_index = 0;
    std::optional<Enclosure> margin;
    std::string detail;
};

struct LatticeReport {
    int N = 0;
    int digits = 0;
    std::string lll_delta;
    std::string coeff_bound;
    std::vector<std::vector<std::string>> C;
    std::string d;  // exact decimal
    std::vector<Enclosure> sums;
    Enclosure max_sum;
    int worst_n = 0;
    std::string det;
    long iterations = 0;
    long reductions = 0;
    long swaps = 0;
};

struct VolumeReport {
    long ell = 0;
    std::string eps;
    std::vector<long> zero_rows;  // n whose grid row is identically 0
    Enclosure sum_r;
    Enclosure kappa_increment;
    Enclosure kappa0_lower;
    Enclosure gamma0_over_pi;
    bool meets_one_sixtieth = false;
};

struct MeshReport {
    long m = 0;
    long min_u_j = 0;
    Enclosure min_u;
    long tail_second_branch = 0;  // segments whose tail used the second closed form
    std::vector<std::pair<std::string, long>> straddles;
    std::vector<std::pair<long, long>> pairs_kept;  // per n: (before, after pruning)
};

inline const char* rh_false_note() {
    return "If the Riemann Hypothesis fails, some zero lies off the critical line. Every nontrivial zero "
           "with |gamma| <= 3*10^12 is known to lie on the line, so the lowest off-line ordinate exceeds "
           "3*10^12 and kappa_0 >= (3/pi)*10^12 > gamma_0/pi + 9.54*10^11, which is much stronger than the "
           "bound certified here. This branch is a citation and is not computed.";
}

inline std::array<ClaimReport, 5> default_claims() {
    const char* titles[] = {
        "alpha jumps < pi and segment lengths < pi/omega_N",
        "u_j > 0 for j = 1..m",
        "beta'' - beta' < pi for all (n, j)",
        "tiling sums < d and det C != 0",
        "kappa increment reaches the target",
    };
    std::array<ClaimReport, 5> out;
    for (int i = 0; i < 5; ++i) {
        out[static_cast<std::size_t>(i)].number = i + 1;
        out[static_cast<std::size_t>(i)].title = titles[i];
    }
    return out;
}

struct CertificateReport {
    std::string mode;
    std::string status = "FAILED";  // CERTIFIED or FAILED
    std::string failed_stage;
    std::string failure;
    std::vector<std::pair<std::string, std::string>> config;
    std::size_t zero_count = 0;
    std::optional<Enclosure> gamma0;
    std::array<ClaimReport, 5> claims = default_claims();
    std::optional<MeshReport> mesh;
    std::optional<LatticeReport> lattice;
    std::optional<VolumeReport> volume;
    std::vector<std::pair<std::string, double>> timings;
    std::string note = rh_false_note();

    bool certified() const { return status == "CERTIFIED"; }
};

// JSON -----------------------------------------------------------------------

inline void to_json(nlohmann::ordered_json& j, const Enclosure& e) { j = {{"lo", e.lo}, {"hi", e.hi}}; }
inline void from_json(const nlohmann::ordered_json& j, Enclosure& e) {
    e.lo = j.at("lo").get<std::string>();
    e.hi = j.at("hi").get<std::string>();
}

inline void to_json(nlohmann::ordered_json& j, const ClaimReport& c) {
    j = {{"claim", c.number}, {"title", c.title}, {"status", c.status}};
    if (c.worst_index) j["worst_index"] = c.worst_index;
    if (c.margin) j["margin"] = *c.margin;
    if (!c.detail.empty()) j["detail"] = c.detail;
}
inline void from_json(const nlohmann::ordered_json& j, ClaimReport& c) {
    c.number = j.at("claim").get<int>();
    c.title = j.at("title").get<std::string>();
    c.status = j.at("status").get<std::string>();
    c.worst_index = j.value("worst_index", 0L);
    if (j.contains("margin")) c.margin = j.at("margin").get<Enclosure>();
    c.detail = j.value("detail", std::string());
}

inline void to_json(nlohmann::ordered_json& j, const LatticeReport& l) {
    j = {{"N", l.N},
         {"digits", l.digits},
         {"lll_delta", l.lll_delta},
         {"M", l.coeff_bound},
         {"C", l.C},
         {"d", l.d},
         {"sums", l.sums},
         {"max_sum", l.max_sum},
         {"worst_n", l.worst_n},
         {"det", l.det},
         {"iterations", l.iterations},
         {"reductions", l.reductions},
         {"swaps", l.swaps}};
}
inline void from_json(const nlohmann::ordered_json& j, LatticeReport& l) {
    l.N = j.at("N").get<int>();
    l.digits = j.value("digits", 0);
    l.lll_delta = j.value("lll_delta", std::string());
    l.coeff_bound = j.value("M", std::string());
    l.C = j.at("C").get<std::vector<std::vector<std::string>>>();
    l.d = j.at("d").get<std::string>();
    l.sums = j.value("sums", std::vector<Enclosure>());
    if (j.contains("max_sum")) l.max_sum = j.at("max_sum").get<Enclosure>();
    l.worst_n = j.value("worst_n", 0);
    l.det = j.value("det", std::string());
    l.iterations = j.value("iterations", 0L);
    l.reductions = j.value("reductions", 0L);
    l.swaps = j.value("swaps", 0L);
}

inline void to_json(nlohmann::ordered_json& j, const VolumeReport& v) {
    j = {{"ell", v.ell},
         {"eps", v.eps},
         {"zero_rows", v.zero_rows},
         {"sum_r", v.sum_r},
         {"kappa_increment", v.kappa_increment},
         {"gamma0_over_pi", v.gamma0_over_pi},
         {"kappa0_lower", v.kappa0_lower},
         {"meets_one_sixtieth", v.meets_one_sixtieth}};
}
inline void from_json(const nlohmann::ordered_json& j, VolumeReport& v) {
    v.ell = j.at("ell").get<long>();
    v.eps = j.at("eps").get<std::string>();
    v.zero_rows = j.value("zero_rows", std::vector<long>());
    v.sum_r = j.at("sum_r").get<Enclosure>();
    v.kappa_increment = j.at("kappa_increment").get<Enclosure>();
    v.gamma0_over_pi = j.at("gamma0_over_pi").get<Enclosure>();
    v.kappa0_lower = j.at("kappa0_lower").get<Enclosure>();
    v.meets_one_sixtieth = j.at("meets_one_sixtieth").get<bool>();
}

inline void to_json(nlohmann::ordered_json& j, const MeshReport& m) {
    j = {{"m", m.m}, {"min_u", m.min_u}, {"min_u_j", m.min_u_j}, {"tail_second_branch", m.tail_second_branch}};
    auto& s = j["straddles"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.straddles) s[k] = v;
    auto& p = j["pairs_kept"] = nlohmann::ordered_json::array();
    for (const auto& [a, b] : m.pairs_kept) p.push_back({a, b});
}
inline void from_json(const nlohmann::ordered_json& j, MeshReport& m) {
    m.m = j.at("m").get<long>();
    m.min_u = j.at("min_u").get<Enclosure>();
    m.min_u_j = j.at("min_u_j").get<long>();
    m.tail_second_branch = j.value("tail_second_branch", 0L);
    m.straddles.clear();
    if (j.contains("straddles")) {
        for (const auto& [k, v] : j.at("straddles").items()) m.straddles.emplace_back(k, v.get<long>());
    }
    m.pairs_kept.clear();
    if (j.contains("pairs_kept")) {
        for (const auto& p : j.at("pairs_kept")) m.pairs_kept.emplace_back(p.at(0).get<long>(), p.at(1).get<long>());
    }
}

inline nlohmann::ordered_json report_json(const CertificateReport& r) {
    nlohmann::ordered_json j;
    j["mode"] = r.mode;
    j["status"] = r.status;
    if (!r.failed_stage.empty()) j["failed_stage"] = r.failed_stage;
    if (!r.failure.empty()) j["failure"] = r.failure;
    auto& cfg = j["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.config) cfg[k] = v;
    j["zero_count"] = r.zero_count;
    if (r.gamma0) j["gamma0"] = *r.gamma0;
    j["claims"] = r.claims;
    if (r.mesh) j["mesh"] = *r.mesh;
    if (r.lattice) j["lattice"] = *r.lattice;
    if (r.volume) j["volume"] = *r.volume;
    j["note"] = r.note;
    auto& t = j["timings"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.timings) t[k] = v;
    return j;
}

inline CertificateReport report_from_json(const nlohmann::ordered_json& j) {
    CertificateReport r;
    try {
        r.mode = j.at("mode").get<std::string>();
        r.status = j.at("status").get<std::string>();
        r.failed_stage = j.value("failed_stage", std::string());
        r.failure = j.value("failure", std::string());
        for (const auto& [k, v] : j.at("config").items()) r.config.emplace_back(k, v.get<std::string>());
        r.zero_count = j.value("zero_count", std::size_t{0});
        if (j.contains("gamma0")) r.gamma0 = j.at("gamma0").get<Enclosure>();
        const auto& cl = j.at("claims");
        for (std::size_t i = 0; i < r.claims.size() && i < cl.size(); ++i) r.claims[i] = cl.at(i).get<ClaimReport>();
        if (j.contains("mesh")) r.mesh = j.at("mesh").get<MeshReport>();
        if (j.contains("lattice")) r.lattice = j.at("lattice").get<LatticeReport>();
        if (j.contains("volume")) r.volume = j.at("volume").get<VolumeReport>();
        r.note = j.value("note", std::string(rh_false_note()));
        if (j.contains("timings")) {
            for (const auto& [k, v] : j.at("timings").items()) r.timings.emplace_back(k, v.get<double>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed certificate: ") + e.what());
    }
    return r;
}

inline CertificateReport parse_report(std::istream& in) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("certificate is not valid JSON: ") + e.what());
    }
    return report_from_json(j);
}

// Text ------------------------------------------------------------------------

inline std::string render_text(const CertificateReport& r) {
    std::ostringstream os;
    os << "status: " << r.status << " (" << r.mode << ")\n";
    if (!r.failed_stage.empty()) os << "failed stage: " << r.failed_stage << "\n  " << r.failure << '\n';
    os << "\nconfiguration\n";
    for (const auto& [k, v] : r.config) os << "  " << std::left << std::setw(14) << k << v << '\n';
    if (r.zero_count) os << "\nzero table: " << r.zero_count << " ordinates";
    if (r.gamma0) os << ", gamma_0 in " << r.gamma0->str();
    if (r.zero_count) os << '\n';

    os << "\nclaims\n";
    for (const auto& c : r.claims) {
        os << "  " << c.number << ". " << c.title << ": " << c.status;
        if (c.worst_index) os << " (worst index " << c.worst_index << ")";
        os << '\n';
        if (c.margin) os << "     margin " << c.margin->str() << '\n';
        if (!c.detail.empty()) os << "     " << c.detail << '\n';
    }
    if (r.mesh) {
        const auto& m = *r.mesh;
        os << "\nmesh: m = " << m.m << ", min u_j = " << m.min_u.str() << " at j = " << m.min_u_j
           << ", tail second branch on " << m.tail_second_branch << " segments\n";
        if (!m.straddles.empty()) {
            os << "  straddles:";
            for (const auto& [k, v] : m.straddles) os << ' ' << k << '=' << v;
            os << '\n';
        }
        if (!m.pairs_kept.empty()) {
            os << "  penalty pairs kept per n:";
            for (const auto& [a, b] : m.pairs_kept) os << ' ' << b << '/' << a;
            os << '\n';
        }
    }
    if (r.lattice) {
        const auto& l = *r.lattice;
        os << "\nlattice: N = " << l.N << ", " << l.digits << " digits, delta = " << l.lll_delta << ", M = "
           << l.coeff_bound << "\n  iterations " << l.iterations << ", reductions " << l.reductions << ", swaps "
           << l.swaps << "\n  d = " << l.d << ", max sum " << l.max_sum.str() << " at n = " << l.worst_n
           << "\n  det C = " << l.det << "\n  C =\n";
        for (const auto& row : l.C) {
            os << "   ";
            for (const auto& x : row) os << ' ' << x;
            os << '\n';
        }
    }
    if (r.volume) {
        const auto& v = *r.volume;
        os << "\nvolume: ell = " << v.ell << ", eps = " << v.eps;
        if (!v.zero_rows.empty()) {
            os << ", zero rows:";
            for (long n : v.zero_rows) os << ' ' << n;
        }
        os << "\n  sum r_i         " << v.sum_r.str() << "\n  kappa increment " << v.kappa_increment.str()
           << "\n  gamma_0/pi      " << v.gamma0_over_pi.str() << "\n  kappa_0 >=      " << v.kappa0_lower.str()
           << "\n  increment >= 1/60 certified: " << (v.meets_one_sixtieth ? "yes" : "no") << '\n';
    }
    if (!r.timings.empty()) {
        os << "\ntimings (s)\n";
        for (const auto& [k, v] : r.timings) os << "  " << std::left << std::setw(12) << k << std::fixed
                                                 << std::setprecision(2) << v << '\n';
        os << std::defaultfloat;
    }
    os << "\nnote\n  " << r.note << '\n';
    return os.str();
}

}  // namespace zdc
