#pragma once

// End-to-end orchestration: zeros -> weights -> mesh (claims 1-3) ->
// penalty family -> lattice (claim 4) -> grid and convolution (claim 5).
// The first failing stage stops the run and is named in the report.

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>

#include "zdc/config.hpp"
#include "zdc/contour.hpp"
#include "zdc/error.hpp"
#include "zdc/lattice.hpp"
#include "zdc/penalty.hpp"
#include "zdc/report.hpp"
#include "zdc/tail.hpp"
#include "zdc/volume.hpp"
#include "zdc/zeta_data.hpp"

namespace zdc {

enum class Mode { check_zeros, mesh, lattice, volume, run };

inline const char* mode_name(Mode m) {
    switch (m) {
        case Mode::check_zeros: return "check-zeros";
        case Mode::mesh: return "mesh";
        case Mode::lattice: return "lll";
        case Mode::volume: return "volume";
        case Mode::run: return "run";
    }
    return "?";
}

struct PipelineOptions {
    std::string fallback_data_dir;
    std::optional<LatticeReport> certificate;  // required by Mode::volume
    std::ostream* progress = nullptr;
};

namespace pipeline_detail {

/// Rounds a positive enclosure's upper endpoint up to `digits` significant digits.
inline std::string round_up_decimal(const Interval& x, int digits) { return x.hi_str(digits); }

inline ClaimReport& claim(CertificateReport& r, int n) { return r.claims.at(static_cast<std::size_t>(n - 1)); }

inline void set_claim(ClaimReport& c, bool ok, long worst, std::optional<Enclosure> margin, std::string detail = {}) {
    c.status = ok ? "certified" : "failed";
    c.worst_index = worst;
    c.margin = std::move(margin);
    c.detail = std::move(detail);
}

inline LatticeReport lattice_report(const lattice::TilingCertificate& cert, int digits, const RunConfig& cfg,
                                    const std::string& d) {
    LatticeReport l;
    l.N = static_cast<int>(cert.C.size());
    l.digits = digits;
    l.lll_delta = cfg.lll_delta;
    l.coeff_bound = cfg.coeff_bound;
    for (const auto& row : cert.C) {
        std::vector<std::string> r;
        for (const auto& x : row) r.push_back(x.get_str());
        l.C.push_back(std::move(r));
    }
    l.d = d;
    for (const auto& s : cert.sums) l.sums.push_back(Enclosure::of(s));
    l.max_sum = Enclosure::of(cert.max_sum);
    l.worst_n = cert.worst_n;
    l.det = cert.det.get_str();
    return l;
}

inline lattice::CoeffMatrix matrix_of(const LatticeReport& l) {
    lattice::CoeffMatrix C;
    for (const auto& row : l.C) {
        std::vector<mpz_class> r;
        for (const auto& x : row) {
            try {
                r.emplace_back(x);
            } catch (const std::invalid_argument&) {
                throw ParseError("certificate entry '" + x + "' is not an integer");
            }
        }
        C.push_back(std::move(r));
    }
    return C;
}

}  // namespace pipeline_detail

/// Runs the stages needed by `mode`. Errors from the library are caught and
/// recorded with the stage name; the report's status is CERTIFIED only if
/// every claim the mode covers is certified.
inline CertificateReport run_pipeline(const RunConfig& cfg, Mode mode, const PipelineOptions& opt = {}) {
    using Clock = std::chrono::steady_clock;
    using pipeline_detail::claim;
    using pipeline_detail::set_claim;
    CertificateReport rep;
    rep.mode = mode_name(mode);
    rep.config = config_pairs(cfg);
    std::string stage = "config";
    auto t_stage = Clock::now();
    auto begin = [&](const std::string& name) {
        stage = name;
        t_stage = Clock::now();
        if (opt.progress) *opt.progress << "[" << name << "]" << std::endl;
    };
    auto end = [&] {
        rep.timings.emplace_back(stage, std::chrono::duration<double>(Clock::now() - t_stage).count());
    };

    try {
        if (cfg.precision_bits < 64) throw ArgumentError("precision must be at least 64 bits");
        if (cfg.lll_digits < 20) throw ArgumentError("lll_digits must be at least 20");
        const auto prec = static_cast<mpfr_prec_t>(cfg.precision_bits);
        const unsigned workers = resolve_workers(cfg.parallelism);
        if (mode == Mode::volume && !opt.certificate) throw ArgumentError("volume needs a lattice certificate");

        begin("load");
        ZeroTable table = load_zero_table_file(resolve_zeros_path(cfg, opt.fallback_data_dir), cfg.declared_ulp, prec);
        rep.zero_count = table.count();
        rep.gamma0 = Enclosure::of(table.gamma(0));
        end();

        begin("weights");
        const bool need_tail = mode == Mode::mesh || mode == Mode::volume || mode == Mode::run;
        WeightSet w = derive_weights(table, cfg.N, prec, need_tail ? cfg.Nprime : cfg.N);
        end();
        if (mode == Mode::check_zeros) {
            rep.status = "CERTIFIED";
            return rep;
        }

        std::optional<contour::ContourMesh> mesh;
        std::optional<penalty::PenaltyFamily> fam;
        if (need_tail) {
            begin("mesh");
            auto tcfg = tail::TailBoundConfig::make(table, cfg.N, cfg.Nprime, prec);
            contour::ContourConfig ccfg = contour_config(cfg, prec);
            contour::MeshOptions mo;
            mo.workers = workers;
            mesh = contour::build_mesh_unchecked(ccfg, w, tcfg, mo);
            const auto& c1 = mesh->claim1;
            const auto& c2 = mesh->claim2;
            set_claim(claim(rep, 1), c1.certified, c1.worst_j, Enclosure{c1.worst_margin, ""}, c1.failure);
            MeshReport mr;
            mr.m = ccfg.m;
            mr.min_u_j = c2.worst_j;
            mr.min_u = Enclosure::of(mesh->segment(c2.worst_j).u);
            for (const auto& s : mesh->segments) mr.tail_second_branch += s.tail_branch == tail::Branch::second;
            set_claim(claim(rep, 2), c2.certified, c2.worst_j, mr.min_u, c2.failure);
            rep.mesh = mr;
            end();
            if (!c1.certified) throw CertificationError("claim 1 failed at " + c1.failure);
            if (!c2.certified) throw CertificationError("claim 2 failed at " + c2.failure);

            begin("bands");
            contour::Bands bands;
            try {
                bands = contour::band_angles(*mesh, w, workers);
            } catch (const CertificationError& e) {
                set_claim(claim(rep, 3), false, 0, std::nullopt, e.what());
                throw;
            }
            set_claim(claim(rep, 3), true, bands.claim3.worst_j, Enclosure{bands.claim3.worst_margin, ""});
            std::map<std::string, long> kinds;
            for (const auto& b : bands.data) ++kinds[contour::straddle_name(b.kind)];
            for (const auto& [k, v] : kinds) rep.mesh->straddles.emplace_back(k, v);
            end();
            if (mode == Mode::mesh) {
                rep.status = "CERTIFIED";
                return rep;
            }

            begin("penalty");
            fam = penalty::envelope_constants(*mesh, bands, w, workers);
            for (int n = 1; n <= fam->N; ++n) {
                auto idx = static_cast<std::size_t>(n - 1);
                rep.mesh->pairs_kept.emplace_back(static_cast<long>(fam->unpruned_count[idx]),
                                                  static_cast<long>(fam->pruned[idx].size()));
            }
            end();
        }

        // Claim 4: a fresh heuristic run (lll, run) or the supplied certificate (volume).
        begin("lattice");
        const int digits = mode == Mode::volume && opt.certificate->digits > 0 ? opt.certificate->digits : cfg.lll_digits;
        const mpfr_prec_t lp = lattice::digits_to_bits(digits) + 64;
        WeightSet wl = derive_weights(table, cfg.N, lp, cfg.N);
        lattice::ProjectionSet proj = lattice::make_projections(wl, digits);
        lattice::CoeffMatrix C;
        LatticeReport heur;
        if (mode == Mode::volume) {
            if (opt.certificate->N != cfg.N) {
                throw ArgumentError("certificate is for N = " + std::to_string(opt.certificate->N) + ", config has N = " +
                                    std::to_string(cfg.N));
            }
            C = pipeline_detail::matrix_of(*opt.certificate);
            heur = *opt.certificate;
        } else {
            mpz_class M = parse_integer_literal(cfg.coeff_bound);
            auto lr = lattice::lll_bounded(proj, parse_rational(cfg.lll_delta), M);
            C = lr.C;
            heur.iterations = lr.iterations;
            heur.reductions = lr.reductions;
            heur.swaps = lr.swaps;
        }
        std::string d_text = mode == Mode::volume ? opt.certificate->d : cfg.d_target;
        if (d_text == "auto") {
            auto sums = lattice::coordinate_sums(C, proj, workers);
            Interval mx = sums[0];
            for (const auto& s : sums) mx = rigor::max(mx, s);
            d_text = pipeline_detail::round_up_decimal(mul_2si(mx, 1), 3);
        }
        Interval d = parse_value(d_text, lp);
        lattice::TilingCertificate cert;
        try {
            cert = lattice::certify(C, proj, d, workers);
        } catch (const CertificationError& e) {
            set_claim(claim(rep, 4), false, 0, std::nullopt, e.what());
            throw;
        }
        LatticeReport lrep = pipeline_detail::lattice_report(cert, digits, cfg, d_text);
        lrep.iterations = heur.iterations;
        lrep.reductions = heur.reductions;
        lrep.swaps = heur.swaps;
        if (mode == Mode::volume) {
            lrep.lll_delta = heur.lll_delta;
            lrep.coeff_bound = heur.coeff_bound;
        }
        set_claim(claim(rep, 4), true, cert.worst_n, Enclosure::of(d - cert.max_sum));
        rep.lattice = lrep;
        end();
        if (mode == Mode::lattice) {
            rep.status = "CERTIFIED";
            return rep;
        }

        begin("grid");
        Interval eps = mul_2si(d.with_precision(prec), 1);
        volume::InvertOptions io;
        io.workers = workers;
        volume::GridFamily grid = volume::invert_w(*fam, cfg.ell, eps, io);
        if (std::string bad = volume::verify_grid(*fam, grid); !bad.empty()) {
            throw CertificationError("grid check failed: " + bad);
        }
        VolumeReport vr;
        vr.ell = cfg.ell;
        vr.eps = eps.hi_str(6);
        for (int n = 1; n <= grid.N(); ++n) {
            if (grid.x[static_cast<std::size_t>(n - 1)].back() == 0.0) vr.zero_rows.push_back(n);
        }
        end();

        begin("convolution");
        Interval sum_r = volume::convolve_volume(grid, workers);
        end();

        begin("final");
        contour::ContourConfig ccfg = contour_config(cfg, prec);
        volume::VolumeResult res = volume::final_bound(sum_r, ccfg.delta, cfg.N, w.gamma0);
        vr.sum_r = Enclosure::of(res.sum_r);
        vr.kappa_increment = Enclosure::of(res.kappa_increment);
        vr.kappa0_lower = Enclosure::of(res.kappa0_lower);
        vr.gamma0_over_pi = Enclosure::of(w.gamma0 / Interval::pi(prec));
        vr.meets_one_sixtieth = res.meets_one_sixtieth;
        rep.volume = vr;
        Interval target = parse_value(cfg.kappa_target, prec);
        bool ok = rigor::certainly_positive(res.kappa_increment) &&
                  rigor::certainly(res.kappa_increment, rigor::Rel::ge, target);
        set_claim(claim(rep, 5), ok, 0, Enclosure::of(res.kappa_increment - target),
                  ok ? "" : "increment " + res.kappa_increment.str() + " not certainly >= " + cfg.kappa_target);
        end();
        if (!ok) {
            stage = "final";
            throw CertificationError("claim 5 failed: increment " + vr.kappa_increment.str() + " vs target " +
                                     cfg.kappa_target);
        }
        rep.status = "CERTIFIED";
    } catch (const Error& e) {
        rep.status = "FAILED";
        rep.failed_stage = stage;
        rep.failure = e.what();
    }
    return rep;
}

}  // namespace zdc
