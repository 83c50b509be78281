// zdc: command-line front end of the verification pipeline.
//
//   zdc check-zeros | mesh | lll | volume --certificate F | run | report F
//
// Exit codes: 0 full certification, 1 certification or stage failure,
// 2 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "zdc/config.hpp"
#include "zdc/pipeline.hpp"
#include "zdc/report.hpp"

#ifndef ZDC_DEFAULT_DATA_DIR
#define ZDC_DEFAULT_DATA_DIR ""
#endif

namespace {

struct Common {
    std::string preset = "paper";
    std::string config_path;
    std::map<std::string, std::string> overrides;
    std::string out;
    bool quiet = false;
    bool verbose = false;
};

// Flag name -> config key.
const std::pair<const char*, const char*> kOverrides[] = {
    {"--zeros", "zeros"},     {"--declared-ulp", "declared_ulp"}, {"--n", "N"},
    {"--nprime", "Nprime"},   {"--delta", "delta"},               {"--y0", "Y0"},
    {"--y1", "Y1"},           {"--m", "m"},                       {"--alpha", "alpha"},
    {"--lll-digits", "lll_digits"}, {"--lll-delta", "lll_delta"}, {"--M", "M"},
    {"--d-target", "d_target"}, {"--ell", "ell"},                 {"--kappa-target", "kappa_target"},
    {"--precision", "precision"}, {"--parallelism", "parallelism"},
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--preset", c.preset, "base configuration")->check(CLI::IsMember({"paper", "reduced"}));
    sub->add_option("--config", c.config_path, "config file applied over the preset");
    for (const auto& [flag, key] : kOverrides) {
        std::string k = key;
        sub->add_option_function<std::string>(
            flag, [&c, k](const std::string& v) { c.overrides[k] = v; }, "override '" + k + "'");
    }
    sub->add_option("--out", c.out, "write the JSON certificate here");
    sub->add_flag("-q,--quiet", c.quiet, "do not print the text report");
    sub->add_flag("-v,--verbose", c.verbose, "print stage names to stderr");
}

zdc::RunConfig build_config(const Common& c) {
    zdc::RunConfig cfg = c.preset == "reduced" ? zdc::reduced_config() : zdc::paper_config();
    if (!c.config_path.empty()) cfg = zdc::load_config_file(c.config_path, cfg);
    for (const auto& [k, v] : c.overrides) zdc::set_config_value(cfg, k, v);
    return cfg;
}

int emit(const zdc::CertificateReport& rep, const Common& c) {
    if (!c.out.empty()) {
        std::ofstream f(c.out);
        if (!f) {
            std::cerr << "error: cannot write '" << c.out << "'\n";
            return 1;
        }
        f << zdc::report_json(rep).dump(2) << '\n';
    }
    if (!c.quiet) std::cout << zdc::render_text(rep);
    if (!rep.certified()) std::cerr << "FAILED at stage '" << rep.failed_stage << "': " << rep.failure << '\n';
    return rep.certified() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interval re-verification of a zero-density lower bound"};
    app.require_subcommand(1);

    const std::pair<const char*, zdc::Mode> modes[] = {
        {"check-zeros", zdc::Mode::check_zeros}, {"mesh", zdc::Mode::mesh}, {"lll", zdc::Mode::lattice},
        {"volume", zdc::Mode::volume},           {"run", zdc::Mode::run},
    };
    const char* help[] = {
        "load and validate the zero table",
        "certify claims 1-3 on the contour mesh",
        "run the lattice heuristic and certify its matrix",
        "grid inversion and convolution from a stored lattice certificate",
        "the full pipeline",
    };
    std::map<std::string, Common> commons;
    std::map<std::string, CLI::App*> subs;
    std::string certificate_path;
    for (std::size_t i = 0; i < std::size(modes); ++i) {
        std::string name = modes[i].first;
        CLI::App* sub = app.add_subcommand(name, help[i]);
        add_common(sub, commons[name]);
        subs[name] = sub;
    }
    subs["lll"]->get_option("--out")->default_val("certificate.json");
    subs["volume"]->add_option("--certificate", certificate_path, "lattice certificate from 'lll' or 'run'")->required();

    std::string report_path;
    CLI::App* report = app.add_subcommand("report", "render a stored certificate as text");
    report->add_option("file", report_path, "JSON certificate")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (report->parsed()) {
            std::ifstream in(report_path);
            if (!in) {
                std::cerr << "error: cannot open '" << report_path << "'\n";
                return 2;
            }
            zdc::CertificateReport rep = zdc::parse_report(in);
            std::cout << zdc::render_text(rep);
            return rep.certified() ? 0 : 1;
        }
        for (const auto& [name, mode] : modes) {
            if (!subs[name]->parsed()) continue;
            const Common& c = commons[name];
            zdc::RunConfig cfg = build_config(c);
            zdc::PipelineOptions opt;
            opt.fallback_data_dir = ZDC_DEFAULT_DATA_DIR;
            if (c.verbose) opt.progress = &std::cerr;
            if (mode == zdc::Mode::volume) {
                std::ifstream in(certificate_path);
                if (!in) {
                    std::cerr << "error: cannot open certificate '" << certificate_path << "'\n";
                    return 2;
                }
                zdc::CertificateReport stored = zdc::parse_report(in);
                if (!stored.lattice) {
                    std::cerr << "error: '" << certificate_path << "' has no lattice section\n";
                    return 2;
                }
                opt.certificate = stored.lattice;
            }
            return emit(zdc::run_pipeline(cfg, mode, opt), c);
        }
    } catch (const zdc::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const zdc::ArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const zdc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
