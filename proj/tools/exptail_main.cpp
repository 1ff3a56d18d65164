// exptail: compute and cross-check exponential-tail norms, conjugates,
// Chernov-type bounds, and integrability certificates from the command line.
//
// Exit codes: 0 success / verdict holds, 1 verdict fails, 2 user or config
// error, 3 inconclusive. A machine-readable JSON record is always written
// (stdout, plus --out when given) before exiting.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "exptail/conjugate.hpp"
#include "exptail/norm_engine.hpp"
#include "exptail/parallel.hpp"
#include "exptail/report_io.hpp"
#include "exptail/verify.hpp"

namespace {

using exptail::kPosInf;
using Vec = Eigen::VectorXd;

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell == "inf" || cell == "+inf")
            out.push_back(kPosInf);
        else
            out.push_back(std::stod(cell));
    }
    return out;
}

Vec to_vec(const std::vector<double>& v) {
    return Eigen::Map<const Vec>(v.data(), static_cast<long>(v.size()));
}

void write_output(const std::string& json_text, const std::string& out_path, bool json_only,
                  const std::string& human_line) {
    if (!json_only && !human_line.empty()) std::cout << human_line << "\n";
    std::cout << json_text << "\n";
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open for writing: " + out_path);
        f << json_text << "\n";
    }
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) seeds.push_back(std::stoull(cell));
    return seeds;
}

}  // namespace

int main(int argc, char** argv) {
    exptail::apply_thread_cap();

    CLI::App app{"exponential-tail norm and bound toolkit"};
    app.require_subcommand(1);
    bool json_only = false;
    app.add_flag("--json", json_only, "machine output only");

    // conjugate
    auto* cmd_conj = app.add_subcommand("conjugate", "evaluate the convex conjugate");
    std::string conj_phi, conj_y, conj_out, conj_grid_out;
    double conj_radius = 0.0;
    cmd_conj->add_option("--phi", conj_phi, "generating-function config")->required();
    cmd_conj->add_option("--y", conj_y, "query point, comma separated")->required();
    cmd_conj->add_option("--radius", conj_radius, "search radius override");
    cmd_conj->add_option("--out", conj_out, "write the JSON record here");
    cmd_conj->add_option("--grid-out", conj_grid_out, "also export a tabulated grid CSV");

    // tail
    auto* cmd_tail = app.add_subcommand("tail", "empirical orthant tail vs the bound");
    std::string tail_model, tail_phi, tail_x, tail_out;
    std::size_t tail_n = 1000000;
    std::uint64_t tail_seed = 1;
    double tail_scale = 1.0;
    cmd_tail->add_option("--model", tail_model)->required();
    cmd_tail->add_option("--phi", tail_phi)->required();
    cmd_tail->add_option("--x", tail_x, "threshold vector (inf allowed)")->required();
    cmd_tail->add_option("--n", tail_n);
    cmd_tail->add_option("--seed", tail_seed);
    cmd_tail->add_option("--scale", tail_scale);
    cmd_tail->add_option("--out", tail_out);

    // norm
    auto* cmd_norm = app.add_subcommand("norm", "the three norms and their ratios");
    std::string norm_model, norm_phi, norm_out;
    std::size_t norm_n = 1000000;
    std::uint64_t norm_seed = 1;
    cmd_norm->add_option("--model", norm_model)->required();
    cmd_norm->add_option("--phi", norm_phi)->required();
    cmd_norm->add_option("--n", norm_n);
    cmd_norm->add_option("--seed", norm_seed);
    cmd_norm->add_option("--out", norm_out);

    // certify
    auto* cmd_cert = app.add_subcommand("certify", "integrability certificates");
    std::string cert_phi, cert_out;
    double cert_gamma = 0.5;
    cmd_cert->add_option("--phi", cert_phi)->required();
    cmd_cert->add_option("--gamma", cert_gamma);
    cmd_cert->add_option("--out", cert_out);

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "equivalence-ladder harness");
    std::string ver_model, ver_phi, ver_seeds = "1,2,3", ver_out, ver_csv_dir;
    std::size_t ver_n = 1000000;
    cmd_verify->add_option("--model", ver_model)->required();
    cmd_verify->add_option("--phi", ver_phi)->required();
    cmd_verify->add_option("--n", ver_n);
    cmd_verify->add_option("--seeds", ver_seeds, "comma-separated seed list");
    cmd_verify->add_option("--out", ver_out);
    cmd_verify->add_option("--evidence-csv", ver_csv_dir, "per-check evidence tables");

    // report
    auto* cmd_report = app.add_subcommand("report", "emit plot CSVs from a JSON report");
    std::string rep_in, rep_out;
    cmd_report->add_option("--in", rep_in)->required();
    cmd_report->add_option("--out", rep_out, "CSV path (sweeps) or directory (ladders)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*cmd_conj) {
            auto phi = exptail::convex::YoungFunction::load_config_file(conj_phi);
            exptail::convex::SearchConfig search;
            search.radius = conj_radius > 0 ? conj_radius : phi.truncation_radius();
            Vec y = to_vec(parse_csv_doubles(conj_y));
            auto tr = exptail::convex::legendre_transform(phi, y, search);
            nlohmann::json j;
            j["kind"] = "conjugate_record";
            j["y"] = std::vector<double>(y.data(), y.data() + y.size());
            j["value"] = tr.value;
            j["truncated"] = tr.truncated;
            std::ostringstream human;
            human << tr.value;
            write_output(j.dump(2), conj_out, json_only, human.str());
            if (!conj_grid_out.empty()) {
                exptail::convex::ConjugateGrid::BuildConfig bc;
                bc.search = search;
                auto grid = exptail::convex::ConjugateGrid::build(phi, bc);
                grid.export_csv(conj_grid_out);
            }
            return 0;
        }

        if (*cmd_tail) {
            auto model = exptail::dist::DistributionModel::load_config_file(tail_model);
            auto phi = exptail::convex::YoungFunction::load_config_file(tail_phi);
            exptail::convex::SearchConfig search;
            search.radius = phi.truncation_radius();
            Vec x = to_vec(parse_csv_doubles(tail_x));
            auto samples = exptail::dist::sample(model, tail_n, tail_seed);
            auto est = exptail::tail::empirical_tail(samples, x);
            exptail::io::TailRecord rec;
            rec.x.assign(x.data(), x.data() + x.size());
            rec.empirical = est.value;
            rec.half_width = est.half_width;
            // the bound needs a finite query; an empty event is dominated by 1
            if (x.allFinite()) {
                auto bound = exptail::tail::chernov_bound(phi, x, tail_scale, search);
                rec.chernov = bound.value;
            } else {
                rec.chernov = 1.0;
            }
            rec.dominated = est.value - 3.0 * est.std_error <= rec.chernov;
            std::ostringstream human;
            human << "empirical " << rec.empirical << " +- " << rec.half_width << ", bound "
                  << rec.chernov << (rec.dominated ? " (dominated)" : " (violated)");
            write_output(exptail::io::tail_record_to_json(rec), tail_out, json_only,
                         human.str());
            return 0;
        }

        if (*cmd_norm) {
            auto model = exptail::dist::DistributionModel::load_config_file(norm_model);
            auto phi = exptail::convex::YoungFunction::load_config_file(norm_phi);
            auto samples = exptail::dist::sample(model, norm_n, norm_seed);
            auto rep = exptail::norm::norm_report(samples, phi);
            std::ostringstream human;
            human << "bphi " << rep.bphi << "  gls " << rep.gls << "  orlicz " << rep.orlicz;
            write_output(exptail::io::norm_report_to_json(rep), norm_out, json_only,
                         human.str());
            return 0;
        }

        if (*cmd_cert) {
            auto phi = exptail::convex::YoungFunction::load_config_file(cert_phi);
            exptail::convex::SearchConfig search;
            search.radius = phi.truncation_radius();
            exptail::norm::QuadratureConfig quad;
            auto ig = exptail::norm::k_gamma_integral(phi, cert_gamma, quad, search);
            auto lv = exptail::norm::l_integral(phi, cert_gamma, quad, search);
            auto kind_of = [](exptail::norm::CertVerdict v) {
                switch (v) {
                    case exptail::norm::CertVerdict::Finite: return "value";
                    case exptail::norm::CertVerdict::Infinite: return "inf";
                    default: return "inconclusive";
                }
            };
            exptail::io::CertifyRecord rec;
            rec.gamma = cert_gamma;
            rec.i_gamma_kind = kind_of(ig.verdict);
            rec.i_gamma_value = ig.value;
            rec.i_note = ig.note;
            rec.l_kind = kind_of(lv.verdict);
            rec.l_value = lv.value;
            rec.l_note = lv.note;
            std::ostringstream human;
            human << "I_gamma: " << rec.i_gamma_kind
                  << (ig.verdict == exptail::norm::CertVerdict::Finite
                          ? " " + std::to_string(ig.value)
                          : "")
                  << "  L: " << rec.l_kind;
            write_output(exptail::io::certify_record_to_json(rec), cert_out, json_only,
                         human.str());
            bool inconclusive = ig.verdict == exptail::norm::CertVerdict::Inconclusive ||
                                lv.verdict == exptail::norm::CertVerdict::Inconclusive;
            return inconclusive ? 3 : 0;
        }

        if (*cmd_verify) {
            auto model = exptail::dist::DistributionModel::load_config_file(ver_model);
            auto phi = exptail::convex::YoungFunction::load_config_file(ver_phi);
            auto seeds = parse_seeds(ver_seeds);
            if (seeds.empty()) throw std::invalid_argument("seed list must be non-empty");
            auto rep = exptail::verify::run_ladders(model, phi, ver_n, seeds);
            std::string json_text = exptail::io::ladder_to_json(rep);
            std::ostringstream human;
            human << "ladder: " << exptail::verify::verdict_name(rep.overall);
            write_output(json_text, ver_out, json_only, human.str());
            if (!ver_csv_dir.empty()) exptail::io::emit_plot_data(json_text, ver_csv_dir);
            switch (rep.overall) {
                case exptail::verify::Verdict::Holds: return 0;
                case exptail::verify::Verdict::Fails: return 1;
                case exptail::verify::Verdict::Inconclusive: return 3;
            }
        }

        if (*cmd_report) {
            std::ifstream in(rep_in);
            if (!in) throw std::invalid_argument("cannot open report: " + rep_in);
            std::stringstream ss;
            ss << in.rdbuf();
            exptail::io::emit_plot_data(ss.str(), rep_out);
            nlohmann::json j;
            j["kind"] = "report_emitted";
            j["out"] = rep_out;
            write_output(j.dump(2), "", json_only, "wrote " + rep_out);
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        nlohmann::json j;
        j["kind"] = "error";
        j["error"] = e.what();
        std::cout << j.dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        nlohmann::json j;
        j["kind"] = "error";
        j["error"] = e.what();
        std::cout << j.dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
