#include "exptail/report_io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace exptail::io {

using nlohmann::json;

namespace {

json xr_to_json(double v) {
    if (is_pos_inf(v)) return "inf";
    return v;
}

double xr_from_json(const json& j) {
    if (j.is_string() && j.get<std::string>() == "inf") return kPosInf;
    return j.get<double>();
}

json rows_to_json(const std::vector<verify::EvidenceRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json jr;
        jr["query"] = r.query;
        jr["lhs"] = xr_to_json(r.lhs);
        jr["rhs"] = xr_to_json(r.rhs);
        jr["margin"] = r.margin == kNegInf ? json("-inf") : xr_to_json(r.margin);
        jr["stat_tol"] = r.stat_tol;
        arr.push_back(jr);
    }
    return arr;
}

std::vector<verify::EvidenceRow> rows_from_json(const json& arr) {
    std::vector<verify::EvidenceRow> rows;
    for (const auto& jr : arr) {
        verify::EvidenceRow r;
        r.query = jr.at("query").get<std::vector<double>>();
        r.lhs = xr_from_json(jr.at("lhs"));
        r.rhs = xr_from_json(jr.at("rhs"));
        const auto& m = jr.at("margin");
        r.margin = (m.is_string() && m.get<std::string>() == "-inf") ? kNegInf
                                                                      : xr_from_json(m);
        r.stat_tol = jr.at("stat_tol").get<double>();
        rows.push_back(r);
    }
    return rows;
}

json predicate_to_json(const verify::PredicateReport& p) {
    json j;
    j["verdict"] = verify::verdict_name(p.verdict);
    j["fitted"] = xr_to_json(p.fitted);
    j["note"] = p.note;
    j["evidence"] = rows_to_json(p.evidence);
    return j;
}

verify::Verdict verdict_from_name(const std::string& s) {
    if (s == "holds") return verify::Verdict::Holds;
    if (s == "fails") return verify::Verdict::Fails;
    return verify::Verdict::Inconclusive;
}

verify::PredicateReport predicate_from_json(const json& j) {
    verify::PredicateReport p;
    p.verdict = verdict_from_name(j.at("verdict").get<std::string>());
    p.fitted = xr_from_json(j.at("fitted"));
    p.note = j.value("note", "");
    p.evidence = rows_from_json(j.at("evidence"));
    return p;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string norm_report_to_json(const norm::NormReport& r) {
    json j;
    j["kind"] = "norm_report";
    j["norms"]["bphi"] = xr_to_json(r.bphi);
    j["norms"]["gls"] = r.gls;
    j["norms"]["gls_trusted"] = r.gls_trusted;
    j["norms"]["orlicz"] = xr_to_json(r.orlicz);
    j["ratios"]["bphi_over_gls"] = r.bphi_over_gls;
    j["ratios"]["bphi_over_orlicz"] = r.bphi_over_orlicz;
    j["ratios"]["gls_over_orlicz"] = r.gls_over_orlicz;
    j["diagnostics"]["bphi"] = r.bphi_diagnostic;
    j["diagnostics"]["gls"] = r.gls_diagnostic;
    j["diagnostics"]["orlicz"] = r.orlicz_diagnostic;
    j["diagnostics"]["gls_argmax_r"] = r.gls_argmax_r;
    j["meta"]["n"] = r.n;
    j["meta"]["seed"] = r.seed;
    j["meta"]["model_config"] = r.model_config;
    j["meta"]["phi_config"] = r.phi_config;
    return j.dump(2);
}

norm::NormReport norm_report_from_json(const std::string& text) {
    json j = json::parse(text);
    norm::NormReport r;
    r.bphi = xr_from_json(j.at("norms").at("bphi"));
    r.gls = j.at("norms").at("gls").get<double>();
    r.gls_trusted = j.at("norms").at("gls_trusted").get<double>();
    r.orlicz = xr_from_json(j.at("norms").at("orlicz"));
    r.bphi_over_gls = j.at("ratios").at("bphi_over_gls").get<double>();
    r.bphi_over_orlicz = j.at("ratios").at("bphi_over_orlicz").get<double>();
    r.gls_over_orlicz = j.at("ratios").at("gls_over_orlicz").get<double>();
    r.bphi_diagnostic = j.at("diagnostics").at("bphi").get<std::string>();
    r.gls_diagnostic = j.at("diagnostics").at("gls").get<std::string>();
    r.orlicz_diagnostic = j.at("diagnostics").at("orlicz").get<std::string>();
    r.gls_argmax_r = j.at("diagnostics").at("gls_argmax_r").get<std::vector<double>>();
    r.n = j.at("meta").at("n").get<std::size_t>();
    r.seed = j.at("meta").at("seed").get<std::uint64_t>();
    r.model_config = j.at("meta").at("model_config").get<std::string>();
    r.phi_config = j.at("meta").at("phi_config").get<std::string>();
    return r;
}

std::string tail_record_to_json(const TailRecord& r) {
    json j;
    j["kind"] = "tail_record";
    j["x"] = r.x;
    j["empirical"] = r.empirical;
    j["half_width"] = r.half_width;
    j["chernov"] = r.chernov;
    j["dominated"] = r.dominated;
    return j.dump(2);
}

TailRecord tail_record_from_json(const std::string& text) {
    json j = json::parse(text);
    TailRecord r;
    r.x = j.at("x").get<std::vector<double>>();
    r.empirical = j.at("empirical").get<double>();
    r.half_width = j.at("half_width").get<double>();
    r.chernov = j.at("chernov").get<double>();
    r.dominated = j.at("dominated").get<bool>();
    return r;
}

std::string certify_record_to_json(const CertifyRecord& r) {
    json j;
    j["kind"] = "certify_record";
    j["gamma"] = r.gamma;
    j["I_gamma"]["kind"] = r.i_gamma_kind;
    j["I_gamma"]["value"] = r.i_gamma_value;
    j["I_gamma"]["note"] = r.i_note;
    j["L"]["kind"] = r.l_kind;
    j["L"]["value"] = r.l_value;
    j["L"]["note"] = r.l_note;
    return j.dump(2);
}

CertifyRecord certify_record_from_json(const std::string& text) {
    json j = json::parse(text);
    CertifyRecord r;
    r.gamma = j.at("gamma").get<double>();
    r.i_gamma_kind = j.at("I_gamma").at("kind").get<std::string>();
    r.i_gamma_value = j.at("I_gamma").at("value").get<double>();
    r.i_note = j.at("I_gamma").at("note").get<std::string>();
    r.l_kind = j.at("L").at("kind").get<std::string>();
    r.l_value = j.at("L").at("value").get<double>();
    r.l_note = j.at("L").at("note").get<std::string>();
    return r;
}

std::string ladder_to_json(const verify::MultiSeedReport& r) {
    json j;
    j["kind"] = "ladder_report";
    j["overall"] = verify::verdict_name(r.overall);
    j["fitted_c_spread"] = r.fitted_c_spread;
    j["sandwich_ratio_spread"] = r.sandwich_ratio_spread;
    json seeds = json::array();
    for (const auto& rep : r.per_seed) {
        json js;
        js["seed"] = rep.seed;
        js["n"] = rep.n;
        js["model_config"] = rep.model_config;
        js["phi_config"] = rep.phi_config;
        js["ladder"] = verify::verdict_name(rep.ladder);
        js["ladder_note"] = rep.ladder_note;
        js["sandwich_ratio"] = rep.sandwich_ratio;
        js["predicates"]["orlicz"] = predicate_to_json(rep.orlicz_membership);
        js["predicates"]["tail"] = predicate_to_json(rep.tail_domination);
        js["predicates"]["gls"] = predicate_to_json(rep.gls_membership);
        js["predicates"]["bphi"] = predicate_to_json(rep.bphi_membership);
        if (rep.fitted_subgaussian_k)
            js["fitted_subgaussian_k"] = *rep.fitted_subgaussian_k;
        seeds.push_back(js);
    }
    j["per_seed"] = seeds;
    return j.dump(2);
}

verify::MultiSeedReport ladder_from_json(const std::string& text) {
    json j = json::parse(text);
    verify::MultiSeedReport r;
    r.overall = verdict_from_name(j.at("overall").get<std::string>());
    r.fitted_c_spread = j.at("fitted_c_spread").get<double>();
    r.sandwich_ratio_spread = j.at("sandwich_ratio_spread").get<double>();
    for (const auto& js : j.at("per_seed")) {
        verify::EquivalenceReport rep;
        rep.seed = js.at("seed").get<std::uint64_t>();
        rep.n = js.at("n").get<std::size_t>();
        rep.model_config = js.at("model_config").get<std::string>();
        rep.phi_config = js.at("phi_config").get<std::string>();
        rep.ladder = verdict_from_name(js.at("ladder").get<std::string>());
        rep.ladder_note = js.at("ladder_note").get<std::string>();
        rep.sandwich_ratio = js.at("sandwich_ratio").get<double>();
        rep.orlicz_membership = predicate_from_json(js.at("predicates").at("orlicz"));
        rep.tail_domination = predicate_from_json(js.at("predicates").at("tail"));
        rep.gls_membership = predicate_from_json(js.at("predicates").at("gls"));
        rep.bphi_membership = predicate_from_json(js.at("predicates").at("bphi"));
        if (js.contains("fitted_subgaussian_k"))
            rep.fitted_subgaussian_k = js.at("fitted_subgaussian_k").get<double>();
        r.per_seed.push_back(rep);
    }
    return r;
}

std::string sweep_to_json(const verify::SweepTable& t) {
    json j;
    j["kind"] = "tail_sweep";
    j["min_margin"] = t.min_margin;
    json rows = json::array();
    for (const auto& r : t.rows) {
        json jr;
        jr["x"] = r.x;
        jr["empirical"] = r.empirical;
        jr["half_width"] = r.half_width;
        jr["bound"] = r.bound;
        jr["margin"] = r.margin;
        rows.push_back(jr);
    }
    j["rows"] = rows;
    return j.dump(2);
}

verify::SweepTable sweep_from_json(const std::string& text) {
    json j = json::parse(text);
    verify::SweepTable t;
    t.min_margin = j.at("min_margin").get<double>();
    for (const auto& jr : j.at("rows")) {
        verify::SweepRow r;
        r.x = jr.at("x").get<std::vector<double>>();
        r.empirical = jr.at("empirical").get<double>();
        r.half_width = jr.at("half_width").get<double>();
        r.bound = jr.at("bound").get<double>();
        r.margin = jr.at("margin").get<double>();
        t.rows.push_back(r);
    }
    return t;
}

void emit_sweep_csv(const verify::SweepTable& t, const std::string& path) {
    std::ostringstream out;
    out << "query,empirical,half_width,bound,margin\n";
    out << std::setprecision(17);
    for (const auto& r : t.rows) {
        out << "\"";
        for (std::size_t j = 0; j < r.x.size(); ++j) out << (j ? ";" : "") << r.x[j];
        out << "\"," << r.empirical << "," << r.half_width << "," << r.bound << ","
            << r.margin << "\n";
    }
    write_file(path, out.str());
}

void emit_evidence_csv(const std::vector<verify::EvidenceRow>& rows, const std::string& path) {
    std::ostringstream out;
    out << "query,empirical,half_width,bound,margin\n";
    out << std::setprecision(17);
    for (const auto& r : rows) {
        out << "\"";
        for (std::size_t j = 0; j < r.query.size(); ++j) out << (j ? ";" : "") << r.query[j];
        out << "\"," << r.lhs << "," << (r.stat_tol / 3.0) << "," << r.rhs << "," << r.margin
            << "\n";
    }
    write_file(path, out.str());
}

void emit_plot_data(const std::string& report_json, const std::string& path) {
    json j = json::parse(report_json);
    std::string kind = j.value("kind", "");
    if (kind == "tail_sweep") {
        emit_sweep_csv(sweep_from_json(report_json), path);
        return;
    }
    if (kind == "ladder_report") {
        auto ladder = ladder_from_json(report_json);
        std::filesystem::create_directories(path);
        const char* names[] = {"orlicz", "tail", "gls", "bphi"};
        for (std::size_t s = 0; s < ladder.per_seed.size(); ++s) {
            const auto& rep = ladder.per_seed[s];
            const verify::PredicateReport* preds[] = {
                &rep.orlicz_membership, &rep.tail_domination, &rep.gls_membership,
                &rep.bphi_membership};
            for (int p = 0; p < 4; ++p) {
                std::string file = path + "/seed" + std::to_string(rep.seed) + "_" +
                                   names[p] + ".csv";
                emit_evidence_csv(preds[p]->evidence, file);
            }
        }
        return;
    }
    throw std::runtime_error("report kind not plottable: " + kind);
}

}  // namespace exptail::io
