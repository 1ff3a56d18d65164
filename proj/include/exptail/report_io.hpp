#pragma once

#include <string>
#include <vector>

#include "exptail/norm_engine.hpp"
#include "exptail/verify.hpp"

namespace exptail::io {

// Extended-real JSON convention: finite values are numbers, +inf is the
// string "inf" (nlohmann would otherwise dump infinities as null and break
// the round-trip contract).

std::string norm_report_to_json(const norm::NormReport& r);
norm::NormReport norm_report_from_json(const std::string& text);

struct TailRecord {
    std::vector<double> x;
    double empirical = 0.0;
    double half_width = 0.0;
    double chernov = 0.0;
    bool dominated = false;
};
std::string tail_record_to_json(const TailRecord& r);
TailRecord tail_record_from_json(const std::string& text);

struct CertifyRecord {
    std::string i_gamma_kind;  // "value" | "inf" | "inconclusive"
    double i_gamma_value = 0.0;
    std::string l_kind;
    double l_value = 0.0;
    std::string i_note;
    std::string l_note;
    double gamma = 0.0;
};
std::string certify_record_to_json(const CertifyRecord& r);
CertifyRecord certify_record_from_json(const std::string& text);

std::string ladder_to_json(const verify::MultiSeedReport& r);
verify::MultiSeedReport ladder_from_json(const std::string& text);

std::string sweep_to_json(const verify::SweepTable& t);
verify::SweepTable sweep_from_json(const std::string& text);

// Plot-data CSV: columns query, empirical, half_width, bound, margin in
// deterministic row order. Throws std::runtime_error for unwritable paths.
void emit_sweep_csv(const verify::SweepTable& t, const std::string& path);
void emit_evidence_csv(const std::vector<verify::EvidenceRow>& rows, const std::string& path);

// Dispatch by the "kind" field of a report file: a tail sweep yields one
// CSV at `path`; a ladder yields one CSV per predicate inside `path` treated
// as a directory.
void emit_plot_data(const std::string& report_json, const std::string& path);

}  // namespace exptail::io
