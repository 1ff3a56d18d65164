#pragma once

#include <optional>
#include <string>
#include <vector>

#include "exptail/norm_engine.hpp"
#include "exptail/tail_engine.hpp"

namespace exptail::verify {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Verdict { Holds, Fails, Inconclusive };
std::string verdict_name(Verdict v);

struct EvidenceRow {
    std::vector<double> query;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;      // rhs - lhs
    double stat_tol = 0.0;    // 3 standard errors of the lhs estimate
};

struct PredicateReport {
    Verdict verdict = Verdict::Inconclusive;
    double fitted = 0.0;      // norm value or fitted constant, +inf allowed
    std::vector<EvidenceRow> evidence;
    std::string note;
};

struct LadderConfig {
    std::size_t n = 1000000;
    std::uint64_t seed = 1;
    std::vector<Vec> x_grid;       // defaults derived from dimension when empty
    std::vector<Vec> r_grid;
    std::vector<Vec> lambda_grid;
    double fit_c_lo = 0.1;
    double fit_c_hi = 100.0;
};

struct EquivalenceReport {
    std::string model_config;
    std::string phi_config;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    PredicateReport orlicz_membership;   // A
    PredicateReport tail_domination;     // B, fitted = smallest C
    PredicateReport gls_membership;      // C
    PredicateReport bphi_membership;     // D
    Verdict ladder = Verdict::Inconclusive;
    std::string ladder_note;             // culprit when inconclusive
    double sandwich_ratio = 0.0;         // bphi / gls
    std::optional<double> fitted_subgaussian_k;  // quadratic phi only
};

EquivalenceReport equivalence_ladder(const dist::DistributionModel& model,
                                     const convex::YoungFunction& phi,
                                     const LadderConfig& config);

struct SweepRow {
    std::vector<double> x;
    double empirical = 0.0;
    double half_width = 0.0;
    double bound = 0.0;
    double margin = 0.0;      // bound - empirical
};

struct SweepTable {
    std::vector<SweepRow> rows;
    double min_margin = 0.0;
};

SweepTable tail_domination_sweep(const dist::DistributionModel& model,
                                 const convex::YoungFunction& phi, double scale,
                                 const std::vector<Vec>& x_grid, std::size_t n,
                                 std::uint64_t seed);

struct CheckResult {
    Verdict verdict = Verdict::Inconclusive;
    double worst_margin = 0.0;
    std::vector<EvidenceRow> evidence;
};

// Empirical plain MGF against exp(0.5 (Cov-hat lambda, lambda)).
CheckResult strict_subgaussian_check(const dist::SampleSet& samples,
                                     const std::vector<Vec>& lambda_grid);

struct VarianceDomination {
    Verdict half_hessian_verdict = Verdict::Inconclusive;  // D = Hessian/2 reading
    Verdict full_hessian_verdict = Verdict::Inconclusive;
    double half_margin = 0.0;   // smallest eigenvalue of D - Cov-hat
    double full_margin = 0.0;
};

// Requires the sample's generating-function norm <= 1 + tol; throws
// std::invalid_argument instructing a rescale otherwise. Reports both the
// half-Hessian and full-Hessian readings of the dominating matrix.
VarianceDomination variance_domination_check(const dist::SampleSet& samples,
                                             const convex::YoungFunction& phi,
                                             double norm_tol = 0.05);

// Multi-seed driver: per-seed ladders plus cross-seed stability of the
// fitted constants.
struct MultiSeedReport {
    std::vector<EquivalenceReport> per_seed;
    Verdict overall = Verdict::Inconclusive;
    double fitted_c_spread = 0.0;        // max relative deviation from the mean
    double sandwich_ratio_spread = 0.0;
};

MultiSeedReport run_ladders(const dist::DistributionModel& model,
                            const convex::YoungFunction& phi, std::size_t n,
                            const std::vector<std::uint64_t>& seeds);

std::vector<Vec> default_x_grid(int dim);
std::vector<Vec> default_lambda_grid(int dim, double scale_hint = 1.0);

}  // namespace exptail::verify
