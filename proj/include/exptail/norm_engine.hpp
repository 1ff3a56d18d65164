#pragma once

#include <optional>
#include <string>
#include <vector>

#include "exptail/conjugate.hpp"
#include "exptail/mgf_oracle.hpp"
#include "exptail/sampling.hpp"

namespace exptail::norm {

// --- generating-function norm (least tau dominating the orbit MGF) ----------

struct LambdaGrid {
    int directions = 32;
    int radii = 16;
    double min_radius = 1e-2;
    double max_radius = 50.0;  // typically the truncation radius of phi
    unsigned long long seed = 0x5DEECE66Dull;

    std::vector<Vec> points(int dim) const;
};

struct BPhiResult {
    double value = 0.0;             // +inf when no tau <= 2^64 works
    std::string diagnostic;         // e.g. "Kramer violated on grid"
    std::optional<Vec> witness_lambda;  // grid point forcing divergence
};

BPhiResult bphi_norm(const MGFOracle& oracle, const convex::YoungFunction& phi,
                     const std::vector<Vec>& lambda_grid, double rel_tol = 1e-3);

// --- mixed moments and the moment-weight machinery --------------------------

struct MixedMoment {
    double value = 0.0;       // (E prod |xi_j|^{r_j})^{1/|r|}
    double std_error = 0.0;   // delta-method error of the root
    bool high_variance = false;  // |r| > 16 at moderate n
};

MixedMoment mixed_moment(const dist::SampleSet& samples, const Vec& r);

struct PsiWeight {
    double value = 0.0;
    bool truncated = false;   // the inner conjugate sup saturated
};

// e^{-1} 2^{d/|r|} prod r_j^{r_j/|r|} exp(-PhiStar(r)/|r|), with
// PhiStar the conjugate of mu -> phi*(exp(mu)) over mu-space.
PsiWeight psi_weight(const convex::YoungFunction& phi, const Vec& r,
                     const convex::SearchConfig& search);

// psi weight times the norm: the moment upper bound.
PsiWeight moment_bound(const convex::YoungFunction& phi, const Vec& r, double norm,
                       const convex::SearchConfig& search);

// conjugate of mu -> phi*(exp(mu)); exposed for tests and diagnostics.
convex::TransformResult capital_phi_conjugate(const convex::YoungFunction& phi, const Vec& r,
                                              const convex::SearchConfig& search);

// --- moment-weighted supremum norm ------------------------------------------

struct RGrid {
    // dim 1: integers 1..20; dim >= 2: magnitudes {1,2,4,8,16} times seeded
    // direction vectors clamped to entries >= 1.
    static std::vector<Vec> standard(int dim, unsigned long long seed = 0xC0FFEEull);
};

struct GlsPoint {
    Vec r;
    double moment;
    double weight;
    double ratio;
    double std_error;      // of the ratio
    bool high_variance;
    bool skipped;
};

struct GlsResult {
    double value = 0.0;          // sup of ratios over the whole grid
    double trusted_value = 0.0;  // sup over points not flagged high-variance
    Vec argmax_r;
    std::vector<GlsPoint> points;
    std::string diagnostic;
};

GlsResult gls_norm(const dist::SampleSet& samples, const convex::YoungFunction& phi,
                   const std::vector<Vec>& r_grid, const convex::SearchConfig& search);

// --- integrability certificates ---------------------------------------------

enum class CertVerdict { Finite, Infinite, Inconclusive };

struct Certificate {
    CertVerdict verdict = CertVerdict::Inconclusive;
    double value = 0.0;       // meaningful for Finite
    double std_error = 0.0;   // Monte-Carlo path only
    std::string note;
};

struct QuadratureConfig {
    double rel_tol = 1e-6;
    double decay_threshold = 1e-12;
    double cut_cap = 1e9;          // marching limit for the tail cut
    std::size_t mc_samples = 200000;  // dim > 3 path
    unsigned long long mc_seed = 17;
};

// integral over the non-negative orthant of exp(phi*(gamma x) - phi*(x)).
Certificate k_gamma_integral(const convex::YoungFunction& phi, double gamma,
                             const QuadratureConfig& quad, const convex::SearchConfig& search);

// integral over R^d of exp(Phi(gamma z) - Phi(z)), Phi(z) = phi*(exp z).
// Diverges on the left tail whenever the integrand tends to 1 there; the
// verdict names the failing direction.
Certificate l_integral(const convex::YoungFunction& phi, double gamma,
                       const QuadratureConfig& quad, const convex::SearchConfig& search);

// --- Orlicz construction -----------------------------------------------------

// N(u) = exp(phi*(u)) - 1 (vector u; zero at the origin).
struct OrliczNValue {
    double value = 0.0;
    bool truncated = false;
};
OrliczNValue orlicz_n_function(const convex::YoungFunction& phi, const Vec& u,
                               const convex::SearchConfig& search);

struct OrliczResult {
    double value = 0.0;        // +inf when no finite scale works
    std::string diagnostic;
};

// Least c with mean N(|xi|/c) <= 1, by bisection with a scale-covariant
// initial bracket (so scaling the data by 2 scales the result by exactly 2).
OrliczResult orlicz_norm(const dist::SampleSet& samples, const convex::YoungFunction& phi,
                         double rel_tol = 1e-3,
                         const convex::SearchConfig& search = {});

// --- aggregate report --------------------------------------------------------

struct NormReport {
    double bphi = 0.0;
    double gls = 0.0;
    double gls_trusted = 0.0;
    double orlicz = 0.0;
    double bphi_over_gls = 0.0;
    double bphi_over_orlicz = 0.0;
    double gls_over_orlicz = 0.0;
    std::string bphi_diagnostic;
    std::string gls_diagnostic;
    std::string orlicz_diagnostic;
    std::vector<double> gls_argmax_r;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string model_config;
    std::string phi_config;
};

NormReport norm_report(const dist::SampleSet& samples, const convex::YoungFunction& phi);

}  // namespace exptail::norm
