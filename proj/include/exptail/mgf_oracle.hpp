#pragma once

#include <memory>
#include <optional>
#include <string>

#include "exptail/sampling.hpp"

namespace exptail::norm {

using Vec = Eigen::VectorXd;

enum class OracleSource { Analytic, Empirical };

// Evaluates lambda -> log of the sign-orbit-maximized MGF. Divergence is
// reported through a +inf sentinel; the empirical source also diverges when
// the generating model's analytic MGF is +inf at lambda, and, for models
// without an analytic form, when extending the sample keeps growing the
// estimate by more than 50% per doubling (pseudo-convergence detection).
class MGFOracle {
public:
    static MGFOracle analytic(std::shared_ptr<const dist::DistributionModel> model);
    static MGFOracle empirical(dist::SampleSet samples);

    OracleSource source() const { return source_; }
    int dimension() const { return dim_; }

    // Log of max over sign orbits of mean exp((eps (x) lambda, xi)); +inf on
    // divergence. Records the offending lambda for diagnostics.
    double log_orbit_mgf(const Vec& lambda) const;

    // Plain log mean exp((lambda, xi)) with a delta-method standard error
    // (empirical source only; analytic source returns se = 0).
    struct LogMgfValue {
        double value;
        double std_error;
    };
    LogMgfValue log_plain_mgf(const Vec& lambda) const;

    std::optional<Vec> last_divergent_lambda() const { return divergent_lambda_; }
    const dist::SampleSet* samples() const { return samples_ ? &*samples_ : nullptr; }

private:
    MGFOracle() = default;

    OracleSource source_ = OracleSource::Analytic;
    int dim_ = 1;
    std::shared_ptr<const dist::DistributionModel> model_;
    std::optional<dist::SampleSet> samples_;
    mutable std::optional<dist::SampleSet> extended_;   // doubled-n cache
    mutable std::optional<Vec> divergent_lambda_;

    double empirical_log_orbit_mgf(const dist::SampleSet& s, const Vec& lambda) const;
};

// natural function: log of the orbit-maximized MGF (the +inf sentinel
// propagates).
double natural_function(const MGFOracle& oracle, const Vec& lambda);

}  // namespace exptail::norm
