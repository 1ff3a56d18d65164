#include "exptail/mgf_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "exptail/kernels.hpp"
#include "exptail/tail_engine.hpp"

namespace exptail::norm {

namespace {
constexpr double kLogDivergenceCap = 700.0;  // mean of exponentials past e^700
constexpr double kDoublingGrowth = 0.4054651081081644;  // ln 1.5
}  // namespace

MGFOracle MGFOracle::analytic(std::shared_ptr<const dist::DistributionModel> model) {
    if (!model) throw std::invalid_argument("null model");
    if (!model->has_analytic_mgf()) throw std::runtime_error("no analytic oracle");
    MGFOracle o;
    o.source_ = OracleSource::Analytic;
    o.model_ = std::move(model);
    o.dim_ = o.model_->dimension();
    return o;
}

MGFOracle MGFOracle::empirical(dist::SampleSet samples) {
    if (samples.rows() == 0) throw std::invalid_argument("empty sample set");
    MGFOracle o;
    o.source_ = OracleSource::Empirical;
    o.dim_ = samples.cols();
    o.model_ = samples.model_ptr();
    o.samples_ = std::move(samples);
    return o;
}

double MGFOracle::empirical_log_orbit_mgf(const dist::SampleSet& s, const Vec& lambda) const {
    if (dim_ > tail::kOrbitCap)
        throw std::invalid_argument("sign-orbit enumeration cap exceeded");
    std::vector<double> lv(lambda.data(), lambda.data() + dim_);
    auto per_orbit = kernels::orbit_log_mean_exp(s.data(), s.rows(), dim_, lv);
    double best = per_orbit[0];
    for (double v : per_orbit) best = std::max(best, v);
    return best;
}

double MGFOracle::log_orbit_mgf(const Vec& lambda) const {
    if (lambda.size() != dim_) throw std::invalid_argument("lambda dimension mismatch");

    if (source_ == OracleSource::Analytic) {
        // orbit max over the analytic form; products factor per coordinate for
        // the independent families, the correlated gaussian enumerates orbits
        const auto& m = *model_;
        if (m.family() == dist::ModelFamily::GaussianCovariance) {
            if (dim_ > tail::kOrbitCap)
                throw std::invalid_argument("sign-orbit enumeration cap exceeded");
            double best = -kPosInf;
            for (std::uint64_t mask = 0; mask < (1ull << dim_); ++mask) {
                Vec flipped = lambda;
                for (int j = 0; j < dim_; ++j)
                    if ((mask >> j) & 1ull) flipped[j] = -flipped[j];
                best = std::max(best, m.analytic_log_mgf(flipped));
                if (is_pos_inf(best)) break;
            }
            if (is_pos_inf(best)) divergent_lambda_ = lambda;
            return best;
        }
        // product families: maximize per coordinate
        double total = 0.0;
        for (int j = 0; j < dim_; ++j) {
            Vec e = Vec::Zero(dim_);
            e[j] = lambda[j];
            double plus = m.analytic_log_mgf(e);
            e[j] = -lambda[j];
            double minus = m.analytic_log_mgf(e);
            double v = std::max(plus, minus);
            if (is_pos_inf(v)) {
                divergent_lambda_ = lambda;
                return kPosInf;
            }
            total += v;
        }
        return total;
    }

    // empirical source: the generating model's analytic MGF, when it exists,
    // decides divergence exactly (the orbit max hits a pole iff some signed
    // coordinate does, so product families check each sign separately)
    if (model_ && model_->has_analytic_mgf()) {
        if (model_->family() != dist::ModelFamily::GaussianCovariance) {
            for (int j = 0; j < dim_; ++j) {
                Vec e = Vec::Zero(dim_);
                for (double sign : {1.0, -1.0}) {
                    e[j] = sign * lambda[j];
                    if (is_pos_inf(model_->analytic_log_mgf(e))) {
                        divergent_lambda_ = lambda;
                        return kPosInf;
                    }
                }
                e[j] = 0.0;
            }
        }
    }

    double est = empirical_log_orbit_mgf(*samples_, lambda);
    if (est > kLogDivergenceCap || !std::isfinite(est)) {
        divergent_lambda_ = lambda;
        return kPosInf;
    }

    // no analytic form: probe pseudo-convergence by extending the sample;
    // systematic growth of the estimate across doublings marks divergence
    if (model_ && !model_->has_analytic_mgf()) {
        if (!extended_) extended_ = dist::sample(model_, 4 * samples_->rows(), samples_->seed());
        std::size_t n1 = samples_->rows();
        dist::SampleSet half2(nullptr, 0, 2 * n1,
                              std::vector<double>(extended_->data().begin(),
                                                  extended_->data().begin() +
                                                      static_cast<long>(2 * n1 * dim_)));
        double est2 = empirical_log_orbit_mgf(half2, lambda);
        double est4 = empirical_log_orbit_mgf(*extended_, lambda);
        if (est2 > est + kDoublingGrowth && est4 > est2 + kDoublingGrowth) {
            divergent_lambda_ = lambda;
            return kPosInf;
        }
    }
    return est;
}

MGFOracle::LogMgfValue MGFOracle::log_plain_mgf(const Vec& lambda) const {
    if (lambda.size() != dim_) throw std::invalid_argument("lambda dimension mismatch");
    if (source_ == OracleSource::Analytic)
        return {model_->analytic_log_mgf(lambda), 0.0};
    std::vector<double> lv(lambda.data(), lambda.data() + dim_);
    const auto& s = *samples_;
    double l1 = kernels::log_mean_exp_dot(s.data(), s.rows(), dim_, lv);
    std::vector<double> lv2(lv);
    for (double& v : lv2) v *= 2.0;
    double l2 = kernels::log_mean_exp_dot(s.data(), s.rows(), dim_, lv2);
    // delta method: se(log mean) ~ sqrt((m2/m1^2 - 1)/n)
    double rel_var = std::exp(l2 - 2.0 * l1) - 1.0;
    double se = std::sqrt(std::max(0.0, rel_var) / static_cast<double>(s.rows()));
    return {l1, se};
}

double natural_function(const MGFOracle& oracle, const Vec& lambda) {
    return oracle.log_orbit_mgf(lambda);
}

}  // namespace exptail::norm
