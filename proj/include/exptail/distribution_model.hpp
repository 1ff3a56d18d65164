#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "exptail/extended_real.hpp"

namespace exptail::dist {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ModelFamily {
    GaussianCovariance,          // N(0, Sigma)
    RademacherProduct,           // independent +-a_j with probability 1/2
    UniformProduct,              // independent uniform on [-a_j, a_j]
    CenteredExponentialProduct,  // independent Exp(rate_j) - 1/rate_j
    CustomMixture,               // weighted mixture of sub-models, recentered
};

std::string family_name(ModelFamily f);
ModelFamily model_family_from_name(const std::string& name);

// Centered random-vector model. Every shipped family has mean zero by
// construction and finite moment generating function near the origin,
// except that the centered-exponential MGF has a pole at the rate.
class DistributionModel {
public:
    static DistributionModel gaussian(Mat sigma);
    static DistributionModel rademacher(Vec scales);
    static DistributionModel uniform(Vec half_widths);
    static DistributionModel centered_exponential(Vec rates);
    static DistributionModel mixture(std::vector<double> weights,
                                     std::vector<DistributionModel> components,
                                     std::vector<Vec> shifts);

    ModelFamily family() const { return family_; }
    int dimension() const { return dim_; }

    // Log of E exp((lambda, xi)); +inf past a Kramer boundary. Throws
    // std::runtime_error("no analytic oracle") for mixtures.
    double analytic_log_mgf(const Vec& lambda) const;
    bool has_analytic_mgf() const { return family_ != ModelFamily::CustomMixture; }

    // Exact orthant tail max_eps P(for all j: eps_j xi_j > x_j) for x >= 0.
    // Requires independent coordinates with known marginals; throws
    // std::runtime_error("no analytic oracle") otherwise.
    double analytic_tail(const Vec& x) const;
    bool has_analytic_tail() const;

    // Marginal one-sided tails P(xi_j > t) and P(-xi_j > t) for t >= 0.
    double marginal_upper_tail(int j, double t) const;
    double marginal_lower_tail(int j, double t) const;

    const Mat& covariance() const;            // GaussianCovariance only
    const Vec& scales() const { return scales_; }
    const std::vector<double>& mixture_weights() const { return weights_; }
    const std::vector<DistributionModel>& mixture_components() const { return components_; }
    const std::vector<Vec>& mixture_shifts() const { return shifts_; }
    Vec mixture_mean_shift() const;           // subtracted from every draw

    std::string to_config() const;
    static DistributionModel from_config(const std::string& text);
    static DistributionModel load_config_file(const std::string& path);

private:
    DistributionModel() = default;

    ModelFamily family_ = ModelFamily::GaussianCovariance;
    int dim_ = 1;
    Mat sigma_;              // gaussian
    Mat chol_factor_;        // cached PSD factor of sigma
    Vec scales_;             // rademacher half-widths / uniform half-widths / exponential rates
    std::vector<double> weights_;
    std::vector<DistributionModel> components_;
    std::vector<Vec> shifts_;

    friend struct SamplerImpl;
};

}  // namespace exptail::dist
