#include "exptail/distribution_model.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "exptail/matrix_ops.hpp"

namespace exptail::dist {

using nlohmann::json;

std::string family_name(ModelFamily f) {
    switch (f) {
        case ModelFamily::GaussianCovariance: return "gaussian-with-covariance";
        case ModelFamily::RademacherProduct: return "rademacher-product";
        case ModelFamily::UniformProduct: return "uniform-product";
        case ModelFamily::CenteredExponentialProduct: return "centered-exponential-product";
        case ModelFamily::CustomMixture: return "custom-mixture";
    }
    return "unknown";
}

ModelFamily model_family_from_name(const std::string& name) {
    if (name == "gaussian-with-covariance") return ModelFamily::GaussianCovariance;
    if (name == "rademacher-product") return ModelFamily::RademacherProduct;
    if (name == "uniform-product") return ModelFamily::UniformProduct;
    if (name == "centered-exponential-product") return ModelFamily::CenteredExponentialProduct;
    if (name == "custom-mixture") return ModelFamily::CustomMixture;
    throw std::invalid_argument("unknown distribution family: " + name);
}

DistributionModel DistributionModel::gaussian(Mat sigma) {
    DistributionModel m;
    m.family_ = ModelFamily::GaussianCovariance;
    m.dim_ = static_cast<int>(sigma.rows());
    m.chol_factor_ = convex::psd_factor(sigma);  // throws "invalid covariance"
    m.sigma_ = std::move(sigma);
    return m;
}

namespace {
Vec positive_or_throw(Vec v, const char* what) {
    if (v.size() < 1 || (v.array() <= 0).any()) throw std::invalid_argument(what);
    return v;
}
}  // namespace

DistributionModel DistributionModel::rademacher(Vec scales) {
    DistributionModel m;
    m.family_ = ModelFamily::RademacherProduct;
    m.scales_ = positive_or_throw(std::move(scales), "rademacher scales must be positive");
    m.dim_ = static_cast<int>(m.scales_.size());
    return m;
}

DistributionModel DistributionModel::uniform(Vec half_widths) {
    DistributionModel m;
    m.family_ = ModelFamily::UniformProduct;
    m.scales_ = positive_or_throw(std::move(half_widths), "uniform half-widths must be positive");
    m.dim_ = static_cast<int>(m.scales_.size());
    return m;
}

DistributionModel DistributionModel::centered_exponential(Vec rates) {
    DistributionModel m;
    m.family_ = ModelFamily::CenteredExponentialProduct;
    m.scales_ = positive_or_throw(std::move(rates), "exponential rates must be positive");
    m.dim_ = static_cast<int>(m.scales_.size());
    return m;
}

DistributionModel DistributionModel::mixture(std::vector<double> weights,
                                             std::vector<DistributionModel> components,
                                             std::vector<Vec> shifts) {
    if (weights.empty() || weights.size() != components.size())
        throw std::invalid_argument("mixture needs matching weights and components");
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (total <= 0) throw std::invalid_argument("mixture weights must be positive");
    for (double& w : weights) w /= total;
    int d = components.front().dimension();
    for (const auto& c : components)
        if (c.dimension() != d) throw std::invalid_argument("mixture dimensions disagree");
    if (shifts.empty()) shifts.assign(components.size(), Vec::Zero(d));
    if (shifts.size() != components.size())
        throw std::invalid_argument("mixture needs one shift per component");
    DistributionModel m;
    m.family_ = ModelFamily::CustomMixture;
    m.dim_ = d;
    m.weights_ = std::move(weights);
    m.components_ = std::move(components);
    m.shifts_ = std::move(shifts);
    return m;
}

Vec DistributionModel::mixture_mean_shift() const {
    Vec mean = Vec::Zero(dim_);
    for (std::size_t k = 0; k < weights_.size(); ++k) mean += weights_[k] * shifts_[k];
    return mean;
}

const Mat& DistributionModel::covariance() const {
    if (family_ != ModelFamily::GaussianCovariance)
        throw std::logic_error("covariance matrix is only stored for the gaussian family");
    return sigma_;
}

namespace {

// log(sinh(t)/t) with a series near zero.
double log_sinhc(double t) {
    double a = std::abs(t);
    if (a < 1e-4) return std::log1p(a * a / 6.0 + a * a * a * a / 120.0);
    if (a > 30.0) return a - std::log(2.0 * a);  // sinh ~ e^a / 2
    return std::log(std::sinh(a) / a);
}

}  // namespace

double DistributionModel::analytic_log_mgf(const Vec& lambda) const {
    if (lambda.size() != dim_) throw std::invalid_argument("lambda dimension mismatch");
    switch (family_) {
        case ModelFamily::GaussianCovariance:
            return 0.5 * lambda.dot(sigma_ * lambda);
        case ModelFamily::RademacherProduct: {
            double s = 0.0;
            for (int j = 0; j < dim_; ++j) {
                double t = std::abs(scales_[j] * lambda[j]);
                // log cosh(t), overflow-safe
                s += (t > 30.0) ? t - std::log(2.0) : std::log(std::cosh(t));
            }
            return s;
        }
        case ModelFamily::UniformProduct: {
            double s = 0.0;
            for (int j = 0; j < dim_; ++j) s += log_sinhc(scales_[j] * lambda[j]);
            return s;
        }
        case ModelFamily::CenteredExponentialProduct: {
            double s = 0.0;
            for (int j = 0; j < dim_; ++j) {
                double rate = scales_[j];
                if (lambda[j] >= rate) return kPosInf;
                s += -lambda[j] / rate - std::log1p(-lambda[j] / rate);
            }
            return s;
        }
        case ModelFamily::CustomMixture:
            throw std::runtime_error("no analytic oracle");
    }
    return kPosInf;
}

double DistributionModel::marginal_upper_tail(int j, double t) const {
    switch (family_) {
        case ModelFamily::GaussianCovariance: {
            double sd = std::sqrt(sigma_(j, j));
            if (sd == 0.0) return 0.0;
            return 0.5 * std::erfc(t / (sd * std::sqrt(2.0)));
        }
        case ModelFamily::RademacherProduct:
            return t < scales_[j] ? 0.5 : 0.0;
        case ModelFamily::UniformProduct:
            return t < scales_[j] ? 0.5 * (1.0 - t / scales_[j]) : 0.0;
        case ModelFamily::CenteredExponentialProduct: {
            // xi = X - 1/rate with X ~ Exp(rate): P(xi > t) = exp(-(rate t + 1))
            double rate = scales_[j];
            return std::exp(-(rate * t + 1.0));
        }
        case ModelFamily::CustomMixture:
            throw std::runtime_error("no analytic oracle");
    }
    return 0.0;
}

double DistributionModel::marginal_lower_tail(int j, double t) const {
    switch (family_) {
        case ModelFamily::GaussianCovariance:
        case ModelFamily::RademacherProduct:
        case ModelFamily::UniformProduct:
            return marginal_upper_tail(j, t);  // symmetric marginals
        case ModelFamily::CenteredExponentialProduct: {
            // P(xi < -t) = P(X < 1/rate - t), zero once t >= 1/rate
            double rate = scales_[j];
            if (t >= 1.0 / rate) return 0.0;
            return -std::expm1(-(1.0 - rate * t));
        }
        case ModelFamily::CustomMixture:
            throw std::runtime_error("no analytic oracle");
    }
    return 0.0;
}

bool DistributionModel::has_analytic_tail() const {
    if (family_ == ModelFamily::CustomMixture) return false;
    if (family_ == ModelFamily::GaussianCovariance) {
        // independent coordinates only
        Mat diag = Mat(sigma_.diagonal().asDiagonal());
        return sigma_.isApprox(diag, 1e-12);
    }
    return true;
}

double DistributionModel::analytic_tail(const Vec& x) const {
    if (x.size() != dim_) throw std::invalid_argument("query dimension mismatch");
    if ((x.array() < 0).any()) throw std::invalid_argument("tail query must be non-negative");
    if (!has_analytic_tail()) throw std::runtime_error("no analytic oracle");
    // independence lets the orbit max factor through the product
    double p = 1.0;
    for (int j = 0; j < dim_; ++j)
        p *= std::max(marginal_upper_tail(j, x[j]), marginal_lower_tail(j, x[j]));
    return p;
}

std::string DistributionModel::to_config() const {
    json j;
    j["schema_version"] = 1;
    j["kind"] = "distribution_model";
    j["family"] = family_name(family_);
    j["dimension"] = dim_;
    json params;
    switch (family_) {
        case ModelFamily::GaussianCovariance: {
            std::vector<std::vector<double>> rows(dim_);
            for (int i = 0; i < dim_; ++i)
                for (int c = 0; c < dim_; ++c) rows[i].push_back(sigma_(i, c));
            params["covariance"] = rows;
            break;
        }
        case ModelFamily::RademacherProduct:
        case ModelFamily::UniformProduct:
        case ModelFamily::CenteredExponentialProduct: {
            std::vector<double> s(scales_.data(), scales_.data() + dim_);
            params[family_ == ModelFamily::CenteredExponentialProduct ? "rates" : "scales"] = s;
            break;
        }
        case ModelFamily::CustomMixture: {
            params["weights"] = weights_;
            json comps = json::array();
            for (const auto& c : components_) comps.push_back(json::parse(c.to_config()));
            params["components"] = comps;
            json shifts = json::array();
            for (const auto& s : shifts_)
                shifts.push_back(std::vector<double>(s.data(), s.data() + s.size()));
            params["shifts"] = shifts;
            break;
        }
    }
    j["params"] = params;
    return j.dump(2);
}

DistributionModel DistributionModel::from_config(const std::string& text) {
    json j = json::parse(text);
    if (j.value("kind", "") != "distribution_model")
        throw std::invalid_argument("config is not a distribution_model document");
    if (j.value("schema_version", 0) != 1)
        throw std::invalid_argument("unsupported distribution_model schema version");
    ModelFamily fam = model_family_from_name(j.at("family").get<std::string>());
    int dim = j.at("dimension").get<int>();
    const json& p = j.at("params");
    auto vec_of = [&](const json& arr) {
        auto v = arr.get<std::vector<double>>();
        return Eigen::Map<const Vec>(v.data(), static_cast<long>(v.size())).eval();
    };
    switch (fam) {
        case ModelFamily::GaussianCovariance: {
            auto rows = p.at("covariance").get<std::vector<std::vector<double>>>();
            Mat sigma(dim, dim);
            for (int i = 0; i < dim; ++i)
                for (int c = 0; c < dim; ++c) sigma(i, c) = rows.at(i).at(c);
            return gaussian(std::move(sigma));
        }
        case ModelFamily::RademacherProduct:
            return rademacher(vec_of(p.at("scales")));
        case ModelFamily::UniformProduct:
            return uniform(vec_of(p.at("scales")));
        case ModelFamily::CenteredExponentialProduct:
            return centered_exponential(vec_of(p.at("rates")));
        case ModelFamily::CustomMixture: {
            auto weights = p.at("weights").get<std::vector<double>>();
            std::vector<DistributionModel> comps;
            for (const auto& c : p.at("components")) comps.push_back(from_config(c.dump()));
            std::vector<Vec> shifts;
            if (p.contains("shifts"))
                for (const auto& s : p.at("shifts")) shifts.push_back(vec_of(s));
            return mixture(std::move(weights), std::move(comps), std::move(shifts));
        }
    }
    throw std::invalid_argument("unreachable family");
}

DistributionModel DistributionModel::load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_config(ss.str());
}

}  // namespace exptail::dist
