#include "exptail/young_function.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace exptail::convex {

using nlohmann::json;

std::string family_name(YoungFamily f) {
    switch (f) {
        case YoungFamily::QuadraticMatrix: return "quadratic-matrix";
        case YoungFamily::PowerBeta: return "power-beta";
        case YoungFamily::PowerSlowlyVarying: return "power-with-slowly-varying";
        case YoungFamily::CustomTabulated: return "custom-tabulated";
    }
    return "unknown";
}

YoungFamily family_from_name(const std::string& name) {
    if (name == "quadratic-matrix") return YoungFamily::QuadraticMatrix;
    if (name == "power-beta") return YoungFamily::PowerBeta;
    if (name == "power-with-slowly-varying") return YoungFamily::PowerSlowlyVarying;
    if (name == "custom-tabulated") return YoungFamily::CustomTabulated;
    throw std::invalid_argument("unknown generating-function family: " + name);
}

YoungFunction YoungFunction::quadratic(Mat b_matrix, double truncation_radius) {
    if (b_matrix.rows() != b_matrix.cols() || b_matrix.rows() < 1)
        throw std::invalid_argument("quadratic family needs a square matrix");
    if (!b_matrix.isApprox(b_matrix.transpose(), 1e-12))
        throw std::invalid_argument("quadratic family needs a symmetric matrix");
    YoungFunction f;
    f.family_ = YoungFamily::QuadraticMatrix;
    f.dim_ = static_cast<int>(b_matrix.rows());
    f.b_ = std::move(b_matrix);
    f.truncation_radius_ = truncation_radius;
    return f;
}

YoungFunction YoungFunction::power(double beta, int dim, double truncation_radius) {
    if (beta <= 1.0) throw std::invalid_argument("power family needs beta > 1");
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
    YoungFunction f;
    f.family_ = YoungFamily::PowerBeta;
    f.dim_ = dim;
    f.beta_ = beta;
    f.truncation_radius_ = truncation_radius;
    return f;
}

YoungFunction YoungFunction::power_slowly_varying(double beta, double alpha, int dim,
                                                  double truncation_radius) {
    if (beta <= 1.0) throw std::invalid_argument("power family needs beta > 1");
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
    YoungFunction f;
    f.family_ = YoungFamily::PowerSlowlyVarying;
    f.dim_ = dim;
    f.beta_ = beta;
    f.alpha_ = alpha;
    f.truncation_radius_ = truncation_radius;
    return f;
}

YoungFunction YoungFunction::tabulated(std::vector<double> radial_knots,
                                       std::vector<double> radial_values, int dim,
                                       double truncation_radius) {
    if (radial_knots.size() != radial_values.size() || radial_knots.size() < 2)
        throw std::invalid_argument("tabulated family needs >= 2 matching knots/values");
    if (radial_knots.front() != 0.0)
        throw std::invalid_argument("tabulated profile must start at 0");
    if (!std::is_sorted(radial_knots.begin(), radial_knots.end()))
        throw std::invalid_argument("tabulated knots must be increasing");
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
    YoungFunction f;
    f.family_ = YoungFamily::CustomTabulated;
    f.dim_ = dim;
    f.knots_ = std::move(radial_knots);
    f.values_ = std::move(radial_values);
    f.truncation_radius_ = truncation_radius;
    return f;
}

double YoungFunction::radial_profile(double t) const {
    const auto& k = knots_;
    const auto& v = values_;
    if (t <= k.front()) return v.front();
    std::size_t hi = std::upper_bound(k.begin(), k.end(), t) - k.begin();
    if (hi >= k.size()) hi = k.size() - 1;  // extrapolate on the last segment
    std::size_t lo = hi - 1;
    double w = (t - k[lo]) / (k[hi] - k[lo]);
    return v[lo] + w * (v[hi] - v[lo]);
}

double YoungFunction::evaluate(const Vec& lambda) const {
    switch (family_) {
        case YoungFamily::QuadraticMatrix:
            return 0.5 * lambda.dot(b_ * lambda);
        case YoungFamily::PowerBeta: {
            double r = lambda.norm();
            return std::pow(r, beta_) / beta_;
        }
        case YoungFamily::PowerSlowlyVarying: {
            double r = lambda.norm();
            double m = std::pow(std::log(std::exp(1.0) + r), alpha_);
            return std::pow(r, beta_) * m;
        }
        case YoungFamily::CustomTabulated:
            return radial_profile(lambda.norm());
    }
    return kPosInf;
}

bool YoungFunction::is_radial() const {
    switch (family_) {
        case YoungFamily::QuadraticMatrix:
            return b_.isApprox(b_(0, 0) * Mat::Identity(dim_, dim_), 1e-12);
        default:
            return true;
    }
}

bool YoungFunction::coordinate_flip_symmetric() const {
    if (family_ != YoungFamily::QuadraticMatrix) return true;
    return b_.isApprox(Mat(b_.diagonal().asDiagonal()), 1e-12);
}

const Mat& YoungFunction::quadratic_matrix() const {
    if (family_ != YoungFamily::QuadraticMatrix)
        throw std::logic_error("not a quadratic-matrix generating function");
    return b_;
}

std::string YoungFunction::to_config() const {
    json j;
    j["schema_version"] = 1;
    j["kind"] = "young_function";
    j["family"] = family_name(family_);
    j["dimension"] = dim_;
    j["truncation_radius"] = truncation_radius_;
    json params;
    switch (family_) {
        case YoungFamily::QuadraticMatrix: {
            std::vector<std::vector<double>> rows(dim_);
            for (int i = 0; i < dim_; ++i)
                for (int c = 0; c < dim_; ++c) rows[i].push_back(b_(i, c));
            params["matrix"] = rows;
            break;
        }
        case YoungFamily::PowerBeta:
            params["beta"] = beta_;
            break;
        case YoungFamily::PowerSlowlyVarying:
            params["beta"] = beta_;
            params["alpha"] = alpha_;
            break;
        case YoungFamily::CustomTabulated:
            params["knots"] = knots_;
            params["values"] = values_;
            break;
    }
    j["params"] = params;
    return j.dump(2);
}

YoungFunction YoungFunction::from_config(const std::string& text) {
    json j = json::parse(text);
    if (j.value("kind", "") != "young_function")
        throw std::invalid_argument("config is not a young_function document");
    if (j.value("schema_version", 0) != 1)
        throw std::invalid_argument("unsupported young_function schema version");
    if (j.contains("domain") && j["domain"] != "full-space")
        throw std::invalid_argument(
            "generating functions with bounded support are out of scope");
    YoungFamily fam = family_from_name(j.at("family").get<std::string>());
    int dim = j.at("dimension").get<int>();
    double radius = j.value("truncation_radius", 50.0);
    const json& p = j.at("params");
    switch (fam) {
        case YoungFamily::QuadraticMatrix: {
            auto rows = p.at("matrix").get<std::vector<std::vector<double>>>();
            Mat b(dim, dim);
            if (static_cast<int>(rows.size()) != dim)
                throw std::invalid_argument("matrix size does not match dimension");
            for (int i = 0; i < dim; ++i)
                for (int c = 0; c < dim; ++c) b(i, c) = rows[i].at(c);
            return quadratic(std::move(b), radius);
        }
        case YoungFamily::PowerBeta:
            return power(p.at("beta").get<double>(), dim, radius);
        case YoungFamily::PowerSlowlyVarying:
            return power_slowly_varying(p.at("beta").get<double>(),
                                        p.value("alpha", 1.0), dim, radius);
        case YoungFamily::CustomTabulated:
            return tabulated(p.at("knots").get<std::vector<double>>(),
                             p.at("values").get<std::vector<double>>(), dim, radius);
    }
    throw std::invalid_argument("unreachable family");
}

YoungFunction YoungFunction::load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_config(ss.str());
}

}  // namespace exptail::convex
