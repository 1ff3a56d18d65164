#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exptail/extended_real.hpp"

namespace exptail::convex {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Anything the conjugation engine can take the transform of: an extended-real
// valued function on R^d.
class Evaluable {
public:
    virtual ~Evaluable() = default;
    virtual int dimension() const = 0;
    virtual double evaluate(const Vec& x) const = 0;
};

enum class YoungFamily {
    QuadraticMatrix,        // 0.5 (B lambda, lambda), B symmetric positive definite
    PowerBeta,              // |lambda|^beta / beta, beta > 1
    PowerSlowlyVarying,     // |lambda|^beta * (ln(e + |lambda|))^alpha
    CustomTabulated,        // radial profile tabulated on [0, R], linear
                            // interpolation, linear extrapolation beyond R
};

std::string family_name(YoungFamily f);
YoungFamily family_from_name(const std::string& name);

// Generating function of an exponential-moment space. Even, convex,
// vanishing only at 0 for valid parameters; evaluation is extended-real
// (returns +inf outside the domain, which for all shipped families never
// happens on R^d).
class YoungFunction final : public Evaluable {
public:
    static YoungFunction quadratic(Mat b_matrix, double truncation_radius = 50.0);
    static YoungFunction power(double beta, int dim, double truncation_radius = 50.0);
    static YoungFunction power_slowly_varying(double beta, double alpha, int dim,
                                              double truncation_radius = 50.0);
    static YoungFunction tabulated(std::vector<double> radial_knots,
                                   std::vector<double> radial_values, int dim,
                                   double truncation_radius = 50.0);

    int dimension() const override { return dim_; }
    double evaluate(const Vec& lambda) const override;
    double operator()(const Vec& lambda) const { return evaluate(lambda); }

    YoungFamily family() const { return family_; }
    double truncation_radius() const { return truncation_radius_; }
    void set_truncation_radius(double r) { truncation_radius_ = r; }

    // True when phi(eps (x) lambda) = phi(lambda) for every per-coordinate
    // sign flip, not just the full flip. Holds for radial families and for
    // diagonal quadratic forms.
    bool coordinate_flip_symmetric() const;
    bool is_radial() const;

    const Mat& quadratic_matrix() const;       // QuadraticMatrix only
    double beta() const { return beta_; }      // power families
    double alpha() const { return alpha_; }    // PowerSlowlyVarying
    const std::vector<double>& radial_knots() const { return knots_; }
    const std::vector<double>& radial_values() const { return values_; }

    // Structured text (JSON) config round-trip; schema_version field included.
    std::string to_config() const;
    static YoungFunction from_config(const std::string& text);
    static YoungFunction load_config_file(const std::string& path);

private:
    YoungFunction() = default;

    YoungFamily family_ = YoungFamily::QuadraticMatrix;
    int dim_ = 1;
    double truncation_radius_ = 50.0;
    Mat b_;                        // QuadraticMatrix
    double beta_ = 2.0;            // PowerBeta / PowerSlowlyVarying
    double alpha_ = 0.0;           // PowerSlowlyVarying
    std::vector<double> knots_;    // CustomTabulated radial profile
    std::vector<double> values_;

    double radial_profile(double t) const;
};

}  // namespace exptail::convex
