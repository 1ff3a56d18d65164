#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "exptail/conjugate.hpp"
#include "exptail/sampling.hpp"

namespace exptail::tail {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr int kOrbitCap = 25;  // 2^d enumeration refused above this

struct TailEstimate {
    Vec x;
    double value = 0.0;        // empirical orbit-max frequency
    double half_width = 0.0;   // Wilson 95% half-width
    double std_error = 0.0;    // binomial standard error sqrt(p(1-p)/n)
    std::vector<int> argmax_orbit;  // entries +-1
};

// Orbit-max empirical tail; strict per-coordinate comparisons, a +inf
// threshold coordinate empties the event. Throws std::invalid_argument
// ("sign-orbit enumeration cap exceeded") for d > 25.
TailEstimate empirical_tail(const dist::SampleSet& samples, const Vec& x);

struct BoundValue {
    double value = 1.0;        // min(1, exp(-phi*(query)))
    bool possibly_loose = false;  // conjugate sup hit the search boundary
};

// min(1, exp(-phi*(x / scale))).
BoundValue chernov_bound(const convex::YoungFunction& phi, const Vec& x, double scale,
                         const convex::SearchConfig& search);

// min(1, 2^d exp(-phi*(y/norm * ones))).
BoundValue min_coordinate_bound(const convex::YoungFunction& phi, double norm, double y, int d,
                                const convex::SearchConfig& search);

// min(1, exp(-0.5 (B^{-1} x, x) / (K norm^2))). Throws
// std::invalid_argument("matrix not invertible") for singular B.
double subgaussian_bound(const Mat& b_matrix, double norm, double k_constant, const Vec& x);

struct BoundCurve {
    std::vector<Vec> queries;
    std::vector<double> values;
    double scale = 1.0;
    bool possibly_loose = false;
};

BoundCurve chernov_curve(const convex::YoungFunction& phi, const std::vector<Vec>& queries,
                         double scale, const convex::SearchConfig& search);

double wilson_half_width(double p_hat, std::size_t n);

}  // namespace exptail::tail
