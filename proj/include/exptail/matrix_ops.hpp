#pragma once

#include <Eigen/Dense>

#include "exptail/young_function.hpp"

namespace exptail::convex {

struct HessianAtZero {
    Mat half_hessian;   // (1/2) * symmetrized central second differences
    bool degenerate;    // determinant of half_hessian below tolerance
};

// Central second differences at the origin, symmetrized and halved.
// Throws std::runtime_error("step too small") when the differences underflow
// for a function that is visibly non-constant at the step scale.
HessianAtZero hessian_at_zero(const Evaluable& f, double step);

// Step heuristic balancing truncation and rounding error for doubles.
double default_hessian_step(const Evaluable& f);

// Smallest eigenvalue of A - B >= -tolerance. Throws on dimension mismatch.
bool matrix_dominates(const Mat& a, const Mat& b, double tolerance);

double smallest_eigenvalue(const Mat& sym);

// Factor L with sigma = L L^T for symmetric non-negative definite sigma,
// via Cholesky with an eigendecomposition fallback for the singular case.
// Throws std::invalid_argument("invalid covariance") if sigma is indefinite
// beyond tolerance or asymmetric.
Mat psd_factor(const Mat& sigma, double tolerance = 1e-9);

}  // namespace exptail::convex
