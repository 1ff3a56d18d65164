#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace exptail::kernels {

// Data-parallel row reductions over an n x d row-major sample matrix.
// Each kernel ships in two forms: an OpenMP-blocked version (the default)
// and a plain serial loop kept as the reference for tests and benchmarks.
// Integer counts match the serial reference exactly; floating-point results
// are deterministic for any thread count via fixed-block reduction.

// --- Orthant sign-orbit counting -------------------------------------------
// For threshold vector x >= 0, a row satisfies at most one sign orbit: mask
// bit j set when row[j] < -x[j], candidate valid when |row[j]| > x[j] (strict)
// for all j. Returns 2^d counts indexed by mask.
std::vector<std::uint64_t> orbit_counts(std::span<const double> data, std::size_t n, int d,
                                        std::span<const double> x);
std::vector<std::uint64_t> orbit_counts_serial(std::span<const double> data, std::size_t n,
                                               int d, std::span<const double> x);

// --- Sign-orbit log-mean-exp ------------------------------------------------
// For a direction lambda, computes log(mean_i exp(sum_j eps_j lambda_j xi_ij))
// for every sign orbit eps, in log space (two passes: exact max, then blocked
// sum of shifted exponentials).
std::vector<double> orbit_log_mean_exp(std::span<const double> data, std::size_t n, int d,
                                       std::span<const double> lambda);
std::vector<double> orbit_log_mean_exp_serial(std::span<const double> data, std::size_t n,
                                              int d, std::span<const double> lambda);

// Plain (no sign max) log(mean_i exp((lambda, xi_i))).
double log_mean_exp_dot(std::span<const double> data, std::size_t n, int d,
                        std::span<const double> lambda);
double log_mean_exp_dot_serial(std::span<const double> data, std::size_t n, int d,
                               std::span<const double> lambda);

// --- Log of mean of prod_j |xi_j|^{r_j} -------------------------------------
// Returns log(mean_i exp(sum_j r_j ln |xi_ij|)); -inf for all-zero data.
double log_mean_abs_power(std::span<const double> data, std::size_t n, int d,
                          std::span<const double> r);
double log_mean_abs_power_serial(std::span<const double> data, std::size_t n, int d,
                                 std::span<const double> r);

// --- Log of mean of exp(g(|row| / c)) ---------------------------------------
// g maps the coordinate-wise absolute row scaled by 1/c to a real value
// (the conjugate evaluated through a tabulated grid in the Orlicz path).
using RowFunctional = std::function<double(std::span<const double> abs_scaled_row)>;
double log_mean_exp_rowfun(std::span<const double> data, std::size_t n, int d, double inv_scale,
                           const RowFunctional& g);
double log_mean_exp_rowfun_serial(std::span<const double> data, std::size_t n, int d,
                                  double inv_scale, const RowFunctional& g);

}  // namespace exptail::kernels
