#pragma once

#include <functional>
#include <string>
#include <vector>

#include "exptail/young_function.hpp"

namespace exptail::convex {

struct SearchConfig {
    double radius = 50.0;       // search box [-radius, radius]^d per axis
    double value_tol = 1e-11;   // relative stopping tolerance on the sup value
    int max_iterations = 400;
};

struct TransformResult {
    double value = 0.0;      // extended-real
    Vec maximizer;           // diagnostic only; first-found argmax
    bool truncated = false;  // maximizer pinned at the search boundary
};

// sup over the truncated box of (x, y) - f(x). Multi-start projected
// ascent with golden-section line searches; concave inner objective for
// convex f, so local = global up to flat regions covered by the starts.
// Throws std::runtime_error("empty effective domain") when f is nowhere
// finite on the search box.
TransformResult legendre_transform(const Evaluable& f, const Vec& y,
                                   const SearchConfig& search);
TransformResult legendre_transform(const Evaluable& f, const Vec& y,
                                   const SearchConfig& search, const Vec& warm_start);

// Tabulated conjugate on the non-negative orthant: per axis the knots are
// {0} followed by log-spaced points in [min_knot, radius]; interpolation is
// multilinear in log coordinates (linear in the first cell that touches 0).
class ConjugateGrid final : public Evaluable {
public:
    struct BuildConfig {
        int knots_per_axis = 64;   // includes the 0 knot
        double min_knot = 1e-2;
        SearchConfig search;
    };

    static ConjugateGrid build(const YoungFunction& f, const BuildConfig& cfg);

    int dimension() const override { return dim_; }
    // Queries with a negative coordinate are resolved by coordinate-flip
    // symmetry when the source function has it, by the full flip when every
    // coordinate is <= 0, and rejected otherwise.
    double evaluate(const Vec& x) const override;

    bool any_truncated() const { return any_truncated_; }
    const std::vector<double>& axis_knots() const { return knots_; }
    std::size_t value_count() const { return values_.size(); }
    double value_at(std::size_t flat_index) const { return values_[flat_index]; }
    bool truncated_at(std::size_t flat_index) const { return truncated_[flat_index] != 0; }

    // Invariant probes used by tests and validation reports.
    double worst_axis_concavity_violation() const;  // >0 means non-convex section
    double worst_monotonicity_violation() const;    // >0 means decreasing step
    double value_at_origin() const { return values_[0]; }

    void export_csv(const std::string& path) const;

private:
    int dim_ = 1;
    std::vector<double> knots_;       // shared across axes
    std::vector<double> values_;      // row-major over the lattice
    std::vector<unsigned char> truncated_;
    bool any_truncated_ = false;
    bool flip_symmetric_ = true;

    std::size_t flat(const std::vector<int>& idx) const;
};

// max over the probe points of |f**(lambda) - f(lambda)|, f** computed by
// two chained transforms (the outer one conjugates a wrapper whose
// evaluation is itself a transform call, warm-started across queries).
struct DoubleConjugateResult {
    double max_residual = 0.0;
    bool truncated = false;  // some inner or outer sup hit the boundary
};
DoubleConjugateResult double_conjugate_residual(const YoungFunction& f,
                                                const std::vector<Vec>& probe_points,
                                                const SearchConfig& search);

// phi*(exp(mu)) with the coordinate-wise exponential.
TransformResult conjugate_at_exp(const Evaluable& f, const Vec& mu, const SearchConfig& search);

}  // namespace exptail::convex
