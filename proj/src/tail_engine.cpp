#include "exptail/tail_engine.hpp"

#include <cmath>
#include <stdexcept>

#include "exptail/kernels.hpp"

namespace exptail::tail {

namespace {
constexpr double kZ95 = 1.959963984540054;
}

double wilson_half_width(double p_hat, std::size_t n) {
    const double z = kZ95, z2 = z * z, nn = static_cast<double>(n);
    double denom = 1.0 + z2 / nn;
    return (z / denom) * std::sqrt(p_hat * (1.0 - p_hat) / nn + z2 / (4.0 * nn * nn));
}

TailEstimate empirical_tail(const dist::SampleSet& samples, const Vec& x) {
    const int d = samples.cols();
    if (x.size() != d) throw std::invalid_argument("query dimension mismatch");
    if ((x.array() < 0).any()) throw std::invalid_argument("tail query must be non-negative");
    if (d > kOrbitCap) throw std::invalid_argument("sign-orbit enumeration cap exceeded");
    const std::size_t n = samples.rows();

    std::vector<double> xv(x.data(), x.data() + d);
    auto counts = kernels::orbit_counts(samples.data(), n, d, xv);

    std::size_t best_mask = 0;
    std::uint64_t best = 0;
    for (std::size_t m = 0; m < counts.size(); ++m) {
        if (counts[m] > best) {
            best = counts[m];
            best_mask = m;
        }
    }
    TailEstimate est;
    est.x = x;
    est.value = static_cast<double>(best) / static_cast<double>(n);
    est.half_width = wilson_half_width(est.value, n);
    est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(n));
    est.argmax_orbit.resize(d);
    for (int j = 0; j < d; ++j) est.argmax_orbit[j] = (best_mask >> j) & 1u ? -1 : 1;
    return est;
}

BoundValue chernov_bound(const convex::YoungFunction& phi, const Vec& x, double scale,
                         const convex::SearchConfig& search) {
    if (!(scale > 0)) throw std::invalid_argument("scale must be positive");
    if ((x.array() < 0).any()) throw std::invalid_argument("query must be non-negative");
    auto tr = convex::legendre_transform(phi, (x / scale).eval(), search);
    BoundValue b;
    b.value = std::min(1.0, std::exp(-tr.value));
    b.possibly_loose = tr.truncated;
    return b;
}

BoundValue min_coordinate_bound(const convex::YoungFunction& phi, double norm, double y, int d,
                                const convex::SearchConfig& search) {
    if (!(norm > 0) || !(y > 0)) throw std::invalid_argument("norm and y must be positive");
    Vec q = Vec::Constant(d, y / norm);
    auto tr = convex::legendre_transform(phi, q, search);
    BoundValue b;
    b.value = std::min(1.0, std::exp2(static_cast<double>(d)) * std::exp(-tr.value));
    b.possibly_loose = tr.truncated;
    return b;
}

double subgaussian_bound(const Mat& b_matrix, double norm, double k_constant, const Vec& x) {
    if (!(norm > 0) || !(k_constant > 0))
        throw std::invalid_argument("norm and K must be positive");
    Eigen::FullPivLU<Mat> lu(b_matrix);
    if (!lu.isInvertible()) throw std::invalid_argument("matrix not invertible");
    Vec binv_x = lu.solve(x);
    double quad = binv_x.dot(x);
    return std::min(1.0, std::exp(-0.5 * quad / (k_constant * norm * norm)));
}

BoundCurve chernov_curve(const convex::YoungFunction& phi, const std::vector<Vec>& queries,
                         double scale, const convex::SearchConfig& search) {
    BoundCurve curve;
    curve.scale = scale;
    curve.queries = queries;
    curve.values.reserve(queries.size());
    for (const Vec& q : queries) {
        auto b = chernov_bound(phi, q, scale, search);
        curve.values.push_back(b.value);
        curve.possibly_loose = curve.possibly_loose || b.possibly_loose;
    }
    return curve;
}

}  // namespace exptail::tail
