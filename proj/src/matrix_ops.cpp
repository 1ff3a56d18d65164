#include "exptail/matrix_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace exptail::convex {

double default_hessian_step(const Evaluable& f) {
    const int d = f.dimension();
    double scale = 0.0;
    for (int j = 0; j < d; ++j) {
        Vec e = Vec::Zero(d);
        e[j] = 1.0;
        double v = f.evaluate(e);
        if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
    }
    return 1e-4 * (1.0 + scale);
}

HessianAtZero hessian_at_zero(const Evaluable& f, double step) {
    if (!(step > 0)) throw std::invalid_argument("step must be positive");
    const int d = f.dimension();
    Vec zero = Vec::Zero(d);
    const double f0 = f.evaluate(zero);
    Mat h(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            double v;
            if (i == j) {
                Vec p = zero, m = zero;
                p[i] = step;
                m[i] = -step;
                v = (f.evaluate(p) - 2 * f0 + f.evaluate(m)) / (step * step);
            } else {
                Vec pp = zero, pm = zero, mp = zero, mm = zero;
                pp[i] = step;
                pp[j] = step;
                pm[i] = step;
                pm[j] = -step;
                mp[i] = -step;
                mp[j] = step;
                mm[i] = -step;
                mm[j] = -step;
                v = (f.evaluate(pp) - f.evaluate(pm) - f.evaluate(mp) + f.evaluate(mm)) /
                    (4 * step * step);
            }
            h(i, j) = v;
            h(j, i) = v;
        }
    }
    if (!h.allFinite()) throw std::runtime_error("non-finite second differences");
    // underflow guard: a visibly non-constant function whose differences all
    // evaluate to exactly zero means the step lost every significant digit
    if (h.cwiseAbs().maxCoeff() == 0.0) {
        Vec probe = Vec::Constant(d, 1.0);
        double v1 = f.evaluate(probe);
        if (std::isfinite(v1) && std::abs(v1 - f0) > 0.0)
            throw std::runtime_error("step too small");
    }
    HessianAtZero out;
    out.half_hessian = 0.25 * (h + h.transpose());  // symmetrize, then halve
    out.degenerate = std::abs(out.half_hessian.determinant()) <= 1e-6;
    return out;
}

double smallest_eigenvalue(const Mat& sym) {
    Eigen::SelfAdjointEigenSolver<Mat> es(sym);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    return es.eigenvalues().minCoeff();
}

bool matrix_dominates(const Mat& a, const Mat& b, double tolerance) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
        throw std::invalid_argument("dimension mismatch");
    return smallest_eigenvalue(a - b) >= -tolerance;
}

Mat psd_factor(const Mat& sigma, double tolerance) {
    if (sigma.rows() != sigma.cols())
        throw std::invalid_argument("invalid covariance");
    if (!sigma.isApprox(sigma.transpose(), 1e-10))
        throw std::invalid_argument("invalid covariance");
    Eigen::LLT<Mat> llt(sigma);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
    if (es.info() != Eigen::Success) throw std::invalid_argument("invalid covariance");
    Vec ev = es.eigenvalues();
    double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    Mat root = Mat::Zero(sigma.rows(), sigma.cols());
    for (int i = 0; i < ev.size(); ++i) {
        if (ev[i] < -tolerance * scale) throw std::invalid_argument("invalid covariance");
        root.col(i) = es.eigenvectors().col(i) * std::sqrt(std::max(ev[i], 0.0));
    }
    return root;
}

}  // namespace exptail::convex
