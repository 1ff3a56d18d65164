#include "exptail/validation.hpp"

#include <algorithm>
#include <cmath>

#include "exptail/matrix_ops.hpp"
#include "exptail/rng.hpp"

namespace exptail::convex {

namespace {

// Directions with no vanishing component; axis rays would zero one partial
// derivative of a radial function and void the gradient-growth probe.
std::vector<Vec> generic_directions(int d, int count, unsigned long long seed) {
    std::vector<Vec> dirs;
    if (d == 1) {
        dirs.push_back(Vec::Constant(1, 1.0));
        if (count > 1) dirs.push_back(Vec::Constant(1, -1.0));
        return dirs;
    }
    dirs.push_back(Vec::Constant(d, 1.0 / std::sqrt(double(d))));
    std::uint64_t key = dist::stream_key(seed, 911);
    std::uint64_t c = 0;
    while (static_cast<int>(dirs.size()) < count) {
        Vec v(d);
        for (int j = 0; j < d; ++j) v[j] = dist::normal_at(key, c++);
        if (v.cwiseAbs().minCoeff() < 0.05) continue;
        dirs.push_back(v.normalized());
    }
    return dirs;
}

Vec fd_gradient(const YoungFunction& f, const Vec& x) {
    const int d = f.dimension();
    Vec g(d);
    for (int j = 0; j < d; ++j) {
        double h = 1e-6 * (1.0 + std::abs(x[j]));
        Vec p = x, m = x;
        p[j] += h;
        m[j] -= h;
        g[j] = (f.evaluate(p) - f.evaluate(m)) / (2 * h);
    }
    return g;
}

Mat fd_hessian(const YoungFunction& f, const Vec& x, double h) {
    const int d = f.dimension();
    Mat hess(d, d);
    double f0 = f.evaluate(x);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            double v;
            if (i == j) {
                Vec p = x, m = x;
                p[i] += h;
                m[i] -= h;
                v = (f.evaluate(p) - 2 * f0 + f.evaluate(m)) / (h * h);
            } else {
                Vec pp = x, pm = x, mp = x, mm = x;
                pp[i] += h;
                pp[j] += h;
                pm[i] += h;
                pm[j] -= h;
                mp[i] -= h;
                mp[j] += h;
                mm[i] -= h;
                mm[j] -= h;
                v = (f.evaluate(pp) - f.evaluate(pm) - f.evaluate(mp) + f.evaluate(mm)) /
                    (4 * h * h);
            }
            hess(i, j) = v;
            hess(j, i) = v;
        }
    }
    return hess;
}

}  // namespace

ValidationReport validate_young_function(const YoungFunction& f, const ProbeGrid& grid) {
    ValidationReport report;
    const int d = f.dimension();
    auto add = [&](const std::string& name) {
        if (std::find(report.violations.begin(), report.violations.end(), name) ==
            report.violations.end())
            report.violations.push_back(name);
    };

    if (grid.radii.size() < 3)
        throw std::invalid_argument("probe grid needs at least 3 radii");
    std::vector<double> radii = grid.radii;
    std::sort(radii.begin(), radii.end());
    auto dirs = generic_directions(d, std::max(grid.directions, 2), grid.seed);

    // value at the origin
    double f0 = f.evaluate(Vec::Zero(d));
    if (!(std::abs(f0) <= 1e-12)) add("zero-at-origin");

    bool domain_ok = true;
    for (double r : radii) {
        for (const Vec& u : dirs) {
            Vec x = r * u;
            double v = f.evaluate(x);
            if (!std::isfinite(v)) {
                add("domain violation");
                domain_ok = false;
                continue;
            }
            double vney = f.evaluate((-x).eval());
            if (!std::isfinite(vney) || std::abs(v - vney) > 1e-9 * (1.0 + std::abs(v)))
                add("evenness");
            if (!(v > 0.0)) add("positivity");
        }
    }

    if (domain_ok) {
        // convexity: sampled Hessians must stay non-negative definite
        double tol = 1e-4;
        for (double r : radii) {
            for (std::size_t k = 0; k < std::min<std::size_t>(dirs.size(), 4); ++k) {
                Vec x = r * dirs[k];
                double h = 1e-4 * (1.0 + r);
                Mat hess = fd_hessian(f, x, h);
                if (!hess.allFinite()) {
                    add("domain violation");
                    continue;
                }
                double scale = std::max(1.0, hess.cwiseAbs().maxCoeff());
                if (smallest_eigenvalue(hess) < -tol * scale) add("convexity");
            }
        }

        // curvature at the origin
        try {
            auto h0 = hessian_at_zero(f, default_hessian_step(f));
            if (h0.degenerate || h0.half_hessian.determinant() <= 0)
                add("hessian-at-zero-determinant");
        } catch (const std::exception&) {
            add("hessian-at-zero-determinant");
        }

        // gradient growth along generic rays, a finite-radius stand-in for the
        // requirement that min_j |partial_j| diverges at infinity
        for (const Vec& u : dirs) {
            double prev = -1.0;
            bool monotone = true;
            for (double r : radii) {
                Vec g = fd_gradient(f, r * u);
                double m = g.cwiseAbs().minCoeff();
                if (prev >= 0 && m <= prev * (1.0 + 1e-9)) monotone = false;
                prev = m;
            }
            if (!monotone) {
                add("gradient-growth");
                break;
            }
        }
    }
    return report;
}

}  // namespace exptail::convex
