#include "exptail/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace exptail::convex {

namespace {

constexpr double kGolden = 0.6180339887498949;  // 1/phi

struct LineMax {
    double t = 0.0;
    double value = kNegInf;
};

// Maximize a concave section g on [a, b]: coarse scan to bracket, then
// golden-section refinement. Extended-real safe (-inf regions shrink away).
template <typename G>
LineMax maximize_on_interval(const G& g, double a, double b, int scan_points,
                             int golden_iters) {
    double best_t = a, best_v = kNegInf;
    int best_i = 0;
    for (int i = 0; i < scan_points; ++i) {
        double t = a + (b - a) * i / (scan_points - 1);
        double v = g(t);
        if (v > best_v) {
            best_v = v;
            best_t = t;
            best_i = i;
        }
    }
    if (best_v == kNegInf) return {a, kNegInf};
    double lo = a + (b - a) * std::max(0, best_i - 1) / (scan_points - 1);
    double hi = a + (b - a) * std::min(scan_points - 1, best_i + 1) / (scan_points - 1);
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < golden_iters && hi - lo > 1e-14 * (1.0 + std::abs(best_t)); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = g(x1);
        }
    }
    double mid = 0.5 * (lo + hi);
    double vmid = g(mid);
    if (f1 > vmid) {
        vmid = f1;
        mid = x1;
    }
    if (f2 > vmid) {
        vmid = f2;
        mid = x2;
    }
    if (best_v > vmid) {
        vmid = best_v;
        mid = best_t;
    }
    return {mid, vmid};
}

struct Objective {
    const Evaluable& f;
    const Vec& y;
    double operator()(const Vec& x) const { return sub_guarded(x.dot(y), f.evaluate(x)); }
};

Vec clamp_box(Vec x, double r) {
    for (int j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], -r, r);
    return x;
}

Vec numeric_gradient(const Objective& obj, const Vec& x, double r) {
    const int d = static_cast<int>(x.size());
    Vec g(d);
    for (int j = 0; j < d; ++j) {
        double h = 1e-7 * (1.0 + std::abs(x[j]));
        Vec xp = x, xm = x;
        xp[j] = std::min(x[j] + h, r);
        xm[j] = std::max(x[j] - h, -r);
        double vp = obj(xp), vm = obj(xm);
        double span = xp[j] - xm[j];
        g[j] = (span > 0 && std::isfinite(vp) && std::isfinite(vm)) ? (vp - vm) / span : 0.0;
    }
    return g;
}

// Projected ascent with conjugate-direction updates and golden line search.
// Concave objective, so the only job of the machinery is to converge fast.
LineMax ascend_from(const Objective& obj, Vec x, double r, const SearchConfig& cfg,
                    Vec* argmax_out) {
    x = clamp_box(std::move(x), r);
    double val = obj(x);
    if (val == kNegInf) {
        // slide toward the origin until the objective is finite
        for (int k = 0; k < 8 && val == kNegInf; ++k) {
            x *= 0.5;
            val = obj(x);
        }
        if (val == kNegInf) return {0.0, kNegInf};
    }
    Vec g_prev, dir_prev;
    int stall = 0;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        Vec g = numeric_gradient(obj, x, r);
        // deactivate components pushing outside the box
        bool active_changed = false;
        for (int j = 0; j < g.size(); ++j) {
            bool at_hi = x[j] >= r * (1 - 1e-12);
            bool at_lo = x[j] <= -r * (1 - 1e-12);
            if ((at_hi && g[j] > 0) || (at_lo && g[j] < 0)) {
                g[j] = 0.0;
                active_changed = true;
            }
        }
        Vec dir = g;
        if (it > 0 && !active_changed && g_prev.size() == g.size()) {
            double denom = g_prev.squaredNorm();
            if (denom > 0) {
                double beta = std::max(0.0, g.dot(g - g_prev) / denom);
                dir = g + beta * dir_prev;
                if (dir.dot(g) <= 0) dir = g;  // keep an ascent direction
            }
        }
        double dn = dir.norm();
        if (dn < 1e-14 * (1.0 + std::abs(val))) break;
        // largest feasible step along dir
        double t_hi = kPosInf;
        for (int j = 0; j < dir.size(); ++j) {
            if (dir[j] > 0) t_hi = std::min(t_hi, (r - x[j]) / dir[j]);
            if (dir[j] < 0) t_hi = std::min(t_hi, (-r - x[j]) / dir[j]);
        }
        if (!(t_hi > 0)) break;
        auto line = [&](double t) { return obj(clamp_box(x + t * dir, r)); };
        LineMax lm = maximize_on_interval(line, 0.0, t_hi, 9, 90);
        if (lm.value <= val + cfg.value_tol * (1.0 + std::abs(val))) {
            if (lm.value > val) {
                val = lm.value;
                x = clamp_box(x + lm.t * dir, r);
            }
            if (++stall >= 2) break;
        } else {
            stall = 0;
            val = lm.value;
            x = clamp_box(x + lm.t * dir, r);
        }
        g_prev = std::move(g);
        dir_prev = std::move(dir);
    }
    if (argmax_out) *argmax_out = x;
    return {0.0, val};
}

bool near_boundary(const Vec& x, double r) {
    for (int j = 0; j < x.size(); ++j)
        if (r - std::abs(x[j]) <= 1e-6 * r + 1e-12) return true;
    return false;
}

TransformResult transform_1d(const Evaluable& f, const Vec& y, const SearchConfig& cfg) {
    const double r = cfg.radius;
    auto g = [&](double t) {
        Vec x(1);
        x[0] = t;
        return sub_guarded(t * y[0], f.evaluate(x));
    };
    LineMax lm = maximize_on_interval(g, -r, r, 129, 120);
    if (lm.value == kNegInf) throw std::runtime_error("empty effective domain");
    TransformResult res;
    res.value = lm.value;
    res.maximizer = Vec::Constant(1, lm.t);
    res.truncated = near_boundary(res.maximizer, r);
    return res;
}

}  // namespace

TransformResult legendre_transform(const Evaluable& f, const Vec& y,
                                   const SearchConfig& search) {
    if (y.size() != f.dimension())
        throw std::invalid_argument("query dimension does not match the function");
    if (!y.allFinite()) throw std::invalid_argument("query vector must be finite");
    if (!(search.radius > 0)) throw std::invalid_argument("search radius must be positive");
    const int d = f.dimension();
    if (d == 1) return transform_1d(f, y, search);

    Objective obj{f, y};
    const double r = search.radius;
    std::vector<Vec> starts;
    starts.push_back(Vec::Zero(d));
    for (int j = 0; j < d; ++j) {
        Vec e = Vec::Zero(d);
        e[j] = 0.5 * r;
        starts.push_back(e);
        starts.push_back(-e);
    }
    Vec diag = Vec::Constant(d, 0.5 * r / std::sqrt(static_cast<double>(d)));
    starts.push_back(diag);
    starts.push_back(-diag);
    if (y.norm() > 0) starts.push_back(0.5 * r * y.normalized());

    TransformResult best;
    best.value = kNegInf;
    for (const Vec& s : starts) {
        Vec arg;
        LineMax lm = ascend_from(obj, s, r, search, &arg);
        if (lm.value > best.value) {
            best.value = lm.value;
            best.maximizer = arg;
        }
    }
    if (best.value == kNegInf) throw std::runtime_error("empty effective domain");
    best.truncated = near_boundary(best.maximizer, r);
    return best;
}

TransformResult legendre_transform(const Evaluable& f, const Vec& y,
                                   const SearchConfig& search, const Vec& warm_start) {
    if (y.size() != f.dimension())
        throw std::invalid_argument("query dimension does not match the function");
    if (!y.allFinite()) throw std::invalid_argument("query vector must be finite");
    if (!(search.radius > 0)) throw std::invalid_argument("search radius must be positive");
    if (f.dimension() == 1) return transform_1d(f, y, search);
    Objective obj{f, y};
    TransformResult best;
    best.value = kNegInf;
    for (const Vec& s : {warm_start, Vec(Vec::Zero(f.dimension()))}) {
        Vec arg;
        LineMax lm = ascend_from(obj, s, search.radius, search, &arg);
        if (lm.value > best.value) {
            best.value = lm.value;
            best.maximizer = arg;
        }
    }
    if (best.value == kNegInf) throw std::runtime_error("empty effective domain");
    best.truncated = near_boundary(best.maximizer, search.radius);
    return best;
}

// --- ConjugateGrid -----------------------------------------------------------

std::size_t ConjugateGrid::flat(const std::vector<int>& idx) const {
    std::size_t s = 0;
    for (int j = 0; j < dim_; ++j) s = s * knots_.size() + idx[j];
    return s;
}

ConjugateGrid ConjugateGrid::build(const YoungFunction& f, const BuildConfig& cfg) {
    ConjugateGrid grid;
    grid.dim_ = f.dimension();
    grid.flip_symmetric_ = f.coordinate_flip_symmetric();
    const int m = std::max(cfg.knots_per_axis, 4);
    grid.knots_.resize(m);
    grid.knots_[0] = 0.0;
    const double lo = std::log(cfg.min_knot), hi = std::log(cfg.search.radius);
    for (int i = 1; i < m; ++i)
        grid.knots_[i] = std::exp(lo + (hi - lo) * (i - 1) / (m - 2));
    grid.knots_[m - 1] = cfg.search.radius;  // exact endpoint

    const int d = grid.dim_;
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) total *= m;
    grid.values_.assign(total, 0.0);
    grid.truncated_.assign(total, 0);

    const std::size_t rows = total / m;  // last axis varies fastest within a row
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::size_t row = 0; row < rows; ++row) {
        std::vector<int> idx(d, 0);
        std::size_t rest = row;
        for (int j = d - 2; j >= 0; --j) {
            idx[j] = static_cast<int>(rest % m);
            rest /= m;
        }
        Vec x(d);
        for (int j = 0; j + 1 < d; ++j) x[j] = grid.knots_[idx[j]];
        Vec warm;
        for (int i = 0; i < m; ++i) {
            x[d - 1] = grid.knots_[i];
            TransformResult tr = warm.size()
                                     ? legendre_transform(f, x, cfg.search, warm)
                                     : legendre_transform(f, x, cfg.search);
            warm = tr.maximizer;
            std::size_t pos = row * m + i;
            grid.values_[pos] = tr.value;
            grid.truncated_[pos] = tr.truncated ? 1 : 0;
        }
    }
    for (unsigned char t : grid.truncated_)
        if (t) grid.any_truncated_ = true;
    return grid;
}

double ConjugateGrid::evaluate(const Vec& x_in) const {
    Vec x = x_in;
    bool any_neg = false, all_nonpos = true;
    for (int j = 0; j < dim_; ++j) {
        if (x[j] < 0) any_neg = true;
        if (x[j] > 0) all_nonpos = false;
    }
    if (any_neg) {
        if (flip_symmetric_ || all_nonpos)
            x = x.cwiseAbs();
        else
            throw std::domain_error("grid query outside the tabulated orthant");
    }
    const int m = static_cast<int>(knots_.size());
    std::vector<int> cell(dim_);
    std::vector<double> w(dim_);
    for (int j = 0; j < dim_; ++j) {
        double t = std::min(x[j], knots_[m - 1]);  // clamp beyond the box
        int hi = static_cast<int>(std::upper_bound(knots_.begin(), knots_.end(), t) -
                                  knots_.begin());
        hi = std::clamp(hi, 1, m - 1);
        int lo = hi - 1;
        cell[j] = lo;
        if (knots_[lo] > 0.0)
            w[j] = (std::log(t) - std::log(knots_[lo])) /
                   (std::log(knots_[hi]) - std::log(knots_[lo]));
        else
            w[j] = (t - knots_[lo]) / (knots_[hi] - knots_[lo]);
        w[j] = std::clamp(w[j], 0.0, 1.0);
    }
    double acc = 0.0;
    const unsigned corners = 1u << dim_;
    std::vector<int> idx(dim_);
    for (unsigned c = 0; c < corners; ++c) {
        double weight = 1.0;
        for (int j = 0; j < dim_; ++j) {
            bool hi = (c >> j) & 1u;
            weight *= hi ? w[j] : (1.0 - w[j]);
            idx[j] = cell[j] + (hi ? 1 : 0);
        }
        if (weight > 0) acc += weight * values_[flat(idx)];
    }
    return acc;
}

double ConjugateGrid::worst_axis_concavity_violation() const {
    const int m = static_cast<int>(knots_.size());
    double worst = 0.0;
    std::vector<int> idx(dim_, 0);
    std::size_t total = values_.size();
    for (int axis = 0; axis < dim_; ++axis) {
        for (std::size_t base = 0; base < total; ++base) {
            // decode and keep only lattice lines starting at index 0 on `axis`
            std::size_t rest = base;
            for (int j = dim_ - 1; j >= 0; --j) {
                idx[j] = static_cast<int>(rest % m);
                rest /= m;
            }
            if (idx[axis] != 0) continue;
            for (int i = 0; i + 2 < m; ++i) {
                std::vector<int> a = idx, b = idx, c = idx;
                a[axis] = i;
                b[axis] = i + 1;
                c[axis] = i + 2;
                double t0 = knots_[i], t1 = knots_[i + 1], t2 = knots_[i + 2];
                double s01 = (values_[flat(b)] - values_[flat(a)]) / (t1 - t0);
                double s12 = (values_[flat(c)] - values_[flat(b)]) / (t2 - t1);
                worst = std::max(worst, s01 - s12);
            }
        }
    }
    return worst;
}

double ConjugateGrid::worst_monotonicity_violation() const {
    const int m = static_cast<int>(knots_.size());
    double worst = 0.0;
    std::vector<int> idx(dim_, 0);
    for (int axis = 0; axis < dim_; ++axis) {
        for (std::size_t base = 0; base < values_.size(); ++base) {
            std::size_t rest = base;
            for (int j = dim_ - 1; j >= 0; --j) {
                idx[j] = static_cast<int>(rest % m);
                rest /= m;
            }
            if (idx[axis] != 0) continue;
            for (int i = 0; i + 1 < m; ++i) {
                std::vector<int> a = idx, b = idx;
                a[axis] = i;
                b[axis] = i + 1;
                worst = std::max(worst, values_[flat(a)] - values_[flat(b)]);
            }
        }
    }
    return worst;
}

void ConjugateGrid::export_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (int j = 0; j < dim_; ++j) out << "k" << (j + 1) << ",";
    out << "value,truncated\n";
    out << std::setprecision(17);
    const int m = static_cast<int>(knots_.size());
    std::vector<int> idx(dim_);
    for (std::size_t p = 0; p < values_.size(); ++p) {
        std::size_t rest = p;
        for (int j = dim_ - 1; j >= 0; --j) {
            idx[j] = static_cast<int>(rest % m);
            rest /= m;
        }
        for (int j = 0; j < dim_; ++j) out << knots_[idx[j]] << ",";
        out << values_[p] << "," << int(truncated_[p]) << "\n";
    }
}

// --- double conjugation -------------------------------------------------------

namespace {

class ConjugateView final : public Evaluable {
public:
    ConjugateView(const Evaluable& f, const SearchConfig& search) : f_(f), search_(search) {}
    int dimension() const override { return f_.dimension(); }
    double evaluate(const Vec& x) const override {
        TransformResult tr = warm_.size() ? legendre_transform(f_, x, search_, warm_)
                                          : legendre_transform(f_, x, search_);
        warm_ = tr.maximizer;
        if (tr.truncated) truncated_ = true;
        return tr.value;
    }
    bool truncated() const { return truncated_; }

private:
    const Evaluable& f_;
    SearchConfig search_;
    mutable Vec warm_;
    mutable bool truncated_ = false;
};

}  // namespace

DoubleConjugateResult double_conjugate_residual(const YoungFunction& f,
                                                const std::vector<Vec>& probe_points,
                                                const SearchConfig& search) {
    DoubleConjugateResult res;
    const int np = static_cast<int>(probe_points.size());
    std::vector<double> residuals(np, 0.0);
    std::vector<unsigned char> truncs(np, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < np; ++i) {
        ConjugateView view(f, search);
        TransformResult outer = legendre_transform(view, probe_points[i], search);
        residuals[i] = std::abs(outer.value - f.evaluate(probe_points[i]));
        truncs[i] = (outer.truncated || view.truncated()) ? 1 : 0;
    }
    for (int i = 0; i < np; ++i) {
        res.max_residual = std::max(res.max_residual, residuals[i]);
        if (truncs[i]) res.truncated = true;
    }
    return res;
}

TransformResult conjugate_at_exp(const Evaluable& f, const Vec& mu, const SearchConfig& search) {
    Vec x = mu.array().exp().min(1e300).matrix();  // keep deep rays finite
    return legendre_transform(f, x, search);
}

}  // namespace exptail::convex
