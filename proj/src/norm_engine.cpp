#include "exptail/norm_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "exptail/kernels.hpp"
#include "exptail/rng.hpp"

namespace exptail::norm {

using convex::ConjugateGrid;
using convex::SearchConfig;
using convex::TransformResult;
using convex::YoungFunction;

// --- lambda grid ---------------------------------------------------------------

std::vector<Vec> LambdaGrid::points(int dim) const {
    std::vector<Vec> dirs;
    if (dim == 1) {
        dirs.push_back(Vec::Constant(1, 1.0));
    } else {
        std::uint64_t key = dist::stream_key(seed, 101);
        std::uint64_t c = 0;
        while (static_cast<int>(dirs.size()) < directions) {
            Vec v(dim);
            for (int j = 0; j < dim; ++j) v[j] = dist::normal_at(key, c++);
            double nrm = v.norm();
            if (nrm < 1e-9) continue;
            dirs.push_back(v / nrm);
        }
    }
    std::vector<Vec> pts;
    const double llo = std::log(min_radius), lhi = std::log(max_radius);
    for (const Vec& u : dirs)
        for (int i = 0; i < radii; ++i) {
            double r = std::exp(llo + (lhi - llo) * i / (radii - 1));
            pts.push_back(r * u);
        }
    return pts;
}

// --- B(phi) norm ----------------------------------------------------------------

BPhiResult bphi_norm(const MGFOracle& oracle, const YoungFunction& phi,
                     const std::vector<Vec>& lambda_grid, double rel_tol) {
    if (lambda_grid.empty()) throw std::invalid_argument("empty lambda grid");
    if (oracle.dimension() != phi.dimension())
        throw std::invalid_argument("oracle and phi dimensions disagree");
    BPhiResult res;

    std::vector<double> nat(lambda_grid.size());
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        nat[i] = natural_function(oracle, lambda_grid[i]);
        if (is_pos_inf(nat[i])) {
            // no tau can push phi above a divergent natural function when phi
            // is finite along the ray
            res.value = kPosInf;
            res.diagnostic = "Kramer violated on grid";
            res.witness_lambda = lambda_grid[i];
            return res;
        }
    }

    auto feasible = [&](double tau) {
        for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
            double rhs = phi.evaluate((tau * lambda_grid[i]).eval());
            if (is_pos_inf(rhs)) continue;
            if (nat[i] > rhs) return false;
        }
        return true;
    };

    double lo, hi;
    if (feasible(1.0)) {
        hi = 1.0;
        lo = 0.5;
        while (feasible(lo)) {
            hi = lo;
            lo *= 0.5;
            if (lo < 1e-12) {
                res.value = 0.0;  // degenerate data: every scale works
                return res;
            }
        }
    } else {
        lo = 1.0;
        hi = 2.0;
        while (!feasible(hi)) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1.8446744073709552e19) {  // 2^64
                res.value = kPosInf;
                res.diagnostic = "no dominating scale up to 2^64";
                return res;
            }
        }
    }
    while ((hi - lo) / hi > rel_tol) {
        double mid = 0.5 * (lo + hi);
        if (feasible(mid))
            hi = mid;
        else
            lo = mid;
    }
    res.value = hi;  // smallest scale verified feasible on the grid
    return res;
}

// --- mixed moments ---------------------------------------------------------------

MixedMoment mixed_moment(const dist::SampleSet& samples, const Vec& r) {
    const int d = samples.cols();
    if (r.size() != d) throw std::invalid_argument("moment order dimension mismatch");
    if ((r.array() < 1.0).any())
        throw std::invalid_argument("moment orders must have entries >= 1");
    const double total_order = r.sum();
    std::vector<double> rv(r.data(), r.data() + d);

    double l1 = kernels::log_mean_abs_power(samples.data(), samples.rows(), d, rv);
    MixedMoment m;
    m.high_variance = total_order > 16.0;
    if (l1 == kNegInf) {
        m.value = 0.0;  // all-zero data
        return m;
    }
    if (!std::isfinite(l1)) throw std::runtime_error("moment overflow");
    std::vector<double> rv2(rv);
    for (double& v : rv2) v *= 2.0;
    double l2 = kernels::log_mean_abs_power(samples.data(), samples.rows(), d, rv2);

    m.value = std::exp(l1 / total_order);
    double rel_var = std::exp(l2 - 2.0 * l1) - 1.0;
    double rel_se_mean = std::sqrt(std::max(0.0, rel_var) / double(samples.rows()));
    m.std_error = m.value * rel_se_mean / total_order;
    return m;
}

// --- capital Phi and the psi weight ----------------------------------------------

namespace {

// mu -> phi*(exp(mu)); each evaluation is a fresh conjugate solve, warm
// started across queries of the enclosing optimization
class CapitalPhi final : public convex::Evaluable {
public:
    CapitalPhi(const YoungFunction& phi, const SearchConfig& search)
        : phi_(phi), search_(search) {}
    int dimension() const override { return phi_.dimension(); }
    double evaluate(const Vec& mu) const override {
        Vec x = exp_clamped(mu);
        TransformResult tr = warm_.size()
                                 ? convex::legendre_transform(phi_, x, search_, warm_)
                                 : convex::legendre_transform(phi_, x, search_);
        warm_ = tr.maximizer;
        return tr.value;
    }
    bool last_truncated(const Vec& mu) const {
        return convex::legendre_transform(phi_, exp_clamped(mu), search_).truncated;
    }

    // keeps the coordinate-wise exponential finite for very deep probe rays
    static Vec exp_clamped(const Vec& mu) {
        return mu.array().exp().min(1e300).matrix();
    }

private:
    const YoungFunction& phi_;
    SearchConfig search_;
    mutable Vec warm_;
};

constexpr double kMuBoxRadius = 30.0;

}  // namespace

convex::TransformResult capital_phi_conjugate(const YoungFunction& phi, const Vec& r,
                                              const SearchConfig& search) {
    CapitalPhi cap(phi, search);
    SearchConfig mu_search = search;
    mu_search.radius = kMuBoxRadius;
    TransformResult tr = convex::legendre_transform(cap, r, mu_search);
    // the result is only as good as the inner solve at the winning mu
    if (!tr.truncated && cap.last_truncated(tr.maximizer)) tr.truncated = true;
    return tr;
}

PsiWeight psi_weight(const YoungFunction& phi, const Vec& r, const SearchConfig& search) {
    const int d = phi.dimension();
    if (r.size() != d) throw std::invalid_argument("weight order dimension mismatch");
    if ((r.array() < 1.0).any())
        throw std::invalid_argument("weight orders must have entries >= 1");
    TransformResult phistar = capital_phi_conjugate(phi, r, search);
    const double total = r.sum();
    double log_psi = -1.0 + d * std::log(2.0) / total - phistar.value / total;
    for (int j = 0; j < d; ++j) log_psi += r[j] * std::log(r[j]) / total;
    PsiWeight w;
    w.value = std::exp(log_psi);
    w.truncated = phistar.truncated;
    return w;
}

PsiWeight moment_bound(const YoungFunction& phi, const Vec& r, double norm,
                       const SearchConfig& search) {
    if (norm < 0) throw std::invalid_argument("norm must be non-negative");
    if (norm == 0.0) return {0.0, false};
    PsiWeight w = psi_weight(phi, r, search);
    w.value *= norm;
    return w;
}

// --- moment-order grid ------------------------------------------------------------

std::vector<Vec> RGrid::standard(int dim, unsigned long long seed) {
    std::vector<Vec> grid;
    if (dim == 1) {
        for (int k = 1; k <= 20; ++k) grid.push_back(Vec::Constant(1, double(k)));
        return grid;
    }
    std::uint64_t key = dist::stream_key(seed, 7);
    std::uint64_t c = 0;
    std::vector<Vec> dirs;
    while (dirs.size() < 8) {
        Vec v(dim);
        for (int j = 0; j < dim; ++j) v[j] = 1.0 + std::abs(dist::normal_at(key, c++));
        dirs.push_back(v * (dim / v.sum()));  // normalize to |v| = dim
    }
    for (double t : {1.0, 2.0, 4.0, 8.0, 16.0})
        for (const Vec& u : dirs) {
            Vec r = (t * u).cwiseMax(1.0);
            grid.push_back(r);
        }
    return grid;
}

// --- moment-weighted supremum norm --------------------------------------------------

GlsResult gls_norm(const dist::SampleSet& samples, const YoungFunction& phi,
                   const std::vector<Vec>& r_grid, const SearchConfig& search) {
    if (r_grid.empty()) throw std::invalid_argument("empty moment-order grid");
    GlsResult res;
    res.value = 0.0;
    res.trusted_value = 0.0;
    for (const Vec& r : r_grid) {
        GlsPoint pt;
        pt.r = r;
        pt.skipped = false;
        try {
            MixedMoment m = mixed_moment(samples, r);
            PsiWeight w = psi_weight(phi, r, search);
            pt.moment = m.value;
            pt.weight = w.value;
            pt.ratio = m.value / w.value;
            pt.std_error = m.std_error / w.value;
            pt.high_variance = m.high_variance;
        } catch (const std::exception& e) {
            pt.skipped = true;
            res.diagnostic = std::string("skipped point: ") + e.what();
            res.points.push_back(pt);
            continue;
        }
        if (pt.ratio > res.value) {
            res.value = pt.ratio;
            res.argmax_r = r;
        }
        if (!pt.high_variance) res.trusted_value = std::max(res.trusted_value, pt.ratio);
        res.points.push_back(pt);
    }
    return res;
}

// --- quadrature -------------------------------------------------------------------

namespace {

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb, double whole, double tol,
                            int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 28);
}

// iterated tensor quadrature of g over the box prod_j [lo_j, hi_j]
double iterated_integral(const std::function<double(const Vec&)>& g, const Vec& lo,
                         const Vec& hi, int axis, Vec& point, double tol) {
    const int d = static_cast<int>(lo.size());
    auto section = [&](double t) {
        point[axis] = t;
        if (axis + 1 == d) return g(point);
        return iterated_integral(g, lo, hi, axis + 1, point, tol * 0.5);
    };
    return adaptive_simpson(section, lo[axis], hi[axis], tol);
}

struct DecayProbe {
    bool decayed = true;
    double cut = 1.0;
    Vec failing_direction;
};

// march t along each probe direction until the integrand falls below the
// threshold; reports the failing direction if the cap is reached first
DecayProbe probe_decay(const std::function<double(const Vec&)>& g,
                       const std::vector<Vec>& directions, double threshold, double cap) {
    DecayProbe out;
    double cut = 1.0;
    for (const Vec& u : directions) {
        double t = 1.0;
        while (t <= cap) {
            if (g((t * u).eval()) < threshold) break;
            t *= 2.0;
        }
        if (t > cap) {
            out.decayed = false;
            out.failing_direction = u;
            return out;
        }
        cut = std::max(cut, t);
    }
    out.cut = cut;
    return out;
}

std::vector<Vec> orthant_probe_directions(int d) {
    std::vector<Vec> dirs;
    for (int j = 0; j < d; ++j) {
        Vec e = Vec::Zero(d);
        e[j] = 1.0;
        dirs.push_back(e);
    }
    if (d > 1) dirs.push_back(Vec::Constant(d, 1.0 / std::sqrt(double(d))));
    return dirs;
}

}  // namespace

Certificate k_gamma_integral(const YoungFunction& phi, double gamma,
                             const QuadratureConfig& quad, const SearchConfig& search) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma must lie in (0, 1)");
    const int d = phi.dimension();

    // conjugate evaluator: direct solves in one dimension, a tabulated grid
    // for the multi-dimensional integrand
    std::function<double(const Vec&)> phi_star;
    bool truncated_seen = false;
    std::shared_ptr<ConjugateGrid> grid;
    if (d == 1) {
        phi_star = [&phi, &search, &truncated_seen](const Vec& x) {
            auto tr = convex::legendre_transform(phi, x, search);
            if (tr.truncated) truncated_seen = true;
            return tr.value;
        };
    } else {
        ConjugateGrid::BuildConfig bc;
        bc.knots_per_axis = d == 2 ? 96 : 32;
        bc.search = search;
        grid = std::make_shared<ConjugateGrid>(ConjugateGrid::build(phi, bc));
        if (grid->any_truncated()) truncated_seen = true;
        phi_star = [grid](const Vec& x) { return grid->evaluate(x); };
    }

    auto integrand = [&](const Vec& x) {
        return std::exp(phi_star((gamma * x).eval()) - phi_star(x));
    };

    Certificate cert;
    auto probe = probe_decay(integrand, orthant_probe_directions(d),
                             quad.decay_threshold, quad.cut_cap);
    if (!probe.decayed) {
        if (truncated_seen) {
            cert.verdict = CertVerdict::Inconclusive;
            cert.note = "conjugate truncation before integrand decay";
        } else {
            cert.verdict = CertVerdict::Infinite;
            cert.note = "integrand fails to decay along probe rays";
        }
        return cert;
    }

    if (d <= 3) {
        Vec lo = Vec::Zero(d), hi = Vec::Constant(d, probe.cut);
        Vec point(d);
        double value =
            iterated_integral(integrand, lo, hi, 0, point, quad.rel_tol);
        cert.verdict = truncated_seen ? CertVerdict::Inconclusive : CertVerdict::Finite;
        cert.value = value;
        if (truncated_seen) cert.note = "conjugate truncation inside the integration box";
        return cert;
    }

    // importance-sampled estimate with per-axis exponential proposals
    const double scale = probe.cut / 8.0;
    std::uint64_t key = dist::stream_key(quad.mc_seed, 3);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < quad.mc_samples; ++i) {
        Vec x(d);
        double log_pdf = 0.0;
        for (int j = 0; j < d; ++j) {
            double u = dist::uniform_at(key, i * d + j);
            x[j] = -scale * std::log(u);
            log_pdf += -x[j] / scale - std::log(scale);
        }
        double w = std::exp(std::log(std::max(integrand(x), 1e-300)) - log_pdf);
        sum += w;
        sum_sq += w * w;
    }
    double mean = sum / double(quad.mc_samples);
    double var = std::max(0.0, sum_sq / double(quad.mc_samples) - mean * mean);
    cert.verdict = truncated_seen ? CertVerdict::Inconclusive : CertVerdict::Finite;
    cert.value = mean;
    cert.std_error = std::sqrt(var / double(quad.mc_samples));
    return cert;
}

Certificate l_integral(const YoungFunction& phi, double gamma, const QuadratureConfig& quad,
                       const SearchConfig& search) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma must lie in (0, 1)");
    const int d = phi.dimension();

    CapitalPhi cap(phi, search);
    auto integrand = [&](const Vec& z) {
        return std::exp(cap.evaluate((gamma * z).eval()) - cap.evaluate(z));
    };

    // probe both orientations along each axis and the diagonals
    std::vector<Vec> dirs;
    for (const Vec& u : orthant_probe_directions(d)) {
        dirs.push_back(u);
        dirs.push_back(-u);
    }
    Certificate cert;
    auto probe = probe_decay(integrand, dirs, quad.decay_threshold, quad.cut_cap);
    if (!probe.decayed) {
        bool left = (probe.failing_direction.array() <= 0.0).all();
        cert.verdict = CertVerdict::Infinite;
        cert.note = left ? "+inf (left tail)" : "integrand fails to decay along probe rays";
        return cert;
    }
    if (d > 3) {
        cert.verdict = CertVerdict::Inconclusive;
        cert.note = "quadrature over the full space is limited to d <= 3";
        return cert;
    }
    Vec lo = Vec::Constant(d, -probe.cut), hi = Vec::Constant(d, probe.cut);
    Vec point(d);
    cert.value = iterated_integral(integrand, lo, hi, 0, point, quad.rel_tol);
    cert.verdict = CertVerdict::Finite;
    return cert;
}

// --- Orlicz construction ------------------------------------------------------------

OrliczNValue orlicz_n_function(const YoungFunction& phi, const Vec& u,
                               const SearchConfig& search) {
    auto tr = convex::legendre_transform(phi, u, search);
    OrliczNValue v;
    v.value = std::expm1(tr.value);
    v.truncated = tr.truncated;
    return v;
}

OrliczResult orlicz_norm(const dist::SampleSet& samples, const YoungFunction& phi,
                         double rel_tol, const SearchConfig& search_in) {
    const int d = samples.cols();
    if (phi.dimension() != d) throw std::invalid_argument("phi dimension mismatch");
    const std::size_t n = samples.rows();
    OrliczResult res;

    // scale-covariant magnitude: root mean square over all entries, snapped
    // to a power of two so that doubling the data doubles the bracket exactly
    double ss = 0.0;
    for (double v : samples.data()) ss += v * v;
    if (ss == 0.0) {
        res.value = 0.0;  // identically zero vector: every scale works
        return res;
    }
    double rms = std::sqrt(ss / double(samples.data().size()));
    double c0 = std::ldexp(1.0, std::ilogb(rms) + 1);

    SearchConfig search = search_in;
    if (search.radius <= 0) search.radius = phi.truncation_radius();

    ConjugateGrid::BuildConfig bc;
    bc.knots_per_axis = d == 1 ? 256 : (d == 2 ? 96 : 32);
    bc.min_knot = 1e-3;
    bc.search = search;
    ConjugateGrid grid = ConjugateGrid::build(phi, bc);

    kernels::RowFunctional g = [&grid, d](std::span<const double> abs_row) {
        Eigen::Map<const Vec> x(abs_row.data(), d);
        return grid.evaluate(x);
    };
    const double log2v = std::log(2.0);
    auto mean_within_one = [&](double c) {
        double lse_mean = kernels::log_mean_exp_rowfun(samples.data(), n, d, 1.0 / c, g);
        return lse_mean <= log2v;  // mean exp(phi*) <= 2  <=>  mean N <= 1
    };

    double lo, hi;
    if (mean_within_one(c0)) {
        hi = c0;
        lo = 0.5 * c0;
        int guard = 0;
        while (mean_within_one(lo)) {
            hi = lo;
            lo *= 0.5;
            if (++guard > 200) {
                res.value = 0.0;
                return res;
            }
        }
    } else {
        lo = c0;
        hi = 2.0 * c0;
        int guard = 0;
        while (!mean_within_one(hi)) {
            lo = hi;
            hi *= 2.0;
            if (++guard > 200) {
                res.value = kPosInf;
                res.diagnostic = "no finite scale bounds the mean (Kramer violated)";
                return res;
            }
        }
    }
    while ((hi - lo) / hi > rel_tol) {
        double mid = 0.5 * (lo + hi);
        if (mean_within_one(mid))
            hi = mid;
        else
            lo = mid;
    }
    res.value = hi;
    return res;
}

// --- aggregate report ----------------------------------------------------------------

NormReport norm_report(const dist::SampleSet& samples, const YoungFunction& phi) {
    NormReport rep;
    rep.n = samples.rows();
    rep.seed = samples.seed();
    rep.phi_config = phi.to_config();
    if (samples.model()) rep.model_config = samples.model()->to_config();

    SearchConfig search;
    search.radius = phi.truncation_radius();

    LambdaGrid lg;
    lg.max_radius = phi.truncation_radius();
    MGFOracle oracle = MGFOracle::empirical(samples);
    BPhiResult b = bphi_norm(oracle, phi, lg.points(phi.dimension()));
    rep.bphi = b.value;
    rep.bphi_diagnostic = b.diagnostic;

    GlsResult g = gls_norm(samples, phi, RGrid::standard(phi.dimension()), search);
    rep.gls = g.value;
    rep.gls_trusted = g.trusted_value;
    rep.gls_diagnostic = g.diagnostic;
    if (g.argmax_r.size())
        rep.gls_argmax_r.assign(g.argmax_r.data(), g.argmax_r.data() + g.argmax_r.size());

    OrliczResult o = orlicz_norm(samples, phi, 1e-3, search);
    rep.orlicz = o.value;
    rep.orlicz_diagnostic = o.diagnostic;

    auto ratio = [](double a, double bb) {
        return (std::isfinite(a) && std::isfinite(bb) && bb != 0.0) ? a / bb : 0.0;
    };
    rep.bphi_over_gls = ratio(rep.bphi, rep.gls);
    rep.bphi_over_orlicz = ratio(rep.bphi, rep.orlicz);
    rep.gls_over_orlicz = ratio(rep.gls, rep.orlicz);
    return rep;
}

}  // namespace exptail::norm
