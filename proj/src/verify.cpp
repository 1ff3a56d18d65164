#include "exptail/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "exptail/matrix_ops.hpp"
#include "exptail/rng.hpp"

namespace exptail::verify {

using convex::SearchConfig;
using convex::YoungFunction;
using norm::MGFOracle;

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Fails: return "fails";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

std::vector<Vec> default_x_grid(int dim) {
    std::vector<Vec> grid;
    std::vector<double> levels;
    for (double t = 0.5; t <= 4.0 + 1e-9; t += 0.5) levels.push_back(t);
    if (dim == 1) {
        for (double t : levels) grid.push_back(Vec::Constant(1, t));
        return grid;
    }
    if (dim == 2) {
        for (double a : levels)
            for (double b : levels) {
                Vec v(2);
                v << a, b;
                grid.push_back(v);
            }
        return grid;
    }
    for (double t : levels) grid.push_back(Vec::Constant(dim, t));
    return grid;
}

std::vector<Vec> default_lambda_grid(int dim, double scale_hint) {
    std::vector<Vec> grid;
    std::vector<double> radii = {0.25, 0.5, 1.0, 1.5, 2.0, 3.0};
    if (dim == 1) {
        for (double r : radii) grid.push_back(Vec::Constant(1, r / scale_hint));
        return grid;
    }
    std::uint64_t key = dist::stream_key(0xFACED, 5);
    std::uint64_t c = 0;
    std::vector<Vec> dirs;
    while (dirs.size() < 16) {
        Vec v(dim);
        for (int j = 0; j < dim; ++j) v[j] = dist::normal_at(key, c++);
        if (v.norm() < 1e-9) continue;
        dirs.push_back(v.normalized());
    }
    for (const Vec& u : dirs)
        for (double r : radii) grid.push_back((r / scale_hint) * u);
    return grid;
}

// --- tail domination sweep ------------------------------------------------------

SweepTable tail_domination_sweep(const dist::DistributionModel& model,
                                 const YoungFunction& phi, double scale,
                                 const std::vector<Vec>& x_grid, std::size_t n,
                                 std::uint64_t seed) {
    SearchConfig search;
    search.radius = phi.truncation_radius();
    auto samples = dist::sample(model, n, seed);
    SweepTable table;
    table.min_margin = kPosInf;
    for (const Vec& x : x_grid) {
        auto est = tail::empirical_tail(samples, x);
        auto bound = tail::chernov_bound(phi, x, scale, search);
        SweepRow row;
        row.x.assign(x.data(), x.data() + x.size());
        row.empirical = est.value;
        row.half_width = est.half_width;
        row.bound = bound.value;
        row.margin = bound.value - est.value;
        table.min_margin = std::min(table.min_margin, row.margin);
        table.rows.push_back(row);
    }
    if (table.rows.empty()) table.min_margin = 0.0;
    return table;
}

// --- strict subgaussian ----------------------------------------------------------

CheckResult strict_subgaussian_check(const dist::SampleSet& samples,
                                     const std::vector<Vec>& lambda_grid) {
    const int d = samples.cols();
    const std::size_t n = samples.rows();
    // sample covariance (mean is zero by the model contract; the check
    // precondition keeps the empirical mean inside its confidence band)
    Mat cov = Mat::Zero(d, d);
    Vec mean = Vec::Zero(d);
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::Map<const Vec> row(samples.row(i).data(), d);
        mean += row;
    }
    mean /= double(n);
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::Map<const Vec> row(samples.row(i).data(), d);
        Vec c = row - mean;
        cov += c * c.transpose();
    }
    cov /= double(n);

    MGFOracle oracle = MGFOracle::empirical(samples);
    CheckResult res;
    res.worst_margin = kPosInf;
    bool divergent = false;
    for (const Vec& lambda : lambda_grid) {
        auto lm = oracle.log_plain_mgf(lambda);
        if (!std::isfinite(lm.value)) {
            divergent = true;
            continue;
        }
        double rhs = 0.5 * lambda.dot(cov * lambda);
        EvidenceRow row;
        row.query.assign(lambda.data(), lambda.data() + d);
        row.lhs = lm.value;
        row.rhs = rhs;
        row.margin = rhs - lm.value;
        row.stat_tol = 3.0 * lm.std_error;
        res.worst_margin = std::min(res.worst_margin, row.margin + row.stat_tol);
        res.evidence.push_back(row);
    }
    if (divergent) {
        res.verdict = Verdict::Inconclusive;
        return res;
    }
    res.verdict = res.worst_margin >= 0.0 ? Verdict::Holds : Verdict::Fails;
    return res;
}

// --- variance domination ----------------------------------------------------------

VarianceDomination variance_domination_check(const dist::SampleSet& samples,
                                             const YoungFunction& phi, double norm_tol) {
    SearchConfig search;
    search.radius = phi.truncation_radius();
    norm::LambdaGrid lg;
    lg.max_radius = phi.truncation_radius();
    MGFOracle oracle = MGFOracle::empirical(samples);
    auto b = norm::bphi_norm(oracle, phi, lg.points(phi.dimension()));
    if (!(b.value <= 1.0 + norm_tol))
        throw std::invalid_argument(
            "unit-norm precondition violated: rescale the samples by 1/" +
            std::to_string(b.value));

    const int d = samples.cols();
    const std::size_t n = samples.rows();
    Mat cov = Mat::Zero(d, d);
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::Map<const Vec> row(samples.row(i).data(), d);
        cov += row * row.transpose();
    }
    cov /= double(n);

    auto h = convex::hessian_at_zero(phi, convex::default_hessian_step(phi));
    Mat half = h.half_hessian;
    Mat full = 2.0 * h.half_hessian;

    // statistical tolerance: covariance entries fluctuate like 1/sqrt(n)
    double tol = 3.0 * std::sqrt(2.0 / double(n)) *
                 std::max(1.0, cov.diagonal().maxCoeff());
    VarianceDomination out;
    out.half_margin = convex::smallest_eigenvalue(half - cov);
    out.full_margin = convex::smallest_eigenvalue(full - cov);
    out.half_hessian_verdict = out.half_margin >= -tol ? Verdict::Holds : Verdict::Fails;
    out.full_hessian_verdict = out.full_margin >= -tol ? Verdict::Holds : Verdict::Fails;
    return out;
}

// --- equivalence ladder ------------------------------------------------------------

namespace {

// smallest scale C in [lo, hi] with every empirical tail below
// exp(-phi*(x/C)) up to 3 standard errors; the worst margin is monotone in C,
// so a bisection pins the witness
struct FittedC {
    bool found = false;
    double c = 0.0;
};

FittedC fit_tail_constant(const std::vector<tail::TailEstimate>& tails,
                          const YoungFunction& phi, const SearchConfig& search, double lo,
                          double hi) {
    auto ok = [&](double c) {
        for (const auto& est : tails) {
            auto bound = tail::chernov_bound(phi, est.x, c, search);
            if (est.value - 3.0 * est.std_error > bound.value) return false;
        }
        return true;
    };
    FittedC out;
    if (!ok(hi)) return out;
    double a = lo, b = hi;
    if (ok(a)) {
        out.found = true;
        out.c = a;
        return out;
    }
    while ((b - a) / b > 1e-3) {
        double mid = std::sqrt(a * b);  // log-scale bisection
        if (ok(mid))
            b = mid;
        else
            a = mid;
    }
    out.found = true;
    out.c = b;
    return out;
}

}  // namespace

EquivalenceReport equivalence_ladder(const dist::DistributionModel& model,
                                     const YoungFunction& phi, const LadderConfig& config) {
    const int d = model.dimension();
    if (phi.dimension() != d)
        throw std::invalid_argument("model and phi dimensions disagree");
    SearchConfig search;
    search.radius = phi.truncation_radius();

    EquivalenceReport rep;
    rep.model_config = model.to_config();
    rep.phi_config = phi.to_config();
    rep.seed = config.seed;
    rep.n = config.n;

    auto model_ptr = std::make_shared<const dist::DistributionModel>(model);
    auto samples = dist::sample(model_ptr, config.n, config.seed);

    std::vector<Vec> x_grid = config.x_grid.empty() ? default_x_grid(d) : config.x_grid;
    std::vector<Vec> r_grid =
        config.r_grid.empty() ? norm::RGrid::standard(d) : config.r_grid;
    std::vector<Vec> lambda_grid = config.lambda_grid.empty()
                                       ? norm::LambdaGrid{.max_radius =
                                                              phi.truncation_radius()}
                                             .points(d)
                                       : config.lambda_grid;

    // A: Orlicz membership
    {
        auto o = norm::orlicz_norm(samples, phi, 1e-3, search);
        rep.orlicz_membership.fitted = o.value;
        rep.orlicz_membership.note = o.diagnostic;
        rep.orlicz_membership.verdict =
            std::isfinite(o.value) ? Verdict::Holds : Verdict::Fails;
    }

    // B: tail domination with a fitted constant
    {
        std::vector<tail::TailEstimate> tails;
        tails.reserve(x_grid.size());
        for (const Vec& x : x_grid) tails.push_back(tail::empirical_tail(samples, x));
        FittedC fit = fit_tail_constant(tails, phi, search, config.fit_c_lo, config.fit_c_hi);
        auto& pr = rep.tail_domination;
        if (fit.found) {
            pr.verdict = Verdict::Holds;
            pr.fitted = fit.c;
        } else {
            pr.verdict = Verdict::Fails;
            pr.fitted = kPosInf;
            pr.note = "no dominating constant in the searched range";
        }
        double c_report = fit.found ? fit.c : config.fit_c_hi;
        for (const auto& est : tails) {
            auto bound = tail::chernov_bound(phi, est.x, c_report, search);
            EvidenceRow row;
            row.query.assign(est.x.data(), est.x.data() + d);
            row.lhs = est.value;
            row.rhs = bound.value;
            row.margin = bound.value - est.value;
            row.stat_tol = 3.0 * est.std_error;
            pr.evidence.push_back(row);
        }
    }

    // C: moment-weighted supremum membership
    {
        auto g = norm::gls_norm(samples, phi, r_grid, search);
        auto& pr = rep.gls_membership;
        pr.fitted = g.value;
        pr.note = g.diagnostic;
        bool all_skipped = true;
        for (const auto& p : g.points) all_skipped = all_skipped && p.skipped;
        if (all_skipped)
            pr.verdict = Verdict::Inconclusive;
        else
            pr.verdict = std::isfinite(g.value) ? Verdict::Holds : Verdict::Fails;
        for (const auto& p : g.points) {
            if (p.skipped) continue;
            EvidenceRow row;
            row.query.assign(p.r.data(), p.r.data() + d);
            row.lhs = p.moment;
            row.rhs = p.ratio <= 0 ? 0.0 : p.weight * g.value;
            row.margin = row.rhs - row.lhs;
            row.stat_tol = 3.0 * p.std_error * p.weight;
            pr.evidence.push_back(row);
        }
    }

    // D: generating-function membership
    {
        MGFOracle oracle = MGFOracle::empirical(samples);
        auto b = norm::bphi_norm(oracle, phi, lambda_grid);
        auto& pr = rep.bphi_membership;
        pr.fitted = b.value;
        pr.note = b.diagnostic;
        pr.verdict = std::isfinite(b.value) ? Verdict::Holds : Verdict::Fails;
        if (!std::isfinite(b.value) && b.witness_lambda) {
            EvidenceRow row;
            row.query.assign(b.witness_lambda->data(), b.witness_lambda->data() + d);
            row.lhs = kPosInf;
            row.rhs = phi.evaluate(*b.witness_lambda);
            row.margin = kNegInf;
            row.stat_tol = 0.0;
            pr.evidence.push_back(row);
        }
    }

    // ladder verdict: the four memberships must agree
    std::vector<Verdict> verdicts = {rep.orlicz_membership.verdict,
                                     rep.tail_domination.verdict,
                                     rep.gls_membership.verdict,
                                     rep.bphi_membership.verdict};
    if (std::any_of(verdicts.begin(), verdicts.end(),
                    [](Verdict v) { return v == Verdict::Inconclusive; })) {
        rep.ladder = Verdict::Inconclusive;
        rep.ladder_note = "a sub-computation was inconclusive";
    } else if (std::all_of(verdicts.begin(), verdicts.end(),
                           [](Verdict v) { return v == Verdict::Holds; })) {
        rep.ladder = Verdict::Holds;
        rep.ladder_note = "consistent";
    } else {
        rep.ladder = Verdict::Fails;
        const char* names[] = {"orlicz", "tail", "gls", "bphi"};
        std::string culprits;
        for (int i = 0; i < 4; ++i)
            if (verdicts[i] != Verdict::Holds) culprits += std::string(names[i]) + " ";
        rep.ladder_note = "disagreement: " + culprits;
    }

    if (std::isfinite(rep.bphi_membership.fitted) && rep.gls_membership.fitted > 0 &&
        std::isfinite(rep.gls_membership.fitted))
        rep.sandwich_ratio = rep.bphi_membership.fitted / rep.gls_membership.fitted;

    // smallest K making the quadratic-form bound dominate, when phi is quadratic
    if (phi.family() == convex::YoungFamily::QuadraticMatrix &&
        std::isfinite(rep.bphi_membership.fitted) && rep.bphi_membership.fitted > 0) {
        const Mat& bm = phi.quadratic_matrix();
        double nrm = rep.bphi_membership.fitted;
        std::vector<tail::TailEstimate> tails;
        for (const Vec& x : x_grid) tails.push_back(tail::empirical_tail(samples, x));
        auto ok = [&](double k) {
            for (const auto& est : tails) {
                double bound = tail::subgaussian_bound(bm, nrm, k, est.x);
                if (est.value - 3.0 * est.std_error > bound) return false;
            }
            return true;
        };
        double lo = 1e-3, hi = 1e3;
        if (ok(hi)) {
            if (ok(lo)) {
                rep.fitted_subgaussian_k = lo;
            } else {
                double a = lo, b2 = hi;
                while ((b2 - a) / b2 > 1e-3) {
                    double mid = std::sqrt(a * b2);
                    if (ok(mid))
                        b2 = mid;
                    else
                        a = mid;
                }
                rep.fitted_subgaussian_k = b2;
            }
        }
    }
    return rep;
}

MultiSeedReport run_ladders(const dist::DistributionModel& model, const YoungFunction& phi,
                            std::size_t n, const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw std::invalid_argument("seed list must be non-empty");
    MultiSeedReport out;
    for (std::uint64_t s : seeds) {
        LadderConfig cfg;
        cfg.n = n;
        cfg.seed = s;
        out.per_seed.push_back(equivalence_ladder(model, phi, cfg));
    }
    bool any_fail = false, any_inconclusive = false;
    for (const auto& rep : out.per_seed) {
        any_fail = any_fail || rep.ladder == Verdict::Fails;
        any_inconclusive = any_inconclusive || rep.ladder == Verdict::Inconclusive;
    }
    out.overall = any_fail ? Verdict::Fails
                           : (any_inconclusive ? Verdict::Inconclusive : Verdict::Holds);

    auto spread = [](const std::vector<double>& vals) {
        if (vals.empty()) return 0.0;
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= double(vals.size());
        if (mean == 0.0) return 0.0;
        double worst = 0.0;
        for (double v : vals) worst = std::max(worst, std::abs(v - mean) / std::abs(mean));
        return worst;
    };
    std::vector<double> cs, ratios;
    for (const auto& rep : out.per_seed) {
        if (std::isfinite(rep.tail_domination.fitted)) cs.push_back(rep.tail_domination.fitted);
        if (rep.sandwich_ratio > 0) ratios.push_back(rep.sandwich_ratio);
    }
    out.fitted_c_spread = spread(cs);
    out.sandwich_ratio_spread = spread(ratios);
    return out;
}

}  // namespace exptail::verify
