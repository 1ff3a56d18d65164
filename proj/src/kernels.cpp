#include "exptail/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "exptail/extended_real.hpp"
#include "exptail/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdlib>

namespace exptail {

int effective_threads() {
#ifdef _OPENMP
    int t = omp_get_max_threads();
    if (const char* cap = std::getenv("EXPTAIL_THREADS")) {
        int c = std::atoi(cap);
        if (c >= 1) t = std::min(t, c);
    }
    return t;
#else
    return 1;
#endif
}

void apply_thread_cap() {
#ifdef _OPENMP
    omp_set_num_threads(effective_threads());
#endif
}

}  // namespace exptail

namespace exptail::kernels {

namespace {

constexpr double kNegInfLocal = -std::numeric_limits<double>::infinity();

// per-thread scratch of 2^d entries is only reasonable for small d; heavier
// orbit spaces fall back to the serial pass
constexpr std::size_t kParallelOrbitCap = std::size_t(1) << 20;

// With x >= 0 a row can satisfy at most one sign orbit: strict exceedance on
// |xi_j| picks the sign per coordinate. Returns 2^d (mask valid) or the mask.
inline std::uint32_t row_orbit(const double* row, int d, const double* x) {
    std::uint32_t mask = 0;
    for (int j = 0; j < d; ++j) {
        double v = row[j];
        if (v > x[j]) {
            // positive side
        } else if (-v > x[j]) {
            mask |= (1u << j);
        } else {
            return 1u << 31;  // no orbit
        }
    }
    return mask;
}

inline double orbit_signed_sum(const double* t, int d, std::uint32_t mask) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += (mask >> j) & 1u ? -t[j] : t[j];
    return s;
}

}  // namespace

// --- orbit counting ----------------------------------------------------------

std::vector<std::uint64_t> orbit_counts_serial(std::span<const double> data, std::size_t n,
                                               int d, std::span<const double> x) {
    std::vector<std::uint64_t> counts(std::size_t(1) << d, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t m = row_orbit(data.data() + i * d, d, x.data());
        if (m < counts.size()) ++counts[m];
    }
    return counts;
}

std::vector<std::uint64_t> orbit_counts(std::span<const double> data, std::size_t n, int d,
                                        std::span<const double> x) {
    const std::size_t norbits = std::size_t(1) << d;
    if (norbits > kParallelOrbitCap) return orbit_counts_serial(data, n, d, x);
    std::vector<std::uint64_t> counts(norbits, 0);
#ifdef _OPENMP
#pragma omp parallel
    {
        std::vector<std::uint64_t> local(norbits, 0);
#pragma omp for schedule(static) nowait
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t m = row_orbit(data.data() + i * d, d, x.data());
            if (m < norbits) ++local[m];
        }
#pragma omp critical
        for (std::size_t k = 0; k < norbits; ++k) counts[k] += local[k];
    }
#else
    counts = orbit_counts_serial(data, n, d, x);
#endif
    return counts;
}

// --- orbit log-mean-exp ------------------------------------------------------

namespace {

// pass 1: per-orbit max of the signed sums (exact under any schedule)
std::vector<double> orbit_maxes(std::span<const double> data, std::size_t n, int d,
                                std::span<const double> lambda) {
    const std::size_t norbits = std::size_t(1) << d;
    std::vector<double> maxes(norbits, kNegInfLocal);
#ifdef _OPENMP
#pragma omp parallel
    {
        std::vector<double> local(norbits, kNegInfLocal);
        std::vector<double> t(d);
#pragma omp for schedule(static) nowait
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = data.data() + i * d;
            for (int j = 0; j < d; ++j) t[j] = lambda[j] * row[j];
            for (std::size_t m = 0; m < norbits; ++m)
                local[m] = std::max(local[m], orbit_signed_sum(t.data(), d, std::uint32_t(m)));
        }
#pragma omp critical
        for (std::size_t m = 0; m < norbits; ++m) maxes[m] = std::max(maxes[m], local[m]);
    }
#else
    std::vector<double> t(d);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = data.data() + i * d;
        for (int j = 0; j < d; ++j) t[j] = lambda[j] * row[j];
        for (std::size_t m = 0; m < norbits; ++m)
            maxes[m] = std::max(maxes[m], orbit_signed_sum(t.data(), d, std::uint32_t(m)));
    }
#endif
    return maxes;
}

}  // namespace

std::vector<double> orbit_log_mean_exp_serial(std::span<const double> data, std::size_t n,
                                              int d, std::span<const double> lambda) {
    const std::size_t norbits = std::size_t(1) << d;
    std::vector<double> maxes(norbits, kNegInfLocal);
    std::vector<double> t(d);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = data.data() + i * d;
        for (int j = 0; j < d; ++j) t[j] = lambda[j] * row[j];
        for (std::size_t m = 0; m < norbits; ++m)
            maxes[m] = std::max(maxes[m], orbit_signed_sum(t.data(), d, std::uint32_t(m)));
    }
    std::vector<double> sums(norbits, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = data.data() + i * d;
        for (int j = 0; j < d; ++j) t[j] = lambda[j] * row[j];
        for (std::size_t m = 0; m < norbits; ++m)
            sums[m] += std::exp(orbit_signed_sum(t.data(), d, std::uint32_t(m)) - maxes[m]);
    }
    std::vector<double> out(norbits);
    for (std::size_t m = 0; m < norbits; ++m)
        out[m] = maxes[m] == kNegInfLocal
                     ? kNegInfLocal
                     : maxes[m] + std::log(sums[m]) - std::log(double(n));
    return out;
}

std::vector<double> orbit_log_mean_exp(std::span<const double> data, std::size_t n, int d,
                                       std::span<const double> lambda) {
    const std::size_t norbits = std::size_t(1) << d;
    if (norbits > 4096) return orbit_log_mean_exp_serial(data, n, d, lambda);
    std::vector<double> maxes = orbit_maxes(data, n, d, lambda);

    // pass 2: fixed-block partial sums of the shifted exponentials, combined
    // in block order so the result is thread-count independent
    const std::size_t nb = block_count(n);
    std::vector<double> partial(nb * norbits, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::size_t b = 0; b < nb; ++b) {
        std::vector<double> t(d);
        std::size_t lo = b * kReduceBlock, hi = std::min(n, lo + kReduceBlock);
        double* acc = partial.data() + b * norbits;
        for (std::size_t i = lo; i < hi; ++i) {
            const double* row = data.data() + i * d;
            for (int j = 0; j < d; ++j) t[j] = lambda[j] * row[j];
            for (std::size_t m = 0; m < norbits; ++m)
                acc[m] += std::exp(orbit_signed_sum(t.data(), d, std::uint32_t(m)) - maxes[m]);
        }
    }
    std::vector<double> out(norbits);
    for (std::size_t m = 0; m < norbits; ++m) {
        double s = 0.0;
        for (std::size_t b = 0; b < nb; ++b) s += partial[b * norbits + m];
        out[m] = maxes[m] == kNegInfLocal ? kNegInfLocal
                                          : maxes[m] + std::log(s) - std::log(double(n));
    }
    return out;
}

// --- plain log-mean-exp of a dot product --------------------------------------

double log_mean_exp_dot_serial(std::span<const double> data, std::size_t n, int d,
                               std::span<const double> lambda) {
    double mx = kNegInfLocal;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = data.data() + i * d;
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += lambda[j] * row[j];
        mx = std::max(mx, s);
    }
    if (mx == kNegInfLocal) return kNegInfLocal;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = data.data() + i * d;
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += lambda[j] * row[j];
        acc += std::exp(s - mx);
    }
    return mx + std::log(acc) - std::log(double(n));
}

double log_mean_exp_dot(std::span<const double> data, std::size_t n, int d,
                        std::span<const double> lambda) {
    double mx = kNegInfLocal;
#ifdef _OPENMP
#pragma omp parallel for reduction(max : mx) schedule(static)
#endif
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = data.data() + i * d;
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += lambda[j] * row[j];
        mx = std::max(mx, s);
    }
    if (mx == kNegInfLocal) return kNegInfLocal;
    const std::size_t nb = block_count(n);
    std::vector<double> partial(nb, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::size_t b = 0; b < nb; ++b) {
        std::size_t lo = b * kReduceBlock, hi = std::min(n, lo + kReduceBlock);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double* row = data.data() + i * d;
            double s = 0.0;
            for (int j = 0; j < d; ++j) s += lambda[j] * row[j];
            acc += std::exp(s - mx);
        }
        partial[b] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return mx + std::log(total) - std::log(double(n));
}

// --- log mean of prod |xi_j|^{r_j} --------------------------------------------

namespace {
inline double row_log_abs_power(const double* row, int d, const double* r) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) {
        double a = std::abs(row[j]);
        if (a == 0.0) return kNegInfLocal;
        s += r[j] * std::log(a);
    }
    return s;
}
}  // namespace

double log_mean_abs_power_serial(std::span<const double> data, std::size_t n, int d,
                                 std::span<const double> r) {
    double mx = kNegInfLocal;
    for (std::size_t i = 0; i < n; ++i)
        mx = std::max(mx, row_log_abs_power(data.data() + i * d, d, r.data()));
    if (mx == kNegInfLocal) return kNegInfLocal;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double a = row_log_abs_power(data.data() + i * d, d, r.data());
        if (a != kNegInfLocal) acc += std::exp(a - mx);
    }
    return mx + std::log(acc) - std::log(double(n));
}

double log_mean_abs_power(std::span<const double> data, std::size_t n, int d,
                          std::span<const double> r) {
    double mx = kNegInfLocal;
#ifdef _OPENMP
#pragma omp parallel for reduction(max : mx) schedule(static)
#endif
    for (std::size_t i = 0; i < n; ++i)
        mx = std::max(mx, row_log_abs_power(data.data() + i * d, d, r.data()));
    if (mx == kNegInfLocal) return kNegInfLocal;
    const std::size_t nb = block_count(n);
    std::vector<double> partial(nb, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::size_t b = 0; b < nb; ++b) {
        std::size_t lo = b * kReduceBlock, hi = std::min(n, lo + kReduceBlock);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            double a = row_log_abs_power(data.data() + i * d, d, r.data());
            if (a != kNegInfLocal) acc += std::exp(a - mx);
        }
        partial[b] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return mx + std::log(total) - std::log(double(n));
}

// --- log mean of exp(g(|row|/c)) ----------------------------------------------

double log_mean_exp_rowfun_serial(std::span<const double> data, std::size_t n, int d,
                                  double inv_scale, const RowFunctional& g) {
    std::vector<double> buf(d);
    double mx = kNegInfLocal;
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = data.data() + i * d;
        for (int j = 0; j < d; ++j) buf[j] = std::abs(row[j]) * inv_scale;
        vals[i] = g(std::span<const double>(buf.data(), std::size_t(d)));
        mx = std::max(mx, vals[i]);
    }
    if (mx == kNegInfLocal) return kNegInfLocal;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::exp(vals[i] - mx);
    return mx + std::log(acc) - std::log(double(n));
}

double log_mean_exp_rowfun(std::span<const double> data, std::size_t n, int d,
                           double inv_scale, const RowFunctional& g) {
    const std::size_t nb = block_count(n);
    std::vector<double> block_max(nb, kNegInfLocal);
    std::vector<double> vals(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::size_t b = 0; b < nb; ++b) {
        std::vector<double> buf(d);
        std::size_t lo = b * kReduceBlock, hi = std::min(n, lo + kReduceBlock);
        double m = kNegInfLocal;
        for (std::size_t i = lo; i < hi; ++i) {
            const double* row = data.data() + i * d;
            for (int j = 0; j < d; ++j) buf[j] = std::abs(row[j]) * inv_scale;
            vals[i] = g(std::span<const double>(buf.data(), std::size_t(d)));
            m = std::max(m, vals[i]);
        }
        block_max[b] = m;
    }
    double mx = kNegInfLocal;
    for (double m : block_max) mx = std::max(mx, m);
    if (mx == kNegInfLocal) return kNegInfLocal;
    std::vector<double> partial(nb, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::size_t b = 0; b < nb; ++b) {
        std::size_t lo = b * kReduceBlock, hi = std::min(n, lo + kReduceBlock);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += std::exp(vals[i] - mx);
        partial[b] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return mx + std::log(total) - std::log(double(n));
}

}  // namespace exptail::kernels
