// Benchmarks the OpenMP row kernels against their serial reference loops.
// Usage: bench_kernels [rows]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "exptail/conjugate.hpp"
#include "exptail/distribution_model.hpp"
#include "exptail/kernels.hpp"
#include "exptail/parallel.hpp"
#include "exptail/sampling.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename F>
double time_best_of3(F&& f) {
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
        auto t0 = Clock::now();
        f();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

void report(const char* name, double serial_s, double parallel_s, std::size_t rows) {
    std::printf("%-24s %10.1f ns/row serial %10.1f ns/row parallel %8.2fx\n", name,
                1e9 * serial_s / double(rows), 1e9 * parallel_s / double(rows),
                serial_s / parallel_s);
}

}  // namespace

int main(int argc, char** argv) {
    exptail::apply_thread_cap();
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000000;
    const int d = 2;
    std::printf("rows: %zu, dim: %d, threads: %d\n", n, d, exptail::effective_threads());

    auto model = exptail::dist::DistributionModel::gaussian(Eigen::MatrixXd::Identity(d, d));
    auto samples = exptail::dist::sample(model, n, 42);
    const auto& data = samples.data();

    {
        auto t0 = Clock::now();
        auto s1 = exptail::dist::sample_serial(
            std::make_shared<exptail::dist::DistributionModel>(model), n, 43);
        double ts = seconds_since(t0);
        t0 = Clock::now();
        auto s2 = exptail::dist::sample(model, n, 43);
        double tp = seconds_since(t0);
        report("sample", ts, tp, n);
        if (s1.data() != s2.data()) std::printf("  MISMATCH in sample!\n");
    }

    std::vector<double> x = {0.7, 0.9};
    {
        std::vector<std::uint64_t> c1, c2;
        double ts = time_best_of3([&] { c1 = exptail::kernels::orbit_counts_serial(data, n, d, x); });
        double tp = time_best_of3([&] { c2 = exptail::kernels::orbit_counts(data, n, d, x); });
        report("orbit_counts", ts, tp, n);
        if (c1 != c2) std::printf("  MISMATCH in orbit_counts!\n");
    }

    std::vector<double> lambda = {0.8, 1.1};
    {
        std::vector<double> v1, v2;
        double ts = time_best_of3(
            [&] { v1 = exptail::kernels::orbit_log_mean_exp_serial(data, n, d, lambda); });
        double tp = time_best_of3(
            [&] { v2 = exptail::kernels::orbit_log_mean_exp(data, n, d, lambda); });
        report("orbit_log_mean_exp", ts, tp, n);
    }

    std::vector<double> r = {2.0, 3.0};
    {
        double v1 = 0, v2 = 0;
        double ts = time_best_of3(
            [&] { v1 = exptail::kernels::log_mean_abs_power_serial(data, n, d, r); });
        double tp =
            time_best_of3([&] { v2 = exptail::kernels::log_mean_abs_power(data, n, d, r); });
        report("log_mean_abs_power", ts, tp, n);
        (void)v1;
        (void)v2;
    }

    {
        auto phi = exptail::convex::YoungFunction::quadratic(Eigen::MatrixXd::Identity(d, d));
        exptail::convex::ConjugateGrid::BuildConfig bc;
        bc.knots_per_axis = 64;
        auto grid = exptail::convex::ConjugateGrid::build(phi, bc);
        exptail::kernels::RowFunctional g = [&grid, d](std::span<const double> row) {
            Eigen::Map<const Eigen::VectorXd> v(row.data(), d);
            return grid.evaluate(v);
        };
        double v1 = 0, v2 = 0;
        double ts = time_best_of3([&] {
            v1 = exptail::kernels::log_mean_exp_rowfun_serial(data, n, d, 0.5, g);
        });
        double tp = time_best_of3(
            [&] { v2 = exptail::kernels::log_mean_exp_rowfun(data, n, d, 0.5, g); });
        report("log_mean_exp_rowfun", ts, tp, n);
        (void)v1;
        (void)v2;
    }
    return 0;
}
