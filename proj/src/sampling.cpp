#include "exptail/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "exptail/rng.hpp"

namespace exptail::dist {

double normal_at(std::uint64_t key, std::uint64_t counter) {
    double u1 = uniform_at(key, 2 * counter);
    double u2 = uniform_at(key, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {
constexpr std::uint64_t kComponentStride = 1ull << 20;
constexpr std::uint64_t kSelectorStream = 0xFFFF0000ull;
}  // namespace

struct SamplerImpl {
    static void fill_row(const DistributionModel& m, std::uint64_t seed,
                         std::uint64_t stream_base, std::size_t i, double* out) {
        const int d = m.dim_;
        switch (m.family_) {
            case ModelFamily::GaussianCovariance: {
                Vec z(d);
                for (int j = 0; j < d; ++j)
                    z[j] = normal_at(stream_key(seed, stream_base + j), i);
                Vec x = m.chol_factor_ * z;
                for (int j = 0; j < d; ++j) out[j] = x[j];
                break;
            }
            case ModelFamily::RademacherProduct:
                for (int j = 0; j < d; ++j) {
                    double u = uniform_at(stream_key(seed, stream_base + j), i);
                    out[j] = (u <= 0.5) ? -m.scales_[j] : m.scales_[j];
                }
                break;
            case ModelFamily::UniformProduct:
                for (int j = 0; j < d; ++j) {
                    double u = uniform_at(stream_key(seed, stream_base + j), i);
                    out[j] = m.scales_[j] * (2.0 * u - 1.0);
                }
                break;
            case ModelFamily::CenteredExponentialProduct:
                for (int j = 0; j < d; ++j) {
                    double u = uniform_at(stream_key(seed, stream_base + j), i);
                    out[j] = -std::log(u) / m.scales_[j] - 1.0 / m.scales_[j];
                }
                break;
            case ModelFamily::CustomMixture: {
                double u = uniform_at(stream_key(seed, stream_base + kSelectorStream), i);
                std::size_t k = 0;
                double acc = 0.0;
                for (; k + 1 < m.weights_.size(); ++k) {
                    acc += m.weights_[k];
                    if (u <= acc) break;
                }
                fill_row(m.components_[k], seed, stream_base + (k + 1) * kComponentStride, i,
                         out);
                Vec recenter = m.shifts_[k] - m.mixture_mean_shift();
                for (int j = 0; j < d; ++j) out[j] += recenter[j];
                break;
            }
        }
    }
};

SampleSet::SampleSet(std::shared_ptr<const DistributionModel> model, std::uint64_t seed,
                     std::size_t n, std::vector<double> data)
    : model_(std::move(model)), seed_(seed), n_(n), data_(std::move(data)) {
    d_ = model_ ? model_->dimension() : (n ? static_cast<int>(data_.size() / n) : 0);
}

SampleSet sample(std::shared_ptr<const DistributionModel> model, std::size_t n,
                 std::uint64_t seed) {
    if (!model) throw std::invalid_argument("null model");
    if (n < 1) throw std::invalid_argument("sample count must be >= 1");
    const int d = model->dimension();
    std::vector<double> data(n * static_cast<std::size_t>(d));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::size_t i = 0; i < n; ++i)
        SamplerImpl::fill_row(*model, seed, 1, i, data.data() + i * d);
    return SampleSet(std::move(model), seed, n, std::move(data));
}

SampleSet sample(const DistributionModel& model, std::size_t n, std::uint64_t seed) {
    return sample(std::make_shared<DistributionModel>(model), n, seed);
}

SampleSet sample_serial(std::shared_ptr<const DistributionModel> model, std::size_t n,
                        std::uint64_t seed) {
    if (!model) throw std::invalid_argument("null model");
    if (n < 1) throw std::invalid_argument("sample count must be >= 1");
    const int d = model->dimension();
    std::vector<double> data(n * static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < n; ++i)
        SamplerImpl::fill_row(*model, seed, 1, i, data.data() + i * d);
    return SampleSet(std::move(model), seed, n, std::move(data));
}

SampleSet SampleSet::scaled(double factor) const {
    std::vector<double> data = data_;
    for (double& v : data) v *= factor;
    // the model descriptor no longer matches the scaled data
    SampleSet s(nullptr, seed_, n_, std::move(data));
    s.d_ = d_;
    return s;
}

void SampleSet::export_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (int j = 0; j < d_; ++j) out << (j ? "," : "") << "x" << (j + 1);
    out << "\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < n_; ++i) {
        for (int j = 0; j < d_; ++j) out << (j ? "," : "") << at(i, j);
        out << "\n";
    }
}

SampleSet SampleSet::import_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
    int d = 1 + static_cast<int>(std::count(line.begin(), line.end(), ','));
    std::vector<double> data;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        int cols = 0;
        while (std::getline(ss, cell, ',')) {
            double v = std::stod(cell);
            if (!std::isfinite(v)) throw std::runtime_error("non-finite entry in CSV");
            data.push_back(v);
            ++cols;
        }
        if (cols != d) throw std::runtime_error("ragged CSV row");
        ++n;
    }
    SampleSet s(nullptr, 0, n, std::move(data));
    s.d_ = d;
    return s;
}

}  // namespace exptail::dist
