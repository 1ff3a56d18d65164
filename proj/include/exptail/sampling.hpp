#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "exptail/distribution_model.hpp"

namespace exptail::dist {

// n x d matrix of i.i.d. draws, row-major, with seed provenance. For a fixed
// (model, seed) the first n rows are a prefix of any longer run, which lets
// estimators extend a sample deterministically.
class SampleSet {
public:
    SampleSet() = default;
    SampleSet(std::shared_ptr<const DistributionModel> model, std::uint64_t seed,
              std::size_t n, std::vector<double> data);

    std::size_t rows() const { return n_; }
    int cols() const { return d_; }
    std::uint64_t seed() const { return seed_; }
    const DistributionModel* model() const { return model_.get(); }
    std::shared_ptr<const DistributionModel> model_ptr() const { return model_; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
    }
    const std::vector<double>& data() const { return data_; }
    double at(std::size_t i, int j) const { return data_[i * static_cast<std::size_t>(d_) + j]; }

    SampleSet scaled(double factor) const;

    void export_csv(const std::string& path) const;
    static SampleSet import_csv(const std::string& path);

private:
    std::shared_ptr<const DistributionModel> model_;
    std::uint64_t seed_ = 0;
    std::size_t n_ = 0;
    int d_ = 0;
    std::vector<double> data_;
};

// Deterministic counter-based sampling; parallel over rows, bit-identical
// for any thread count. Throws std::invalid_argument for n == 0.
SampleSet sample(std::shared_ptr<const DistributionModel> model, std::size_t n,
                 std::uint64_t seed);
SampleSet sample(const DistributionModel& model, std::size_t n, std::uint64_t seed);

// Serial reference generator kept for testing the parallel path.
SampleSet sample_serial(std::shared_ptr<const DistributionModel> model, std::size_t n,
                        std::uint64_t seed);

}  // namespace exptail::dist
