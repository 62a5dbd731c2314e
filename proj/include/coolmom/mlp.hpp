#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "coolmom/dataset.hpp"
#include "coolmom/noise.hpp"
#include "coolmom/objective.hpp"

namespace coolmom {

// Fully connected tanh network with a linear output layer.
//
// Parameters are flattened layer by layer: the weight matrix
// (out x in, row-major) followed by the bias vector. Losses:
//   regression      1/(2B) sum_b ||y_b - t_b||^2
//   classification  1/B sum_b -log softmax(y_b)[t_b]

class MlpArchitecture {
public:
    MlpArchitecture(std::vector<std::size_t> layer_sizes, Task task);

    std::size_t parameter_count() const noexcept { return parameter_count_; }
    const std::vector<std::size_t>& layer_sizes() const noexcept { return sizes_; }
    Task task() const noexcept { return task_; }

    /// Mean loss over the listed examples; writes its gradient when `grad`
    /// is non-empty. Throws NonFiniteError on a non-finite activation.
    double loss_and_gradient(std::span<const double> params, const SyntheticDataset& data,
                             std::span<const std::size_t> rows, std::span<double> grad) const;

    /// Forward pass for one input.
    Vector predict(std::span<const double> params, std::span<const double> input) const;

    /// Weights ~ N(0, scale^2 / fan_in), biases ~ N(0, bias_scale^2).
    Vector initial_parameters(NoiseSource& noise, double scale = 1.0,
                              double bias_scale = 0.0) const;

private:
    std::vector<std::size_t> sizes_;
    Task task_;
    std::size_t parameter_count_;
};

/// Full-batch loss; the exact objective the minibatch estimates.
class MlpFullBatch final : public Objective {
public:
    MlpFullBatch(std::shared_ptr<const MlpArchitecture> arch,
                 std::shared_ptr<const SyntheticDataset> data);

    std::size_t dimension() const override { return arch_->parameter_count(); }
    double value(std::span<const double> x) const override;
    void gradient(std::span<const double> x, std::span<double> grad) const override;
    using Objective::gradient;

    const MlpArchitecture& architecture() const noexcept { return *arch_; }
    const SyntheticDataset& dataset() const noexcept { return *data_; }

private:
    std::shared_ptr<const MlpArchitecture> arch_;
    std::shared_ptr<const SyntheticDataset> data_;
    std::vector<std::size_t> all_rows_;
};

/// Minibatch estimate. Examples are visited without replacement within an
/// epoch and reshuffled (Fisher-Yates on the private stream) at each epoch
/// start; the last batch of an epoch is short when batch_size does not
/// divide the dataset.
class MlpObjective final : public StochasticObjective {
public:
    MlpObjective(std::shared_ptr<const MlpArchitecture> arch,
                 std::shared_ptr<const SyntheticDataset> data, std::size_t batch_size,
                 std::uint64_t seed);

    std::size_t dimension() const override { return full_.dimension(); }
    const Objective& exact() const override { return full_; }
    double sample_gradient(std::span<const double> x, std::span<double> grad) override;
    void reseed(std::uint64_t seed) override;

    std::size_t batch_size() const noexcept { return batch_size_; }
    std::size_t batches_per_epoch() const noexcept;

    /// Loss and gradient over an explicit set of rows.
    double batch_gradient(std::span<const double> x, std::span<const std::size_t> rows,
                          std::span<double> grad) const;

private:
    void reshuffle();

    MlpFullBatch full_;
    std::size_t batch_size_;
    NoiseSource noise_;
    std::vector<std::size_t> order_;
    std::size_t cursor_ = 0;
    std::uint64_t samples_ = 0;
};

MlpObjective make_mlp_objective(const std::vector<std::size_t>& layer_sizes, Task task,
                                std::shared_ptr<const SyntheticDataset> data,
                                std::size_t batch_size, std::uint64_t seed);

}  // namespace coolmom
