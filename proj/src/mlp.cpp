#include "coolmom/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "coolmom/errors.hpp"

namespace coolmom {

MlpArchitecture::MlpArchitecture(std::vector<std::size_t> layer_sizes, Task task)
    : sizes_(std::move(layer_sizes)), task_(task), parameter_count_(0) {
    require(sizes_.size() >= 2, "MLP needs at least an input and an output layer");
    for (std::size_t s : sizes_) require(s > 0, "MLP layer sizes must be positive");
    if (task_ == Task::classification) {
        require(sizes_.back() >= 2, "classification MLP needs at least two outputs");
    }
    for (std::size_t l = 1; l < sizes_.size(); ++l) {
        parameter_count_ += sizes_[l] * sizes_[l - 1] + sizes_[l];
    }
}

Vector MlpArchitecture::initial_parameters(NoiseSource& noise, double scale,
                                           double bias_scale) const {
    Vector params(parameter_count_);
    std::size_t offset = 0;
    for (std::size_t l = 1; l < sizes_.size(); ++l) {
        const double w_std = scale / std::sqrt(static_cast<double>(sizes_[l - 1]));
        for (std::size_t k = 0; k < sizes_[l] * sizes_[l - 1]; ++k) {
            params[offset++] = w_std * noise.gaussian();
        }
        for (std::size_t k = 0; k < sizes_[l]; ++k) {
            params[offset++] = bias_scale == 0.0 ? 0.0 : bias_scale * noise.gaussian();
        }
    }
    return params;
}

Vector MlpArchitecture::predict(std::span<const double> params,
                                std::span<const double> input) const {
    require_same_shape(parameter_count_, params.size(), "MLP parameters");
    require_same_shape(sizes_.front(), input.size(), "MLP input");
    Vector a(input.begin(), input.end());
    std::size_t offset = 0;
    for (std::size_t l = 1; l < sizes_.size(); ++l) {
        const std::size_t in = sizes_[l - 1];
        const std::size_t out = sizes_[l];
        const double* w = params.data() + offset;
        const double* b = w + out * in;
        Vector z(out);
        for (std::size_t r = 0; r < out; ++r) {
            double acc = b[r];
            for (std::size_t c = 0; c < in; ++c) acc += w[r * in + c] * a[c];
            z[r] = l + 1 < sizes_.size() ? std::tanh(acc) : acc;
        }
        a = std::move(z);
        offset += out * in + out;
    }
    return a;
}

double MlpArchitecture::loss_and_gradient(std::span<const double> params,
                                          const SyntheticDataset& data,
                                          std::span<const std::size_t> rows,
                                          std::span<double> grad) const {
    require_same_shape(parameter_count_, params.size(), "MLP parameters");
    require(!rows.empty(), "MLP loss needs at least one example");
    const bool want_grad = !grad.empty();
    if (want_grad) {
        require_same_shape(parameter_count_, grad.size(), "MLP gradient");
        std::fill(grad.begin(), grad.end(), 0.0);
    }

    const std::size_t layers = sizes_.size() - 1;
    std::vector<std::size_t> offsets(layers);
    for (std::size_t l = 0, off = 0; l < layers; ++l) {
        offsets[l] = off;
        off += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
    }

    const double inv_batch = 1.0 / static_cast<double>(rows.size());
    std::vector<Vector> act(layers + 1);
    std::vector<Vector> delta(layers + 1);
    for (std::size_t l = 0; l <= layers; ++l) {
        act[l].resize(sizes_[l]);
        delta[l].resize(sizes_[l]);
    }

    double loss = 0.0;
    for (std::size_t row : rows) {
        require(row < data.examples, "MLP: example index out of range");
        const auto input = data.input_row(row);
        std::copy(input.begin(), input.end(), act[0].begin());

        for (std::size_t l = 0; l < layers; ++l) {
            const std::size_t in = sizes_[l];
            const std::size_t out = sizes_[l + 1];
            const double* w = params.data() + offsets[l];
            const double* b = w + out * in;
            const bool hidden = l + 1 < layers;
            for (std::size_t r = 0; r < out; ++r) {
                double acc = b[r];
                for (std::size_t c = 0; c < in; ++c) acc += w[r * in + c] * act[l][c];
                act[l + 1][r] = hidden ? std::tanh(acc) : acc;
            }
            if (!all_finite(act[l + 1])) {
                throw NonFiniteError(0, "activation in layer " + std::to_string(l + 1) +
                                            " for example " + std::to_string(row));
            }
        }

        // Loss and output-layer delta (already divided by the batch size).
        Vector& y = act[layers];
        Vector& d_out = delta[layers];
        if (task_ == Task::regression) {
            const auto t = data.target_row(row);
            for (std::size_t k = 0; k < y.size(); ++k) {
                const double e = y[k] - t[k];
                loss += 0.5 * e * e;
                d_out[k] = e * inv_batch;
            }
        } else {
            const auto cls = static_cast<std::size_t>(data.target_row(row)[0]);
            const double m = *std::max_element(y.begin(), y.end());
            double z = 0.0;
            for (double v : y) z += std::exp(v - m);
            const double log_z = m + std::log(z);
            loss += log_z - y[cls];
            for (std::size_t k = 0; k < y.size(); ++k) {
                d_out[k] = (std::exp(y[k] - log_z) - (k == cls ? 1.0 : 0.0)) * inv_batch;
            }
        }
        if (!want_grad) continue;

        for (std::size_t l = layers; l-- > 0;) {
            const std::size_t in = sizes_[l];
            const std::size_t out = sizes_[l + 1];
            const double* w = params.data() + offsets[l];
            double* gw = grad.data() + offsets[l];
            double* gb = gw + out * in;
            for (std::size_t r = 0; r < out; ++r) {
                const double d = delta[l + 1][r];
                gb[r] += d;
                for (std::size_t c = 0; c < in; ++c) gw[r * in + c] += d * act[l][c];
            }
            if (l == 0) break;
            for (std::size_t c = 0; c < in; ++c) {
                double acc = 0.0;
                for (std::size_t r = 0; r < out; ++r) acc += w[r * in + c] * delta[l + 1][r];
                delta[l][c] = acc * (1.0 - act[l][c] * act[l][c]);
            }
        }
    }
    return loss * inv_batch;
}

// MlpFullBatch

MlpFullBatch::MlpFullBatch(std::shared_ptr<const MlpArchitecture> arch,
                           std::shared_ptr<const SyntheticDataset> data)
    : arch_(std::move(arch)), data_(std::move(data)) {
    require(arch_ != nullptr && data_ != nullptr, "MLP objective: null architecture or dataset");
    require(data_->examples > 0, "MLP objective: empty dataset");
    require_same_shape(arch_->layer_sizes().front(), data_->features, "dataset features");
    if (arch_->task() == Task::regression) {
        require_same_shape(arch_->layer_sizes().back(), data_->target_columns, "dataset targets");
    } else {
        require_same_shape(1, data_->target_columns, "dataset class column");
        const double classes = static_cast<double>(arch_->layer_sizes().back());
        for (double t : data_->targets) {
            require(t >= 0.0 && t < classes && t == std::floor(t),
                    "dataset class index out of range");
        }
    }
    all_rows_.resize(data_->examples);
    for (std::size_t i = 0; i < all_rows_.size(); ++i) all_rows_[i] = i;
}

double MlpFullBatch::value(std::span<const double> x) const {
    return arch_->loss_and_gradient(x, *data_, all_rows_, {});
}

void MlpFullBatch::gradient(std::span<const double> x, std::span<double> grad) const {
    require_same_shape(dimension(), grad.size(), "MLP gradient");
    arch_->loss_and_gradient(x, *data_, all_rows_, grad);
}

// MlpObjective

MlpObjective::MlpObjective(std::shared_ptr<const MlpArchitecture> arch,
                           std::shared_ptr<const SyntheticDataset> data, std::size_t batch_size,
                           std::uint64_t seed)
    : full_(std::move(arch), std::move(data)), batch_size_(batch_size), noise_(seed) {
    require(batch_size_ > 0, "MLP objective: batch size must be positive");
    require(batch_size_ <= full_.dataset().examples,
            "MLP objective: batch size exceeds dataset size");
    reseed(seed);
}

std::size_t MlpObjective::batches_per_epoch() const noexcept {
    const std::size_t n = full_.dataset().examples;
    return (n + batch_size_ - 1) / batch_size_;
}

void MlpObjective::reshuffle() {
    for (std::size_t i = order_.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(noise_.uniform_index(i));
        std::swap(order_[i - 1], order_[j]);
    }
    cursor_ = 0;
}

void MlpObjective::reseed(std::uint64_t seed) {
    noise_.reseed(seed);
    order_.resize(full_.dataset().examples);
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    samples_ = 0;
    reshuffle();
}

double MlpObjective::batch_gradient(std::span<const double> x, std::span<const std::size_t> rows,
                                    std::span<double> grad) const {
    require_same_shape(dimension(), grad.size(), "MLP gradient");
    return full_.architecture().loss_and_gradient(x, full_.dataset(), rows, grad);
}

double MlpObjective::sample_gradient(std::span<const double> x, std::span<double> grad) {
    if (cursor_ >= order_.size()) reshuffle();
    const std::size_t count = std::min(batch_size_, order_.size() - cursor_);
    const std::span<const std::size_t> rows(order_.data() + cursor_, count);
    cursor_ += count;
    const std::uint64_t call = samples_++;
    try {
        return batch_gradient(x, rows, grad);
    } catch (const NonFiniteError& e) {
        throw NonFiniteError(call, std::string("MLP minibatch value (") + e.what() + ")");
    }
}

MlpObjective make_mlp_objective(const std::vector<std::size_t>& layer_sizes, Task task,
                                std::shared_ptr<const SyntheticDataset> data,
                                std::size_t batch_size, std::uint64_t seed) {
    return MlpObjective(std::make_shared<const MlpArchitecture>(layer_sizes, task),
                        std::move(data), batch_size, seed);
}

}  // namespace coolmom
