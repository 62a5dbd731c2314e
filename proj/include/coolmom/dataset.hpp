#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "coolmom/types.hpp"

namespace coolmom {

enum class Task { regression, classification };

/// Row-major examples x features inputs and examples x outputs targets.
/// For classification the single target column holds the class index.
struct SyntheticDataset {
    std::size_t examples = 0;
    std::size_t features = 0;
    std::size_t target_columns = 0;
    std::vector<double> inputs;
    std::vector<double> targets;
    std::uint64_t seed = 0;

    std::span<const double> input_row(std::size_t i) const {
        return {inputs.data() + i * features, features};
    }
    std::span<const double> target_row(std::size_t i) const {
        return {targets.data() + i * target_columns, target_columns};
    }
};

struct TeacherSpec {
    std::vector<std::size_t> layer_sizes;  ///< input, hidden..., output
    std::size_t examples = 512;
    Task task = Task::regression;
    double label_noise = 0.1;  ///< target noise std (regression) or logit noise std (classification)
};

/// Inputs ~ N(0, 1); targets produced by a fixed random tanh teacher
/// network plus label noise. Regenerates bit-exactly from `seed`.
SyntheticDataset make_teacher_dataset(const TeacherSpec& spec, std::uint64_t seed);

/// CSV with header x0..x{F-1},y0..y{T-1}; values printed with 17
/// significant digits so a write/read cycle is lossless.
void write_dataset_csv(std::ostream& out, const SyntheticDataset& data);
SyntheticDataset read_dataset_csv(std::istream& in);

}  // namespace coolmom
