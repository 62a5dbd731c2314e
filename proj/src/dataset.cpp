#include "coolmom/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "coolmom/errors.hpp"
#include "coolmom/format.hpp"
#include "coolmom/mlp.hpp"
#include "coolmom/noise.hpp"

namespace coolmom {

SyntheticDataset make_teacher_dataset(const TeacherSpec& spec, std::uint64_t seed) {
    require(spec.layer_sizes.size() >= 2, "teacher needs at least an input and an output layer");
    require(spec.examples > 0, "teacher dataset needs at least one example");
    require(spec.label_noise >= 0.0, "label noise must be nonnegative");
    if (spec.task == Task::classification) {
        require(spec.layer_sizes.back() >= 2, "classification needs at least two classes");
    }

    const MlpArchitecture teacher(spec.layer_sizes, spec.task);
    NoiseSource noise(seed);
    const Vector weights = teacher.initial_parameters(noise, 1.5, 0.5);

    SyntheticDataset data;
    data.examples = spec.examples;
    data.features = spec.layer_sizes.front();
    data.target_columns = spec.task == Task::regression ? spec.layer_sizes.back() : 1;
    data.seed = seed;
    data.inputs.resize(data.examples * data.features);
    data.targets.resize(data.examples * data.target_columns);

    noise.fill_gaussian(data.inputs);
    for (std::size_t i = 0; i < data.examples; ++i) {
        Vector out = teacher.predict(weights, data.input_row(i));
        for (double& o : out) o += spec.label_noise * noise.gaussian();
        if (spec.task == Task::regression) {
            std::copy(out.begin(), out.end(), data.targets.begin() + i * data.target_columns);
        } else {
            const auto best = std::max_element(out.begin(), out.end()) - out.begin();
            data.targets[i] = static_cast<double>(best);
        }
    }
    return data;
}

void write_dataset_csv(std::ostream& out, const SyntheticDataset& data) {
    for (std::size_t j = 0; j < data.features; ++j) out << (j ? "," : "") << 'x' << j;
    for (std::size_t j = 0; j < data.target_columns; ++j) out << ",y" << j;
    out << '\n';
    for (std::size_t i = 0; i < data.examples; ++i) {
        const auto in = data.input_row(i);
        for (std::size_t j = 0; j < in.size(); ++j) out << (j ? "," : "") << format_double(in[j]);
        for (double t : data.target_row(i)) out << ',' << format_double(t);
        out << '\n';
    }
}

SyntheticDataset read_dataset_csv(std::istream& in) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "dataset CSV: missing header");

    SyntheticDataset data;
    {
        std::istringstream header(line);
        std::string name;
        while (std::getline(header, name, ',')) {
            if (!name.empty() && name.back() == '\r') name.pop_back();
            require(name.size() >= 2, "dataset CSV: bad column name '" + name + "'");
            if (name[0] == 'x') {
                require(data.target_columns == 0, "dataset CSV: feature column after target column");
                ++data.features;
            } else if (name[0] == 'y') {
                ++data.target_columns;
            } else {
                throw InvalidInput("dataset CSV: bad column name '" + name + "'");
            }
        }
    }
    require(data.features > 0 && data.target_columns > 0,
            "dataset CSV: need at least one feature and one target column");

    const std::size_t width = data.features + data.target_columns;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(row, cell, ',')) {
            require(col < width, "dataset CSV: too many columns in row");
            const double v = parse_double(cell);
            require(std::isfinite(v), "dataset CSV: non-finite value");
            if (col < data.features) {
                data.inputs.push_back(v);
            } else {
                data.targets.push_back(v);
            }
            ++col;
        }
        require(col == width, "dataset CSV: too few columns in row");
        ++data.examples;
    }
    return data;
}

}  // namespace coolmom
