#include "voxwheat/archgen.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "voxwheat/errors.hpp"
#include "voxwheat/rng.hpp"

namespace voxwheat {

namespace {

// Neuron choices, kept in descending order so sorted multisets map straight
// onto valid layer sequences.
constexpr std::array<int, 5> kNeuronChoices{128, 64, 32, 16, 8};
constexpr int kConvDepthMin = 3;
constexpr int kConvDepthMax = 6;
constexpr int kDenseHiddenMax = 5;  // total dense depth 1..6 counting the final neuron

// C(n, k) for the small values used here.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 0; i < k; ++i) result = result * (n - i) / (i + 1);
    return result;
}

// Number of size-k multisets over m symbols.
std::uint64_t multiset_count(std::uint64_t k, std::uint64_t m) {
    return binomial(k + m - 1, k);
}

// Unrank into a non-decreasing sequence of symbol ids in [0, m).
std::vector<int> unrank_multiset(std::uint64_t rank, int k, int m) {
    std::vector<int> ids;
    ids.reserve(std::size_t(k));
    int symbol = 0;
    for (int remaining = k; remaining > 0; --remaining) {
        for (;;) {
            const std::uint64_t with_symbol = multiset_count(std::uint64_t(remaining - 1),
                                                             std::uint64_t(m - symbol));
            if (rank < with_symbol) break;
            rank -= with_symbol;
            ++symbol;
        }
        ids.push_back(symbol);
    }
    return ids;
}

std::uint64_t conv_structure_count() {
    std::uint64_t total = 0;
    for (int k = kConvDepthMin; k <= kConvDepthMax; ++k)
        total += multiset_count(std::uint64_t(k), kNeuronChoices.size());
    return total;
}

std::uint64_t dense_structure_count() {
    std::uint64_t total = 0;
    for (int k = 0; k <= kDenseHiddenMax; ++k)
        total += multiset_count(std::uint64_t(k), kNeuronChoices.size());
    return total;
}

// rank -> neuron list; symbol id 0 is 128, so non-decreasing ids give a
// non-increasing neuron sequence.
std::vector<int> structure_from_rank(std::uint64_t rank, int depth_min, int depth_max) {
    int depth = depth_min;
    for (; depth <= depth_max; ++depth) {
        const std::uint64_t n = multiset_count(std::uint64_t(depth), kNeuronChoices.size());
        if (rank < n) break;
        rank -= n;
    }
    auto ids = unrank_multiset(rank, depth, int(kNeuronChoices.size()));
    std::vector<int> neurons(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) neurons[i] = kNeuronChoices[std::size_t(ids[i])];
    return neurons;
}

bool neuron_allowed(int n) {
    return std::find(kNeuronChoices.begin(), kNeuronChoices.end(), n) != kNeuronChoices.end();
}

std::string list_to_string(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

constexpr std::array<double, 3> kRegressionRates{1e-4, 5e-4, 1e-3};

}  // namespace

std::string_view task_name(Task task) {
    return task == Task::Detection ? "detection" : "regression";
}

std::string_view optimizer_name(Optimizer optimizer) {
    return optimizer == Optimizer::RmsProp ? "rmsprop" : "adam";
}

std::vector<ConstraintViolation> validate(const ModelSpec& spec) {
    std::vector<ConstraintViolation> violations;
    using Kind = ConstraintViolation::Kind;

    const int conv_depth = int(spec.conv_neurons.size());
    if (conv_depth < kConvDepthMin || conv_depth > kConvDepthMax)
        violations.push_back({Kind::ConvDepth,
                              "conv layer count " + std::to_string(conv_depth) +
                                  " outside {3,4,5,6}"});
    const int dense_depth = int(spec.dense_neurons.size()) + 1;  // implicit final layer
    if (dense_depth > kDenseHiddenMax + 1)
        violations.push_back({Kind::DenseDepth,
                              "dense layer count " + std::to_string(dense_depth) +
                                  " outside {1,...,6}"});

    for (std::size_t i = 0; i < spec.conv_neurons.size(); ++i) {
        if (!neuron_allowed(spec.conv_neurons[i]))
            violations.push_back({Kind::NeuronMembership,
                                  "conv neuron count " + std::to_string(spec.conv_neurons[i]) +
                                      " outside {128,64,32,16,8}"});
    }
    for (std::size_t i = 0; i < spec.dense_neurons.size(); ++i) {
        if (!neuron_allowed(spec.dense_neurons[i]))
            violations.push_back({Kind::NeuronMembership,
                                  "dense neuron count " + std::to_string(spec.dense_neurons[i]) +
                                      " outside {128,64,32,16,8}"});
    }

    for (std::size_t i = 1; i < spec.conv_neurons.size(); ++i) {
        if (spec.conv_neurons[i] > spec.conv_neurons[i - 1]) {
            violations.push_back({Kind::ConvOrder,
                                  "conv monotonicity violated at position " +
                                      std::to_string(i + 1) + " (" +
                                      std::to_string(spec.conv_neurons[i - 1]) + " -> " +
                                      std::to_string(spec.conv_neurons[i]) + ")"});
            break;
        }
    }
    for (std::size_t i = 1; i < spec.dense_neurons.size(); ++i) {
        if (spec.dense_neurons[i] > spec.dense_neurons[i - 1]) {
            violations.push_back({Kind::DenseOrder,
                                  "dense monotonicity violated at position " +
                                      std::to_string(i + 1) + " (" +
                                      std::to_string(spec.dense_neurons[i - 1]) + " -> " +
                                      std::to_string(spec.dense_neurons[i]) + ")"});
            break;
        }
    }
    return violations;
}

std::uint64_t valid_architecture_count() {
    return conv_structure_count() * dense_structure_count();
}

std::vector<ModelSpec> sample_batch(std::uint64_t seed, std::size_t batch_size, Task task) {
    const std::array<std::int64_t, 4> dims = task == Task::Detection
                                                 ? std::array<std::int64_t, 4>{75, 300, 95, 3}
                                                 : std::array<std::int64_t, 4>{227, 70, 111, 3};
    return sample_batch(seed, batch_size, task, dims);
}

std::vector<ModelSpec> sample_batch(std::uint64_t seed, std::size_t batch_size, Task task,
                                    const std::array<std::int64_t, 4>& input_dims) {
    if (batch_size == 0) throw SampleError("batch size must be at least 1");
    const std::uint64_t conv_total = conv_structure_count();
    const std::uint64_t dense_total = dense_structure_count();
    const std::uint64_t space = conv_total * dense_total;
    if (batch_size > space)
        throw SampleError("batch size " + std::to_string(batch_size) +
                          " exceeds the " + std::to_string(space) +
                          " distinct valid architectures");

    std::mt19937_64 gen(seed);
    std::set<std::uint64_t> seen;
    std::vector<ModelSpec> batch;
    batch.reserve(batch_size);

    while (batch.size() < batch_size) {
        // One uniform draw over the whole structure space; redrawing
        // duplicates makes the batch a without-replacement sample.
        const std::uint64_t rank = rng_below(gen, space);
        if (!seen.insert(rank).second) continue;

        ModelSpec spec;
        spec.conv_neurons = structure_from_rank(rank / dense_total, kConvDepthMin, kConvDepthMax);
        spec.dense_neurons = structure_from_rank(rank % dense_total, 0, kDenseHiddenMax);
        spec.task = task;
        spec.input_dims = input_dims;
        if (task == Task::Detection) {
            spec.optimizer = Optimizer::RmsProp;
            spec.learning_rate = 5e-4;
        } else {
            spec.optimizer = rng_below(gen, 2) == 0 ? Optimizer::RmsProp : Optimizer::Adam;
            spec.learning_rate = kRegressionRates[rng_below(gen, kRegressionRates.size())];
        }
        batch.push_back(std::move(spec));
    }
    return batch;
}

std::uint64_t param_count(const ModelSpec& spec) {
    std::int64_t w = spec.input_dims[0];
    std::int64_t h = spec.input_dims[1];
    std::int64_t d = spec.input_dims[2];
    std::int64_t channels = spec.input_dims[3];
    if (w < 1 || h < 1 || d < 1 || channels < 1)
        throw ShapeError("input dims must be positive");
    if (spec.conv_neurons.empty()) throw ShapeError("spec has no conv layers");

    std::uint64_t params = 0;
    for (std::size_t i = 0; i < spec.conv_neurons.size(); ++i) {
        const std::int64_t c_out = spec.conv_neurons[i];
        // 3x3x3 same-padding conv: 27 weights per input channel plus bias
        params += std::uint64_t(27 * channels + 1) * std::uint64_t(c_out);
        channels = c_out;
        if (i + 1 < spec.conv_neurons.size()) {
            w /= 2;
            h /= 2;
            d /= 2;
            if (w == 0 || h == 0 || d == 0)
                throw ShapeError("pooling exhausts the spatial dims before the last conv layer");
        }
    }

    std::uint64_t fan_in = std::uint64_t(w) * std::uint64_t(h) * std::uint64_t(d) *
                           std::uint64_t(channels);
    for (int n : spec.dense_neurons) {
        params += (fan_in + 1) * std::uint64_t(n);
        fan_in = std::uint64_t(n);
    }
    params += fan_in + 1;  // implicit final 1-neuron layer
    return params;
}

std::string emit_spec(const ModelSpec& spec) {
    auto violations = validate(spec);
    if (!violations.empty())
        throw InvalidSpecError("refusing to emit invalid spec: " + violations.front().detail);

    std::vector<int> dense = spec.dense_neurons;
    dense.push_back(1);

    char lr[32];
    std::snprintf(lr, sizeof lr, "%g", spec.learning_rate);

    std::string out;
    out += "task = " + std::string(task_name(spec.task)) + "\n";
    out += "input_dims = " + std::to_string(spec.input_dims[0]) + "," +
           std::to_string(spec.input_dims[1]) + "," + std::to_string(spec.input_dims[2]) + "," +
           std::to_string(spec.input_dims[3]) + "\n";
    out += "conv = " + list_to_string(spec.conv_neurons) + "\n";
    out += "dense = " + list_to_string(dense) + "\n";
    out += "kernel = 3,3,3\n";
    out += "pool = 2,2,2\n";
    out += "hidden_activation = relu\n";
    out += "head_activation = " + std::string(spec.head_activation()) + "\n";
    out += "optimizer = " + std::string(optimizer_name(spec.optimizer)) + "\n";
    out += "learning_rate = " + std::string(lr) + "\n";
    return out;
}

ModelSpec parse_spec(std::string_view text) {
    ModelSpec spec;
    bool saw_task = false, saw_conv = false, saw_dense = false;
    std::string head_activation;

    std::istringstream stream{std::string(text)};
    std::string line;
    std::size_t line_no = 0;

    auto parse_int_list = [&](const std::string& value) {
        std::vector<int> list;
        std::istringstream items(value);
        std::string item;
        while (std::getline(items, item, ',')) {
            try {
                list.push_back(std::stoi(item));
            } catch (const std::exception&) {
                throw ParseError(line_no, "bad integer list entry: " + item);
            }
        }
        return list;
    };

    while (std::getline(stream, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "task") {
            if (value == "detection") spec.task = Task::Detection;
            else if (value == "regression") spec.task = Task::Regression;
            else throw ParseError(line_no, "unknown task " + value);
            saw_task = true;
        } else if (key == "input_dims") {
            auto dims = parse_int_list(value);
            if (dims.size() != 4) throw ParseError(line_no, "input_dims needs 4 entries");
            for (int i = 0; i < 4; ++i) spec.input_dims[std::size_t(i)] = dims[std::size_t(i)];
        } else if (key == "conv") {
            spec.conv_neurons = parse_int_list(value);
            saw_conv = true;
        } else if (key == "dense") {
            auto dense = parse_int_list(value);
            if (dense.empty() || dense.back() != 1)
                throw ParseError(line_no, "dense list must end with the final 1-neuron layer");
            dense.pop_back();
            spec.dense_neurons = std::move(dense);
            saw_dense = true;
        } else if (key == "kernel") {
            if (value != "3,3,3") throw ParseError(line_no, "kernel must be 3,3,3");
        } else if (key == "pool") {
            if (value != "2,2,2") throw ParseError(line_no, "pool must be 2,2,2");
        } else if (key == "hidden_activation") {
            if (value != "relu") throw ParseError(line_no, "hidden activation must be relu");
        } else if (key == "head_activation") {
            if (value != "sigmoid" && value != "relu")
                throw ParseError(line_no, "head activation must be sigmoid or relu");
            head_activation = value;
        } else if (key == "optimizer") {
            if (value == "rmsprop") spec.optimizer = Optimizer::RmsProp;
            else if (value == "adam") spec.optimizer = Optimizer::Adam;
            else throw ParseError(line_no, "unknown optimizer " + value);
        } else if (key == "learning_rate") {
            try {
                spec.learning_rate = std::stod(value);
            } catch (const std::exception&) {
                throw ParseError(line_no, "bad learning rate " + value);
            }
        } else {
            throw ParseError(line_no, "unknown key " + key);
        }
    }
    if (!saw_task || !saw_conv || !saw_dense)
        throw ParseError(line_no, "spec document lacks task/conv/dense");
    if (!head_activation.empty() && head_activation != spec.head_activation())
        throw ParseError(line_no, "head activation disagrees with the task");
    return spec;
}

}  // namespace voxwheat
