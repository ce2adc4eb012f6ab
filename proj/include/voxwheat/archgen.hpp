#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace voxwheat {

enum class Task { Detection, Regression };
enum class Optimizer { RmsProp, Adam };

std::string_view task_name(Task task);
std::string_view optimizer_name(Optimizer optimizer);

/// Candidate 3D-CNN architecture. Every conv block is a 3x3x3 same-padding
/// convolution followed by a 2x2x2 stride-2 max pool, except the last conv
/// which has no pool. dense_neurons lists the hidden dense layers; a final
/// 1-neuron layer is always implied. Hidden activations are ReLU; the head
/// is sigmoid for detection and ReLU for regression.
struct ModelSpec {
    std::vector<int> conv_neurons;
    std::vector<int> dense_neurons;  // hidden layers only
    Task task = Task::Detection;
    Optimizer optimizer = Optimizer::RmsProp;
    double learning_rate = 5e-4;
    std::array<std::int64_t, 4> input_dims{75, 300, 95, 3};  // w, h, d, channels

    std::string_view head_activation() const {
        return task == Task::Detection ? "sigmoid" : "relu";
    }
    static constexpr std::string_view hidden_activation = "relu";
    static constexpr std::array<int, 3> kernel{3, 3, 3};
    static constexpr std::array<int, 3> pool{2, 2, 2};  // stride 2
};

struct ConstraintViolation {
    enum class Kind {
        NeuronMembership,  // value outside {128,64,32,16,8}
        ConvDepth,         // conv-layer count outside {3,4,5,6}
        DenseDepth,        // dense-layer count (incl. final) outside {1,...,6}
        ConvOrder,         // conv neurons not non-increasing
        DenseOrder,        // dense neurons not non-increasing
    };
    Kind kind;
    std::string detail;
};

/// All violated constraints; empty means the spec conforms to the full
/// search-space contract (membership, depths, descending order).
std::vector<ConstraintViolation> validate(const ModelSpec& spec);

/// Number of distinct valid (conv, dense) layer structures.
std::uint64_t valid_architecture_count();

/// batch_size distinct specs, uniform over the valid structure space.
/// Structures are drawn rejection-free by unranking uniform integers into
/// sorted multisets; duplicates within a batch are redrawn, which keeps the
/// batch a uniform without-replacement sample. Detection specs carry the
/// rmsprop/5e-4 training setup; regression specs draw the optimizer and
/// learning rate from {rmsprop, adam} x {1e-4, 5e-4, 1e-3}.
/// Throws SampleError when batch_size exceeds the valid-structure count.
std::vector<ModelSpec> sample_batch(std::uint64_t seed, std::size_t batch_size, Task task);
std::vector<ModelSpec> sample_batch(std::uint64_t seed, std::size_t batch_size, Task task,
                                    const std::array<std::int64_t, 4>& input_dims);

/// Exact trainable-parameter count: conv layers contribute (27*c_in+1)*c_out
/// with spatial dims halved (floor) after every block except the last; dense
/// layers contribute (n_in+1)*n_out down to the implicit final neuron.
/// Throws ShapeError when pooling drives a spatial dim to zero.
std::uint64_t param_count(const ModelSpec& spec);

/// Canonical key=value document (fixed key order, lists comma-separated;
/// the dense list includes the implicit final 1). Refuses invalid specs.
std::string emit_spec(const ModelSpec& spec);
ModelSpec parse_spec(std::string_view text);

}  // namespace voxwheat
