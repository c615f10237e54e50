#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace rwgc {

enum class Activation { tanh, relu };

// Parameter prior the random policies are drawn from.
struct PriorSpec {
  enum class Kind { normal, uniform };
  Kind kind = Kind::normal;
  double stddev = 1.0;  // normal only
  double lo = -1.0;     // uniform only
  double hi = 1.0;

  static PriorSpec normal(double stddev = 1.0);
  static PriorSpec uniform(double lo, double hi);
  void validate() const;
};

// MLP architecture. input_dim/output_dim are dictated by the task the
// policy is paired with and checked again at evaluation time.
struct PolicySpec {
  int input_dim = 0;
  int output_dim = 0;
  int hidden_layers = 2;
  int hidden_units = 32;
  bool use_bias = false;
  Activation hidden_activation = Activation::tanh;
  Activation output_activation = Activation::tanh;
  PriorSpec prior;

  struct LayerShape {
    int in = 0;
    int out = 0;
  };
  std::vector<LayerShape> layer_shapes() const;

  // Flat parameter dimension d: sum of in*out (+out per layer with bias).
  int parameter_count() const;
  void validate() const;
};

// Flat weight vector in sampling order plus the index it was drawn at.
struct ParameterVector {
  std::vector<double> values;
  int policy_index = 0;
};

// The n-th policy's weights, a pure function of (spec, master_seed, n).
// Each policy owns its own derived stream, so evaluation order and thread
// count cannot change any vector.
ParameterVector sample_parameters(const PolicySpec& spec,
                                  std::uint64_t master_seed, int n);

// Scratch buffers so episode loops stay allocation-free.
struct ForwardWorkspace {
  std::vector<double> a;
  std::vector<double> b;
};

// Deterministic forward pass. Weights are consumed in sampling order:
// per layer a row-major (out x in) matrix, then `out` biases if enabled.
// Throws std::invalid_argument on any dimension mismatch.
void forward(const PolicySpec& spec, const ParameterVector& params,
             std::span<const double> observation, std::span<double> action,
             ForwardWorkspace& ws);

std::vector<double> forward(const PolicySpec& spec,
                            const ParameterVector& params,
                            std::span<const double> observation);

const char* to_string(Activation a);
Activation activation_from_string(std::string_view s);

}  // namespace rwgc
