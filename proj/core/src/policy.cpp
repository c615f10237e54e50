#include "rwgc/policy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rwgc/rng.hpp"

namespace rwgc {

PriorSpec PriorSpec::normal(double stddev) {
  PriorSpec p;
  p.kind = Kind::normal;
  p.stddev = stddev;
  return p;
}

PriorSpec PriorSpec::uniform(double lo, double hi) {
  PriorSpec p;
  p.kind = Kind::uniform;
  p.lo = lo;
  p.hi = hi;
  return p;
}

void PriorSpec::validate() const {
  if (kind == Kind::normal) {
    if (!(stddev > 0.0)) throw std::invalid_argument("prior: stddev must be > 0");
  } else {
    if (!(lo < hi)) throw std::invalid_argument("prior: need lo < hi");
  }
}

std::vector<PolicySpec::LayerShape> PolicySpec::layer_shapes() const {
  std::vector<LayerShape> shapes;
  if (hidden_layers == 0) {
    shapes.push_back({input_dim, output_dim});
    return shapes;
  }
  shapes.push_back({input_dim, hidden_units});
  for (int i = 1; i < hidden_layers; ++i) shapes.push_back({hidden_units, hidden_units});
  shapes.push_back({hidden_units, output_dim});
  return shapes;
}

int PolicySpec::parameter_count() const {
  int d = 0;
  for (const auto& s : layer_shapes()) {
    d += s.in * s.out;
    if (use_bias) d += s.out;
  }
  return d;
}

void PolicySpec::validate() const {
  if (input_dim <= 0 || output_dim <= 0)
    throw std::invalid_argument("policy: input_dim and output_dim must be positive");
  if (hidden_layers < 0) throw std::invalid_argument("policy: hidden_layers must be >= 0");
  if (hidden_layers > 0 && hidden_units <= 0)
    throw std::invalid_argument("policy: hidden_units must be positive");
  if (output_activation != Activation::tanh)
    throw std::invalid_argument("policy: output activation must be tanh (bounded torque)");
  prior.validate();
}

ParameterVector sample_parameters(const PolicySpec& spec,
                                  std::uint64_t master_seed, int n) {
  if (n < 0) throw std::invalid_argument("sample_parameters: n must be >= 0");
  const int d = spec.parameter_count();
  Rng rng(derive_seed(master_seed, stream::parameters, static_cast<std::uint64_t>(n)));
  ParameterVector params;
  params.policy_index = n;
  params.values.resize(static_cast<std::size_t>(d));
  if (spec.prior.kind == PriorSpec::Kind::normal) {
    for (auto& v : params.values) v = rng.next_normal(spec.prior.stddev);
  } else {
    for (auto& v : params.values) v = rng.next_uniform(spec.prior.lo, spec.prior.hi);
  }
  return params;
}

namespace {

inline double activate(Activation a, double x) {
  return a == Activation::tanh ? std::tanh(x) : (x > 0.0 ? x : 0.0);
}

}  // namespace

void forward(const PolicySpec& spec, const ParameterVector& params,
             std::span<const double> observation, std::span<double> action,
             ForwardWorkspace& ws) {
  if (static_cast<int>(observation.size()) != spec.input_dim)
    throw std::invalid_argument("forward: observation length != input_dim");
  if (static_cast<int>(action.size()) != spec.output_dim)
    throw std::invalid_argument("forward: action length != output_dim");
  if (static_cast<int>(params.values.size()) != spec.parameter_count())
    throw std::invalid_argument("forward: parameter vector length != d");

  const auto shapes = spec.layer_shapes();
  const int last = static_cast<int>(shapes.size()) - 1;

  ws.a.assign(observation.begin(), observation.end());
  const double* w = params.values.data();

  for (int layer = 0; layer <= last; ++layer) {
    const auto [in, out] = shapes[static_cast<std::size_t>(layer)];
    ws.b.resize(static_cast<std::size_t>(out));
    const double* x = ws.a.data();
    for (int i = 0; i < out; ++i) {
      double acc = 0.0;
      const double* row = w + static_cast<std::size_t>(i) * in;
      for (int j = 0; j < in; ++j) acc += row[j] * x[j];
      ws.b[static_cast<std::size_t>(i)] = acc;
    }
    w += static_cast<std::size_t>(in) * out;
    if (spec.use_bias) {
      for (int i = 0; i < out; ++i) ws.b[static_cast<std::size_t>(i)] += w[i];
      w += out;
    }
    const Activation act =
        layer == last ? spec.output_activation : spec.hidden_activation;
    for (auto& v : ws.b) v = activate(act, v);
    ws.a.swap(ws.b);
  }

  for (int i = 0; i < spec.output_dim; ++i) action[static_cast<std::size_t>(i)] = ws.a[static_cast<std::size_t>(i)];
}

std::vector<double> forward(const PolicySpec& spec,
                            const ParameterVector& params,
                            std::span<const double> observation) {
  std::vector<double> action(static_cast<std::size_t>(spec.output_dim));
  ForwardWorkspace ws;
  forward(spec, params, observation, action, ws);
  return action;
}

const char* to_string(Activation a) {
  return a == Activation::tanh ? "tanh" : "relu";
}

Activation activation_from_string(std::string_view s) {
  if (s == "tanh") return Activation::tanh;
  if (s == "relu") return Activation::relu;
  throw std::invalid_argument("unknown activation: " + std::string(s));
}

}  // namespace rwgc
