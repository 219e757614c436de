#include "gradednn/graded_nn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gradednn/errors.hpp"

namespace gnn {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::GradedRelu: return "graded_relu";
    case Activation::SignedGradedRelu: return "signed_graded_relu";
    case Activation::GradedExp: return "graded_exp";
    case Activation::ClassicalRelu: return "relu";
    case Activation::Identity: return "identity";
  }
  return "identity";
}

Activation parse_activation(std::string_view text) {
  for (auto a : {Activation::GradedRelu, Activation::SignedGradedRelu, Activation::GradedExp,
                 Activation::ClassicalRelu, Activation::Identity}) {
    if (text == to_string(a)) return a;
  }
  throw ConfigError("unknown activation '" + std::string(text) + "'");
}

double activate(Activation a, double z, double q) {
  switch (a) {
    case Activation::GradedRelu:
      return std::abs(z) <= kClampThreshold ? 0.0 : std::pow(std::abs(z), 1.0 / q);
    case Activation::SignedGradedRelu:
      return z <= kClampThreshold ? 0.0 : std::pow(z, 1.0 / q);
    case Activation::GradedExp:
      return std::exp(z / q) - 1.0;
    case Activation::ClassicalRelu:
      return z > 0.0 ? z : 0.0;
    case Activation::Identity:
      return z;
  }
  return z;
}

double activate_derivative(Activation a, double z, double q) {
  switch (a) {
    case Activation::GradedRelu: {
      if (std::abs(z) <= kClampThreshold) return 0.0;
      const double d = std::pow(std::abs(z), 1.0 / q - 1.0) / q;
      return z > 0.0 ? d : -d;
    }
    case Activation::SignedGradedRelu:
      return z <= kClampThreshold ? 0.0 : std::pow(z, 1.0 / q - 1.0) / q;
    case Activation::GradedExp:
      return std::exp(z / q) / q;
    case Activation::ClassicalRelu:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::Identity:
      return 1.0;
  }
  return 1.0;
}

namespace {

GradedVector map_coordinates(const GradedVector& x, Activation a) {
  GradedVector out = x;
  const auto q = x.grading().reals();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = activate(a, x[i], q[i]);
  return out;
}

}  // namespace

GradedVector graded_relu(const GradedVector& x, bool signed_variant) {
  return map_coordinates(x, signed_variant ? Activation::SignedGradedRelu : Activation::GradedRelu);
}

GradedVector graded_exp(const GradedVector& x) { return map_coordinates(x, Activation::GradedExp); }

double effective_weight(double w, double q) {
  if (q == 1.0 || w == 0.0) return w;
  return std::copysign(std::pow(std::abs(w), q), w);
}

double effective_weight_derivative(double w, double q) {
  if (q == 1.0) return 1.0;
  if (w == 0.0) return 0.0;
  return q * std::pow(std::abs(w), q - 1.0);
}

AdditiveNeuron::AdditiveNeuron(GradingVector grading, std::vector<double> weights, double bias)
    : grading_(std::move(grading)), weights_(std::move(weights)), bias_(bias) {
  if (weights_.size() != grading_.size()) throw ShapeError("additive neuron: weights do not match grading");
}

MultiplicativeNeuron::MultiplicativeNeuron(GradingVector grading, std::vector<double> weights,
                                           std::vector<Rational> exponents, double bias)
    : grading_(std::move(grading)), weights_(std::move(weights)), exponents_(std::move(exponents)), bias_(bias) {
  if (weights_.size() != grading_.size() || exponents_.size() != grading_.size()) {
    throw ShapeError("multiplicative neuron: weights/exponents do not match grading");
  }
  for (const auto& k : exponents_) {
    if (k < Rational(0)) throw DomainError("multiplicative neuron exponents must be nonnegative");
    exponent_reals_.push_back(k.to_double());
  }
}

Rational MultiplicativeNeuron::degree() const {
  Rational d(0);
  for (std::size_t i = 0; i < exponents_.size(); ++i) d = d + grading_[i] * exponents_[i];
  return d;
}

Rational MultiplicativeNeuron::output_grade() const {
  const Rational d = degree();
  return d.is_positive() ? d : Rational(1);
}

double additive_forward(const AdditiveNeuron& neuron, const GradedVector& x) {
  if (!(x.grading() == neuron.grading())) throw ShapeError("additive neuron: input grading mismatch");
  const auto q = x.grading().reals();
  const auto w = neuron.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += effective_weight(w[i], q[i]) * x[i];
  return sum + neuron.bias();
}

namespace {

// Sign of the factor sgn(x)^k; throws for non-integer k at x <= 0.
int factor_sign(const Rational& k, double x) {
  if (k.is_integer()) {
    if (x > 0.0) return 1;
    if (x < 0.0) return (k.num() % 2 == 0) ? 1 : -1;
    return 0;
  }
  if (!(x > 0.0)) {
    throw DomainError("multiplicative neuron: non-integer exponent " + k.to_string() + " needs a positive input");
  }
  return 1;
}

}  // namespace

double multiplicative_forward(const MultiplicativeNeuron& neuron, const GradedVector& x) {
  if (!(x.grading() == neuron.grading())) throw ShapeError("multiplicative neuron: input grading mismatch");
  const auto w = neuron.weights();
  double prod = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& k = neuron.exponents()[i];
    if (k.is_zero()) continue;
    const int s = factor_sign(k, x[i]);
    prod *= s * std::pow(std::abs(w[i] * x[i]), neuron.exponent(i));
  }
  return prod + neuron.bias();
}

std::optional<double> LogValue::value() const {
  if (sign == 0) return 0.0;
  const double mag = std::exp(log_magnitude);
  if (!std::isfinite(mag)) return std::nullopt;
  return sign * mag;
}

namespace {

struct LogTerm {
  int sign;
  double log_mag;
};

LogValue log_sum(const std::vector<LogTerm>& terms) {
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) {
    if (t.sign != 0) shift = std::max(shift, t.log_mag);
  }
  if (!std::isfinite(shift)) return {};
  double acc = 0.0;
  for (const auto& t : terms) {
    if (t.sign != 0) acc += t.sign * std::exp(t.log_mag - shift);
  }
  if (acc == 0.0) return {};
  return {acc > 0.0 ? 1 : -1, shift + std::log(std::abs(acc))};
}

LogTerm log_term(double v) {
  if (v == 0.0) return {0, -std::numeric_limits<double>::infinity()};
  return {v > 0.0 ? 1 : -1, std::log(std::abs(v))};
}

}  // namespace

LogValue log_domain_forward(const AdditiveNeuron& neuron, const GradedVector& x) {
  if (!(x.grading() == neuron.grading())) throw ShapeError("additive neuron: input grading mismatch");
  const auto q = x.grading().reals();
  const auto w = neuron.weights();
  std::vector<LogTerm> terms;
  terms.reserve(x.size() + 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (w[i] == 0.0 || x[i] == 0.0) {
      terms.push_back({0, -std::numeric_limits<double>::infinity()});
      continue;
    }
    const int s = (w[i] > 0.0 ? 1 : -1) * (x[i] > 0.0 ? 1 : -1);
    terms.push_back({s, q[i] * std::log(std::abs(w[i])) + std::log(std::abs(x[i]))});
  }
  terms.push_back(log_term(neuron.bias()));
  return log_sum(terms);
}

LogValue log_domain_forward(const MultiplicativeNeuron& neuron, const GradedVector& x) {
  if (!(x.grading() == neuron.grading())) throw ShapeError("multiplicative neuron: input grading mismatch");
  const auto w = neuron.weights();
  int sign = 1;
  double log_mag = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& k = neuron.exponents()[i];
    if (k.is_zero()) continue;
    const int s = factor_sign(k, x[i]);
    if (s == 0 || w[i] == 0.0) {
      sign = 0;
      break;
    }
    sign *= s;
    log_mag += neuron.exponent(i) * (std::log(std::abs(w[i])) + std::log(std::abs(x[i])));
  }
  LogTerm product{sign, sign == 0 ? -std::numeric_limits<double>::infinity() : log_mag};
  return log_sum({product, log_term(neuron.bias())});
}

Layer::Layer(GradingVector in_grading, GradingVector out_grading, std::vector<double> weight_base,
             std::vector<double> bias, Activation activation, std::optional<std::vector<GradeBlock>> blocks)
    : in_grading_(std::move(in_grading)),
      out_grading_(std::move(out_grading)),
      weight_base_(std::move(weight_base)),
      bias_(std::move(bias)),
      activation_(activation),
      blocks_(std::move(blocks)) {
  if (weight_base_.size() != rows() * cols()) {
    throw ShapeError("layer weights have " + std::to_string(weight_base_.size()) + " entries, expected " +
                     std::to_string(rows()) + "x" + std::to_string(cols()));
  }
  if (bias_.size() != rows()) throw ShapeError("layer bias length does not match output grading");
  if (!blocks_) return;

  std::sort(blocks_->begin(), blocks_->end(), [](const GradeBlock& a, const GradeBlock& b) {
    return a.row_begin != b.row_begin ? a.row_begin < b.row_begin : a.col_begin < b.col_begin;
  });
  mask_.assign(rows() * cols(), 0);
  for (const auto& blk : *blocks_) {
    if (blk.row_begin >= blk.row_end || blk.row_end > rows() || blk.col_begin >= blk.col_end || blk.col_end > cols()) {
      throw ShapeError("grade block range out of bounds");
    }
    for (std::size_t j = blk.row_begin; j < blk.row_end; ++j) {
      if (out_grading_[j] != blk.grade) throw ShapeError("grade block row grade differs from block grade");
    }
    for (std::size_t i = blk.col_begin; i < blk.col_end; ++i) {
      if (in_grading_[i] != blk.grade) throw ShapeError("grade block column grade differs from block grade");
    }
    for (std::size_t j = blk.row_begin; j < blk.row_end; ++j) {
      for (std::size_t i = blk.col_begin; i < blk.col_end; ++i) {
        if (mask_[j * cols() + i]) throw ShapeError("grade blocks overlap");
        mask_[j * cols() + i] = 1;
      }
    }
  }
  for (std::size_t k = 0; k < weight_base_.size(); ++k) {
    if (!mask_[k] && weight_base_[k] != 0.0) throw ShapeError("nonzero weight outside grade blocks");
  }
}

void Layer::pre_activation(std::span<const double> x, std::span<double> z) const {
  const auto q = in_grading_.reals();
  std::fill(z.begin(), z.end(), 0.0);
  if (blocks_) {
    for (const auto& blk : *blocks_) {
      for (std::size_t j = blk.row_begin; j < blk.row_end; ++j) {
        for (std::size_t i = blk.col_begin; i < blk.col_end; ++i) {
          z[j] += effective_weight(weight_base_[j * cols() + i], q[i]) * x[i];
        }
      }
    }
  } else {
    for (std::size_t j = 0; j < rows(); ++j) {
      for (std::size_t i = 0; i < cols(); ++i) z[j] += effective_weight(weight_base_[j * cols() + i], q[i]) * x[i];
    }
  }
  for (std::size_t j = 0; j < rows(); ++j) z[j] += bias_[j];
}

Network::Network(GradingVector input_grading, std::vector<Layer> layers, std::optional<MultiplicativeNeuron> head)
    : input_grading_(std::move(input_grading)), layers_(std::move(layers)), head_(std::move(head)) {
  const GradingVector* prev = &input_grading_;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (!(layers_[l].in_grading() == *prev)) {
      throw ShapeError("layer " + std::to_string(l) + " input grading " + layers_[l].in_grading().to_string() +
                       " does not match preceding grading " + prev->to_string());
    }
    prev = &layers_[l].out_grading();
  }
  if (head_ && !(head_->grading() == *prev)) {
    throw ShapeError("multiplicative head grading " + head_->grading().to_string() +
                     " does not match preceding grading " + prev->to_string());
  }
}

GradingVector Network::output_grading() const {
  if (head_) return GradingVector({head_->output_grade()});
  return layers_.empty() ? input_grading_ : layers_.back().out_grading();
}

GradedVector layer_forward(const Layer& layer, const GradedVector& x) {
  if (!(x.grading() == layer.in_grading())) {
    throw ShapeError("layer input grading " + layer.in_grading().to_string() + " does not match vector grading " +
                     x.grading().to_string());
  }
  GradedVector y = GradedVector::zeros(layer.out_grading());
  layer.pre_activation(x.values(), y.values());
  const auto r = layer.out_grading().reals();
  for (std::size_t j = 0; j < y.size(); ++j) y[j] = activate(layer.activation(), y[j], r[j]);
  return y;
}

GradedVector network_forward(const Network& net, const GradedVector& x) {
  if (!(x.grading() == net.input_grading())) throw ShapeError("network input grading mismatch");
  GradedVector h = x;
  for (const auto& layer : net.layers()) h = layer_forward(layer, h);
  if (const auto& head = net.head()) {
    return GradedVector(net.output_grading(), {multiplicative_forward(*head, h)});
  }
  return h;
}

std::vector<GradeBlock> grade_blocks_for(const GradingVector& in, const GradingVector& out) {
  auto run_of = [](const GradingVector& g, const Rational& grade) -> std::optional<std::pair<std::size_t, std::size_t>> {
    std::size_t begin = g.size(), end = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] == grade) {
        begin = std::min(begin, i);
        end = i + 1;
      }
    }
    if (begin == g.size()) return std::nullopt;
    for (std::size_t i = begin; i < end; ++i) {
      if (g[i] != grade) throw ShapeError("grade " + grade.to_string() + " is not contiguous in " + g.to_string());
    }
    return std::make_pair(begin, end);
  };
  std::vector<GradeBlock> blocks;
  for (const auto& grade : out.distinct()) {
    const auto rows = run_of(out, grade);
    const auto cols = run_of(in, grade);
    if (!rows || !cols) continue;
    blocks.push_back({grade, rows->first, rows->second, cols->first, cols->second});
  }
  return blocks;
}

}  // namespace gnn
