#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gradednn/graded_core.hpp"

namespace gnn {

/// Inputs with |x| <= this are treated as zero by the graded ReLU variants.
inline constexpr double kClampThreshold = 1e-10;

enum class Activation { GradedRelu, SignedGradedRelu, GradedExp, ClassicalRelu, Identity };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view text);

/// Scalar activation at pre-activation z for a coordinate of grade q.
///   GradedRelu        max{0, |z|^{1/q}}
///   SignedGradedRelu  max{0, |z|^{1/q} sgn z}
///   GradedExp         exp(z/q) - 1
///   ClassicalRelu     max{0, z}
double activate(Activation a, double z, double q);

/// Derivative of activate() in z. Zero inside the clamp band for the graded
/// ReLU variants and zero at z == 0 for ClassicalRelu.
double activate_derivative(Activation a, double z, double q);

GradedVector graded_relu(const GradedVector& x, bool signed_variant = false);
GradedVector graded_exp(const GradedVector& x);

/// sgn(w) |w|^q: the real-valued reading of w^q used for every graded weight.
double effective_weight(double w, double q);
/// q |w|^{q-1}; taken as 0 at w == 0 when q != 1.
double effective_weight_derivative(double w, double q);

/// sum_i sgn(w_i)|w_i|^{q_i} x_i + b
class AdditiveNeuron {
 public:
  AdditiveNeuron(GradingVector grading, std::vector<double> weights, double bias);

  const GradingVector& grading() const { return grading_; }
  std::span<const double> weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  GradingVector grading_;
  std::vector<double> weights_;
  double bias_;
};

/// prod_{k_i > 0} |w_i x_i|^{k_i} s_i + b, where s_i = sgn(x_i)^{k_i} for
/// integer k_i. Non-integer k_i require x_i > 0. With b = 0 the neuron is
/// graded-homogeneous of degree sum_i q_i k_i.
class MultiplicativeNeuron {
 public:
  MultiplicativeNeuron(GradingVector grading, std::vector<double> weights, std::vector<Rational> exponents,
                       double bias);

  const GradingVector& grading() const { return grading_; }
  std::span<const double> weights() const { return weights_; }
  std::span<double> weights_mut() { return weights_; }
  std::span<const Rational> exponents() const { return exponents_; }
  double exponent(std::size_t i) const { return exponent_reals_[i]; }
  double bias() const { return bias_; }
  double& bias_mut() { return bias_; }

  /// sum_i q_i k_i
  Rational degree() const;
  /// Grade attached to the scalar output: the degree when positive, else 1.
  Rational output_grade() const;

 private:
  GradingVector grading_;
  std::vector<double> weights_;
  std::vector<Rational> exponents_;
  std::vector<double> exponent_reals_;
  double bias_;
};

double additive_forward(const AdditiveNeuron& neuron, const GradedVector& x);
double multiplicative_forward(const MultiplicativeNeuron& neuron, const GradedVector& x);

/// A real number held as sign and natural-log magnitude.
struct LogValue {
  int sign = 0;  // -1, 0, +1
  double log_magnitude = -std::numeric_limits<double>::infinity();

  /// The real value, or nullopt when it overflows double precision.
  std::optional<double> value() const;
};

/// Evaluates the neuron with every product accumulated as a log-magnitude
/// (q_i log|w_i| + log|x_i| per term) and the sum combined with a max shift.
LogValue log_domain_forward(const AdditiveNeuron& neuron, const GradedVector& x);
LogValue log_domain_forward(const MultiplicativeNeuron& neuron, const GradedVector& x);

/// Rectangle of a layer's weight matrix whose rows and columns all carry `grade`.
struct GradeBlock {
  Rational grade;
  std::size_t row_begin = 0, row_end = 0;
  std::size_t col_begin = 0, col_end = 0;
};

/// phi(x) = g(W x + b) with W_{j,i} = sgn(w_{j,i}) |w_{j,i}|^{q_i}, q the input
/// grading. The activation of output j uses the output grade r_j.
///
/// When grade blocks are given, every nonzero weight must lie inside a block,
/// entries outside blocks stay structurally zero, and evaluation only visits
/// in-block entries.
class Layer {
 public:
  Layer(GradingVector in_grading, GradingVector out_grading, std::vector<double> weight_base,
        std::vector<double> bias, Activation activation, std::optional<std::vector<GradeBlock>> blocks = std::nullopt);

  std::size_t rows() const { return out_grading_.size(); }
  std::size_t cols() const { return in_grading_.size(); }
  const GradingVector& in_grading() const { return in_grading_; }
  const GradingVector& out_grading() const { return out_grading_; }
  Activation activation() const { return activation_; }
  const std::optional<std::vector<GradeBlock>>& blocks() const { return blocks_; }

  std::span<const double> weight_base() const { return weight_base_; }
  std::span<double> weight_base_mut() { return weight_base_; }
  double weight_base(std::size_t j, std::size_t i) const { return weight_base_[j * cols() + i]; }
  std::span<const double> bias() const { return bias_; }
  std::span<double> bias_mut() { return bias_; }

  /// False for entries held at zero by the block structure.
  bool trainable(std::size_t j, std::size_t i) const { return mask_.empty() || mask_[j * cols() + i] != 0; }

  /// z = W x + b (no activation).
  void pre_activation(std::span<const double> x, std::span<double> z) const;

 private:
  GradingVector in_grading_;
  GradingVector out_grading_;
  std::vector<double> weight_base_;
  std::vector<double> bias_;
  Activation activation_;
  std::optional<std::vector<GradeBlock>> blocks_;
  std::vector<char> mask_;
};

/// Composition of additive layers with an optional multiplicative output neuron.
class Network {
 public:
  explicit Network(GradingVector input_grading, std::vector<Layer> layers = {},
                   std::optional<MultiplicativeNeuron> head = std::nullopt);

  const GradingVector& input_grading() const { return input_grading_; }
  GradingVector output_grading() const;

  std::span<const Layer> layers() const { return layers_; }
  Layer& layer(std::size_t l) { return layers_[l]; }
  const std::optional<MultiplicativeNeuron>& head() const { return head_; }
  MultiplicativeNeuron* head_mut() { return head_ ? &*head_ : nullptr; }

 private:
  GradingVector input_grading_;
  std::vector<Layer> layers_;
  std::optional<MultiplicativeNeuron> head_;
};

GradedVector layer_forward(const Layer& layer, const GradedVector& x);
GradedVector network_forward(const Network& net, const GradedVector& x);

/// Weight matrix restricted to grade blocks: one block per grade shared by the
/// input and output gradings, spanning all rows and columns of that grade.
/// Both gradings must list each grade in one contiguous run.
std::vector<GradeBlock> grade_blocks_for(const GradingVector& in, const GradingVector& out);

}  // namespace gnn
