#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace gnn;
using gnn::test::random_grading;
using gnn::test::random_vector;
using gnn::test::rel_err;

namespace {

const GradingVector kQ7 = GradingVector::parse("2,2,2,3,3,3,3");

std::vector<double> uniform_values(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST(GradedRelu, Example) {
  const auto y = graded_relu(GradedVector(kQ7, {2, -3, 1, 1, -2, 1, 1}));
  const double want[] = {std::sqrt(2.0), std::sqrt(3.0), 1, 1, std::cbrt(2.0), 1, 1};
  for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(y[i], want[i], 1e-12);
  const double printed[] = {1.414, 1.732, 1, 1, 1.260, 1, 1};
  for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(y[i], printed[i], 1e-3);

  const auto zero = graded_relu(GradedVector::zeros(kQ7));
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(zero[i], 0.0);

  const auto q = GradingVector::parse("2");
  EXPECT_DOUBLE_EQ(graded_relu(scalar_action(4.0, GradedVector(q, {16})))[0], 16.0);
  EXPECT_DOUBLE_EQ(graded_relu(GradedVector(q, {16}))[0], 4.0);
}

TEST(GradedRelu, SignedVariantAndClamp) {
  const auto q = GradingVector::parse("2,2,3");
  const auto y = graded_relu(GradedVector(q, {4, -4, 5e-11}), true);
  EXPECT_DOUBLE_EQ(y[0], 2.0);
  EXPECT_EQ(y[1], 0.0);
  EXPECT_EQ(y[2], 0.0);
  EXPECT_EQ(activate(Activation::GradedRelu, -5e-11, 2.0), 0.0);
  EXPECT_EQ(activate_derivative(Activation::GradedRelu, 5e-11, 2.0), 0.0);
  EXPECT_EQ(activate_derivative(Activation::SignedGradedRelu, -1.0, 2.0), 0.0);
  EXPECT_NEAR(activate_derivative(Activation::GradedRelu, -4.0, 2.0), -0.25, 1e-15);
  EXPECT_NEAR(activate_derivative(Activation::GradedRelu, 4.0, 2.0), 0.25, 1e-15);
}

TEST(GradedExp, Example) {
  const auto y = graded_exp(GradedVector(kQ7, {2, -3, 1, 1, -2, 1, 1}));
  EXPECT_NEAR(y[0], std::exp(1.0) - 1.0, 1e-12);
  EXPECT_NEAR(y[1], std::exp(-1.5) - 1.0, 1e-12);
  EXPECT_NEAR(y[0], 1.718, 1e-3);
  EXPECT_NEAR(y[1], -0.777, 1e-3);
  EXPECT_EQ(graded_exp(GradedVector::zeros(kQ7))[3], 0.0);
}

TEST(Activation, NamesRoundTrip) {
  for (auto a : {Activation::GradedRelu, Activation::SignedGradedRelu, Activation::GradedExp, Activation::ClassicalRelu,
                 Activation::Identity}) {
    EXPECT_EQ(parse_activation(to_string(a)), a);
  }
  EXPECT_THROW(parse_activation("tanh"), ConfigError);
}

TEST(EffectiveWeight, SignedPower) {
  EXPECT_DOUBLE_EQ(effective_weight(-2.0, 3.0), -8.0);
  EXPECT_DOUBLE_EQ(effective_weight(-2.0, 2.0), -4.0);
  EXPECT_DOUBLE_EQ(effective_weight(4.0, 0.5), 2.0);
  EXPECT_EQ(effective_weight(0.0, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(effective_weight_derivative(-2.0, 3.0), 12.0);
  EXPECT_EQ(effective_weight_derivative(0.0, 2.0), 0.0);
  EXPECT_EQ(effective_weight_derivative(0.0, 1.0), 1.0);
}

TEST(AdditiveNeuron, Examples) {
  const auto ones = GradingVector::uniform(3);
  EXPECT_DOUBLE_EQ(additive_forward(AdditiveNeuron(ones, {1, -2, 3}, 0.5), GradedVector(ones, {1, 1, 2})), 5.5);

  const auto q10 = GradingVector::parse("10");
  const double v = additive_forward(AdditiveNeuron(q10, {1.5}, 0.0), GradedVector(q10, {0.1}));
  EXPECT_NEAR(v, 5.7665, 1e-4);
  EXPECT_NEAR(v, std::pow(1.5, 10) * 0.1, 1e-12);

  EXPECT_DOUBLE_EQ(additive_forward(AdditiveNeuron(kQ7, std::vector<double>(7, 1.0), 0.0),
                                    GradedVector(kQ7, {1, 0, 1, 1, -1, 0, 1})),
                   3.0);
}

TEST(MultiplicativeNeuron, Examples) {
  const MultiplicativeNeuron beta(kQ7, std::vector<double>(7, 1.0), {1, 0, 0, 2, 0, 0, 0}, 0.0);
  EXPECT_DOUBLE_EQ(multiplicative_forward(beta, GradedVector(kQ7, {1, 0, 0, 2, 0, 0, 0})), 4.0);
  EXPECT_EQ(beta.degree(), Rational(8));

  const MultiplicativeNeuron withb(kQ7, std::vector<double>(7, 1.0), {1, 1, 1, 1, 1, 1, 1}, 0.75);
  EXPECT_EQ(multiplicative_forward(withb, GradedVector(kQ7, {1, 2, 0, 3, 1, 1, 1})), 0.75);

  const auto q = GradingVector::parse("2,3");
  const MultiplicativeNeuron m(q, {1, 1}, {1, 2}, 0.0);
  const GradedVector x(q, {1, 1});
  EXPECT_DOUBLE_EQ(multiplicative_forward(m, x), 1.0);
  EXPECT_DOUBLE_EQ(multiplicative_forward(m, scalar_action(2.0, x)), 256.0);

  const MultiplicativeNeuron frac(q, {1, 1}, {Rational(1, 2), Rational(1)}, 0.0);
  EXPECT_THROW(multiplicative_forward(frac, GradedVector(q, {-1, 1})), DomainError);
  EXPECT_THROW(multiplicative_forward(frac, GradedVector(q, {0, 1})), DomainError);
  EXPECT_DOUBLE_EQ(multiplicative_forward(frac, GradedVector(q, {4, -1})), -2.0);
}

TEST(MultiplicativeNeuron, SignsForIntegerExponents) {
  const auto q = GradingVector::parse("1,1");
  const MultiplicativeNeuron m(q, {1, 1}, {3, 2}, 0.0);
  EXPECT_DOUBLE_EQ(multiplicative_forward(m, GradedVector(q, {-2, -1})), -8.0);
  EXPECT_EQ(MultiplicativeNeuron(q, {1, 1}, {0, 0}, 0.0).output_grade(), Rational(1));
}

TEST(LogDomain, Examples) {
  const auto q10 = GradingVector::parse("10");
  const auto lv = log_domain_forward(AdditiveNeuron(q10, {1.5}, 0.0), GradedVector(q10, {0.1}));
  EXPECT_EQ(lv.sign, 1);
  EXPECT_NEAR(lv.log_magnitude, 10 * std::log(1.5) + std::log(0.1), 1e-12);
  EXPECT_NEAR(lv.log_magnitude, 1.752, 1e-3);
  ASSERT_TRUE(lv.value());
  EXPECT_NEAR(*lv.value(), 5.7665, 1e-4);

  const auto q1200 = GradingVector::parse("1200");
  const AdditiveNeuron big(q1200, {2.0}, 0.0);
  const GradedVector one(q1200, {1.0});
  EXPECT_FALSE(std::isfinite(additive_forward(big, one)));
  const auto lb = log_domain_forward(big, one);
  EXPECT_EQ(lb.sign, 1);
  EXPECT_NEAR(lb.log_magnitude, 1200 * std::log(2.0), 1e-9);
  EXPECT_NEAR(lb.log_magnitude, 831.78, 1e-2);
  EXPECT_FALSE(lb.value());

  const auto q2 = GradingVector::parse("2,2");
  const auto zero_term = log_domain_forward(AdditiveNeuron(q2, {1, 1}, 0.0), GradedVector(q2, {0, 0}));
  EXPECT_EQ(zero_term.sign, 0);
  EXPECT_TRUE(std::isinf(zero_term.log_magnitude));
}

TEST(LogDomain, MultiplicativeOverflowStaysFinite) {
  const auto q = GradingVector::parse("1,1");
  const MultiplicativeNeuron m(q, {1e200, 1e200}, {2, 1}, 0.0);
  const GradedVector x(q, {-1.0, 1.0});
  const auto lv = log_domain_forward(m, x);
  EXPECT_EQ(lv.sign, 1);
  EXPECT_NEAR(lv.log_magnitude, 600 * std::log(10.0), 1e-9);
  EXPECT_FALSE(lv.value());
}

TEST(Layer, Examples) {
  const Layer ident(kQ7, kQ7, std::vector<double>(49, 1.0), std::vector<double>(7, 0.0), Activation::Identity);
  const auto y = layer_forward(ident, GradedVector(kQ7, {1, 2, 3, 4, 5, 6, 7}));
  for (std::size_t j = 0; j < 7; ++j) EXPECT_DOUBLE_EQ(y[j], 28.0);

  // 1x7 graded ReLU layer against additive_forward composed with graded_relu.
  std::mt19937_64 rng(3);
  const auto out = GradingVector::parse("3");
  const auto w = uniform_values(rng, 7, 0.2, 1.2);
  const Layer one(kQ7, out, w, {0.3}, Activation::GradedRelu);
  const GradedVector x(kQ7, {2, -3, 1, 1, -2, 1, 1});
  const double z = additive_forward(AdditiveNeuron(kQ7, w, 0.3), x);
  EXPECT_DOUBLE_EQ(layer_forward(one, x)[0], graded_relu(GradedVector(out, {z}))[0]);
}

TEST(Layer, ShapeErrors) {
  EXPECT_THROW(Layer(kQ7, kQ7, std::vector<double>(48, 1.0), std::vector<double>(7, 0.0), Activation::Identity),
               ShapeError);
  const Layer l(kQ7, kQ7, std::vector<double>(49, 1.0), std::vector<double>(7, 0.0), Activation::Identity);
  EXPECT_THROW(layer_forward(l, GradedVector(GradingVector::uniform(7), std::vector<double>(7, 1.0))), ShapeError);
  const auto q3 = GradingVector::uniform(3);
  EXPECT_THROW(Network(kQ7, {l, Layer(q3, q3, std::vector<double>(9), std::vector<double>(3), Activation::Identity)}),
               ShapeError);
}

TEST(Layer, BlockStructureValidation) {
  const auto q = GradingVector::parse("2,2,3");
  const auto blocks = grade_blocks_for(q, q);
  ASSERT_EQ(blocks.size(), 2u);
  std::vector<double> w{1, 2, 0, 3, 4, 0, 0, 0, 5};
  EXPECT_NO_THROW(Layer(q, q, w, {0, 0, 0}, Activation::Identity, blocks));
  w[2] = 1.0;
  EXPECT_THROW(Layer(q, q, w, {0, 0, 0}, Activation::Identity, blocks), ShapeError);
  EXPECT_THROW(grade_blocks_for(GradingVector::parse("2,3,2"), q), ShapeError);
}

TEST(Network, Examples) {
  const auto x = GradedVector(kQ7, {1, -2, 3, 0.5, 1, 2, -1});
  const Network empty(kQ7);
  const auto same = network_forward(empty, x);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(same[i], x[i]);

  std::mt19937_64 rng(4);
  const auto mid = GradingVector::parse("1,2,3");
  const Layer a(kQ7, mid, uniform_values(rng, 21, 0.2, 0.9), uniform_values(rng, 3, -0.5, 0.5),
                Activation::GradedRelu);
  const Layer b(mid, kQ7, uniform_values(rng, 21, 0.2, 0.9), uniform_values(rng, 7, -0.5, 0.5),
                Activation::GradedExp);
  const Network one(kQ7, {a});
  const Network two(kQ7, {a, b});
  for (int t = 0; t < 10; ++t) {
    const auto xi = random_vector(rng, kQ7);
    const auto y1 = network_forward(one, xi), l1 = layer_forward(a, xi);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(y1[j], l1[j]);
    const auto y2 = network_forward(two, xi), l2 = layer_forward(b, layer_forward(a, xi));
    for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(y2[j], l2[j]);
  }
}

// ---- properties ----

TEST(NnProperties, GradedReluPositiveHomogeneity) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> lam(0.05, 4.0);
  for (int t = 0; t < 10000; ++t) {
    const auto q = random_grading(rng, 1 + t % 7);
    const auto x = random_vector(rng, q, -3.0, 3.0);
    const double l = lam(rng);
    for (bool sgn : {false, true}) {
      const auto lhs = graded_relu(scalar_action(l, x), sgn);
      const auto rhs = graded_relu(x, sgn);
      for (std::size_t i = 0; i < q.size(); ++i) ASSERT_LE(rel_err(lhs[i], l * rhs[i]), 1e-10) << "trial " << t;
    }
  }
}

TEST(NnProperties, GradedReluHolderBound) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> d(0.0, 5.0);
  for (int t = 0; t < 10000; ++t) {
    const auto q = random_grading(rng, 1, true);
    const double a = d(rng), b = d(rng), qi = q.real(0);
    const double lhs = std::abs(activate(Activation::GradedRelu, a, qi) - activate(Activation::GradedRelu, b, qi));
    ASSERT_LE(lhs, std::pow(std::abs(a - b), 1.0 / qi) + 1e-12);
  }
}

TEST(NnProperties, AdditiveNeuronScalingIdentity) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> lam(0.1, 3.0);
  for (int t = 0; t < 10000; ++t) {
    const auto q = random_grading(rng, 1 + t % 6);
    const auto x = random_vector(rng, q);
    const auto w = uniform_values(rng, q.size(), -1.5, 1.5);
    const double l = lam(rng);
    std::vector<double> lw(w);
    for (auto& v : lw) v *= l;
    const double lhs = additive_forward(AdditiveNeuron(q, w, 0.0), scalar_action(l, x));
    const double rhs = additive_forward(AdditiveNeuron(q, lw, 0.0), x);
    ASSERT_LE(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(NnProperties, MultiplicativeNeuronHomogeneity) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> lam(0.2, 2.5);
  std::uniform_int_distribution<int> kd(0, 3);
  for (int t = 0; t < 10000; ++t) {
    const auto q = random_grading(rng, 1 + t % 5);
    const bool positive = t % 2 == 0;
    const auto x = random_vector(rng, q, positive ? 0.1 : -2.0, 2.0);
    std::vector<Rational> k(q.size());
    for (auto& v : k) v = positive ? Rational(kd(rng), 2) : Rational(kd(rng));
    const MultiplicativeNeuron m(q, uniform_values(rng, q.size(), 0.2, 1.5), k, 0.0);
    const double l = lam(rng);
    const double lhs = multiplicative_forward(m, scalar_action(l, x));
    const double rhs = std::pow(l, m.degree().to_double()) * multiplicative_forward(m, x);
    ASSERT_LE(std::abs(lhs - rhs), 1e-9 * std::max(std::abs(rhs), 1e-300)) << "trial " << t;
  }
}

TEST(NnProperties, LogDomainMatchesDirect) {
  std::mt19937_64 rng(25);
  std::uniform_int_distribution<int> kd(0, 3);
  for (int t = 0; t < 10000; ++t) {
    const auto q = random_grading(rng, 1 + t % 7);
    const auto x = random_vector(rng, q, -3.0, 3.0);
    const auto w = uniform_values(rng, q.size(), -2.0, 2.0);
    const double b = uniform_values(rng, 1, -1.0, 1.0)[0];

    const AdditiveNeuron a(q, w, b);
    const double direct = additive_forward(a, x);
    const auto lv = log_domain_forward(a, x);
    ASSERT_TRUE(lv.value());
    // Cancellation in the sum limits agreement to the scale of the largest term.
    double scale = std::abs(b);
    for (std::size_t i = 0; i < q.size(); ++i) scale = std::max(scale, std::abs(effective_weight(w[i], q.real(i)) * x[i]));
    ASSERT_LE(std::abs(*lv.value() - direct), 1e-12 * std::max(scale, 1e-300) * static_cast<double>(q.size() + 1));

    std::vector<Rational> k(q.size());
    for (auto& v : k) v = Rational(kd(rng));
    const MultiplicativeNeuron m(q, w, k, b);
    const double md = multiplicative_forward(m, x);
    const auto ml = log_domain_forward(m, x);
    ASSERT_TRUE(ml.value());
    ASSERT_LE(std::abs(*ml.value() - md), 1e-12 * std::max({std::abs(md), std::abs(md - b), std::abs(b), 1e-300}));
  }
}

TEST(NnProperties, BlockLayerEqualsDense) {
  std::mt19937_64 rng(26);
  for (int t = 0; t < 1000; ++t) {
    const auto in = GradingVector::parse(t % 2 ? "1,1,2,3,3" : "2,4,6,10");
    const auto out = GradingVector::parse(t % 2 ? "1,2,2,3" : "2,4,4,6,10");
    const auto blocks = grade_blocks_for(in, out);
    auto w = uniform_values(rng, in.size() * out.size(), -1.0, 1.0);
    for (std::size_t j = 0; j < out.size(); ++j) {
      for (std::size_t i = 0; i < in.size(); ++i) {
        if (!(out[j] == in[i])) w[j * in.size() + i] = 0.0;
      }
    }
    const auto b = uniform_values(rng, out.size(), -1.0, 1.0);
    const auto act = t % 3 == 0 ? Activation::GradedRelu : (t % 3 == 1 ? Activation::GradedExp : Activation::Identity);
    const Layer dense(in, out, w, b, act);
    const Layer blocked(in, out, w, b, act, blocks);
    const auto x = random_vector(rng, in);
    const auto yd = layer_forward(dense, x), yb = layer_forward(blocked, x);
    for (std::size_t j = 0; j < out.size(); ++j) ASSERT_EQ(yd[j], yb[j]);
  }
}
