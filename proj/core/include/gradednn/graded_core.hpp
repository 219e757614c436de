#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gradednn/rational.hpp"

namespace gnn {

/// Ordered tuple of strictly positive rational grades. Defines the scalar
/// action lambda * x = (lambda^{q_0} x_0, ..., lambda^{q_{n-1}} x_{n-1}).
///
/// Immutable and cheap to copy; copies share storage.
class GradingVector {
 public:
  explicit GradingVector(std::vector<Rational> grades);

  /// Parses a comma-separated list of rationals, e.g. "2,4,6,10" or "1/2,1/3".
  static GradingVector parse(std::string_view text);
  static GradingVector uniform(std::size_t n, Rational grade = 1);

  std::size_t size() const { return data_->grades.size(); }
  const Rational& operator[](std::size_t i) const { return data_->grades[i]; }
  double real(std::size_t i) const { return data_->reals[i]; }

  std::span<const Rational> grades() const { return data_->grades; }
  std::span<const double> reals() const { return data_->reals; }

  /// Distinct grades in ascending order.
  std::span<const Rational> distinct() const { return data_->distinct; }
  bool all_integer() const;
  Rational max_grade() const { return data_->distinct.back(); }

  std::string to_string() const;

  friend bool operator==(const GradingVector& a, const GradingVector& b) {
    return a.data_ == b.data_ || a.data_->grades == b.data_->grades;
  }

 private:
  struct Data {
    std::vector<Rational> grades;
    std::vector<double> reals;
    std::vector<Rational> distinct;
  };
  std::shared_ptr<const Data> data_;
};

/// Real coordinate vector bound to a grading.
class GradedVector {
 public:
  GradedVector(GradingVector grading, std::vector<double> values);
  static GradedVector zeros(GradingVector grading);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  const GradingVector& grading() const { return grading_; }

  bool is_finite() const;

 private:
  GradingVector grading_;
  std::vector<double> values_;
};

/// Dense rows x cols matrix with a grading on its rows (codomain) and
/// columns (domain). Entries are row-major.
class GradedMatrix {
 public:
  GradedMatrix(GradingVector row_grading, GradingVector col_grading, std::vector<double> entries);

  std::size_t rows() const { return row_grading_.size(); }
  std::size_t cols() const { return col_grading_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols() + j]; }

  const GradingVector& row_grading() const { return row_grading_; }
  const GradingVector& col_grading() const { return col_grading_; }
  std::span<const double> entries() const { return entries_; }

 private:
  GradingVector row_grading_;
  GradingVector col_grading_;
  std::vector<double> entries_;
};

/// Throws ShapeError when the two vectors do not share a grading.
void require_same_grading(const GradedVector& a, const GradedVector& b, std::string_view what);

/// lambda * x, coordinate-wise lambda^{q_i} x_i. Requires lambda > 0.
GradedVector scalar_action(double lambda, const GradedVector& x);

/// (sum_i q_i |x_i|^2)^{1/2}
double graded_euclidean_norm(const GradedVector& x);

/// max_i q_i^{1/2} |x_i|
double max_graded_norm(const GradedVector& x);

/// How the homogeneous norm assigns exponents to grade groups.
///
/// ByMaxGrade: r is the largest grade (all grades must be integers); the
/// group of grade g gets exponent 2r/g and the outer root is 1/(2r), which
/// makes the norm 1-homogeneous under t * x for t > 0.
///
/// ByDistinctCount: r is the number of distinct grades; the j-th group in
/// ascending grade order (j = 1..r) gets exponent 2r - 2(j-1), outer root 1/(2r).
enum class HomogeneousScheme { ByMaxGrade, ByDistinctCount };

std::string_view to_string(HomogeneousScheme scheme);
HomogeneousScheme parse_homogeneous_scheme(std::string_view text);

/// Per-group exponents (aligned with grading.distinct()) and the outer exponent.
struct HomogeneousExponents {
  std::vector<double> group;
  double outer = 2.0;
};

HomogeneousExponents homogeneous_exponents(const GradingVector& grading, HomogeneousScheme scheme);

/// Euclidean norm of each grade group, aligned with grading.distinct().
std::vector<double> group_norms(const GradedVector& x);

/// (sum_j ||x_{d_j}||^{e_j})^{1/E}
double homogeneous_norm(const GradedVector& x, HomogeneousScheme scheme);

struct HomogeneousComponent {
  Rational grade;
  GradedVector component;
};

/// Splits x into one component per distinct grade (ascending). Components
/// have disjoint support and sum to x exactly.
std::vector<HomogeneousComponent> decompose(const GradedVector& x);

struct VandermondeSolution {
  std::vector<double> coefficients;
  /// 1-norm condition estimate of the generalized Vandermonde matrix.
  double condition = 1.0;
};

/// Solves sum_j c_j lambda_j^{g_k} = [g_k == target] over the distinct grades g_k.
VandermondeSolution solve_vandermonde(std::span<const Rational> grades, const Rational& target,
                                      std::span<const double> lambdas);

inline constexpr double kVandermondeConditionWarning = 1e12;

/// Recovers the grade-`target` component of x as sum_j c_j (lambda_j * x).
/// Writes a warning to std::clog when the system condition exceeds 1e12.
GradedVector vandermonde_project(const GradedVector& x, const Rational& target,
                                 std::span<const double> lambdas);

/// Grading on the tensor product: entry i*m + j is q_i + r_j.
GradingVector tensor_grading(const GradingVector& q, const GradingVector& r);

/// Grades of the dual basis, -q_i. Signed, so not a GradingVector.
std::vector<Rational> dual_grading(std::span<const Rational> q);

struct DegreeInference {
  /// Unique d with r_i = q_j + d on every nonzero entry. Zero matrix gives 0.
  std::optional<Rational> degree;
  /// Nonzero entries whose implied degree disagrees with the first one seen.
  std::vector<std::pair<std::size_t, std::size_t>> conflicts;
};

DegreeInference infer_map_degree(const GradedMatrix& a);

}  // namespace gnn
