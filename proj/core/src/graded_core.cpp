#include "gradednn/graded_core.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "gradednn/errors.hpp"

namespace gnn {

GradingVector::GradingVector(std::vector<Rational> grades) {
  if (grades.empty()) throw DomainError("grading must have at least one coordinate");
  auto data = std::make_shared<Data>();
  data->reals.reserve(grades.size());
  for (const auto& g : grades) {
    if (!g.is_positive()) throw DomainError("grades must be strictly positive, got " + g.to_string());
    data->reals.push_back(g.to_double());
  }
  data->distinct = grades;
  std::sort(data->distinct.begin(), data->distinct.end());
  data->distinct.erase(std::unique(data->distinct.begin(), data->distinct.end()), data->distinct.end());
  data->grades = std::move(grades);
  data_ = std::move(data);
}

GradingVector GradingVector::parse(std::string_view text) {
  std::vector<Rational> grades;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    grades.push_back(Rational::parse(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  try {
    return GradingVector(std::move(grades));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid grading '") + std::string(text) + "': " + e.what());
  }
}

GradingVector GradingVector::uniform(std::size_t n, Rational grade) {
  return GradingVector(std::vector<Rational>(n, grade));
}

bool GradingVector::all_integer() const {
  return std::all_of(data_->grades.begin(), data_->grades.end(), [](const Rational& g) { return g.is_integer(); });
}

std::string GradingVector::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) out += ',';
    out += (*this)[i].to_string();
  }
  return out;
}

GradedVector::GradedVector(GradingVector grading, std::vector<double> values)
    : grading_(std::move(grading)), values_(std::move(values)) {
  if (values_.size() != grading_.size()) {
    throw ShapeError("vector of length " + std::to_string(values_.size()) + " does not match grading of length " +
                     std::to_string(grading_.size()));
  }
}

GradedVector GradedVector::zeros(GradingVector grading) {
  const auto n = grading.size();
  return GradedVector(std::move(grading), std::vector<double>(n, 0.0));
}

bool GradedVector::is_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

GradedMatrix::GradedMatrix(GradingVector row_grading, GradingVector col_grading, std::vector<double> entries)
    : row_grading_(std::move(row_grading)), col_grading_(std::move(col_grading)), entries_(std::move(entries)) {
  if (entries_.size() != rows() * cols()) {
    throw ShapeError("matrix has " + std::to_string(entries_.size()) + " entries, gradings imply " +
                     std::to_string(rows()) + "x" + std::to_string(cols()));
  }
}

void require_same_grading(const GradedVector& a, const GradedVector& b, std::string_view what) {
  if (!(a.grading() == b.grading())) {
    throw ShapeError(std::string(what) + ": gradings differ (" + a.grading().to_string() + " vs " +
                     b.grading().to_string() + ")");
  }
}

GradedVector scalar_action(double lambda, const GradedVector& x) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("scalar action requires a finite lambda > 0");
  }
  GradedVector out = x;
  const auto q = x.grading().reals();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::pow(lambda, q[i]) * x[i];
  return out;
}

double graded_euclidean_norm(const GradedVector& x) {
  const auto q = x.grading().reals();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += q[i] * x[i] * x[i];
  return std::sqrt(sum);
}

double max_graded_norm(const GradedVector& x) {
  const auto q = x.grading().reals();
  double best = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) best = std::max(best, std::sqrt(q[i]) * std::abs(x[i]));
  return best;
}

std::string_view to_string(HomogeneousScheme scheme) {
  return scheme == HomogeneousScheme::ByMaxGrade ? "max_grade" : "distinct_count";
}

HomogeneousScheme parse_homogeneous_scheme(std::string_view text) {
  if (text == "max_grade" || text == "ByMaxGrade") return HomogeneousScheme::ByMaxGrade;
  if (text == "distinct_count" || text == "ByDistinctCount") return HomogeneousScheme::ByDistinctCount;
  throw ConfigError("unknown homogeneous scheme '" + std::string(text) + "'");
}

HomogeneousExponents homogeneous_exponents(const GradingVector& grading, HomogeneousScheme scheme) {
  const auto distinct = grading.distinct();
  HomogeneousExponents ex;
  ex.group.reserve(distinct.size());
  if (scheme == HomogeneousScheme::ByMaxGrade) {
    if (!grading.all_integer()) {
      throw DomainError("max-grade homogeneous norm needs integer grades, got " + grading.to_string());
    }
    const double r = grading.max_grade().to_double();
    ex.outer = 2.0 * r;
    for (const auto& g : distinct) ex.group.push_back(2.0 * r / g.to_double());
  } else {
    const double r = static_cast<double>(distinct.size());
    ex.outer = 2.0 * r;
    for (std::size_t j = 0; j < distinct.size(); ++j) ex.group.push_back(2.0 * r - 2.0 * static_cast<double>(j));
  }
  return ex;
}

std::vector<double> group_norms(const GradedVector& x) {
  const auto distinct = x.grading().distinct();
  std::vector<double> sq(distinct.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto j = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), x.grading()[i]) -
                                            distinct.begin());
    sq[j] += x[i] * x[i];
  }
  for (auto& s : sq) s = std::sqrt(s);
  return sq;
}

double homogeneous_norm(const GradedVector& x, HomogeneousScheme scheme) {
  const auto ex = homogeneous_exponents(x.grading(), scheme);
  const auto norms = group_norms(x);
  double sum = 0.0;
  for (std::size_t j = 0; j < norms.size(); ++j) sum += std::pow(norms[j], ex.group[j]);
  return std::pow(sum, 1.0 / ex.outer);
}

std::vector<HomogeneousComponent> decompose(const GradedVector& x) {
  std::vector<HomogeneousComponent> parts;
  for (const auto& g : x.grading().distinct()) {
    GradedVector comp = GradedVector::zeros(x.grading());
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x.grading()[i] == g) comp[i] = x[i];
    }
    parts.push_back({g, std::move(comp)});
  }
  return parts;
}

namespace {

// Partial-pivoted Gaussian elimination; a is n x n row-major and is consumed.
std::vector<double> gauss_solve(std::vector<double> a, std::vector<double> b, std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (a[pivot * n + col] == 0.0) throw IllPosedSystem("singular Vandermonde system");
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i * n + k] * x[k];
    x[i] = s / a[i * n + i];
  }
  return x;
}

}  // namespace

VandermondeSolution solve_vandermonde(std::span<const Rational> grades, const Rational& target,
                                      std::span<const double> lambdas) {
  const std::size_t n = grades.size();
  if (lambdas.size() != n) {
    throw IllPosedSystem("need one lambda per distinct grade: " + std::to_string(n) + " grades, " +
                         std::to_string(lambdas.size()) + " lambdas");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!(lambdas[j] > 0.0) || !std::isfinite(lambdas[j])) throw IllPosedSystem("lambdas must be finite and positive");
    for (std::size_t k = 0; k < j; ++k) {
      if (lambdas[k] == lambdas[j]) throw IllPosedSystem("repeated lambda in Vandermonde system");
    }
  }
  const auto it = std::find(grades.begin(), grades.end(), target);
  if (it == grades.end()) throw DomainError("target grade " + target.to_string() + " not present in grading");
  const auto target_row = static_cast<std::size_t>(it - grades.begin());

  // Row k: lambda_j^{g_k} over columns j.
  std::vector<double> m(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) m[k * n + j] = std::pow(lambdas[j], grades[k].to_double());
  }

  VandermondeSolution sol;
  std::vector<double> rhs(n, 0.0);
  rhs[target_row] = 1.0;
  sol.coefficients = gauss_solve(m, rhs, n);

  // ||M||_1 * ||M^{-1}||_1 via all unit right-hand sides; n is the number of distinct grades.
  double norm_m = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t k = 0; k < n; ++k) col += std::abs(m[k * n + j]);
    norm_m = std::max(norm_m, col);
  }
  double norm_inv = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    std::vector<double> unit(n, 0.0);
    unit[e] = 1.0;
    const auto col = gauss_solve(m, unit, n);
    double s = 0.0;
    for (double v : col) s += std::abs(v);
    norm_inv = std::max(norm_inv, s);
  }
  sol.condition = norm_m * norm_inv;
  return sol;
}

GradedVector vandermonde_project(const GradedVector& x, const Rational& target, std::span<const double> lambdas) {
  const auto sol = solve_vandermonde(x.grading().distinct(), target, lambdas);
  if (sol.condition > kVandermondeConditionWarning) {
    std::clog << "warning: Vandermonde system condition " << sol.condition << " exceeds "
              << kVandermondeConditionWarning << "; projection may be inaccurate\n";
  }
  GradedVector out = GradedVector::zeros(x.grading());
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    const auto scaled = scalar_action(lambdas[j], x);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += sol.coefficients[j] * scaled[i];
  }
  return out;
}

GradingVector tensor_grading(const GradingVector& q, const GradingVector& r) {
  std::vector<Rational> out;
  out.reserve(q.size() * r.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = 0; j < r.size(); ++j) out.push_back(q[i] + r[j]);
  }
  return GradingVector(std::move(out));
}

std::vector<Rational> dual_grading(std::span<const Rational> q) {
  std::vector<Rational> out;
  out.reserve(q.size());
  for (const auto& g : q) out.push_back(-g);
  return out;
}

DegreeInference infer_map_degree(const GradedMatrix& a) {
  DegreeInference result;
  std::optional<Rational> first;
  std::pair<std::size_t, std::size_t> first_at{};
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) == 0.0) continue;
      const Rational d = a.row_grading()[i] - a.col_grading()[j];
      if (!first) {
        first = d;
        first_at = {i, j};
      } else if (d != *first) {
        if (result.conflicts.empty()) result.conflicts.push_back(first_at);
        result.conflicts.emplace_back(i, j);
      }
    }
  }
  if (result.conflicts.empty()) result.degree = first.value_or(Rational(0));
  return result;
}

}  // namespace gnn
