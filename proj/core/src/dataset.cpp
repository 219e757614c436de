#include "gradednn/dataset.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "gradednn/errors.hpp"
#include "gradednn/graded_nn.hpp"

namespace gnn {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void Dataset::validate() const {
  if (inputs.size() != targets.size()) throw ShapeError("dataset has different input and target counts");
  for (std::size_t s = 1; s < inputs.size(); ++s) {
    if (!(inputs[s].grading() == inputs[0].grading())) throw ShapeError("dataset inputs do not share a grading");
    if (!(targets[s].grading() == targets[0].grading())) throw ShapeError("dataset targets do not share a grading");
  }
}

double monomial_value(std::span<const double> x, std::span<const Rational> exponents, double coefficient) {
  double v = coefficient;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (exponents[i].is_zero()) continue;
    const double k = exponents[i].to_double();
    double s = 1.0;
    if (exponents[i].is_integer()) {
      if (x[i] < 0.0 && exponents[i].num() % 2 != 0) s = -1.0;
    } else if (!(x[i] > 0.0)) {
      throw DomainError("monomial with non-integer exponent needs positive coordinates");
    }
    v *= s * std::pow(std::abs(x[i]), k);
  }
  return v;
}

namespace {

void check_box(const Box& box, std::size_t n) {
  if (box.lo.size() != n || box.hi.size() != n) throw ConfigError("sampling box does not match grading length");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(box.lo[i] < box.hi[i]) || !std::isfinite(box.lo[i]) || !std::isfinite(box.hi[i])) {
      throw ConfigError("sampling box has an empty or non-finite interval at coordinate " + std::to_string(i));
    }
  }
}

std::vector<GradedVector> sample_box(const GradingVector& grading, const Box& box, std::size_t count,
                                     std::mt19937_64& rng) {
  std::vector<std::uniform_real_distribution<double>> dists;
  for (std::size_t i = 0; i < grading.size(); ++i) dists.emplace_back(box.lo[i], box.hi[i]);
  std::vector<GradedVector> xs;
  xs.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<double> v(grading.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = dists[i](rng);
    xs.emplace_back(grading, std::move(v));
  }
  return xs;
}

}  // namespace

Dataset gen_monomial_dataset(const GradingVector& grading, std::span<const Rational> exponents, double coefficient,
                             const Box& box, std::size_t count, std::uint64_t seed) {
  if (exponents.size() != grading.size()) throw ConfigError("monomial exponents do not match grading length");
  check_box(box, grading.size());
  Rational degree(0);
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < Rational(0)) throw ConfigError("monomial exponents must be nonnegative");
    if (!exponents[i].is_integer() && !exponents[i].is_zero() && !(box.lo[i] > 0.0)) {
      throw ConfigError("non-integer exponent at coordinate " + std::to_string(i) + " needs a box inside x > 0");
    }
    degree = degree + grading[i] * exponents[i];
  }
  const GradingVector out_grading({degree.is_positive() ? degree : Rational(1)});
  std::mt19937_64 rng(seed);
  Dataset data;
  data.inputs = sample_box(grading, box, count, rng);
  for (const auto& x : data.inputs) {
    data.targets.emplace_back(out_grading, std::vector<double>{monomial_value(x.values(), exponents, coefficient)});
  }
  std::ostringstream note;
  note << "monomial c=" << coefficient << " q=" << grading.to_string() << " degree=" << degree << " seed=" << seed;
  data.provenance = note.str();
  return data;
}

Dataset gen_graded_linear_dataset(const GradingVector& grading, const Box& box, std::size_t count,
                                  std::uint64_t seed) {
  check_box(box, grading.size());
  std::mt19937_64 rng(seed);
  const auto blocks = grade_blocks_for(grading, grading);
  std::vector<double> weights(grading.size() * grading.size(), 0.0);
  std::uniform_real_distribution<double> wdist(0.2, 0.9), bdist(-0.5, 0.5);
  for (const auto& blk : blocks) {
    for (std::size_t j = blk.row_begin; j < blk.row_end; ++j) {
      for (std::size_t i = blk.col_begin; i < blk.col_end; ++i) weights[j * grading.size() + i] = wdist(rng);
    }
  }
  std::vector<double> bias(grading.size());
  for (auto& b : bias) b = bdist(rng);
  const Layer teacher(grading, grading, std::move(weights), std::move(bias), Activation::Identity, blocks);

  Dataset data;
  data.inputs = sample_box(grading, box, count, rng);
  for (const auto& x : data.inputs) data.targets.push_back(layer_forward(teacher, x));
  data.provenance = "graded_linear teacher q=" + grading.to_string() + " seed=" + std::to_string(seed);
  return data;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  data.validate();
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write dataset '" + path.string() + "'");
  const std::size_t n = data.inputs.empty() ? 0 : data.inputs[0].size();
  const std::size_t m = data.targets.empty() ? 0 : data.targets[0].size();
  for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << 'x' << i;
  for (std::size_t j = 0; j < m; ++j) out << ',' << 'y' << j;
  out << '\n' << std::setprecision(17);
  for (std::size_t s = 0; s < data.size(); ++s) {
    for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << data.inputs[s][i];
    for (std::size_t j = 0; j < m; ++j) out << ',' << data.targets[s][j];
    out << '\n';
  }
  if (!out) throw ConfigError("failed writing dataset '" + path.string() + "'");
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  return cells;
}

}  // namespace

Dataset read_csv(const std::filesystem::path& path, const GradingVector& input_grading,
                 const GradingVector& target_grading) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read dataset '" + path.string() + "'");
  const std::size_t n = input_grading.size();
  const std::size_t m = target_grading.size();
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("dataset '" + path.string() + "' is empty");
  const auto header = split_row(line);
  if (header.size() != n + m) {
    throw ConfigError("dataset '" + path.string() + "' has " + std::to_string(header.size()) +
                      " columns, gradings need " + std::to_string(n + m));
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string want = c < n ? "x" + std::to_string(c) : "y" + std::to_string(c - n);
    if (header[c] != want) throw ConfigError("dataset column " + std::to_string(c) + " is '" + header[c] + "', expected '" + want + "'");
  }
  Dataset data;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_row(line);
    if (cells.size() != n + m) throw ConfigError("dataset row " + std::to_string(row) + " has wrong column count");
    std::vector<double> x(n), y(m);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cells[c], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cells[c].size()) {
        throw ConfigError("dataset row " + std::to_string(row) + " has a non-numeric cell '" + cells[c] + "'");
      }
      (c < n ? x[c] : y[c - n]) = v;
    }
    data.inputs.emplace_back(input_grading, std::move(x));
    data.targets.emplace_back(target_grading, std::move(y));
  }
  data.provenance = "csv:" + path.string();
  return data;
}

}  // namespace gnn
