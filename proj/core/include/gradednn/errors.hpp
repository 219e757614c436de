#pragma once

#include <stdexcept>
#include <string>

namespace gnn {

/// Dimension or grading mismatch between operands.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the set where an operation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Linear system that has no unique solution (repeated nodes, count mismatch).
class IllPosedSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration, dataset, or model file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Training produced a non-finite loss.
class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gnn
