#pragma once

#include <string>
#include <vector>

namespace gnn {

enum class RowStatus { Pass, Fail, Flagged };

/// One worked example evaluated through the library.
struct ExampleRow {
  std::string id;
  std::string expected;  // closed form or printed value
  std::string computed;
  RowStatus status = RowStatus::Fail;
  std::string note;
};

struct VerifyReport {
  std::vector<ExampleRow> rows;

  bool ok() const;  // no Fail rows
  std::size_t count(RowStatus s) const;
  std::string format() const;
};

/// Recomputes the reference examples (norms, activations, neurons, losses,
/// gradings, the training descent example). Rows whose printed value
/// disagrees with direct evaluation are reported as Flagged with
/// the derived value, which must itself check out.
VerifyReport verify_examples();

}  // namespace gnn
