#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "atlgts/formula.hpp"
#include "atlgts/model.hpp"

namespace atlgts {

struct DifftestOptions {
  std::uint64_t seed = 42;
  std::size_t models = 200;
  std::size_t formulas_per_model = 5;
  /// Instances whose coalitions have more positional strategies are skipped
  /// by the oracle (the four-way check still runs).
  std::size_t oracle_max_strategies = 4096;
};

struct DifftestFailure {
  std::size_t model_index;
  std::string model_json;
  std::string formula;  // smallest disagreeing subformula
  std::string detail;
};

struct DifftestResult {
  std::size_t instances = 0;
  std::size_t oracle_checked = 0;
  std::optional<DifftestFailure> failure;
  bool ok() const { return !failure.has_value(); }
};

/// Random models and formulas from the seed; stops at the first instance
/// where the four semantics or the oracle disagree.
DifftestResult run_difftest(const DifftestOptions& opt);

void print_difftest(const DifftestOptions& opt, const DifftestResult& r, std::ostream& out);

}  // namespace atlgts
