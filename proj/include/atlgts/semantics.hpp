#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atlgts/formula.hpp"
#include "atlgts/model.hpp"
#include "atlgts/ordinal.hpp"
#include "atlgts/solver.hpp"

namespace atlgts {

struct SemanticsKind {
  enum class Kind { Standard, GtsUnbounded, GtsBounded, FinitelyBounded };
  Kind kind = Kind::Standard;
  /// GtsBounded only; empty means "auto" (the model's stable bound).
  std::optional<Ordinal> gamma;

  static SemanticsKind standard() { return {Kind::Standard, std::nullopt}; }
  static SemanticsKind gts_unbounded() { return {Kind::GtsUnbounded, std::nullopt}; }
  static SemanticsKind gts_bounded(std::optional<Ordinal> gamma = std::nullopt) { return {Kind::GtsBounded, std::move(gamma)}; }
  static SemanticsKind finitely_bounded() { return {Kind::FinitelyBounded, std::nullopt}; }

  std::string name() const;
  /// Parses the CLI names: standard, gts-unbounded, gts-bounded, gts-finitely-bounded.
  static SemanticsKind parse(const std::string& name, std::optional<Ordinal> gamma = std::nullopt);
};

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truth sets for every subformula of a root formula.
struct TruthMap {
  std::vector<Formula> formulas;  // post-order, see subformulas()
  std::vector<StateSet> truth;
  /// Controller labels of the embedded game behind each U/R subformula (GTS kinds).
  std::vector<std::optional<LabelMap>> labels;

  std::size_t index_of(const Formula& f) const;
  const StateSet& of(const Formula& f) const { return truth.at(index_of(f)); }
  const StateSet& root() const { return truth.back(); }
  bool at(const Formula& f, StateIdx q) const { return of(f).at(q); }
};

/// Controllable predecessor: states where coalition A can force the next
/// state into `target` in one step.
StateSet cpre(const Model& m, const AgentSet& coalition, const StateSet& target);

/// Embedded game for the U/R formula `f` with verifier V, built from the exit
/// formulas' truth sets (`lhs_truth` for psi, `rhs_truth` for theta).
EmbeddedGameSpec embedded_spec(const Model& m, const Formula& f, Player verifier, const StateSet& lhs_truth,
                               const StateSet& rhs_truth);

TruthMap evaluate(const Model& m, const Formula& f, const SemanticsKind& kind);

class OracleGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Brute force over positional collective strategies. Refuses models with
/// more than 6 states, more than 16 profiles at some state, or more than
/// `max_strategies` collective strategies for some coalition.
TruthMap oracle_evaluate(const Model& m, const Formula& f, std::size_t max_strategies = std::size_t{1} << 20);

struct Disagreement {
  std::string formula;
  std::string state;
  std::vector<std::pair<std::string, bool>> values;  // kind name -> truth
};

struct ComparisonReport {
  std::string formula;
  std::vector<std::pair<std::string, std::vector<bool>>> per_kind;  // root truth per kind
  std::vector<Disagreement> disagreements;
  std::string to_json(const Model& m) const;
};

/// Evaluates under all four kinds and lists every (subformula, state) where
/// they differ.
ComparisonReport compare_semantics(const Model& m, const Formula& f);

struct UnfoldingReport {
  bool is_until = false;
  std::size_t max_n = 0;
  /// Per state: truth of the formula under finitely bounded semantics.
  std::vector<bool> truth;
  /// U: least n <= max_n with U^n true; G: least n with G^n false.
  std::vector<std::optional<std::size_t>> witness_n;
  std::vector<std::string> unfolding_failures;
  std::vector<std::string> axiom_failures;  // PostFP_U or PreFP_G
  bool ok() const { return unfolding_failures.empty() && axiom_failures.empty(); }
};

/// Checks the G^n / U^n characterization of finitely bounded truth for
/// n in 0..|S|+2, and PreFP_G / PostFP_U at every state. f must be
/// <<A>> (psi U theta) or <<A>> G theta (= <<A>> (false R theta)).
UnfoldingReport check_fb_unfolding(const Model& m, const Formula& f);

}  // namespace atlgts
