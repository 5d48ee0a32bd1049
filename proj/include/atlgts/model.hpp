#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "atlgts/formula.hpp"
#include "atlgts/ordinal.hpp"

namespace atlgts {

using StateIdx = std::uint32_t;
using StateSet = std::vector<bool>;

/// Action tuple for the agents of some coalition, in increasing agent order,
/// given as indices into each agent's action list at the state in question.
using ActionTuple = std::vector<std::uint32_t>;

class ModelError : public std::runtime_error {
 public:
  explicit ModelError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Finite concurrent game model. States and actions are interned: a state is
/// an index into state_names(), an action an index into actions(agent, state).
class Model {
 public:
  class Builder;

  std::size_t agent_count() const { return agents_; }
  std::size_t state_count() const { return names_.size(); }
  const std::vector<std::string>& state_names() const { return names_; }
  const std::string& state_name(StateIdx q) const { return names_.at(q); }
  std::optional<StateIdx> find_state(std::string_view name) const;
  /// Throws ModelError for unknown names.
  StateIdx state(std::string_view name) const;

  const std::vector<std::string>& props(StateIdx q) const { return props_.at(q); }
  bool holds(StateIdx q, std::string_view prop) const;
  const std::vector<std::string>& actions(AgentId agent, StateIdx q) const;

  /// Number of full action profiles at q.
  std::size_t profile_count(StateIdx q) const { return succ_.at(q).size(); }
  /// Successor for a full profile (one action index per agent, agent order).
  StateIdx successor(StateIdx q, const ActionTuple& profile) const;
  /// Successor by profile ordinal (lexicographic over agents 1..k).
  StateIdx successor(StateIdx q, std::size_t profile_ordinal) const { return succ_.at(q).at(profile_ordinal); }
  std::size_t profile_ordinal(StateIdx q, const ActionTuple& profile) const;
  ActionTuple profile_at(StateIdx q, std::size_t profile_ordinal) const;
  std::string profile_key(StateIdx q, const ActionTuple& profile) const;

  /// All tuples of action indices for the given coalition at q, in
  /// lexicographic order.
  std::vector<ActionTuple> tuples(const AgentSet& coalition, StateIdx q) const;
  /// Combines a coalition tuple and a complement tuple into a full profile.
  ActionTuple merge(const AgentSet& coalition, const ActionTuple& own, const ActionTuple& rest) const;

  bool operator==(const Model&) const = default;

 private:
  std::size_t agents_ = 0;
  std::vector<std::string> names_;
  std::unordered_map<std::string, StateIdx> index_;
  std::vector<std::vector<std::string>> props_;
  std::vector<std::vector<std::vector<std::string>>> actions_;  // [state][agent-1]
  std::vector<std::vector<StateIdx>> succ_;                     // [state][profile ordinal]
};

/// Incremental construction with the same validation as load_model().
class Model::Builder {
 public:
  explicit Builder(std::size_t agents);
  StateIdx add_state(std::string name, std::vector<std::string> props = {});
  void set_actions(std::string_view state, AgentId agent, std::vector<std::string> actions);
  /// profile: one action name per agent.
  void set_transition(std::string_view state, const std::vector<std::string>& profile, std::string_view target);
  /// Sets every profile at `state` to go to `target`.
  void set_all_transitions(std::string_view state, std::string_view target);
  Model build() const;

 private:
  std::size_t agents_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> props_;
  std::vector<std::vector<std::vector<std::string>>> actions_;
  std::vector<std::unordered_map<std::string, std::string>> transitions_;
};

Model load_model(std::string_view bytes);
Model load_model_file(const std::string& path);
std::string save_model(const Model& m);

std::size_t branching_degree(const Model& m, StateIdx q);
Ordinal stable_bound(const Model& m);

struct BranchingReport {
  std::vector<std::size_t> degree;
  bool image_finite = true;
  Ordinal stable_bound;
};
BranchingReport branching_report(const Model& m);

/// Single-agent chain q0 -> ... -> qn, p exactly at qn, self-loop at qn.
Model line_model(std::size_t n);
/// Six-state truncation of the infinite line: q0..q5, p only at q3, q5 loops.
Model fig3_truncation();

// ---------------------------------------------------------------------------
// Arenas: the interface the game engine plays on. Finite models are adapted;
// lazy models generate states on demand and may have infinite action sets.

struct ActionDomain {
  bool all_naturals = false;
  std::vector<std::string> finite;

  bool contains(std::string_view action) const;
  /// Action at position i (the numeral i for all_naturals).
  std::string at(std::size_t i) const;
};

class Arena {
 public:
  virtual ~Arena() = default;
  virtual std::size_t agent_count() const = 0;
  virtual bool is_finite() const = 0;
  virtual bool has_state(const std::string& state) const = 0;
  virtual std::vector<std::string> props(const std::string& state) const = 0;
  virtual ActionDomain actions(AgentId agent, const std::string& state) const = 0;
  /// profile: one action name per agent (agent order); actions must be legal.
  virtual std::string step(const std::string& state, const std::vector<std::string>& profile) const = 0;
};

class ModelArena final : public Arena {
 public:
  explicit ModelArena(std::shared_ptr<const Model> m) : model_(std::move(m)) {}
  const Model& model() const { return *model_; }
  std::shared_ptr<const Model> model_ptr() const { return model_; }

  std::size_t agent_count() const override { return model_->agent_count(); }
  bool is_finite() const override { return true; }
  bool has_state(const std::string& state) const override { return model_->find_state(state).has_value(); }
  std::vector<std::string> props(const std::string& state) const override;
  ActionDomain actions(AgentId agent, const std::string& state) const override;
  std::string step(const std::string& state, const std::vector<std::string>& profile) const override;

 private:
  std::shared_ptr<const Model> model_;
};

/// Code-defined, possibly infinite model.
class LazyModel : public Arena {
 public:
  virtual std::string name() const = 0;
  virtual std::string initial() const = 0;
  bool is_finite() const override { return false; }
};

/// The model with states q0 and (i,j) for naturals i,j: the single agent picks
/// any natural i at q0 to go to (i,0); from (i,j) the only action 0 leads to
/// (i,j+1); p holds exactly on the diagonal (i,i).
std::shared_ptr<const LazyModel> fig2_lazy_model();
/// Registry lookup by name; throws ModelError for unknown names.
std::shared_ptr<const LazyModel> lazy_model(std::string_view name);
std::vector<std::string> lazy_model_names();

}  // namespace atlgts
