#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atlgts/formula.hpp"
#include "atlgts/model.hpp"
#include "atlgts/ordinal.hpp"

namespace atlgts {

enum class Player { E, A };

constexpr Player opponent(Player p) { return p == Player::E ? Player::A : Player::E; }
inline const char* to_string(Player p) { return p == Player::E ? "E" : "A"; }

/// Embedded game g(V, C, A, q0, psi_C, psi_notC) reduced to the data needed for
/// solving: the two exit positions are given by the sets of states where the
/// controller wins them.
struct EmbeddedGameSpec {
  Player verifier = Player::E;
  Player controller = Player::E;
  AgentSet coalition;
  /// States where C wins the exit (V, q, psi_C).
  StateSet goal;
  /// States where C wins the exit (V, q, psi_notC).
  StateSet safe;
  const Model* model = nullptr;

  bool controller_is_verifier() const { return verifier == controller; }
};

struct Label {
  enum class Kind { Ord, Win, Lose };
  Kind kind = Kind::Lose;
  Ordinal value;

  static Label ord(Ordinal o) { return {Kind::Ord, std::move(o)}; }
  static Label win() { return {Kind::Win, {}}; }
  static Label lose() { return {Kind::Lose, {}}; }
  bool is_ord() const { return kind == Kind::Ord; }
  std::string to_string() const;
  bool operator==(const Label&) const = default;
};

struct LabelMap {
  Player perspective = Player::E;
  Ordinal gamma;
  std::vector<Label> labels;

  const Label& operator[](StateIdx q) const { return labels.at(q); }
  std::size_t size() const { return labels.size(); }
  bool operator==(const LabelMap&) const = default;
};

/// A one-step-game decision of one player: the verifier commits an action
/// tuple for the coalition; the falsifier commits a response function,
/// stored as a table indexed by the position of the coalition tuple in
/// Model::tuples(coalition, q).
struct Decision {
  bool is_response = false;
  ActionTuple profile;
  std::vector<ActionTuple> response;

  /// Complement tuple answering `own` (response decisions only).
  const ActionTuple& respond(const Model& m, const AgentSet& coalition, StateIdx q, const ActionTuple& own) const;
  bool operator==(const Decision&) const = default;
};

/// One-step force. As verifier: a coalition tuple all of whose outcomes lie
/// in `target`. Otherwise: a response table mapping each coalition tuple to a
/// complement tuple with outcome in `target`. Ties go to the
/// lexicographically least choice.
std::optional<Decision> force(const Model& m, const AgentSet& coalition, StateIdx q, const StateSet& target,
                              bool mover_is_verifier);
/// The lexicographically least legal decision ("any").
Decision any_decision(const Model& m, const AgentSet& coalition, StateIdx q, bool mover_is_verifier);
/// States reachable in one step when `d` is played at q.
StateSet forced_set(const Model& m, const AgentSet& coalition, StateIdx q, const Decision& d);

/// Controller-perspective winning time labels. Only natural labels k < gamma
/// are produced; with gamma >= w the fixpoint runs until it stabilizes.
LabelMap compute_labels(const EmbeddedGameSpec& spec, const Ordinal& gamma_bound);
/// Non-controller labels: same ordinals, lose becomes win.
LabelMap opponent_labels(const LabelMap& controller_labels);

struct ControllerChoice {
  bool end_at_goal = false;
  Decision move;
};

/// State-only canonical strategy of the controller with its canonical timer.
struct ControllerStrategy {
  LabelMap labels;
  std::vector<ControllerChoice> choice;

  /// t_can(limit, q); limit must be a limit ordinal.
  Ordinal timer(const Ordinal& limit, StateIdx q) const;
};

ControllerStrategy canonical_controller(const EmbeddedGameSpec& spec, const LabelMap& labels);

struct NonControllerChoice {
  bool end_at_own_exit = false;
  Decision move;
};

class NonControllerStrategy {
 public:
  enum class Variant { Full, N, Infinity };

  Variant variant() const { return variant_; }
  std::size_t n() const { return n_; }
  const LabelMap& labels() const { return labels_; }

  /// Full variant: choice at configuration (limit, q).
  NonControllerChoice at(const Ordinal& limit, StateIdx q) const;
  /// State-only variants (N and Infinity).
  const NonControllerChoice& at(StateIdx q) const;

 private:
  friend NonControllerStrategy canonical_noncontroller(const EmbeddedGameSpec&, const LabelMap&, Variant,
                                                       std::size_t);
  EmbeddedGameSpec spec_;
  LabelMap labels_;
  Variant variant_ = Variant::Full;
  std::size_t n_ = 0;
  std::vector<NonControllerChoice> table_;    // state-only variants
  NonControllerChoice full_choice(const Ordinal& limit, StateIdx q) const;
};

/// `labels` are the non-controller's (see opponent_labels). For Infinity,
/// labels.gamma must be a successor ordinal.
NonControllerStrategy canonical_noncontroller(const EmbeddedGameSpec& spec, const LabelMap& labels,
                                              NonControllerStrategy::Variant variant, std::size_t n = 0);

/// Winner of the unbounded embedded game started at q0, decided with labels
/// at the model's stable bound.
Player unbounded_winner(const EmbeddedGameSpec& spec, StateIdx q0);

/// Whether the controller wins G[q, limit] according to labels (controller
/// perspective): the label is an ordinal no larger than the limit.
bool controller_wins_at(const LabelMap& controller_labels, StateIdx q, const Ordinal& limit);

}  // namespace atlgts
