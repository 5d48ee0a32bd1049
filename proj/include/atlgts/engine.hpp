#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "atlgts/formula.hpp"
#include "atlgts/model.hpp"
#include "atlgts/ordinal.hpp"
#include "atlgts/solver.hpp"

namespace atlgts {

struct GameMode {
  enum class Kind { Unbounded, Bounded, FinitelyBounded };
  Kind kind = Kind::Unbounded;
  /// Bounded: exclusive bound on announcements. FinitelyBounded: always w.
  Ordinal gamma;

  static GameMode unbounded() { return {Kind::Unbounded, Ordinal()}; }
  static GameMode bounded(Ordinal gamma) { return {Kind::Bounded, std::move(gamma)}; }
  static GameMode finitely_bounded() { return {Kind::FinitelyBounded, Ordinal::omega()}; }
  bool timed() const { return kind != Kind::Unbounded; }
  std::string name() const;
};

struct Move {
  enum class Kind { Left, Right, EndNow, Continue, Actions, Limit };
  Kind kind = Kind::Continue;
  std::vector<std::string> actions;  // Actions: one name per agent of the menu
  Ordinal limit;                     // Limit

  static Move left() { return {Kind::Left, {}, {}}; }
  static Move right() { return {Kind::Right, {}, {}}; }
  static Move end_now() { return {Kind::EndNow, {}, {}}; }
  static Move cont() { return {Kind::Continue, {}, {}}; }
  static Move with_actions(std::vector<std::string> a) { return {Kind::Actions, std::move(a), {}}; }
  static Move with_limit(Ordinal o) { return {Kind::Limit, {}, std::move(o)}; }

  std::string to_string() const;
  nlohmann::json to_json() const;
  /// Accepts "Left", "Right", "EndNow", "Continue", {"actions": [...]}, {"limit": "w+1"}.
  static Move from_json(const nlohmann::json& j);
  bool operator==(const Move&) const = default;
};

enum class Stage { AtPosition, AnnounceLimit, ControllerEnd, OpponentEnd, VerifierMove, FalsifierMove, LowerLimit, Ended };
const char* to_string(Stage s);

/// The embedded game g(V, C, A, q, psi_C, psi_notC) currently being played.
struct EmbeddedContext {
  Player verifier = Player::E;
  Player controller = Player::E;
  Formula formula = Formula::top();  // the U or R formula that opened the game
  std::optional<Ordinal> announced;
  std::size_t rounds = 0;

  const AgentSet& coalition() const { return formula.coalition(); }
  /// psi_C: theta, the right operand.
  const Formula& controller_goal() const { return formula.rhs(); }
  /// psi_notC: psi, the left operand.
  const Formula& opponent_goal() const { return formula.lhs(); }
};

struct Phase {
  Stage stage = Stage::AtPosition;
  /// Evaluation-game position (P, q, formula). Inside an embedded game
  /// `formula` is the U/R formula and `verifier` its V.
  Player verifier = Player::E;
  std::string state;
  Formula formula = Formula::top();
  std::optional<EmbeddedContext> embedded;
  Ordinal limit;                     // timed embedded games
  std::vector<std::string> pending;  // verifier's coalition actions during FalsifierMove
  std::optional<Player> winner;
  std::string reason;
};

struct Menu {
  enum class Kind { Disjunct, EndOffer, Actions, Limit };
  Player actor = Player::E;
  Kind kind = Kind::Disjunct;
  std::vector<AgentId> agents;        // Actions
  std::vector<ActionDomain> domains;  // Actions, parallel to agents
  Ordinal bound;                      // Limit: choices are < bound
  bool finite_only = false;           // Limit

  bool contains(const Move& m) const;
  nlohmann::json to_json() const;
};

struct TranscriptEntry {
  Stage stage;
  std::string actor;  // "E", "A", or "auto" for forced transitions
  Move move;
  std::string state;
  std::optional<Ordinal> limit;
  std::string formula;
};

struct Transcript {
  std::vector<TranscriptEntry> moves;
  std::optional<Player> winner;
  std::string reason;
  nlohmann::json to_json() const;
};

class IllegalMove : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Session;

/// Machine player. `choose` is only called when the menu's actor is the
/// policy's player.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual Move choose(const Session& s, const Menu& menu) = 0;
  /// Whether the policy can play without solver data (lazy arenas).
  virtual bool scripted() const { return false; }
};

struct Role {
  std::shared_ptr<Policy> machine;  // empty for a human
  bool is_human() const { return !machine; }
  static Role human() { return {}; }
  static Role of(std::shared_ptr<Policy> p) { return {std::move(p)}; }
};

class Session {
 public:
  /// Throws std::invalid_argument for unknown states, zero bounds, or lazy
  /// arenas played by non-scripted machines.
  Session(std::shared_ptr<const Arena> arena, std::string state, Formula root, GameMode mode,
          std::map<Player, Role> roles = {});

  const Arena& arena() const { return *arena_; }
  std::shared_ptr<const Arena> arena_ptr() const { return arena_; }
  /// The finite model behind the arena, or nullptr for lazy arenas.
  const Model* model() const;
  const Formula& root() const { return root_; }
  const std::string& initial_state() const { return initial_; }
  const GameMode& mode() const { return mode_; }
  const Phase& phase() const { return phase_; }
  const Transcript& transcript() const { return transcript_; }
  std::uint64_t version() const { return version_; }
  bool ended() const { return phase_.stage == Stage::Ended; }
  const Role& role(Player p) const;

  /// Empty once the game has ended.
  std::optional<Menu> menu() const;
  bool machine_pending() const;

  void apply(Player actor, const Move& m);
  /// Plays one move for the pending machine player; false if the pending
  /// actor is human or the game has ended.
  bool step_machine();
  /// Plays machine moves until termination, a human turn, or `budget` moves.
  /// Exhausting the budget inside an unbounded embedded game ends it as a
  /// loss for the controller.
  const Transcript& run_machine(std::size_t budget = 10000);

  nlohmann::json view() const;

 private:
  std::shared_ptr<const Arena> arena_;
  std::string initial_;
  Formula root_;
  GameMode mode_;
  std::map<Player, Role> roles_;
  Phase phase_;
  Transcript transcript_;
  std::uint64_t version_ = 0;
  std::optional<std::string> exit_reason_;

  Player mover() const;
  void record(const std::string& actor, const Move& m);
  void settle();
  void enter_position(Player p, std::string state, Formula f);
  void start_round();
  void exit_to(Player p, const Formula& f, const char* reason);
  void finish(Player winner, std::string reason);
  void take_step(const std::vector<std::string>& complement_actions);
};

GameMode parse_mode(const std::string& name, const std::optional<std::string>& gamma, bool finite_arena,
                    const Ordinal& auto_gamma);

}  // namespace atlgts
