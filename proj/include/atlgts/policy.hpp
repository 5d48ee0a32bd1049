#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>

#include "atlgts/engine.hpp"
#include "atlgts/semantics.hpp"

namespace atlgts {

/// Semantics kind whose truth sets match a game mode.
SemanticsKind semantics_for(const GameMode& mode);

/// Labels for the active embedded game of a session on a finite model.
struct ContextLabels {
  EmbeddedGameSpec spec;
  LabelMap controller;
  LabelMap opponent;
};

/// Empty when the session is not inside an embedded game. Throws
/// std::invalid_argument on lazy arenas.
std::optional<ContextLabels> context_labels(const Session& s);

/// Label-driven optimal play on finite models: true disjuncts, forcing
/// one-step moves, canonical controller with canonical timer, and the
/// full / n- / infinity-canonical non-controller strategy for bounded /
/// finitely bounded / unbounded play.
class CanonicalPolicy final : public Policy {
 public:
  std::string name() const override { return "canonical"; }
  Move choose(const Session& s, const Menu& menu) override;

 private:
  struct Context {
    EmbeddedGameSpec spec;
    LabelMap labels;
    LabelMap opponent_labels;
    ControllerStrategy controller;
    std::map<std::size_t, NonControllerStrategy> noncontroller;  // keyed by n; Full/Infinity under 0
  };
  std::string truth_key_;
  std::optional<TruthMap> truth_;
  std::map<std::string, Context> contexts_;

  const TruthMap& truth(const Session& s);
  Context& context(const Session& s);
  const NonControllerStrategy& noncontroller(const Session& s, Context& c);
};

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}
  std::string name() const override { return "random"; }
  Move choose(const Session& s, const Menu& menu) override;
  bool scripted() const override { return true; }

 private:
  std::mt19937_64 rng_;
};

/// Random ordinal strictly below `bound` (bound > 0); small finite parts.
Ordinal sample_below(const Ordinal& bound, std::mt19937_64& rng);

/// Named plays on the fig2 lazy model.
///   fig2-abelard          at q0 pick the natural Eloise announced (0 before any announcement)
///   fig2-abelard:<n>      at q0 pick n
///   fig2-eloise:<n>       announce n, end as soon as p holds
///   fig2-eloise-diagonal  at q0 announce w (0 when only finite limits are allowed);
///                         at (i,j) announce or lower to i-j; end as soon as p holds
///   fig2-eloise-omega     same as fig2-eloise-diagonal
class ScriptedPolicy final : public Policy {
 public:
  explicit ScriptedPolicy(std::string script);
  std::string name() const override { return script_; }
  Move choose(const Session& s, const Menu& menu) override;
  bool scripted() const override { return true; }

 private:
  std::string script_;
  enum class Kind { AbelardAnswer, AbelardFixed, EloiseFixed, EloiseDiagonal } kind_;
  std::uint64_t n_ = 0;
};

/// "canonical", "random" (uses seed), or a script name.
std::shared_ptr<Policy> make_policy(const std::string& name, std::uint64_t seed = 0);

}  // namespace atlgts
