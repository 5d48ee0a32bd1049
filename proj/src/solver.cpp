#include "atlgts/solver.hpp"

#include <stdexcept>

namespace atlgts {

namespace {

std::size_t tuple_index(const Model& m, const AgentSet& coalition, StateIdx q, const ActionTuple& t) {
  std::size_t idx = 0;
  std::size_t i = 0;
  for (AgentId a : coalition.ids()) idx = idx * m.actions(a, q).size() + t.at(i++);
  return idx;
}

void check_state(const Model& m, StateIdx q) {
  if (q >= m.state_count()) throw ModelError({"unknown state index " + std::to_string(q)});
}

}  // namespace

std::string Label::to_string() const {
  switch (kind) {
    case Kind::Ord: return value.to_string();
    case Kind::Win: return "win";
    case Kind::Lose: return "lose";
  }
  return "?";
}

const ActionTuple& Decision::respond(const Model& m, const AgentSet& coalition, StateIdx q,
                                     const ActionTuple& own) const {
  if (!is_response) throw std::logic_error("decision is not a response function");
  return response.at(tuple_index(m, coalition, q, own));
}

std::optional<Decision> force(const Model& m, const AgentSet& coalition, StateIdx q, const StateSet& target,
                              bool mover_is_verifier) {
  check_state(m, q);
  const auto rest = coalition.complement(m.agent_count());
  const auto own_tuples = m.tuples(coalition, q);
  const auto rest_tuples = m.tuples(rest, q);
  auto lands = [&](const ActionTuple& own, const ActionTuple& other) {
    return static_cast<bool>(target.at(m.successor(q, m.merge(coalition, own, other))));
  };
  if (mover_is_verifier) {
    for (const auto& own : own_tuples) {
      bool all = true;
      for (const auto& other : rest_tuples)
        if (!lands(own, other)) {
          all = false;
          break;
        }
      if (all) return Decision{false, own, {}};
    }
    return std::nullopt;
  }
  Decision d{true, {}, {}};
  for (const auto& own : own_tuples) {
    const ActionTuple* pick = nullptr;
    for (const auto& other : rest_tuples)
      if (lands(own, other)) {
        pick = &other;
        break;
      }
    if (!pick) return std::nullopt;
    d.response.push_back(*pick);
  }
  return d;
}

Decision any_decision(const Model& m, const AgentSet& coalition, StateIdx q, bool mover_is_verifier) {
  return *force(m, coalition, q, StateSet(m.state_count(), true), mover_is_verifier);
}

StateSet forced_set(const Model& m, const AgentSet& coalition, StateIdx q, const Decision& d) {
  StateSet out(m.state_count(), false);
  const auto rest = coalition.complement(m.agent_count());
  if (!d.is_response) {
    for (const auto& other : m.tuples(rest, q)) out[m.successor(q, m.merge(coalition, d.profile, other))] = true;
  } else {
    const auto own_tuples = m.tuples(coalition, q);
    for (std::size_t i = 0; i < own_tuples.size(); ++i)
      out[m.successor(q, m.merge(coalition, own_tuples[i], d.response.at(i)))] = true;
  }
  return out;
}

LabelMap compute_labels(const EmbeddedGameSpec& spec, const Ordinal& gamma_bound) {
  if (!spec.model) throw std::invalid_argument("embedded game without a model");
  if (gamma_bound.is_zero()) throw std::invalid_argument("time limit bound must be at least 1");
  const Model& m = *spec.model;
  const auto n = m.state_count();
  if (spec.goal.size() != n || spec.safe.size() != n) throw std::invalid_argument("exit sets do not match model");

  LabelMap out{spec.controller, gamma_bound, std::vector<Label>(n, Label::lose())};
  StateSet reached(n, false);
  for (StateIdx q = 0; q < n; ++q)
    if (spec.goal[q]) {
      out.labels[q] = Label::ord(0);
      reached[q] = true;
    }
  // Round k labels the states that can be forced into {L <= k-1} in one step.
  for (std::uint64_t k = 1; Ordinal(k) < gamma_bound; ++k) {
    std::vector<StateIdx> fresh;
    for (StateIdx q = 0; q < n; ++q) {
      if (reached[q] || !spec.safe[q]) continue;
      if (force(m, spec.coalition, q, reached, spec.controller_is_verifier())) fresh.push_back(q);
    }
    if (fresh.empty()) break;
    for (auto q : fresh) {
      out.labels[q] = Label::ord(k);
      reached[q] = true;
    }
  }
  return out;
}

LabelMap opponent_labels(const LabelMap& controller_labels) {
  LabelMap out = controller_labels;
  out.perspective = opponent(controller_labels.perspective);
  for (auto& l : out.labels) {
    if (l.kind == Label::Kind::Lose) l = Label::win();
    else if (l.kind == Label::Kind::Win) l = Label::lose();
  }
  return out;
}

bool controller_wins_at(const LabelMap& controller_labels, StateIdx q, const Ordinal& limit) {
  const auto& l = controller_labels[q];
  return l.is_ord() && l.value <= limit;
}

// ---------------------------------------------------------------------------

Ordinal ControllerStrategy::timer(const Ordinal& limit, StateIdx q) const {
  if (!limit.is_limit()) throw std::invalid_argument("timer is only consulted at limit ordinals");
  const auto& l = labels[q];
  if (l.is_ord() && l.value < limit) return l.value;
  return Ordinal(0);
}

ControllerStrategy canonical_controller(const EmbeddedGameSpec& spec, const LabelMap& labels) {
  const Model& m = *spec.model;
  ControllerStrategy s{labels, {}};
  const bool verifier = spec.controller_is_verifier();
  for (StateIdx q = 0; q < m.state_count(); ++q) {
    const auto& l = labels[q];
    ControllerChoice c{false, any_decision(m, spec.coalition, q, verifier)};
    if (l.is_ord() && l.value.is_zero()) {
      c.end_at_goal = true;
    } else if (l.is_ord()) {
      StateSet below(m.state_count(), false);
      for (StateIdx r = 0; r < m.state_count(); ++r) below[r] = labels[r].is_ord() && labels[r].value < l.value;
      auto d = force(m, spec.coalition, q, below, verifier);
      if (!d) throw std::logic_error("label " + l.to_string() + " at state " + m.state_name(q) + " has no forcing move");
      c.move = std::move(*d);
    }
    s.choice.push_back(std::move(c));
  }
  return s;
}

// ---------------------------------------------------------------------------

NonControllerChoice NonControllerStrategy::full_choice(const Ordinal& limit, StateIdx q) const {
  const Model& m = *spec_.model;
  const auto& l = labels_[q];
  const bool verifier = !spec_.controller_is_verifier();
  const bool win = l.kind == Label::Kind::Win;
  if (win && !spec_.safe[q]) return {true, any_decision(m, spec_.coalition, q, verifier)};
  if ((win || (l.is_ord() && limit < l.value)) && !limit.is_zero()) {
    // Winning at (limit, q): keep the next configuration winning, i.e. move
    // into states whose label is at least `limit`.
    StateSet target(m.state_count(), false);
    for (StateIdx r = 0; r < m.state_count(); ++r)
      target[r] = labels_[r].kind == Label::Kind::Win || (labels_[r].is_ord() && labels_[r].value >= limit);
    auto d = force(m, spec_.coalition, q, target, verifier);
    if (!d) throw std::logic_error("non-controller label " + l.to_string() + " at " + m.state_name(q) +
                                   " has no winning move at limit " + limit.to_string());
    return {false, std::move(*d)};
  }
  return {false, any_decision(m, spec_.coalition, q, verifier)};
}

NonControllerChoice NonControllerStrategy::at(const Ordinal& limit, StateIdx q) const {
  if (variant_ != Variant::Full) return table_.at(q);
  return full_choice(limit, q);
}

const NonControllerChoice& NonControllerStrategy::at(StateIdx q) const {
  if (variant_ == Variant::Full) throw std::logic_error("full canonical strategy depends on the time limit");
  return table_.at(q);
}

NonControllerStrategy canonical_noncontroller(const EmbeddedGameSpec& spec, const LabelMap& labels,
                                              NonControllerStrategy::Variant variant, std::size_t n) {
  using V = NonControllerStrategy::Variant;
  if (labels.perspective == spec.controller)
    throw std::invalid_argument("canonical_noncontroller needs the non-controller's labels");
  if (variant == V::Infinity && !labels.gamma.is_successor())
    throw std::invalid_argument("infinity-canonical strategy needs a successor time limit bound");
  const Model& m = *spec.model;
  const bool verifier = !spec.controller_is_verifier();

  NonControllerStrategy s;
  s.spec_ = spec;
  s.labels_ = labels;
  s.variant_ = variant;
  s.n_ = n;

  if (variant == V::N) {
    for (StateIdx q = 0; q < m.state_count(); ++q) {
      const auto& l = labels[q];
      if (l.kind == Label::Kind::Win || (l.is_ord() && !l.value.is_finite())) {
        s.table_.push_back(s.full_choice(Ordinal(n), q));
      } else if (l.is_ord() && !l.value.is_zero()) {
        s.table_.push_back(s.full_choice(l.value.predecessor(), q));
      } else {
        s.table_.push_back({false, any_decision(m, spec.coalition, q, verifier)});
      }
    }
  } else if (variant == V::Infinity) {
    for (StateIdx q = 0; q < m.state_count(); ++q) {
      if (labels[q].kind == Label::Kind::Win) s.table_.push_back(s.full_choice(labels.gamma.predecessor(), q));
      else s.table_.push_back({false, any_decision(m, spec.coalition, q, verifier)});
    }
  }
  return s;
}

Player unbounded_winner(const EmbeddedGameSpec& spec, StateIdx q0) {
  check_state(*spec.model, q0);
  const auto labels = compute_labels(spec, stable_bound(*spec.model));
  return labels[q0].is_ord() ? spec.controller : opponent(spec.controller);
}

}  // namespace atlgts
