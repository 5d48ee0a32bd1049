#include "atlgts/policy.hpp"

#include <algorithm>
#include <charconv>

namespace atlgts {

SemanticsKind semantics_for(const GameMode& mode) {
  switch (mode.kind) {
    case GameMode::Kind::Unbounded: return SemanticsKind::gts_unbounded();
    case GameMode::Kind::Bounded: return SemanticsKind::gts_bounded(mode.gamma);
    case GameMode::Kind::FinitelyBounded: return SemanticsKind::finitely_bounded();
  }
  return SemanticsKind::standard();
}

namespace {

// Labels are read at the announcement bound for bounded play and at a
// successor bound above |S| otherwise; both are stable for finite models.
Ordinal label_bound(const Session& s, const Model& m) {
  if (s.mode().kind == GameMode::Kind::Bounded) return s.mode().gamma;
  return Ordinal(m.state_count() + 1);
}

const Model& require_model(const Session& s) {
  const auto* m = s.model();
  if (!m) throw std::invalid_argument("solver data requires a finite model");
  return *m;
}

std::vector<std::string> names_of(const Model& m, const std::vector<AgentId>& agents, StateIdx q,
                                  const ActionTuple& t) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < agents.size(); ++i) out.push_back(m.actions(agents[i], q).at(t.at(i)));
  return out;
}

ActionTuple indices_of(const Model& m, const AgentSet& coalition, StateIdx q, const std::vector<std::string>& names) {
  ActionTuple t;
  std::size_t i = 0;
  for (AgentId a : coalition.ids()) {
    const auto& acts = m.actions(a, q);
    const auto it = std::find(acts.begin(), acts.end(), names.at(i++));
    if (it == acts.end()) throw std::logic_error("unknown action in pending profile");
    t.push_back(static_cast<std::uint32_t>(it - acts.begin()));
  }
  return t;
}

// Turns a decision of the mover into the concrete action names of the menu.
Move realize(const Session& s, const Model& m, const Decision& d) {
  const auto& p = s.phase();
  const auto q = m.state(p.state);
  const auto& a = p.formula.coalition();
  if (!d.is_response) return Move::with_actions(names_of(m, a.ids(), q, d.profile));
  const auto own = indices_of(m, a, q, p.pending);
  return Move::with_actions(names_of(m, a.complement(m.agent_count()).ids(), q, d.respond(m, a, q, own)));
}

}  // namespace

std::optional<ContextLabels> context_labels(const Session& s) {
  const Model& m = require_model(s);
  const auto& p = s.phase();
  if (!p.embedded) return std::nullopt;
  const auto tm = evaluate(m, s.root(), semantics_for(s.mode()));
  const auto& f = p.embedded->formula;
  auto spec = embedded_spec(m, f, p.embedded->verifier, tm.of(f.lhs()), tm.of(f.rhs()));
  auto labels = compute_labels(spec, label_bound(s, m));
  auto opp = opponent_labels(labels);
  return ContextLabels{std::move(spec), std::move(labels), std::move(opp)};
}

// ---------------------------------------------------------------------------

const TruthMap& CanonicalPolicy::truth(const Session& s) {
  const auto key = print_formula(s.root()) + "/" + s.mode().name() + "/" + s.mode().gamma.to_string();
  if (!truth_ || key != truth_key_) {
    truth_ = evaluate(require_model(s), s.root(), semantics_for(s.mode()));
    truth_key_ = key;
    contexts_.clear();
  }
  return *truth_;
}

CanonicalPolicy::Context& CanonicalPolicy::context(const Session& s) {
  const Model& m = require_model(s);
  const auto& tm = truth(s);
  const auto& ctx = *s.phase().embedded;
  const auto key = std::string(to_string(ctx.verifier)) + print_formula(ctx.formula);
  auto it = contexts_.find(key);
  if (it != contexts_.end()) return it->second;
  auto spec = embedded_spec(m, ctx.formula, ctx.verifier, tm.of(ctx.formula.lhs()), tm.of(ctx.formula.rhs()));
  auto labels = compute_labels(spec, label_bound(s, m));
  auto opp = opponent_labels(labels);
  auto ctrl = canonical_controller(spec, labels);
  Context c{spec, labels, opp, std::move(ctrl), {}};
  return contexts_.emplace(key, std::move(c)).first->second;
}

const NonControllerStrategy& CanonicalPolicy::noncontroller(const Session& s, Context& c) {
  using V = NonControllerStrategy::Variant;
  std::size_t n = 0;
  V variant = V::Full;
  if (s.mode().kind == GameMode::Kind::FinitelyBounded) {
    variant = V::N;
    n = s.phase().embedded->announced->finite_value();
  } else if (s.mode().kind == GameMode::Kind::Unbounded) {
    variant = V::Infinity;
  }
  auto it = c.noncontroller.find(n);
  if (it == c.noncontroller.end())
    it = c.noncontroller.emplace(n, canonical_noncontroller(c.spec, c.opponent_labels, variant, n)).first;
  return it->second;
}

Move CanonicalPolicy::choose(const Session& s, const Menu& menu) {
  const Model& m = require_model(s);
  const auto& p = s.phase();
  const auto q = m.state(p.state);
  const auto& tm = truth(s);

  if (!p.embedded) {
    if (p.stage == Stage::AtPosition) {
      if (tm.at(p.formula.lhs(), q)) return Move::left();
      return tm.at(p.formula.rhs(), q) ? Move::right() : Move::left();
    }
    // One-step game of <<A>> X psi.
    const auto& a = p.formula.coalition();
    const bool verifier = p.stage == Stage::VerifierMove;
    StateSet target = tm.of(p.formula.sub());
    if (!verifier) target.flip();
    auto d = force(m, a, q, target, verifier);
    return realize(s, m, d ? *d : any_decision(m, a, q, verifier));
  }

  auto& c = context(s);
  const auto& ctx = *p.embedded;
  switch (p.stage) {
    case Stage::AnnounceLimit: {
      const auto& l = c.labels[q];
      return Move::with_limit(l.is_ord() && l.value < menu.bound ? l.value : Ordinal(0));
    }
    case Stage::LowerLimit: return Move::with_limit(c.controller.timer(p.limit, q));
    case Stage::ControllerEnd: return c.controller.choice[q].end_at_goal ? Move::end_now() : Move::cont();
    case Stage::OpponentEnd: {
      const auto& nc = noncontroller(s, c);
      const auto choice = nc.variant() == NonControllerStrategy::Variant::Full ? nc.at(p.limit, q) : nc.at(q);
      return choice.end_at_own_exit ? Move::end_now() : Move::cont();
    }
    case Stage::VerifierMove:
    case Stage::FalsifierMove: {
      if (menu.actor == ctx.controller) return realize(s, m, c.controller.choice[q].move);
      const auto& nc = noncontroller(s, c);
      const auto choice = nc.variant() == NonControllerStrategy::Variant::Full ? nc.at(p.limit, q) : nc.at(q);
      return realize(s, m, choice.move);
    }
    default: break;
  }
  throw std::logic_error("canonical policy asked to move at stage " + std::string(to_string(p.stage)));
}

// ---------------------------------------------------------------------------

Ordinal sample_below(const Ordinal& bound, std::mt19937_64& rng) {
  if (bound.is_zero()) throw std::invalid_argument("no ordinal below 0");
  if (bound.is_finite()) return std::uniform_int_distribution<std::uint64_t>(0, bound.finite_value() - 1)(rng);
  if (bound.is_successor()) {
    if (rng() % 2 == 0) return bound.predecessor();
    return sample_below(bound.predecessor(), rng);
  }
  // bound = base + w^e: pick base + w^(e-1)*k + j.
  auto terms = bound.terms();
  const auto e = terms.back().exponent;
  if (--terms.back().coefficient == 0) terms.pop_back();
  std::uniform_int_distribution<std::uint64_t> small(0, 3);
  const auto k = small(rng);
  const auto j = small(rng);
  if (e == 1) {
    if (k + j > 0) terms.push_back({0, k + j});
  } else {
    if (k > 0) terms.push_back({e - 1, k});
    if (j > 0) terms.push_back({0, j});
  }
  return Ordinal::from_terms(std::move(terms));
}

Move RandomPolicy::choose(const Session&, const Menu& menu) {
  switch (menu.kind) {
    case Menu::Kind::Disjunct: return rng_() % 2 ? Move::right() : Move::left();
    case Menu::Kind::EndOffer: return rng_() % 3 == 0 ? Move::end_now() : Move::cont();
    case Menu::Kind::Actions: {
      std::vector<std::string> names;
      for (const auto& d : menu.domains) {
        const auto size = d.all_naturals ? 6 : d.finite.size();
        names.push_back(d.at(rng_() % size));
      }
      return Move::with_actions(std::move(names));
    }
    case Menu::Kind::Limit:
      if (menu.finite_only && !menu.bound.is_finite()) return Move::with_limit(rng_() % 6);
      return Move::with_limit(sample_below(menu.bound, rng_));
  }
  return Move::cont();
}

// ---------------------------------------------------------------------------

namespace {

std::optional<std::uint64_t> parse_nat(std::string_view s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> grid_state(const std::string& s) {
  if (s.size() < 5 || s.front() != '(' || s.back() != ')') return std::nullopt;
  const auto comma = s.find(',');
  if (comma == std::string::npos) return std::nullopt;
  auto i = parse_nat(std::string_view(s).substr(1, comma - 1));
  auto j = parse_nat(std::string_view(s).substr(comma + 1, s.size() - comma - 2));
  if (!i || !j) return std::nullopt;
  return std::make_pair(*i, *j);
}

bool has_p(const Session& s) {
  for (const auto& x : s.arena().props(s.phase().state))
    if (x == "p") return true;
  return false;
}

Move first_actions(const Menu& menu) {
  std::vector<std::string> names;
  for (const auto& d : menu.domains) names.push_back(d.at(0));
  return Move::with_actions(std::move(names));
}

}  // namespace

ScriptedPolicy::ScriptedPolicy(std::string script) : script_(std::move(script)) {
  auto with_n = [&](std::string_view prefix) -> std::optional<std::uint64_t> {
    if (script_.rfind(prefix, 0) != 0) return std::nullopt;
    auto n = parse_nat(std::string_view(script_).substr(prefix.size()));
    if (!n) throw std::invalid_argument("script '" + script_ + "' needs a natural argument");
    return n;
  };
  if (script_ == "fig2-abelard") {
    kind_ = Kind::AbelardAnswer;
  } else if (script_ == "fig2-eloise-diagonal" || script_ == "fig2-eloise-omega") {
    kind_ = Kind::EloiseDiagonal;
  } else if (auto n = with_n("fig2-abelard:")) {
    kind_ = Kind::AbelardFixed;
    n_ = *n;
  } else if (auto n2 = with_n("fig2-eloise:")) {
    kind_ = Kind::EloiseFixed;
    n_ = *n2;
  } else {
    throw std::invalid_argument("unknown script '" + script_ + "'");
  }
}

Move ScriptedPolicy::choose(const Session& s, const Menu& menu) {
  const auto& p = s.phase();
  switch (menu.kind) {
    case Menu::Kind::Disjunct: return Move::left();
    case Menu::Kind::EndOffer:
      // Eloise's scripts end the moment p is reached; Abelard never ends.
      if (kind_ == Kind::EloiseFixed || kind_ == Kind::EloiseDiagonal)
        return p.embedded && menu.actor == p.embedded->controller && has_p(s) ? Move::end_now() : Move::cont();
      return Move::cont();
    case Menu::Kind::Actions: {
      if (menu.domains.size() != 1 || !menu.domains[0].all_naturals) return first_actions(menu);
      std::uint64_t pick = 0;
      if (kind_ == Kind::AbelardFixed) pick = n_;
      if (kind_ == Kind::AbelardAnswer && p.embedded && p.embedded->announced && p.embedded->announced->is_finite())
        pick = p.embedded->announced->finite_value();
      return Move::with_actions({std::to_string(pick)});
    }
    case Menu::Kind::Limit: {
      Ordinal want(0);
      if (kind_ == Kind::EloiseFixed) {
        want = n_;
      } else if (kind_ == Kind::EloiseDiagonal) {
        if (auto ij = grid_state(p.state)) want = ij->first >= ij->second ? ij->first - ij->second : 0;
        else if (!menu.finite_only && Ordinal::omega() < menu.bound) want = Ordinal::omega();
      }
      return Move::with_limit(want < menu.bound ? want : Ordinal(0));
    }
  }
  return Move::cont();
}

std::shared_ptr<Policy> make_policy(const std::string& name, std::uint64_t seed) {
  if (name == "canonical") return std::make_shared<CanonicalPolicy>();
  if (name == "random") return std::make_shared<RandomPolicy>(seed);
  if (name.rfind("random:", 0) == 0) {
    auto n = parse_nat(std::string_view(name).substr(7));
    if (!n) throw std::invalid_argument("random policy needs a numeric seed");
    return std::make_shared<RandomPolicy>(*n);
  }
  return std::make_shared<ScriptedPolicy>(name);
}

}  // namespace atlgts
