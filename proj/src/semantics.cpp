#include "atlgts/semantics.hpp"

#include <functional>
#include <json.hpp>

namespace atlgts {

std::string SemanticsKind::name() const {
  switch (kind) {
    case Kind::Standard: return "standard";
    case Kind::GtsUnbounded: return "gts-unbounded";
    case Kind::GtsBounded: return "gts-bounded";
    case Kind::FinitelyBounded: return "gts-finitely-bounded";
  }
  return "?";
}

SemanticsKind SemanticsKind::parse(const std::string& name, std::optional<Ordinal> gamma) {
  if (name == "standard") return standard();
  if (name == "gts-unbounded") return gts_unbounded();
  if (name == "gts-bounded") return gts_bounded(std::move(gamma));
  if (name == "gts-finitely-bounded" || name == "finitely-bounded") return finitely_bounded();
  throw std::invalid_argument("unknown semantics '" + name + "'");
}

std::size_t TruthMap::index_of(const Formula& f) const {
  for (std::size_t i = formulas.size(); i-- > 0;)
    if (formulas[i] == f) return i;
  throw std::out_of_range("not a subformula: " + print_formula(f));
}

// ---------------------------------------------------------------------------

namespace {

StateSet complement(StateSet s) {
  s.flip();
  return s;
}

StateSet meet(const StateSet& a, const StateSet& b) {
  StateSet out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

StateSet join(const StateSet& a, const StateSet& b) {
  StateSet out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] || b[i];
  return out;
}

void check_coalitions(const Model& m, const Formula& f) {
  for (const auto& g : subformulas(f)) {
    if (!g.is_strategic()) continue;
    for (AgentId a : g.coalition().ids())
      if (a < 1 || a > m.agent_count())
        throw EvaluationError("coalition of " + print_formula(g) + " references unknown agent " + std::to_string(a));
  }
}

// Shared bottom-up driver; `strategic` evaluates X/U/R nodes from their
// operands' truth sets.
using StrategicFn = std::function<StateSet(const Formula&, const StateSet& lhs, const StateSet* rhs,
                                           std::optional<LabelMap>& labels)>;

TruthMap bottom_up(const Model& m, const Formula& f, const StrategicFn& strategic) {
  check_coalitions(m, f);
  TruthMap tm;
  tm.formulas = subformulas(f);
  const auto n = m.state_count();
  for (const auto& g : tm.formulas) {
    using K = Formula::Kind;
    StateSet s(n, false);
    std::optional<LabelMap> labels;
    switch (g.kind()) {
      case K::Prop:
        for (StateIdx q = 0; q < n; ++q) s[q] = m.holds(q, g.name());
        break;
      case K::True: s.assign(n, true); break;
      case K::False: break;
      case K::Not: s = complement(tm.of(g.sub())); break;
      case K::Or: s = join(tm.of(g.lhs()), tm.of(g.rhs())); break;
      case K::CoopX: s = strategic(g, tm.of(g.sub()), nullptr, labels); break;
      case K::CoopU:
      case K::CoopR: s = strategic(g, tm.of(g.lhs()), &tm.of(g.rhs()), labels); break;
    }
    tm.truth.push_back(std::move(s));
    tm.labels.push_back(std::move(labels));
  }
  return tm;
}

}  // namespace

StateSet cpre(const Model& m, const AgentSet& coalition, const StateSet& target) {
  StateSet out(m.state_count(), false);
  for (StateIdx q = 0; q < m.state_count(); ++q) out[q] = force(m, coalition, q, target, true).has_value();
  return out;
}

EmbeddedGameSpec embedded_spec(const Model& m, const Formula& f, Player verifier, const StateSet& lhs_truth,
                               const StateSet& rhs_truth) {
  if (f.kind() != Formula::Kind::CoopU && f.kind() != Formula::Kind::CoopR)
    throw std::invalid_argument("embedded games arise only from U and R formulas");
  EmbeddedGameSpec spec;
  spec.verifier = verifier;
  spec.controller = f.kind() == Formula::Kind::CoopU ? verifier : opponent(verifier);
  spec.coalition = f.coalition();
  spec.model = &m;
  // psi_C = theta and psi_notC = psi in both cases; C wins an exit (V, q, x)
  // iff x's truth at q agrees with whether C is the verifier.
  const bool same = spec.controller == spec.verifier;
  spec.goal = same ? rhs_truth : complement(rhs_truth);
  spec.safe = same ? lhs_truth : complement(lhs_truth);
  return spec;
}

TruthMap evaluate(const Model& m, const Formula& f, const SemanticsKind& kind) {
  using K = SemanticsKind::Kind;
  const auto n = m.state_count();
  const StateSet all(n, true);

  switch (kind.kind) {
    case K::Standard:
      return bottom_up(m, f, [&](const Formula& g, const StateSet& lhs, const StateSet* rhs, auto&) {
        const auto& a = g.coalition();
        if (g.kind() == Formula::Kind::CoopX) return cpre(m, a, lhs);
        if (g.kind() == Formula::Kind::CoopU) {
          StateSet z(n, false);  // least fixpoint of Z -> theta | (psi & CPre(Z))
          while (true) {
            auto next = join(*rhs, meet(lhs, cpre(m, a, z)));
            if (next == z) return z;
            z = std::move(next);
          }
        }
        StateSet z = all;  // greatest fixpoint of Z -> theta & (psi | CPre(Z))
        while (true) {
          auto next = meet(*rhs, join(lhs, cpre(m, a, z)));
          if (next == z) return z;
          z = std::move(next);
        }
      });

    case K::GtsUnbounded:
    case K::GtsBounded: {
      const Ordinal gamma = kind.kind == K::GtsUnbounded ? Ordinal::omega() : kind.gamma.value_or(stable_bound(m));
      if (gamma.is_zero()) throw EvaluationError("time limit bound must be positive");
      return bottom_up(m, f, [&](const Formula& g, const StateSet& lhs, const StateSet* rhs,
                                 std::optional<LabelMap>& labels) {
        if (g.kind() == Formula::Kind::CoopX) return cpre(m, g.coalition(), lhs);
        // Eloise verifies; she wins the embedded game of U iff her controller
        // labels are ordinals, and that of R iff Abelard's controller labels are lose.
        const auto spec = embedded_spec(m, g, Player::E, lhs, *rhs);
        labels = compute_labels(spec, gamma);
        StateSet s(n, false);
        for (StateIdx q = 0; q < n; ++q)
          s[q] = spec.controller == Player::E ? (*labels)[q].is_ord() : !(*labels)[q].is_ord();
        return s;
      });
    }

    case K::FinitelyBounded:
      return bottom_up(m, f, [&](const Formula& g, const StateSet& lhs, const StateSet* rhs, auto&) {
        const auto& a = g.coalition();
        if (g.kind() == Formula::Kind::CoopX) return cpre(m, a, lhs);
        // W_k: states won within k steps (U) / surviving k steps (R).
        StateSet w = *rhs;
        if (g.kind() == Formula::Kind::CoopU) {
          StateSet acc = w;
          for (std::size_t k = 0; k <= n; ++k) {
            w = join(*rhs, meet(lhs, cpre(m, a, w)));
            acc = join(acc, w);
          }
          return acc;
        }
        StateSet acc = w;
        for (std::size_t k = 0; k <= n; ++k) {
          w = meet(*rhs, join(lhs, cpre(m, a, w)));
          acc = meet(acc, w);
        }
        return acc;
      });
  }
  throw std::logic_error("unknown semantics kind");
}

// ---------------------------------------------------------------------------
// Brute-force oracle over positional collective strategies.

namespace {

constexpr std::size_t kOracleMaxStates = 6;
constexpr std::size_t kOracleMaxProfiles = 16;

struct StrategyEnumerator {
  const Model& m;
  const AgentSet& coalition;
  std::vector<std::vector<ActionTuple>> options;  // per state
  std::vector<std::size_t> pick;

  StrategyEnumerator(const Model& model, const AgentSet& a, std::size_t cap) : m(model), coalition(a) {
    std::size_t total = 1;
    for (StateIdx q = 0; q < m.state_count(); ++q) {
      options.push_back(m.tuples(coalition, q));
      total *= options.back().size();
      if (total > cap) throw OracleGuardError("too many collective strategies for the oracle");
    }
    pick.assign(m.state_count(), 0);
  }

  bool next() {
    for (std::size_t q = 0; q < pick.size(); ++q) {
      if (++pick[q] < options[q].size()) return true;
      pick[q] = 0;
    }
    return false;
  }

  // Outcomes of state s when A follows the current strategy.
  std::vector<StateIdx> successors(StateIdx s) const {
    std::vector<StateIdx> out;
    const auto rest = coalition.complement(m.agent_count());
    for (const auto& other : m.tuples(rest, s))
      out.push_back(m.successor(s, m.merge(coalition, options[s][pick[s]], other)));
    return out;
  }
};

// Every path from q reaches theta with psi holding strictly before.
bool paths_satisfy_until(const StrategyEnumerator& e, StateIdx q, const StateSet& psi, const StateSet& theta) {
  const auto n = e.m.state_count();
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<int> mark(n, 0);
  std::function<bool(StateIdx)> dfs = [&](StateIdx s) -> bool {
    if (theta[s]) return true;
    if (!psi[s]) return false;
    if (mark[s] == 1) return false;  // cycle avoiding theta
    if (mark[s] == 2) return true;
    mark[s] = 1;
    for (auto t : e.successors(s))
      if (!dfs(t)) return false;
    mark[s] = 2;
    return true;
  };
  return dfs(q);
}

// No path from q reaches a non-theta state before some psi state.
bool paths_satisfy_release(const StrategyEnumerator& e, StateIdx q, const StateSet& psi, const StateSet& theta) {
  std::vector<bool> seen(e.m.state_count(), false);
  std::vector<StateIdx> stack{q};
  seen[q] = true;
  while (!stack.empty()) {
    const auto s = stack.back();
    stack.pop_back();
    if (!theta[s]) return false;
    if (psi[s]) continue;
    for (auto t : e.successors(s))
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
  }
  return true;
}

}  // namespace

TruthMap oracle_evaluate(const Model& m, const Formula& f, std::size_t max_strategies) {
  if (m.state_count() > kOracleMaxStates)
    throw OracleGuardError("oracle refuses models with more than " + std::to_string(kOracleMaxStates) + " states");
  for (StateIdx q = 0; q < m.state_count(); ++q)
    if (m.profile_count(q) > kOracleMaxProfiles)
      throw OracleGuardError("oracle refuses states with more than " + std::to_string(kOracleMaxProfiles) +
                             " action profiles");
  return bottom_up(m, f, [&](const Formula& g, const StateSet& lhs, const StateSet* rhs, auto&) {
    StateSet out(m.state_count(), false);
    for (StateIdx q = 0; q < m.state_count(); ++q) {
      StrategyEnumerator e(m, g.coalition(), max_strategies);
      do {
        bool ok = false;
        switch (g.kind()) {
          case Formula::Kind::CoopX: {
            ok = true;
            for (auto t : e.successors(q)) ok = ok && lhs[t];
            break;
          }
          case Formula::Kind::CoopU: ok = paths_satisfy_until(e, q, lhs, *rhs); break;
          default: ok = paths_satisfy_release(e, q, lhs, *rhs); break;
        }
        if (ok) {
          out[q] = true;
          break;
        }
      } while (e.next());
    }
    return out;
  });
}

// ---------------------------------------------------------------------------

ComparisonReport compare_semantics(const Model& m, const Formula& f) {
  const std::vector<SemanticsKind> kinds{SemanticsKind::standard(), SemanticsKind::gts_unbounded(),
                                         SemanticsKind::gts_bounded(), SemanticsKind::finitely_bounded()};
  std::vector<TruthMap> maps;
  for (const auto& k : kinds) maps.push_back(evaluate(m, f, k));
  ComparisonReport r;
  r.formula = print_formula(f);
  for (std::size_t i = 0; i < kinds.size(); ++i) r.per_kind.emplace_back(kinds[i].name(), maps[i].root());
  const auto& subs = maps.front().formulas;
  for (std::size_t j = 0; j < subs.size(); ++j)
    for (StateIdx q = 0; q < m.state_count(); ++q) {
      bool differs = false;
      for (std::size_t i = 1; i < maps.size(); ++i) differs = differs || maps[i].truth[j][q] != maps[0].truth[j][q];
      if (!differs) continue;
      Disagreement d{print_formula(subs[j]), m.state_name(q), {}};
      for (std::size_t i = 0; i < maps.size(); ++i) d.values.emplace_back(kinds[i].name(), maps[i].truth[j][q]);
      r.disagreements.push_back(std::move(d));
    }
  return r;
}

std::string ComparisonReport::to_json(const Model& m) const {
  nlohmann::ordered_json doc;
  doc["formula"] = formula;
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& [kind, truth] : per_kind) {
    nlohmann::ordered_json states = nlohmann::ordered_json::object();
    for (StateIdx q = 0; q < m.state_count(); ++q) states[m.state_name(q)] = static_cast<bool>(truth[q]);
    per[kind] = states;
  }
  doc["perKind"] = per;
  doc["disagreements"] = nlohmann::ordered_json::array();
  for (const auto& d : disagreements) {
    nlohmann::ordered_json values = nlohmann::ordered_json::object();
    for (const auto& [k, v] : d.values) values[k] = v;
    doc["disagreements"].push_back({{"formula", d.formula}, {"state", d.state}, {"values", values}});
  }
  return doc.dump(2);
}

// ---------------------------------------------------------------------------

UnfoldingReport check_fb_unfolding(const Model& m, const Formula& f) {
  const bool until = f.kind() == Formula::Kind::CoopU;
  const bool globally = f.kind() == Formula::Kind::CoopR && f.lhs().kind() == Formula::Kind::False;
  if (!until && !globally) throw EvaluationError("expected <<A>> (psi U theta) or <<A>> G theta, got " + print_formula(f));
  const auto& a = f.coalition();
  const auto& theta = f.rhs();
  const auto fb = SemanticsKind::finitely_bounded();

  UnfoldingReport r;
  r.is_until = until;
  r.max_n = m.state_count() + 2;
  const auto base = evaluate(m, f, fb);
  r.truth.assign(base.root().begin(), base.root().end());
  r.witness_n.assign(m.state_count(), std::nullopt);
  for (std::size_t n = 0; n <= r.max_n; ++n) {
    const auto unfolded = until ? unfold_U(a, f.lhs(), theta, n) : unfold_G(a, theta, n);
    const auto tm = evaluate(m, unfolded, fb);
    for (StateIdx q = 0; q < m.state_count(); ++q) {
      const bool hit = until ? tm.root()[q] : !tm.root()[q];
      if (hit && !r.witness_n[q]) r.witness_n[q] = n;
    }
  }
  for (StateIdx q = 0; q < m.state_count(); ++q) {
    // U: true iff some U^n holds. G: true iff no G^n fails.
    const bool expected = until ? r.witness_n[q].has_value() : !r.witness_n[q].has_value();
    if (expected != r.truth[q])
      r.unfolding_failures.push_back(m.state_name(q) + ": formula is " + (r.truth[q] ? "true" : "false") +
                                 " but the unfoldings say " + (expected ? "true" : "false"));
  }
  auto implies = [](Formula x, Formula y) { return Formula::disj(Formula::neg(std::move(x)), std::move(y)); };
  const Formula axiom =
      until ? implies(f, Formula::disj(theta, Formula::conj(f.lhs(), Formula::coop_x(a, f))))  // PostFP_U
            : implies(Formula::conj(theta, Formula::coop_x(a, f)), f);                        // PreFP_G
  const auto ax = evaluate(m, axiom, fb);
  for (StateIdx q = 0; q < m.state_count(); ++q)
    if (!ax.root()[q]) r.axiom_failures.push_back(m.state_name(q) + ": " + print_formula(axiom));
  return r;
}

}  // namespace atlgts
