// Transcript linting for timed plays: round order, forced exits at limit 0,
// strictly decreasing limits, and a round budget per embedded game.
#pragma once

#include <string>
#include <vector>

#include "atlgts/engine.hpp"

namespace atlgts::testing {

/// Rounds an embedded game announced at `g` can last when every lowering at
/// a limit base + w^e lands at most at base + w^(e-1)*3 + 3 (e > 1) or
/// base + 6 (e = 1); RandomPolicy never exceeds this.
inline std::uint64_t round_budget(const Ordinal& g) {
  if (g.is_finite()) return g.finite_value() + 1;
  auto terms = g.terms();
  std::uint64_t finite_part = 0;
  if (terms.back().exponent == 0) {
    finite_part = terms.back().coefficient;
    terms.pop_back();
  }
  const auto e = terms.back().exponent;
  if (--terms.back().coefficient == 0) terms.pop_back();
  if (e == 1) {
    terms.push_back({0, 6});
  } else {
    terms.push_back({e - 1, 3});
    terms.push_back({0, 3});
  }
  return finite_part + 1 + round_budget(Ordinal::from_terms(terms));
}

inline bool contains_subformula(const Formula& outer, const std::string& printed) {
  for (const auto& g : subformulas(outer))
    if (print_formula(g) == printed) return true;
  return false;
}

inline std::vector<std::string> lint_transcript(const Transcript& t, const GameMode& mode) {
  std::vector<std::string> v;
  if (!mode.timed()) return v;
  const auto& e = t.moves;
  std::optional<Ordinal> last_limit;
  std::uint64_t rounds = 0;
  std::uint64_t budget = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto where = "entry " + std::to_string(i) + ": ";
    const auto& x = e[i];
    if (x.stage == Stage::AnnounceLimit) {
      last_limit.reset();
      rounds = 0;
      budget = round_budget(x.move.limit);
      if (!(x.move.limit < mode.gamma)) v.push_back(where + "announcement not below the bound");
      if (mode.kind == GameMode::Kind::FinitelyBounded && !x.move.limit.is_finite())
        v.push_back(where + "infinite announcement in finitely bounded play");
      continue;
    }
    if (!x.limit) continue;  // outside embedded games
    if (x.stage == Stage::ControllerEnd) {
      if (last_limit && !(*x.limit < *last_limit)) v.push_back(where + "limit did not decrease");
      last_limit = x.limit;
      if (++rounds > budget) v.push_back(where + "round budget exceeded");
      const bool forced = x.actor == "auto";
      if (x.limit->is_zero() != forced) v.push_back(where + "forced exit iff the limit is 0");
      if (forced) {
        if (x.move.kind != Move::Kind::EndNow) v.push_back(where + "forced exit must end the game");
        const auto f = parse_formula(x.formula);
        if (i + 1 < e.size()) {
          if (!contains_subformula(f.rhs(), e[i + 1].formula)) v.push_back(where + "forced exit left psi_C");
        } else if (t.reason != "time-exhausted-exit") {
          v.push_back(where + "play ended at a forced exit with reason " + t.reason);
        }
      }
    }
    if (x.limit->is_zero() && x.stage != Stage::ControllerEnd) v.push_back(where + "voluntary move at limit 0");
    if (x.stage == Stage::OpponentEnd) {
      if (i == 0 || e[i - 1].stage != Stage::ControllerEnd || e[i - 1].move.kind != Move::Kind::Continue ||
          e[i - 1].limit != x.limit || e[i - 1].state != x.state)
        v.push_back(where + "opponent end offer without a declined controller offer first");
    }
    if (x.stage == Stage::VerifierMove) {
      if (i == 0 || e[i - 1].stage != Stage::OpponentEnd || e[i - 1].move.kind != Move::Kind::Continue)
        v.push_back(where + "step before both end offers were declined");
    }
  }
  if (!t.winner) v.push_back("play did not terminate");
  return v;
}

}  // namespace atlgts::testing
