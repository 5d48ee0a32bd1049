#include <doctest.h>

#include <json.hpp>
#include <random>

#include "atlgts/random_gen.hpp"
#include "atlgts/semantics.hpp"

using namespace atlgts;

namespace {

std::vector<bool> root_truth(const Model& m, const std::string& f, const SemanticsKind& k) {
  return evaluate(m, parse_formula(f), k).root();
}

const std::vector<SemanticsKind> kAllKinds{SemanticsKind::standard(), SemanticsKind::gts_unbounded(),
                                          SemanticsKind::gts_bounded(), SemanticsKind::finitely_bounded()};

Model switch_model() {
  // Agent 1 picks the next state: a -> b (p) or a -> a.
  Model::Builder b(1);
  b.add_state("a");
  b.add_state("b", {"p"});
  b.set_actions("a", 1, {"stay", "go"});
  b.set_actions("b", 1, {"stay"});
  b.set_transition("a", {"stay"}, "a");
  b.set_transition("a", {"go"}, "b");
  b.set_all_transitions("b", "b");
  return b.build();
}

}  // namespace

TEST_CASE("fig3 truth sets") {
  const auto m = fig3_truncation();
  // Reachability of q3 along the chain, computed by walking successors.
  std::vector<bool> reach(m.state_count(), false);
  for (StateIdx q = 0; q < m.state_count(); ++q) {
    StateIdx s = q;
    for (std::size_t k = 0; k <= m.state_count(); ++k) {
      if (m.holds(s, "p")) reach[q] = true;
      s = m.successor(s, ActionTuple{0});
    }
  }
  CHECK(root_truth(m, "<<>> F p", SemanticsKind::standard()) == reach);
  CHECK(reach == std::vector<bool>{true, true, true, true, false, false});
  CHECK(root_truth(m, "<<>> F p", SemanticsKind::gts_bounded(Ordinal(3))) ==
        std::vector<bool>{false, true, true, true, false, false});
  for (const auto& k : kAllKinds) {
    CHECK(root_truth(m, "true", k) == std::vector<bool>(6, true));
    CHECK(root_truth(m, "<<>> F p", k) == reach);
    auto neg = reach;
    neg.flip();
    CHECK(root_truth(m, "~<<>> F p", k) == neg);
  }
}

TEST_CASE("labels are attached to strategic subformulas under GTS kinds") {
  const auto m = fig3_truncation();
  const auto tm = evaluate(m, parse_formula("<<>> F p"), SemanticsKind::gts_bounded(Ordinal(3)));
  REQUIRE(tm.labels.back().has_value());
  CHECK((*tm.labels.back())[1].to_string() == "2");
  CHECK_FALSE(evaluate(m, parse_formula("<<>> F p"), SemanticsKind::standard()).labels.back().has_value());
}

TEST_CASE("unknown agents are rejected") {
  CHECK_THROWS_AS(evaluate(fig3_truncation(), parse_formula("<<2>> X p"), SemanticsKind::standard()),
                  EvaluationError);
}

TEST_CASE("semantics kind names") {
  for (const auto& k : kAllKinds) CHECK(SemanticsKind::parse(k.name()).kind == k.kind);
  CHECK_THROWS(SemanticsKind::parse("nonsense"));
}

TEST_CASE("oracle examples") {
  Model::Builder b(1);
  b.add_state("only", {"p"});
  b.set_actions("only", 1, {"a"});
  b.set_all_transitions("only", "only");
  CHECK(oracle_evaluate(b.build(), parse_formula("<<>> (true U p)")).root() == std::vector<bool>{true});

  const auto sw = switch_model();
  for (const char* f : {"<<1>> X p", "<<>> X p", "<<1>> F p", "<<>> F p", "<<1>> G ~p", "<<>> G ~p"})
    CHECK(oracle_evaluate(sw, parse_formula(f)).root() == root_truth(sw, f, SemanticsKind::standard()));
  CHECK(root_truth(sw, "<<1>> X p", SemanticsKind::standard()) == std::vector<bool>{true, true});
  CHECK(root_truth(sw, "<<>> F p", SemanticsKind::standard()) == std::vector<bool>{false, true});

  CHECK(oracle_evaluate(fig3_truncation(), parse_formula("<<>> (true U p)")).root() ==
        std::vector<bool>{true, true, true, true, false, false});
  CHECK_THROWS_AS(oracle_evaluate(line_model(6), parse_formula("p")), OracleGuardError);
}

TEST_CASE("comparison report") {
  const auto m = fig3_truncation();
  const auto r = compare_semantics(m, parse_formula("<<>> F p"));
  CHECK(r.disagreements.empty());
  CHECK(r.per_kind.size() == 4);
  for (const auto& [k, v] : r.per_kind) CHECK(v == std::vector<bool>{true, true, true, true, false, false});
  const auto j = nlohmann::json::parse(r.to_json(m));
  CHECK(j["perKind"]["gts-bounded"]["q2"] == true);
  CHECK(j["disagreements"].empty());
}

TEST_CASE("unfolding report") {
  const auto m = fig3_truncation();
  const auto r = check_fb_unfolding(m, parse_formula("<<>> F p"));
  CHECK(r.ok());
  CHECK(r.witness_n[1] == std::optional<std::size_t>(2));
  CHECK(r.witness_n[0] == std::optional<std::size_t>(3));
  CHECK_FALSE(r.witness_n[4].has_value());
  const auto g = check_fb_unfolding(m, parse_formula("<<1>> G true"));
  CHECK(g.ok());
  for (auto w : g.witness_n) CHECK_FALSE(w.has_value());
  CHECK_THROWS_AS(check_fb_unfolding(m, parse_formula("<<1>> X p")), EvaluationError);
  CHECK_THROWS_AS(check_fb_unfolding(m, parse_formula("<<1>> (p R q)")), EvaluationError);
}

TEST_CASE("property: negation involution, desugaring, fixpoint laws") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 150; ++i) {
    const auto m = random_model(rng);
    const auto f = random_formula(rng, m.agent_count());
    const auto a = AgentSet({1});
    for (const auto& k : kAllKinds) {
      CHECK(evaluate(m, Formula::neg(Formula::neg(f)), k).root() == evaluate(m, f, k).root());
      CHECK(evaluate(m, Formula::coop_f(a, f), k).root() ==
            evaluate(m, Formula::coop_u(a, Formula::top(), f), k).root());
    }
    // U approximants grow, R approximants shrink, both settle within |S| steps.
    const auto psi = random_formula(rng, m.agent_count(), 1);
    const auto theta = random_formula(rng, m.agent_count(), 1);
    const auto n = m.state_count();
    std::vector<bool> prev_u, prev_g;
    for (std::size_t k = 0; k <= n + 1; ++k) {
      const auto u = evaluate(m, unfold_U(a, psi, theta, k), SemanticsKind::standard()).root();
      const auto g = evaluate(m, unfold_G(a, theta, k), SemanticsKind::standard()).root();
      if (k > 0)
        for (StateIdx q = 0; q < n; ++q) {
          CHECK((!prev_u[q] || u[q]));
          CHECK((!g[q] || prev_g[q]));
        }
      if (k == n + 1) {
        CHECK(u == prev_u);
        CHECK(g == prev_g);
        CHECK(u == evaluate(m, Formula::coop_u(a, psi, theta), SemanticsKind::standard()).root());
        CHECK(g == evaluate(m, Formula::coop_g(a, theta), SemanticsKind::standard()).root());
      }
      prev_u = u;
      prev_g = g;
    }
    // FP_U and FP_G as equivalences under finitely bounded semantics.
    const auto fb = SemanticsKind::finitely_bounded();
    const auto fu = Formula::coop_u(a, psi, theta);
    const auto fg = Formula::coop_g(a, theta);
    CHECK(evaluate(m, fu, fb).root() ==
          evaluate(m, Formula::disj(theta, Formula::conj(psi, Formula::coop_x(a, fu))), fb).root());
    CHECK(evaluate(m, fg, fb).root() == evaluate(m, Formula::conj(theta, Formula::coop_x(a, fg)), fb).root());
  }
}

TEST_CASE("property: four kinds and the oracle agree on random models") {
  std::mt19937_64 rng(4242);
  RandomModelOptions small{4, 2, 2};
  for (int i = 0; i < 100; ++i) {
    const auto m = random_model(rng, small);
    for (int k = 0; k < 5; ++k) {
      const auto f = random_formula(rng, m.agent_count());
      CAPTURE(print_formula(f));
      CHECK(compare_semantics(m, f).disagreements.empty());
      const auto o = oracle_evaluate(m, f);
      const auto s = evaluate(m, f, SemanticsKind::standard());
      CHECK(o.truth == s.truth);
    }
  }
}
