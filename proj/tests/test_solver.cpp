#include <doctest.h>

#include <random>

#include "atlgts/solver.hpp"
#include "support/embedded_search.hpp"
#include "support/random_specs.hpp"

using namespace atlgts;
using atlgts::testing::Minimax;

namespace {

EmbeddedGameSpec reach_spec(const Model& m, const std::string& prop) {
  EmbeddedGameSpec s;
  s.model = &m;
  s.goal.assign(m.state_count(), false);
  s.safe.assign(m.state_count(), true);
  for (StateIdx q = 0; q < m.state_count(); ++q) s.goal[q] = m.holds(q, prop);
  return s;
}

std::vector<std::string> rendered(const LabelMap& l) {
  std::vector<std::string> out;
  for (const auto& x : l.labels) out.push_back(x.to_string());
  return out;
}

using Strings = std::vector<std::string>;

}  // namespace

TEST_CASE("fig3 labels") {
  const auto m = fig3_truncation();
  const auto spec = reach_spec(m, "p");
  CHECK(rendered(compute_labels(spec, 3)) == Strings{"lose", "2", "1", "0", "lose", "lose"});
  CHECK(rendered(compute_labels(spec, 4)) == Strings{"3", "2", "1", "0", "lose", "lose"});

  auto nested = spec;
  const auto inner = compute_labels(spec, 3);
  for (StateIdx q = 0; q < m.state_count(); ++q) nested.goal[q] = inner[q].is_ord();
  CHECK(rendered(compute_labels(nested, 3)) == Strings{"1", "0", "0", "0", "lose", "lose"});
  const auto inner4 = compute_labels(spec, 4);
  for (StateIdx q = 0; q < m.state_count(); ++q) nested.goal[q] = inner4[q].is_ord();
  CHECK(rendered(compute_labels(nested, 4)) == Strings{"0", "0", "0", "0", "lose", "lose"});
}

TEST_CASE("line model labels are distances cut off at the bound") {
  const auto m5 = line_model(5);
  const auto spec = reach_spec(m5, "p");
  CHECK(rendered(compute_labels(spec, 3)) == Strings{"lose", "lose", "lose", "2", "1", "0"});
  CHECK(rendered(compute_labels(reach_spec(line_model(3), "p"), 4)) == Strings{"3", "2", "1", "0"});
  CHECK(rendered(compute_labels(reach_spec(line_model(0), "p"), 1)) == Strings{"0"});
  const auto fig3 = fig3_truncation();
  CHECK(compute_labels(reach_spec(fig3, "p"), 6).labels == compute_labels(reach_spec(fig3, "p"), 7).labels);
  CHECK(compute_labels(reach_spec(fig3, "p"), Ordinal::omega()).labels ==
        compute_labels(reach_spec(fig3, "p"), 6).labels);
  CHECK_THROWS(compute_labels(spec, 0));
}

TEST_CASE("force") {
  const auto m = line_model(3);
  StateSet all(m.state_count(), true);
  StateSet none(m.state_count(), false);
  StateSet q2(m.state_count(), false);
  q2[2] = true;
  CHECK(force(m, {}, 1, all, true).has_value());
  CHECK(force(m, {}, 1, all, false).has_value());
  CHECK_FALSE(force(m, {}, 1, none, true).has_value());
  CHECK(force(m, {}, 1, q2, true).has_value());
  CHECK_THROWS(force(m, {}, 17, all, true));
}

TEST_CASE("opponent labels") {
  LabelMap l{Player::E, 3, {Label::ord(2), Label::lose(), Label::ord(0)}};
  const auto o = opponent_labels(l);
  CHECK(o.perspective == Player::A);
  CHECK(rendered(o) == Strings{"2", "win", "0"});
  CHECK(opponent_labels(o) == l);
  CHECK(opponent_labels(LabelMap{Player::E, 1, {}}).labels.empty());
}

TEST_CASE("canonical strategies") {
  const auto m = fig3_truncation();
  const auto spec = reach_spec(m, "p");
  const auto labels = compute_labels(spec, 4);
  const auto c = canonical_controller(spec, labels);
  CHECK(c.choice[3].end_at_goal);
  CHECK_FALSE(c.choice[1].end_at_goal);
  CHECK(c.timer(Ordinal::omega(), 1) == Ordinal(2));
  CHECK(c.timer(Ordinal::omega(), 4) == Ordinal(0));
  CHECK_THROWS(c.timer(Ordinal(3), 1));

  const auto all_lose = LabelMap{Player::E, 3, std::vector<Label>(m.state_count(), Label::lose())};
  auto unreachable = spec;
  unreachable.goal.assign(m.state_count(), false);
  const auto c2 = canonical_controller(unreachable, all_lose);
  for (const auto& ch : c2.choice) CHECK(ch.move == any_decision(m, {}, 0, true));

  using V = NonControllerStrategy::Variant;
  const auto opp = opponent_labels(labels);
  const auto n0 = canonical_noncontroller(spec, opp, V::N, 0);
  CHECK(n0.at(2).move == any_decision(m, {}, 2, false));
  CHECK_THROWS(canonical_noncontroller(spec, labels, V::Full));
  CHECK_THROWS(canonical_noncontroller(spec, opponent_labels(compute_labels(spec, Ordinal::omega())), V::Infinity));
  const auto inf = canonical_noncontroller(spec, opponent_labels(compute_labels(spec, 7)), V::Infinity);
  CHECK(inf.at(1).move == any_decision(m, {}, 1, false));
}

TEST_CASE("unbounded winner") {
  const auto m = fig3_truncation();
  auto spec = reach_spec(m, "p");
  spec.controller = Player::E;
  CHECK(unbounded_winner(spec, 0) == Player::E);
  CHECK(unbounded_winner(spec, 4) == Player::A);
  spec.goal.assign(m.state_count(), true);
  for (StateIdx q = 0; q < m.state_count(); ++q) CHECK(unbounded_winner(spec, q) == Player::E);
}

TEST_CASE("property: labels agree with a minimax solution of the round rules") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 300; ++i) {
    const auto m = random_model(rng);
    const auto spec = atlgts::testing::random_spec(rng, m);
    Minimax mm(spec);
    const auto n = m.state_count();
    const auto labels = compute_labels(spec, n + 2);
    for (StateIdx q = 0; q < n; ++q) {
      // Least g with a controller win, if any below the bound.
      std::optional<std::size_t> least;
      for (std::size_t g = 0; g < n + 2 && !least; ++g)
        if (mm.controller_wins(g, q)) least = g;
      CAPTURE(i);
      CAPTURE(q);
      if (least) CHECK(labels[q] == Label::ord(*least));
      else CHECK(labels[q] == Label::lose());
      for (std::size_t g = 0; g < n + 2; ++g) CHECK(controller_wins_at(labels, q, g) == mm.controller_wins(g, q));
    }
  }
}
