// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "atlgts/engine.hpp"
#include "atlgts/model.hpp"
#include "atlgts/policy.hpp"
#include "atlgts/random_gen.hpp"
#include "atlgts/semantics.hpp"
#include "atlgts/solver.hpp"
#include "support/embedded_search.hpp"
#include "support/lint.hpp"
#include "support/random_specs.hpp"

using namespace atlgts;
using atlgts::testing::Minimax;

namespace {

constexpr double kFig3Seconds = 1.0;
constexpr double kAgreementSeconds = 60.0;
constexpr double kFig2Seconds = 5.0;
constexpr std::uint64_t kCorpusSeed = 20240611;
constexpr std::size_t kCorpusModels = 200;
constexpr std::size_t kSpecsPerModel = 5;

int failures = 0;

struct Criterion {
  std::string name;
  std::vector<std::string> problems;
  std::ostringstream detail;

  void fail(const std::string& what) {
    if (problems.size() < 5) problems.push_back(what);
    else if (problems.size() == 5) problems.push_back("...");
  }
};

void report(Criterion& c, std::chrono::steady_clock::time_point start, double limit_s = 0) {
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_s > 0 && secs >= limit_s) c.fail("runtime " + std::to_string(secs) + " s over " + std::to_string(limit_s));
  const bool ok = c.problems.empty();
  failures += !ok;
  std::cout << (ok ? "PASS " : "FAIL ") << c.name << "  [" << c.detail.str();
  std::cout << (c.detail.str().empty() ? "" : ", ") << secs << " s]\n";
  for (const auto& p : c.problems) std::cout << "    " << p << "\n";
}

std::vector<Model> corpus() {
  std::mt19937_64 rng(kCorpusSeed);
  std::vector<Model> out;
  for (std::size_t i = 0; i < kCorpusModels; ++i) out.push_back(random_model(rng));
  return out;
}

std::string label_row(const Model& m, const LabelMap& l) {
  std::string s;
  for (StateIdx q = 0; q < m.state_count(); ++q) s += m.state_name(q) + ":" + l[q].to_string() + " ";
  return s;
}

const LabelMap& root_labels(const TruthMap& t) {
  if (!t.labels.back()) throw std::logic_error("root has no labels");
  return *t.labels.back();
}

void fig3_regression() {
  Criterion c{"fig3-label-regression"};
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = fig3_truncation();
  const auto f = parse_formula("<<>> F p");
  const auto nested = parse_formula("<<>> F <<>> F p");
  auto expect = [&](const Formula& g, std::uint64_t gamma, const std::vector<std::string>& want) {
    const auto t = evaluate(m, g, SemanticsKind::gts_bounded(Ordinal(gamma)));
    const auto& l = root_labels(t);
    std::vector<std::string> got;
    for (StateIdx q = 0; q < m.state_count(); ++q) got.push_back(l[q].to_string());
    if (l.perspective != Player::E) c.fail("labels not from Eloise's perspective");
    if (got != want) c.fail(print_formula(g) + " at " + std::to_string(gamma) + ": " + label_row(m, l));
  };
  expect(f, 3, {"lose", "2", "1", "0", "lose", "lose"});
  expect(f, 4, {"3", "2", "1", "0", "lose", "lose"});
  expect(nested, 3, {"1", "0", "0", "0", "lose", "lose"});
  const auto t4 = evaluate(m, nested, SemanticsKind::gts_bounded(Ordinal(4)));
  if (root_labels(t4)[0] != Label::ord(0)) c.fail("nested at 4: q0 is " + root_labels(t4)[0].to_string());
  c.detail << "4 label maps";
  report(c, t0, kFig3Seconds);
}

void four_way(const std::vector<Model>& models) {
  Criterion c{"four-way-agreement"};
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kCorpusSeed + 1);
  std::size_t n = 0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (int j = 0; j < 50; ++j) {
      const auto f = random_formula(rng, models[i].agent_count(), 3);
      const auto r = compare_semantics(models[i], f);
      ++n;
      for (const auto& d : r.disagreements)
        c.fail("model " + std::to_string(i) + " " + d.formula + " at " + d.state);
    }
  }
  c.detail << n << " instances";
  report(c, t0, kAgreementSeconds);
}

void oracle_equivalence() {
  Criterion c{"oracle-equivalence"};
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kCorpusSeed + 2);
  std::size_t checked = 0, skipped = 0;
  while (checked < 50) {
    const auto m = random_model(rng, {4, 2, 2});
    const auto f = random_formula(rng, m.agent_count(), 3);
    TruthMap o;
    try {
      o = oracle_evaluate(m, f);
    } catch (const OracleGuardError&) {
      ++skipped;
      continue;
    }
    const auto s = evaluate(m, f, SemanticsKind::standard());
    if (o.formulas.size() != s.formulas.size()) c.fail("subformula lists differ for " + print_formula(f));
    for (std::size_t k = 0; k < s.formulas.size() && k < o.formulas.size(); ++k)
      if (o.truth[k] != s.truth[k]) c.fail(print_formula(s.formulas[k]) + " in instance " + std::to_string(checked));
    ++checked;
  }
  c.detail << checked << " instances, " << skipped << " over the guard";
  report(c, t0);
}

void label_theory(const std::vector<Model>& models) {
  Criterion c{"label-theory"};
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kCorpusSeed + 3);
  std::size_t specs = 0, checks = 0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const Model& m = models[i];
    const auto n = m.state_count();
    for (std::size_t k = 0; k < kSpecsPerModel; ++k) {
      const auto spec = atlgts::testing::random_spec(rng, m);
      const auto where = "model " + std::to_string(i) + " spec " + std::to_string(k) + ": ";
      ++specs;
      const auto labels = compute_labels(spec, Ordinal(n));

      // Mirror involution.
      const auto mirror = opponent_labels(labels);
      ++checks;
      if (opponent_labels(mirror) != labels) c.fail(where + "mirror is not an involution");
      for (StateIdx q = 0; q < n; ++q)
        if ((labels[q].kind == Label::Kind::Lose) != (mirror[q].kind == Label::Kind::Win))
          c.fail(where + "mirror does not swap lose and win");

      // Forced-set maximum.
      const auto strat = canonical_controller(spec, labels);
      for (StateIdx q = 0; q < n; ++q) {
        if (!labels[q].is_ord() || labels[q].value.is_zero()) continue;
        ++checks;
        const auto reached = forced_set(m, spec.coalition, q, strat.choice[q].move);
        std::optional<Ordinal> max;
        bool all_ord = true;
        for (StateIdx r = 0; r < n; ++r) {
          if (!reached[r]) continue;
          if (!labels[r].is_ord()) all_ord = false;
          else if (!max || *max < labels[r].value) max = labels[r].value;
        }
        if (!all_ord || !max || *max != labels[q].value.predecessor())
          c.fail(where + "forced-set max at " + m.state_name(q) + " is not label-1");
      }

      // Downward existence.
      std::vector<bool> present(n + 1, false);
      for (StateIdx q = 0; q < n; ++q)
        if (labels[q].is_ord()) {
          const auto v = labels[q].value.finite_value();
          if (v > n - 1) c.fail(where + "label " + std::to_string(v) + " above |S|-1");
          else present[v] = true;
        }
      ++checks;
      for (std::size_t v = 1; v < n; ++v)
        if (present[v] && !present[v - 1]) c.fail(where + "label " + std::to_string(v) + " without " + std::to_string(v - 1));

      // Stability.
      for (std::uint64_t g = n; g <= n + 5; ++g) {
        ++checks;
        auto other = compute_labels(spec, Ordinal(g));
        other.gamma = labels.gamma;
        if (other != labels) c.fail(where + "labels change at bound " + std::to_string(g));
      }
      auto big = compute_labels(spec, Ordinal::omega().successor());
      big.gamma = labels.gamma;
      if (big != labels) c.fail(where + "labels change at bound w+1");

      // Determinacy, and labels decide the winner.
      Minimax mm(spec);
      for (StateIdx q = 0; q < n; ++q)
        for (std::size_t g = 0; g <= n; ++g) {
          ++checks;
          const bool cw = mm.controller_wins(g, q);
          const bool ow = mm.opponent_wins(g, q);
          if (cw == ow) c.fail(where + "undetermined at " + m.state_name(q) + ", " + std::to_string(g));
          if (cw != controller_wins_at(compute_labels(spec, Ordinal(g + 1)), q, Ordinal(g)))
            c.fail(where + "labels disagree with search at " + m.state_name(q) + ", " + std::to_string(g));
        }
    }
  }
  c.detail << specs << " games, " << checks << " checks";
  report(c, t0);
}

void strategy_simulation(const std::vector<Model>& models) {
  Criterion c{"strategy-simulation"};
  const auto t0 = std::chrono::steady_clock::now();
  using V = NonControllerStrategy::Variant;
  using atlgts::testing::canonical_controller_wins_all;
  using atlgts::testing::noncontroller_wins_all;
  std::mt19937_64 rng(kCorpusSeed + 4);
  std::size_t games = 0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const Model& m = models[i];
    const auto n = m.state_count();
    for (std::size_t k = 0; k < kSpecsPerModel; ++k) {
      const auto spec = atlgts::testing::random_spec(rng, m);
      const auto where = "model " + std::to_string(i) + " spec " + std::to_string(k) + ": ";
      const auto labels = compute_labels(spec, Ordinal(n + 1));
      const auto mirror = opponent_labels(labels);
      const auto ctrl = canonical_controller(spec, labels);
      const auto full = canonical_noncontroller(spec, opponent_labels(compute_labels(spec, Ordinal(n + 3))), V::Full);
      const auto inf = canonical_noncontroller(spec, mirror, V::Infinity);
      Minimax mm(spec);
      for (StateIdx q = 0; q < n; ++q) {
        const auto& l = labels[q];
        // Controller: wins exactly from gamma >= L(q), including w.
        for (std::size_t g = 0; g <= n + 1; ++g) {
          ++games;
          const bool want = l.is_ord() && l.value <= Ordinal(g);
          if (canonical_controller_wins_all(spec, ctrl, q, g) != want)
            c.fail(where + "controller at " + m.state_name(q) + ", " + std::to_string(g));
        }
        ++games;
        if (canonical_controller_wins_all(spec, ctrl, q, std::nullopt) != l.is_ord())
          c.fail(where + "controller at " + m.state_name(q) + ", w");

        for (std::size_t g = 0; g <= n + 2; ++g) {
          if (!mm.opponent_wins(g, q)) continue;
          ++games;
          if (!noncontroller_wins_all(spec, full, q, g))
            c.fail(where + "full non-controller at " + m.state_name(q) + ", " + std::to_string(g));
          if (l.kind == Label::Kind::Lose) {
            ++games;
            if (!noncontroller_wins_all(spec, inf, q, g))
              c.fail(where + "infinity non-controller at " + m.state_name(q) + ", " + std::to_string(g));
          }
        }
      }
      // n-canonical: wins G[q, m] for all m <= n wherever the opponent can.
      for (std::size_t nn = 0; nn <= n + 1; ++nn) {
        const auto s = canonical_noncontroller(spec, mirror, V::N, nn);
        for (StateIdx q = 0; q < n; ++q)
          for (std::size_t g = 0; g <= nn; ++g) {
            if (!mm.opponent_wins(g, q)) continue;
            ++games;
            if (!noncontroller_wins_all(spec, s, q, g))
              c.fail(where + std::to_string(nn) + "-canonical at " + m.state_name(q) + ", " + std::to_string(g));
          }
      }
    }
  }
  c.detail << games << " exhaustive games";
  report(c, t0);
}

void fig2_suite() {
  Criterion c{"fig2-play-suite"};
  const auto t0 = std::chrono::steady_clock::now();
  const auto lazy = fig2_lazy_model();
  const auto fp = parse_formula("<<>> F p");
  const auto xfp = parse_formula("<<>> X <<>> F p");
  auto play = [&](const Formula& f, GameMode mode, const std::string& e, const std::string& a) {
    Session s(lazy, "q0", f, std::move(mode), {{Player::E, Role::of(make_policy(e))}, {Player::A, Role::of(make_policy(a))}});
    s.run_machine();
    return s.transcript().winner;
  };
  for (std::uint64_t n = 0; n <= 20; ++n) {
    const auto ns = std::to_string(n);
    if (play(fp, GameMode::finitely_bounded(), "fig2-eloise:" + ns, "fig2-abelard") != Player::A)
      c.fail("(a) announcement " + ns);
    if (play(fp, GameMode::bounded(Ordinal::omega().successor()), "fig2-eloise-omega", "fig2-abelard:" + ns) !=
        Player::E)
      c.fail("(b) Abelard action " + ns);
    if (play(xfp, GameMode::finitely_bounded(), "fig2-eloise-diagonal", "fig2-abelard:" + ns) != Player::E)
      c.fail("(c) Abelard action " + ns);
  }
  c.detail << "63 plays";
  report(c, t0, kFig2Seconds);
}

void unfolding(const std::vector<Model>& models) {
  Criterion c{"unfolding-suite"};
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kCorpusSeed + 5);
  std::size_t n = 0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const Model& m = models[i];
    for (int j = 0; j < 5; ++j) {
      std::vector<AgentId> ids;
      for (AgentId a = 1; a <= m.agent_count(); ++a)
        if (rng() % 2) ids.push_back(a);
      const AgentSet coalition(ids);
      const auto lhs = random_formula(rng, m.agent_count(), 1);
      const auto rhs = random_formula(rng, m.agent_count(), 1);
      for (const auto& f : {Formula::coop_g(coalition, rhs), Formula::coop_u(coalition, lhs, rhs)}) {
        ++n;
        const auto r = check_fb_unfolding(m, f);
        for (const auto& e : r.unfolding_failures) c.fail("model " + std::to_string(i) + " " + print_formula(f) + ": " + e);
        for (const auto& e : r.axiom_failures) c.fail("model " + std::to_string(i) + " " + print_formula(f) + ": " + e);
      }
    }
  }
  c.detail << n << " formulas";
  report(c, t0);
}

void engine_lint() {
  Criterion c{"engine-rule-fidelity"};
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kCorpusSeed + 6);
  std::size_t moves = 0, embedded = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto m = random_model(rng);
    const auto f = random_formula(rng, m.agent_count(), 3);
    GameMode mode;
    switch (rng() % 4) {
      case 0: mode = GameMode::finitely_bounded(); break;
      case 1: mode = GameMode::bounded(Ordinal(1 + rng() % (m.state_count() + 1))); break;
      case 2: mode = GameMode::bounded(Ordinal::omega().successor()); break;
      default: mode = GameMode::bounded(Ordinal::parse("w^2+1")); break;
    }
    Session s(std::make_shared<ModelArena>(std::make_shared<const Model>(m)), m.state_name(0), f, mode,
              {{Player::E, Role::of(std::make_shared<RandomPolicy>(rng()))},
               {Player::A, Role::of(std::make_shared<RandomPolicy>(rng()))}});
    s.run_machine(100000);
    moves += s.transcript().moves.size();
    for (const auto& e : s.transcript().moves)
      if (e.stage == Stage::AnnounceLimit) {
        ++embedded;
        break;
      }
    const auto where = "play " + std::to_string(i) + " " + print_formula(f) + " " + mode.name() + ": ";
    if (!s.ended()) c.fail(where + "did not terminate");
    for (const auto& v : atlgts::testing::lint_transcript(s.transcript(), mode)) c.fail(where + v);
  }
  c.detail << "1000 plays, " << embedded << " with embedded games, " << moves << " transcript entries";
  report(c, t0);
}

}  // namespace

int main() {
  const auto models = corpus();
  const std::vector<std::pair<const char*, std::function<void()>>> runs{
      {"fig3", fig3_regression},
      {"agreement", [&] { four_way(models); }},
      {"oracle", oracle_equivalence},
      {"labels", [&] { label_theory(models); }},
      {"strategies", [&] { strategy_simulation(models); }},
      {"fig2", fig2_suite},
      {"unfolding", [&] { unfolding(models); }},
      {"lint", engine_lint},
  };
  for (const auto& [name, run] : runs) {
    try {
      run();
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "FAIL " << name << "  [exception: " << e.what() << "]\n";
    }
  }
  std::cout << (failures ? "acceptance: " + std::to_string(failures) + " failing\n" : "acceptance: all passing\n");
  return failures ? 1 : 0;
}
