// Command-line front end: check, labels, play, compare, difftest, serve.

#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "atlgts/difftest.hpp"
#include "atlgts/engine.hpp"
#include "atlgts/formula.hpp"
#include "atlgts/model.hpp"
#include "atlgts/policy.hpp"
#include "atlgts/semantics.hpp"
#include "atlgts/service.hpp"

using namespace atlgts;

namespace {

enum class Level { debug, info, warn, error };

Level log_level() {
  const char* env = std::getenv("ATLGTS_LOG");
  const std::string v = env ? env : "warn";
  if (v == "debug") return Level::debug;
  if (v == "info") return Level::info;
  if (v == "error") return Level::error;
  return Level::warn;
}

void log(Level l, const std::string& msg) {
  static const Level threshold = log_level();
  static const char* names[] = {"debug", "info", "warn", "error"};
  if (l >= threshold) std::cerr << "[" << names[static_cast<int>(l)] << "] " << msg << "\n";
}

struct Config {
  std::string model_path;
  std::string lazy;
  std::string formula;
  std::string state;
  std::string semantics = "standard";
  std::string mode;
  std::optional<std::string> gamma;
  std::string player = "E";
  std::string role = "eloise";
  std::string machine;
  std::uint64_t seed = 42;
  std::size_t count = 200;
  std::size_t formulas = 5;
  std::size_t budget = 10000;
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string snapshots;
};

Model read_model(const Config& c) {
  if (!c.lazy.empty()) throw std::invalid_argument("this command needs a finite model (-m), not a lazy one");
  if (c.model_path.empty()) throw std::invalid_argument("missing --model");
  return load_model_file(c.model_path);
}

Formula read_formula(const Config& c) {
  if (c.formula.empty()) throw std::invalid_argument("missing --formula");
  return parse_formula(c.formula);
}

SemanticsKind read_semantics(const Config& c) {
  if (c.gamma && c.semantics != "gts-bounded")
    throw std::invalid_argument("--gamma-bound only applies to --semantics gts-bounded");
  std::optional<Ordinal> gamma;
  if (c.gamma && *c.gamma != "auto") gamma = Ordinal::parse(*c.gamma);
  return SemanticsKind::parse(c.semantics, gamma);
}

Player read_player(const std::string& s) {
  if (s == "E" || s == "eloise") return Player::E;
  if (s == "A" || s == "abelard") return Player::A;
  throw std::invalid_argument("unknown player '" + s + "'");
}

int cmd_check(const Config& c) {
  const auto m = read_model(c);
  const auto f = read_formula(c);
  const auto tm = evaluate(m, f, read_semantics(c));
  if (!c.state.empty()) {
    const bool v = tm.root()[m.state(c.state)];
    std::cout << c.state << "\t" << (v ? "true" : "false") << "\n";
    return v ? 0 : 1;
  }
  bool all = true;
  for (StateIdx q = 0; q < m.state_count(); ++q) {
    std::cout << m.state_name(q) << "\t" << (tm.root()[q] ? "true" : "false") << "\n";
    all = all && tm.root()[q];
  }
  return all ? 0 : 1;
}

int cmd_labels(Config c) {
  const auto m = read_model(c);
  const auto f = read_formula(c);
  if (f.kind() != Formula::Kind::CoopU && f.kind() != Formula::Kind::CoopR)
    throw std::invalid_argument("labels needs an until or release formula at the root (F and G included)");
  if (c.semantics == "standard") c.semantics = "gts-bounded";
  if (c.semantics == "gts-unbounded" && !c.gamma) c.gamma = "w", c.semantics = "gts-bounded";
  const auto kind = read_semantics(c);
  if (kind.kind != SemanticsKind::Kind::GtsBounded) throw std::invalid_argument("labels are defined for GTS kinds");
  const auto tm = evaluate(m, f, kind);
  const auto& labels = *tm.labels.back();
  const auto shown = read_player(c.player) == labels.perspective ? labels : opponent_labels(labels);
  for (StateIdx q = 0; q < m.state_count(); ++q) std::cout << m.state_name(q) << "\t" << shown[q].to_string() << "\n";
  return 0;
}

int cmd_compare(const Config& c) {
  const auto m = read_model(c);
  const auto report = compare_semantics(m, read_formula(c));
  std::cout << report.to_json(m) << "\n";
  return report.disagreements.empty() ? 0 : 1;
}

int cmd_difftest(const Config& c) {
  DifftestOptions opt;
  opt.seed = c.seed;
  opt.models = c.count;
  opt.formulas_per_model = c.formulas;
  const auto r = run_difftest(opt);
  print_difftest(opt, r, std::cout);
  return r.ok() ? 0 : 1;
}

// ---------------------------------------------------------------------------

void show(const Session& s) {
  const auto& p = s.phase();
  std::cout << "-- " << to_string(p.stage) << "  state " << p.state << "  " << to_string(p.verifier) << " verifies "
            << print_formula(p.formula);
  if (p.embedded && s.mode().timed() && p.stage != Stage::AnnounceLimit) std::cout << "  limit " << p.limit.to_string();
  std::cout << "\n";
}

std::optional<Move> prompt(const Menu& menu) {
  switch (menu.kind) {
    case Menu::Kind::Disjunct: std::cout << "choose a disjunct [l/r]: "; break;
    case Menu::Kind::EndOffer: std::cout << "end the game here? [y/n]: "; break;
    case Menu::Kind::Actions: {
      std::cout << "actions for agents";
      for (std::size_t i = 0; i < menu.agents.size(); ++i) {
        std::cout << " " << menu.agents[i] << " {";
        if (menu.domains[i].all_naturals) std::cout << "0,1,2,...";
        for (std::size_t k = 0; k < menu.domains[i].finite.size(); ++k)
          std::cout << (k ? "," : "") << menu.domains[i].finite[k];
        std::cout << "}";
      }
      std::cout << ": ";
      break;
    }
    case Menu::Kind::Limit:
      if (menu.finite_only) std::cout << "announce a natural number time limit: ";
      else std::cout << "time limit below " << menu.bound.to_string() << ": ";
      break;
  }
  std::string line;
  if (!std::getline(std::cin, line)) return std::nullopt;
  switch (menu.kind) {
    case Menu::Kind::Disjunct: return line == "r" || line == "right" ? Move::right() : Move::left();
    case Menu::Kind::EndOffer: return line == "y" || line == "yes" ? Move::end_now() : Move::cont();
    case Menu::Kind::Actions: {
      std::istringstream in(line);
      std::vector<std::string> names;
      for (std::string a; in >> a;) names.push_back(a);
      return Move::with_actions(std::move(names));
    }
    case Menu::Kind::Limit: return Move::with_limit(Ordinal::parse(line));
  }
  return std::nullopt;
}

int cmd_play(const Config& c) {
  std::shared_ptr<const Arena> arena;
  std::string state = c.state;
  Ordinal auto_gamma = Ordinal::omega().successor();
  if (!c.lazy.empty()) {
    auto lazy = lazy_model(c.lazy);
    if (state.empty()) state = lazy->initial();
    arena = lazy;
  } else {
    auto m = std::make_shared<const Model>(read_model(c));
    if (state.empty()) state = m->state_name(0);
    auto_gamma = stable_bound(*m);
    arena = std::make_shared<ModelArena>(m);
  }
  const auto mode = parse_mode(c.mode.empty() ? "bounded" : c.mode, c.gamma, arena->is_finite(), auto_gamma);
  std::map<Player, Role> roles;
  const bool eloise = c.role == "eloise" || c.role == "E" || c.role == "both";
  const bool abelard = c.role == "abelard" || c.role == "A" || c.role == "both";
  if (!eloise && !abelard && c.role != "none") throw std::invalid_argument("--role is eloise, abelard, both or none");
  auto machine_for = [&](Player p) {
    if (!c.machine.empty()) return make_policy(c.machine, c.seed);
    if (arena->is_finite()) return make_policy("canonical");
    return make_policy(p == Player::E ? "fig2-eloise-diagonal" : "fig2-abelard");
  };
  if (!eloise) roles[Player::E] = Role::of(machine_for(Player::E));
  if (!abelard) roles[Player::A] = Role::of(machine_for(Player::A));
  Session s(arena, state, read_formula(c), mode, roles);
  log(Level::info, "mode " + mode.name() + ", seed " + std::to_string(c.seed));
  while (!s.ended()) {
    show(s);
    if (s.machine_pending()) {
      const auto before = s.transcript().moves.size();
      s.step_machine();
      for (auto i = before; i < s.transcript().moves.size(); ++i) {
        const auto& e = s.transcript().moves[i];
        std::cout << "   " << e.actor << " plays " << e.move.to_string() << "\n";
      }
      continue;
    }
    const auto menu = *s.menu();
    std::cout << to_string(menu.actor) << ", ";
    std::optional<Move> m;
    try {
      m = prompt(menu);
    } catch (const std::invalid_argument& e) {
      std::cout << "not understood: " << e.what() << "\n";
      continue;
    }
    if (!m) {
      std::cout << "\ninput closed, game abandoned\n";
      return 2;
    }
    try {
      s.apply(menu.actor, *m);
    } catch (const IllegalMove& e) {
      std::cout << "illegal: " << e.what() << "\n";
    }
  }
  std::cout << "winner " << to_string(*s.phase().winner) << " (" << s.phase().reason << ")\n";
  return 0;
}

int cmd_serve(const Config& c) {
  SessionService service(c.snapshots.empty() ? std::nullopt : std::optional<std::string>(c.snapshots), c.budget);
  std::cout << "listening on " << c.host << ":" << c.port << std::endl;
  return service.serve(c.host, c.port) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ATL model checker and evaluation-game engine"};
  app.require_subcommand(1);
  Config c;

  auto model_opts = [&](CLI::App* sub) {
    sub->add_option("-m,--model", c.model_path, "model JSON file");
    sub->add_option("-f,--formula", c.formula, "ATL formula");
    sub->add_option("--state", c.state, "state to query");
  };
  auto sem_opts = [&](CLI::App* sub) {
    sub->add_option("--semantics", c.semantics, "standard, gts-unbounded, gts-bounded, gts-finitely-bounded");
    sub->add_option("--gamma-bound", c.gamma, "time limit bound: auto or ordinal text such as 3, w, w+1");
  };

  auto* check = app.add_subcommand("check", "truth of a formula at each state");
  model_opts(check);
  sem_opts(check);
  auto* labels = app.add_subcommand("labels", "winning time labels of the root until/release formula");
  model_opts(labels);
  sem_opts(labels);
  labels->add_option("--player", c.player, "E or A");
  auto* compare = app.add_subcommand("compare", "evaluate under all four semantics");
  model_opts(compare);
  auto* play = app.add_subcommand("play", "play the evaluation game in the terminal");
  model_opts(play);
  play->add_option("--lazy", c.lazy, "lazy model name (fig2)");
  play->add_option("--mode,--semantics", c.mode, "unbounded, bounded, finitely-bounded");
  play->add_option("--gamma-bound", c.gamma, "time limit bound for bounded play");
  play->add_option("--role", c.role, "human side: eloise, abelard, both, none");
  play->add_option("--machine", c.machine, "machine policy: canonical, random, or a script name");
  play->add_option("--seed", c.seed, "seed for random machines");
  auto* difftest = app.add_subcommand("difftest", "random differential test of the semantics and the oracle");
  difftest->add_option("--seed", c.seed, "random seed");
  difftest->add_option("--count", c.count, "number of random models");
  difftest->add_option("--formulas", c.formulas, "formulas per model");
  auto* serve = app.add_subcommand("serve", "run the HTTP session service");
  serve->add_option("--port", c.port, "port");
  serve->add_option("--host", c.host, "bind address");
  serve->add_option("--budget", c.budget, "machine step budget per reply");
  serve->add_option("--snapshots", c.snapshots, "directory for session snapshots");
  for (auto* sub : {check, labels, compare})
    sub->add_option("--lazy", c.lazy, "lazy model name (rejected: needs a finite model)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) return cmd_check(c);
    if (*labels) return cmd_labels(c);
    if (*compare) return cmd_compare(c);
    if (*play) return cmd_play(c);
    if (*difftest) return cmd_difftest(c);
    if (*serve) return cmd_serve(c);
  } catch (const FormulaParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const ModelError& e) {
    std::cerr << "error: invalid model\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
