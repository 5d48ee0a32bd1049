#include "atlgts/engine.hpp"

namespace atlgts {

std::string GameMode::name() const {
  switch (kind) {
    case Kind::Unbounded: return "unbounded";
    case Kind::Bounded: return "bounded";
    case Kind::FinitelyBounded: return "finitely-bounded";
  }
  return "?";
}

GameMode parse_mode(const std::string& name, const std::optional<std::string>& gamma, bool finite_arena,
                    const Ordinal& auto_gamma) {
  (void)finite_arena;
  if (name == "unbounded" || name == "gts-unbounded") {
    if (gamma) throw std::invalid_argument("--gamma-bound only applies to bounded play");
    return GameMode::unbounded();
  }
  if (name == "finitely-bounded" || name == "gts-finitely-bounded") {
    if (gamma) throw std::invalid_argument("--gamma-bound only applies to bounded play");
    return GameMode::finitely_bounded();
  }
  if (name == "bounded" || name == "gts-bounded") {
    if (!gamma || *gamma == "auto") return GameMode::bounded(auto_gamma);
    return GameMode::bounded(Ordinal::parse(*gamma));
  }
  throw std::invalid_argument("unknown game mode '" + name + "'");
}

// ---------------------------------------------------------------------------

std::string Move::to_string() const {
  switch (kind) {
    case Kind::Left: return "Left";
    case Kind::Right: return "Right";
    case Kind::EndNow: return "EndNow";
    case Kind::Continue: return "Continue";
    case Kind::Actions: {
      std::string out = "actions(";
      for (std::size_t i = 0; i < actions.size(); ++i) out += (i ? "," : "") + actions[i];
      return out + ")";
    }
    case Kind::Limit: return "limit(" + limit.to_string() + ")";
  }
  return "?";
}

nlohmann::json Move::to_json() const {
  switch (kind) {
    case Kind::Actions: return {{"actions", actions}};
    case Kind::Limit: return {{"limit", limit.to_string()}};
    default: return to_string();
  }
}

Move Move::from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "Left") return left();
    if (s == "Right") return right();
    if (s == "EndNow") return end_now();
    if (s == "Continue") return cont();
    throw std::invalid_argument("unknown move '" + s + "'");
  }
  if (j.is_object() && j.contains("actions") && j["actions"].is_array()) {
    std::vector<std::string> names;
    for (const auto& a : j["actions"]) {
      if (a.is_string()) names.push_back(a.get<std::string>());
      else if (a.is_number_unsigned()) names.push_back(std::to_string(a.get<std::uint64_t>()));
      else throw std::invalid_argument("actions must be strings");
    }
    return with_actions(std::move(names));
  }
  if (j.is_object() && j.contains("limit")) {
    const auto& l = j["limit"];
    if (l.is_number_unsigned()) return with_limit(Ordinal(l.get<std::uint64_t>()));
    if (l.is_string()) return with_limit(Ordinal::parse(l.get<std::string>()));
    throw std::invalid_argument("limit must be ordinal text");
  }
  throw std::invalid_argument("unrecognized move " + j.dump());
}

const char* to_string(Stage s) {
  switch (s) {
    case Stage::AtPosition: return "AtPosition";
    case Stage::AnnounceLimit: return "AnnounceLimit";
    case Stage::ControllerEnd: return "ControllerEnd";
    case Stage::OpponentEnd: return "OpponentEnd";
    case Stage::VerifierMove: return "VerifierMove";
    case Stage::FalsifierMove: return "FalsifierMove";
    case Stage::LowerLimit: return "LowerLimit";
    case Stage::Ended: return "Ended";
  }
  return "?";
}

bool Menu::contains(const Move& m) const {
  switch (kind) {
    case Kind::Disjunct: return m.kind == Move::Kind::Left || m.kind == Move::Kind::Right;
    case Kind::EndOffer: return m.kind == Move::Kind::EndNow || m.kind == Move::Kind::Continue;
    case Kind::Actions:
      if (m.kind != Move::Kind::Actions || m.actions.size() != agents.size()) return false;
      for (std::size_t i = 0; i < agents.size(); ++i)
        if (!domains[i].contains(m.actions[i])) return false;
      return true;
    case Kind::Limit: return m.kind == Move::Kind::Limit && m.limit < bound && (!finite_only || m.limit.is_finite());
  }
  return false;
}

nlohmann::json Menu::to_json() const {
  nlohmann::json j;
  j["actor"] = atlgts::to_string(actor);
  switch (kind) {
    case Kind::Disjunct:
      j["kind"] = "disjunct";
      j["options"] = {"Left", "Right"};
      break;
    case Kind::EndOffer:
      j["kind"] = "endOffer";
      j["options"] = {"EndNow", "Continue"};
      break;
    case Kind::Actions: {
      j["kind"] = "actions";
      j["agents"] = nlohmann::json::array();
      for (std::size_t i = 0; i < agents.size(); ++i) {
        nlohmann::json a{{"agent", agents[i]}};
        if (domains[i].all_naturals) a["actions"] = "naturals";
        else a["actions"] = domains[i].finite;
        j["agents"].push_back(a);
      }
      break;
    }
    case Kind::Limit:
      j["kind"] = "limit";
      j["below"] = bound.to_string();
      j["finiteOnly"] = finite_only;
      break;
  }
  return j;
}

nlohmann::json Transcript::to_json() const {
  nlohmann::json j;
  j["moves"] = nlohmann::json::array();
  for (const auto& e : moves) {
    nlohmann::json m{{"phase", to_string(e.stage)}, {"actor", e.actor}, {"move", e.move.to_json()},
                     {"state", e.state}, {"formula", e.formula}};
    if (e.limit) m["limit"] = e.limit->to_string();
    j["moves"].push_back(m);
  }
  j["winner"] = winner ? nlohmann::json(atlgts::to_string(*winner)) : nlohmann::json(nullptr);
  j["reason"] = reason.empty() ? nlohmann::json(nullptr) : nlohmann::json(reason);
  return j;
}

// ---------------------------------------------------------------------------

Session::Session(std::shared_ptr<const Arena> arena, std::string state, Formula root, GameMode mode,
                 std::map<Player, Role> roles)
    : arena_(std::move(arena)), initial_(std::move(state)), root_(std::move(root)), mode_(std::move(mode)),
      roles_(std::move(roles)) {
  if (!arena_) throw std::invalid_argument("session without a model");
  if (!arena_->has_state(initial_)) throw std::invalid_argument("unknown state '" + initial_ + "'");
  if (mode_.kind == GameMode::Kind::Bounded && mode_.gamma.is_zero())
    throw std::invalid_argument("time limit bound must be positive");
  for (const auto& g : subformulas(root_))
    if (g.is_strategic())
      for (AgentId a : g.coalition().ids())
        if (a < 1 || a > arena_->agent_count())
          throw std::invalid_argument("coalition references unknown agent " + std::to_string(a));
  for (const auto& [p, r] : roles_)
    if (!r.is_human() && !arena_->is_finite() && !r.machine->scripted())
      throw std::invalid_argument("lazy model requires scripted machine");
  enter_position(Player::E, initial_, root_);
  settle();
}

const Model* Session::model() const {
  const auto* m = dynamic_cast<const ModelArena*>(arena_.get());
  return m ? &m->model() : nullptr;
}

const Role& Session::role(Player p) const {
  static const Role human;
  const auto it = roles_.find(p);
  return it == roles_.end() ? human : it->second;
}

Player Session::mover() const {
  const auto& ctx = phase_.embedded;
  switch (phase_.stage) {
    case Stage::AtPosition: return phase_.verifier;
    case Stage::AnnounceLimit:
    case Stage::ControllerEnd:
    case Stage::LowerLimit: return ctx->controller;
    case Stage::OpponentEnd: return opponent(ctx->controller);
    case Stage::VerifierMove: return phase_.verifier;
    case Stage::FalsifierMove: return opponent(phase_.verifier);
    case Stage::Ended: break;
  }
  throw IllegalMove("game has ended");
}

std::optional<Menu> Session::menu() const {
  if (ended()) return std::nullopt;
  Menu m;
  m.actor = mover();
  switch (phase_.stage) {
    case Stage::AtPosition: m.kind = Menu::Kind::Disjunct; break;
    case Stage::ControllerEnd:
    case Stage::OpponentEnd: m.kind = Menu::Kind::EndOffer; break;
    case Stage::AnnounceLimit:
    case Stage::LowerLimit:
      m.kind = Menu::Kind::Limit;
      m.bound = phase_.stage == Stage::AnnounceLimit ? mode_.gamma : phase_.limit;
      m.finite_only = mode_.kind == GameMode::Kind::FinitelyBounded;
      break;
    case Stage::VerifierMove:
    case Stage::FalsifierMove: {
      m.kind = Menu::Kind::Actions;
      const auto& a = phase_.formula.coalition();
      const auto agents = phase_.stage == Stage::VerifierMove ? a : a.complement(arena_->agent_count());
      for (AgentId id : agents.ids()) {
        m.agents.push_back(id);
        m.domains.push_back(arena_->actions(id, phase_.state));
      }
      break;
    }
    case Stage::Ended: return std::nullopt;
  }
  return m;
}

bool Session::machine_pending() const { return !ended() && !role(mover()).is_human(); }

void Session::record(const std::string& actor, const Move& m) {
  std::optional<Ordinal> limit;
  if (phase_.embedded && mode_.timed() && phase_.stage != Stage::AnnounceLimit) limit = phase_.limit;
  transcript_.moves.push_back({phase_.stage, actor, m, phase_.state, limit, print_formula(phase_.formula)});
}

void Session::enter_position(Player p, std::string state, Formula f) {
  phase_.stage = Stage::AtPosition;
  phase_.verifier = p;
  phase_.state = std::move(state);
  phase_.formula = std::move(f);
  phase_.embedded.reset();
  phase_.pending.clear();
}

void Session::finish(Player winner, std::string reason) {
  phase_.stage = Stage::Ended;
  phase_.winner = winner;
  phase_.reason = exit_reason_.value_or(std::move(reason));
  transcript_.winner = winner;
  transcript_.reason = phase_.reason;
}

void Session::exit_to(Player p, const Formula& f, const char* reason) {
  const Formula target = f;  // f refers into the context being dropped
  enter_position(p, phase_.state, target);
  exit_reason_ = reason;
}

void Session::start_round() {
  auto& ctx = *phase_.embedded;
  ++ctx.rounds;
  if (mode_.timed() && phase_.limit.is_zero()) {
    phase_.stage = Stage::ControllerEnd;
    record("auto", Move::end_now());
    exit_to(ctx.verifier, ctx.controller_goal(), "time-exhausted-exit");
    return;
  }
  phase_.stage = Stage::ControllerEnd;
}

void Session::take_step(const std::vector<std::string>& complement_actions) {
  const auto& a = phase_.formula.coalition();
  std::vector<std::string> profile;
  std::size_t own = 0;
  std::size_t rest = 0;
  for (AgentId id = 1; id <= arena_->agent_count(); ++id)
    profile.push_back(a.contains(id) ? phase_.pending.at(own++) : complement_actions.at(rest++));
  auto next = arena_->step(phase_.state, profile);
  phase_.pending.clear();
  if (!phase_.embedded) {
    enter_position(phase_.verifier, std::move(next), phase_.formula.sub());
    return;
  }
  phase_.state = std::move(next);
  if (mode_.timed() && phase_.limit.is_limit()) {
    phase_.stage = Stage::LowerLimit;
    return;
  }
  if (mode_.timed()) phase_.limit = phase_.limit.predecessor();
  start_round();
}

void Session::settle() {
  using K = Formula::Kind;
  while (true) {
    switch (phase_.stage) {
      case Stage::AtPosition: {
        const Formula f = phase_.formula;
        const Player p = phase_.verifier;
        switch (f.kind()) {
          case K::Prop: {
            bool holds = false;
            for (const auto& x : arena_->props(phase_.state)) holds = holds || x == f.name();
            finish(holds ? p : opponent(p), "ending-position-prop");
            return;
          }
          case K::True: finish(p, "true/false-atom"); return;
          case K::False: finish(opponent(p), "true/false-atom"); return;
          case K::Not:
            phase_.verifier = opponent(p);
            phase_.formula = f.sub();
            continue;
          case K::Or: return;
          case K::CoopX: phase_.stage = Stage::VerifierMove; continue;
          case K::CoopU:
          case K::CoopR: {
            EmbeddedContext ctx;
            ctx.verifier = p;
            ctx.controller = f.kind() == K::CoopU ? p : opponent(p);
            ctx.formula = f;
            phase_.embedded = ctx;
            if (mode_.timed()) {
              phase_.stage = Stage::AnnounceLimit;
              return;
            }
            start_round();
            continue;
          }
        }
        return;
      }
      case Stage::VerifierMove:
        if (!phase_.formula.coalition().empty()) return;
        record("auto", Move::with_actions({}));
        phase_.pending.clear();
        phase_.stage = Stage::FalsifierMove;
        continue;
      case Stage::FalsifierMove:
        if (phase_.formula.coalition().size() != arena_->agent_count()) return;
        record("auto", Move::with_actions({}));
        take_step({});
        continue;
      default: return;
    }
  }
}

void Session::apply(Player actor, const Move& m) {
  if (ended()) throw IllegalMove("game has ended");
  const auto menu_now = *menu();
  if (actor != menu_now.actor)
    throw IllegalMove(std::string("not your turn: waiting for ") + to_string(menu_now.actor));
  if (!menu_now.contains(m)) {
    if (menu_now.kind == Menu::Kind::Limit && m.kind == Move::Kind::Limit && menu_now.finite_only &&
        !m.limit.is_finite())
      throw IllegalMove("finite limits only");
    throw IllegalMove("illegal move " + m.to_string() + " at stage " + to_string(phase_.stage));
  }
  record(to_string(actor), m);
  exit_reason_.reset();
  ++version_;
  auto& ctx = phase_.embedded;
  switch (phase_.stage) {
    case Stage::AtPosition:
      enter_position(phase_.verifier, phase_.state,
                     m.kind == Move::Kind::Left ? phase_.formula.lhs() : phase_.formula.rhs());
      break;
    case Stage::AnnounceLimit:
      ctx->announced = m.limit;
      phase_.limit = m.limit;
      start_round();
      break;
    case Stage::ControllerEnd:
      if (m.kind == Move::Kind::EndNow) exit_to(ctx->verifier, ctx->controller_goal(), "voluntary-exit");
      else phase_.stage = Stage::OpponentEnd;
      break;
    case Stage::OpponentEnd:
      if (m.kind == Move::Kind::EndNow) exit_to(ctx->verifier, ctx->opponent_goal(), "voluntary-exit");
      else phase_.stage = Stage::VerifierMove;
      break;
    case Stage::VerifierMove:
      phase_.pending = m.actions;
      phase_.stage = Stage::FalsifierMove;
      break;
    case Stage::FalsifierMove: take_step(m.actions); break;
    case Stage::LowerLimit:
      phase_.limit = m.limit;
      start_round();
      break;
    case Stage::Ended: break;
  }
  settle();
}

bool Session::step_machine() {
  if (!machine_pending()) return false;
  const auto menu_now = *menu();
  apply(menu_now.actor, role(menu_now.actor).machine->choose(*this, menu_now));
  return true;
}

const Transcript& Session::run_machine(std::size_t budget) {
  if (budget == 0) throw std::invalid_argument("step budget must be at least 1");
  for (std::size_t i = 0; i < budget; ++i)
    if (!step_machine()) return transcript_;
  if (!ended() && machine_pending() && phase_.embedded && mode_.kind == GameMode::Kind::Unbounded) {
    // Treated as the infinite play that the controller loses.
    exit_reason_.reset();
    finish(opponent(phase_.embedded->controller), "step-budget-exceeded");
  }
  return transcript_;
}

nlohmann::json Session::view() const {
  nlohmann::json j;
  j["version"] = version_;
  j["stage"] = to_string(phase_.stage);
  j["verifier"] = to_string(phase_.verifier);
  j["state"] = phase_.state;
  j["formula"] = print_formula(phase_.formula);
  j["root"] = print_formula(root_);
  j["mode"] = mode_.name();
  if (mode_.kind == GameMode::Kind::Bounded) j["gammaBound"] = mode_.gamma.to_string();
  if (phase_.embedded) {
    const auto& c = *phase_.embedded;
    nlohmann::json e{{"verifier", to_string(c.verifier)},
                     {"controller", to_string(c.controller)},
                     {"coalition", c.coalition().ids()},
                     {"formula", print_formula(c.formula)},
                     {"rounds", c.rounds}};
    e["announced"] = c.announced ? nlohmann::json(c.announced->to_string()) : nlohmann::json(nullptr);
    j["embedded"] = e;
    if (mode_.timed() && phase_.stage != Stage::AnnounceLimit) j["limit"] = phase_.limit.to_string();
  } else {
    j["embedded"] = nullptr;
  }
  if (phase_.stage == Stage::FalsifierMove) j["pending"] = phase_.pending;
  const auto m = menu();
  j["menu"] = m ? m->to_json() : nlohmann::json(nullptr);
  j["machinePending"] = machine_pending();
  j["ended"] = ended();
  j["winner"] = phase_.winner ? nlohmann::json(to_string(*phase_.winner)) : nlohmann::json(nullptr);
  j["reason"] = phase_.reason.empty() ? nlohmann::json(nullptr) : nlohmann::json(phase_.reason);
  return j;
}

}  // namespace atlgts
