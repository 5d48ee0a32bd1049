#include "atlgts/service.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <httplib.h>

#include "atlgts/policy.hpp"

namespace atlgts {

namespace {

std::string new_id() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mu);
  std::ostringstream out;
  out << std::hex << rng();
  return out.str();
}

std::string now_iso() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

ServiceResponse error(int status, const std::string& message, nlohmann::json extra = nlohmann::json::object()) {
  extra["error"] = message;
  return {status, std::move(extra)};
}

Player parse_player(const std::string& s) {
  if (s == "E" || s == "eloise" || s == "Eloise") return Player::E;
  if (s == "A" || s == "abelard" || s == "Abelard") return Player::A;
  throw std::invalid_argument("unknown player '" + s + "'");
}

bool flag(const std::map<std::string, std::string>& query, const std::string& key) {
  const auto it = query.find(key);
  return it != query.end() && (it->second == "true" || it->second == "1" || it->second.empty());
}

}  // namespace

SessionService::SessionService(std::optional<std::string> snapshot_dir, std::size_t budget)
    : snapshot_dir_(std::move(snapshot_dir)), budget_(budget) {
  if (snapshot_dir_) {
    std::filesystem::create_directories(*snapshot_dir_);
    load_snapshots();
  }
}

std::size_t SessionService::session_count() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::unique_ptr<Session> SessionService::build(const nlohmann::json& req) {
  if (!req.is_object()) throw std::invalid_argument("request body must be a JSON object");
  std::shared_ptr<const Arena> arena;
  std::string state;
  Ordinal auto_gamma = Ordinal::omega().successor();
  if (req.contains("model") && req.contains("lazyModel"))
    throw std::invalid_argument("give either model or lazyModel, not both");
  if (req.contains("model")) {
    auto m = std::make_shared<const Model>(load_model(req["model"].dump()));
    auto_gamma = stable_bound(*m);
    state = m->state_count() ? m->state_name(0) : "";
    arena = std::make_shared<ModelArena>(std::move(m));
  } else if (req.contains("lazyModel")) {
    auto lazy = lazy_model(req.at("lazyModel").get<std::string>());
    state = lazy->initial();
    arena = std::move(lazy);
  } else {
    throw std::invalid_argument("missing model or lazyModel");
  }
  if (req.contains("state")) state = req["state"].get<std::string>();
  if (!req.contains("formula")) throw std::invalid_argument("missing formula");
  auto f = parse_formula(req["formula"].get<std::string>());
  std::optional<std::string> gamma;
  if (req.contains("gammaBound") && !req["gammaBound"].is_null()) {
    const auto& g = req["gammaBound"];
    gamma = g.is_string() ? g.get<std::string>() : g.dump();
  }
  const auto mode = parse_mode(req.value("mode", std::string("bounded")), gamma, arena->is_finite(), auto_gamma);
  std::map<Player, Role> roles;
  const std::uint64_t seed = req.value("seed", std::uint64_t{0});
  if (req.contains("roles")) {
    for (const auto& [who, what] : req["roles"].items()) {
      const auto name = what.get<std::string>();
      roles[parse_player(who)] = name == "human" ? Role::human() : Role::of(make_policy(name, seed));
    }
  }
  return std::make_unique<Session>(std::move(arena), state, std::move(f), mode, std::move(roles));
}

nlohmann::json SessionService::view(const Entry& e) const {
  auto v = e.session->view();
  v["id"] = e.id;
  v["createdAt"] = e.created_at;
  const auto menu = e.session->menu();
  v["humanToMove"] = menu && e.session->role(menu->actor).is_human();
  return v;
}

void SessionService::persist(const Entry& e) const {
  if (!snapshot_dir_) return;
  const nlohmann::json doc{{"id", e.id}, {"createdAt", e.created_at}, {"request", e.request}, {"moves", e.moves}};
  const auto path = std::filesystem::path(*snapshot_dir_) / (e.id + ".json");
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << doc.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

void SessionService::load_snapshots() {
  for (const auto& file : std::filesystem::directory_iterator(*snapshot_dir_)) {
    if (file.path().extension() != ".json") continue;
    std::ifstream in(file.path());
    const auto doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) continue;
    auto e = std::make_shared<Entry>();
    e->id = doc.at("id").get<std::string>();
    e->created_at = doc.value("createdAt", "");
    e->request = doc.at("request");
    e->session = build(e->request);
    for (const auto& ev : doc.at("moves")) {
      if (ev.contains("machine")) e->session->run_machine(ev["machine"].get<std::size_t>());
      else e->session->apply(parse_player(ev.at("actor").get<std::string>()), Move::from_json(ev.at("move")));
      e->moves.push_back(ev);
    }
    sessions_[e->id] = std::move(e);
  }
}

void SessionService::auto_reply(Entry& e) {
  if (!e.session->machine_pending()) return;
  e.session->run_machine(budget_);
  e.moves.push_back({{"machine", budget_}});
}

ServiceResponse SessionService::create(const std::string& body) {
  auto e = std::make_shared<Entry>();
  try {
    e->request = nlohmann::json::parse(body);
    e->session = build(e->request);
  } catch (const nlohmann::json::exception& ex) {
    return error(400, std::string("malformed JSON: ") + ex.what());
  } catch (const FormulaParseError& ex) {
    return error(400, ex.what(), {{"offset", ex.offset()}, {"expected", ex.expected()}});
  } catch (const ModelError& ex) {
    return error(400, "invalid model", {{"problems", ex.problems()}});
  } catch (const std::exception& ex) {
    return error(400, ex.what());
  }
  e->id = new_id();
  e->created_at = now_iso();
  std::lock_guard lock(e->mu);
  {
    std::lock_guard store(mu_);
    sessions_[e->id] = e;
  }
  persist(*e);
  return {200, {{"id", e->id}, {"view", view(*e)}}};
}

ServiceResponse SessionService::move(Entry& e, const std::map<std::string, std::string>& query,
                                     const std::string& body) {
  nlohmann::json req;
  Player actor = Player::E;
  Move m;
  try {
    req = nlohmann::json::parse(body);
    actor = parse_player(req.at("actor").get<std::string>());
    m = Move::from_json(req.at("move"));
  } catch (const std::exception& ex) {
    return error(400, ex.what());
  }
  auto menu_json = [&] {
    const auto menu = e.session->menu();
    return menu ? menu->to_json() : nlohmann::json(nullptr);
  };
  if (req.contains("version") && req["version"].get<std::uint64_t>() != e.session->version())
    return error(409, "stale version", {{"version", e.session->version()}, {"menu", menu_json()}});
  if (!e.session->role(actor).is_human())
    return error(409, std::string("player ") + to_string(actor) + " is played by the machine",
                 {{"menu", menu_json()}});
  try {
    e.session->apply(actor, m);
  } catch (const IllegalMove& ex) {
    return error(409, ex.what(), {{"menu", menu_json()}});
  }
  e.moves.push_back({{"actor", to_string(actor)}, {"move", m.to_json()}});
  if (flag(query, "autoReply")) auto_reply(e);
  persist(e);
  return {200, view(e)};
}

ServiceResponse SessionService::machine(Entry& e) {
  auto_reply(e);
  persist(e);
  return {200, view(e)};
}

ServiceResponse SessionService::labels(Entry& e) {
  if (!e.session->model()) return error(422, "labels require a finite model");
  const auto ctx = context_labels(*e.session);
  if (!ctx) return {200, {{"context", nullptr}}};
  const auto& m = *e.session->model();
  const auto& c = e.session->phase().embedded;
  nlohmann::json per_player;
  for (const auto* lm : {&ctx->controller, &ctx->opponent}) {
    nlohmann::ordered_json states = nlohmann::ordered_json::object();
    for (StateIdx q = 0; q < m.state_count(); ++q) states[m.state_name(q)] = (*lm)[q].to_string();
    per_player[to_string(lm->perspective)] = states;
  }
  return {200,
          {{"context",
            {{"formula", print_formula(c->formula)},
             {"verifier", to_string(c->verifier)},
             {"controller", to_string(c->controller)},
             {"gammaBound", ctx->controller.gamma.to_string()}}},
           {"labels", per_player}}};
}

ServiceResponse SessionService::handle(const std::string& method, const std::string& path,
                                       const std::map<std::string, std::string>& query, const std::string& body) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '/');)
    if (!part.empty()) parts.push_back(part);
  if (parts.empty() || parts[0] != "sessions") return error(404, "not found");
  if (parts.size() == 1) {
    if (method == "POST") return create(body);
    if (method == "GET") {
      std::lock_guard lock(mu_);
      nlohmann::json ids = nlohmann::json::array();
      for (const auto& [id, _] : sessions_) ids.push_back(id);
      return {200, {{"sessions", ids}}};
    }
    return error(405, "method not allowed");
  }
  auto e = find(parts[1]);
  if (!e) return error(404, "unknown session '" + parts[1] + "'");
  std::lock_guard lock(e->mu);
  try {
    if (parts.size() == 2 && method == "GET") return {200, view(*e)};
    if (parts.size() == 3 && parts[2] == "moves" && method == "POST") return move(*e, query, body);
    if (parts.size() == 3 && parts[2] == "machine" && method == "POST") return machine(*e);
    if (parts.size() == 3 && parts[2] == "transcript" && method == "GET")
      return {200, e->session->transcript().to_json()};
    if (parts.size() == 3 && parts[2] == "labels" && method == "GET") return labels(*e);
  } catch (const std::exception& ex) {
    return error(500, ex.what());
  }
  return error(404, "not found");
}

bool SessionService::serve(const std::string& host, int port, std::function<void(int)> on_bound) {
  httplib::Server server;
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query(req.params.begin(), req.params.end());
    const auto out = handle(req.method, req.path, query, req.body);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  server.Get(R"(/sessions.*)", dispatch);
  server.Post(R"(/sessions.*)", dispatch);
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  if (port == 0) port = server.bind_to_any_port(host);
  else if (!server.bind_to_port(host, port)) port = -1;
  if (port < 0) return false;
  {
    std::lock_guard lock(server_mu_);
    server_ = &server;
  }
  if (on_bound) on_bound(port);
  const bool ok = server.listen_after_bind();
  std::lock_guard lock(server_mu_);
  server_ = nullptr;
  return ok;
}

void SessionService::stop() {
  std::lock_guard lock(server_mu_);
  if (server_) static_cast<httplib::Server*>(server_)->stop();
}

}  // namespace atlgts
