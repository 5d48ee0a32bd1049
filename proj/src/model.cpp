#include "atlgts/model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace atlgts {

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> split_profile(std::string_view key) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto bar = key.find('|', start);
    out.emplace_back(key.substr(start, bar == std::string_view::npos ? key.npos : bar - start));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return out;
}

}  // namespace

ModelError::ModelError(std::vector<std::string> problems)
    : std::runtime_error("invalid model: " + join(problems, "; ")), problems_(std::move(problems)) {}

// ---------------------------------------------------------------------------

std::optional<StateIdx> Model::find_state(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

StateIdx Model::state(std::string_view name) const {
  if (auto q = find_state(name)) return *q;
  throw ModelError({"unknown state '" + std::string(name) + "'"});
}

bool Model::holds(StateIdx q, std::string_view prop) const {
  const auto& ps = props_.at(q);
  return std::find(ps.begin(), ps.end(), prop) != ps.end();
}

const std::vector<std::string>& Model::actions(AgentId agent, StateIdx q) const {
  if (agent < 1 || agent > agents_) throw ModelError({"unknown agent " + std::to_string(agent)});
  return actions_.at(q)[agent - 1];
}

std::size_t Model::profile_ordinal(StateIdx q, const ActionTuple& profile) const {
  std::size_t ord = 0;
  for (std::size_t i = 0; i < agents_; ++i) ord = ord * actions_[q][i].size() + profile.at(i);
  return ord;
}

ActionTuple Model::profile_at(StateIdx q, std::size_t ord) const {
  ActionTuple p(agents_);
  for (std::size_t i = agents_; i-- > 0;) {
    const auto n = actions_[q][i].size();
    p[i] = static_cast<std::uint32_t>(ord % n);
    ord /= n;
  }
  return p;
}

StateIdx Model::successor(StateIdx q, const ActionTuple& profile) const {
  return succ_.at(q).at(profile_ordinal(q, profile));
}

std::string Model::profile_key(StateIdx q, const ActionTuple& profile) const {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < agents_; ++i) names.push_back(actions_[q][i].at(profile.at(i)));
  return join(names, "|");
}

std::vector<ActionTuple> Model::tuples(const AgentSet& coalition, StateIdx q) const {
  std::vector<ActionTuple> out{ActionTuple{}};
  for (AgentId a : coalition.ids()) {
    const auto n = actions(a, q).size();
    std::vector<ActionTuple> next;
    next.reserve(out.size() * n);
    for (const auto& t : out)
      for (std::uint32_t i = 0; i < n; ++i) {
        auto u = t;
        u.push_back(i);
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

ActionTuple Model::merge(const AgentSet& coalition, const ActionTuple& own, const ActionTuple& rest) const {
  ActionTuple full(agents_);
  std::size_t i = 0;
  std::size_t j = 0;
  for (AgentId a = 1; a <= agents_; ++a) full[a - 1] = coalition.contains(a) ? own.at(i++) : rest.at(j++);
  return full;
}

// ---------------------------------------------------------------------------

Model::Builder::Builder(std::size_t agents) : agents_(agents) {}

StateIdx Model::Builder::add_state(std::string name, std::vector<std::string> props) {
  names_.push_back(std::move(name));
  props_.push_back(std::move(props));
  actions_.emplace_back(agents_);
  transitions_.emplace_back();
  return static_cast<StateIdx>(names_.size() - 1);
}

namespace {
std::size_t find_index(const std::vector<std::string>& names, std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ModelError({"unknown state '" + std::string(name) + "'"});
  return static_cast<std::size_t>(it - names.begin());
}
}  // namespace

void Model::Builder::set_actions(std::string_view state, AgentId agent, std::vector<std::string> actions) {
  if (agent < 1 || agent > agents_) throw ModelError({"unknown agent " + std::to_string(agent)});
  actions_[find_index(names_, state)][agent - 1] = std::move(actions);
}

void Model::Builder::set_transition(std::string_view state, const std::vector<std::string>& profile,
                                    std::string_view target) {
  transitions_[find_index(names_, state)][join(profile, "|")] = std::string(target);
}

void Model::Builder::set_all_transitions(std::string_view state, std::string_view target) {
  const auto q = find_index(names_, state);
  std::vector<std::vector<std::string>> keys{{}};
  for (const auto& acts : actions_[q]) {
    std::vector<std::vector<std::string>> next;
    for (const auto& k : keys)
      for (const auto& a : acts) {
        auto u = k;
        u.push_back(a);
        next.push_back(std::move(u));
      }
    keys = std::move(next);
  }
  for (const auto& k : keys) transitions_[q][join(k, "|")] = std::string(target);
}

Model Model::Builder::build() const {
  std::vector<std::string> problems;
  Model m;
  m.agents_ = agents_;
  if (agents_ == 0) problems.push_back("model needs at least one agent");
  if (names_.empty()) problems.push_back("model needs at least one state");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!m.index_.emplace(names_[i], static_cast<StateIdx>(i)).second)
      problems.push_back("duplicate state id '" + names_[i] + "'");
  }
  m.names_ = names_;
  m.props_.resize(names_.size());
  for (std::size_t q = 0; q < names_.size(); ++q) {
    std::set<std::string> uniq(props_[q].begin(), props_[q].end());
    m.props_[q].assign(uniq.begin(), uniq.end());
  }
  m.actions_ = actions_;
  m.succ_.resize(names_.size());
  for (std::size_t q = 0; q < names_.size(); ++q) {
    bool ok = true;
    for (AgentId a = 1; a <= agents_; ++a) {
      const auto& acts = actions_[q][a - 1];
      if (acts.empty()) {
        problems.push_back("empty action set for agent " + std::to_string(a) + " at state '" + names_[q] + "'");
        ok = false;
      }
      std::set<std::string> uniq(acts.begin(), acts.end());
      if (uniq.size() != acts.size()) {
        problems.push_back("duplicate action for agent " + std::to_string(a) + " at state '" + names_[q] + "'");
        ok = false;
      }
      for (const auto& act : acts)
        if (act.find('|') != std::string::npos) {
          problems.push_back("action name '" + act + "' contains '|'");
          ok = false;
        }
    }
    if (!ok || agents_ == 0) continue;
    std::size_t count = 1;
    for (const auto& acts : actions_[q]) count *= acts.size();
    m.succ_[q].assign(count, 0);
    std::set<std::string> used;
    for (std::size_t ord = 0; ord < count; ++ord) {
      const auto key = m.profile_key(static_cast<StateIdx>(q), m.profile_at(static_cast<StateIdx>(q), ord));
      auto it = transitions_[q].find(key);
      if (it == transitions_[q].end()) {
        problems.push_back("missing transition at state '" + names_[q] + "' for profile '" + key + "'");
        continue;
      }
      used.insert(key);
      auto target = m.index_.find(it->second);
      if (target == m.index_.end()) {
        problems.push_back("transition at state '" + names_[q] + "' profile '" + key + "' targets unknown state '" +
                           it->second + "'");
        continue;
      }
      m.succ_[q][ord] = target->second;
    }
    for (const auto& [key, target] : transitions_[q])
      if (!used.count(key))
        problems.push_back("transition at state '" + names_[q] + "' for illegal profile '" + key + "'");
  }
  if (!problems.empty()) throw ModelError(std::move(problems));
  return m;
}

// ---------------------------------------------------------------------------
// JSON

Model load_model(std::string_view bytes) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ModelError({std::string("JSON parse error: ") + e.what()});
  }
  std::vector<std::string> problems;
  if (!doc.is_object()) throw ModelError({"model must be a JSON object"});
  static const std::set<std::string> keys{"agents", "states", "props", "actions", "transitions"};
  for (const auto& [k, v] : doc.items())
    if (!keys.count(k)) problems.push_back("unexpected key '" + k + "'");
  for (const auto& k : keys)
    if (!doc.contains(k)) problems.push_back("missing key '" + k + "'");
  if (!problems.empty()) throw ModelError(std::move(problems));

  if (!doc["agents"].is_number_unsigned() || doc["agents"].get<std::uint64_t>() == 0)
    throw ModelError({"'agents' must be a positive integer"});
  const auto k = doc["agents"].get<std::size_t>();
  if (!doc["states"].is_array()) throw ModelError({"'states' must be an array"});
  for (const char* key : {"props", "actions", "transitions"})
    if (!doc[key].is_object()) problems.push_back(std::string("'") + key + "' must be an object");
  if (!problems.empty()) throw ModelError(std::move(problems));

  Model::Builder b(k);
  std::vector<std::string> names;
  std::set<std::string> declared;
  for (const auto& s : doc["states"]) {
    if (!s.is_string()) {
      problems.push_back("state ids must be strings");
      continue;
    }
    names.push_back(s.get<std::string>());
    if (!declared.insert(names.back()).second) problems.push_back("duplicate state id '" + names.back() + "'");
  }
  if (!problems.empty()) throw ModelError(std::move(problems));

  auto string_list = [&](const json& j, const std::string& where) {
    std::vector<std::string> out;
    if (!j.is_array()) {
      problems.push_back(where + " must be an array of strings");
      return out;
    }
    for (const auto& x : j) {
      if (!x.is_string()) problems.push_back(where + " must be an array of strings");
      else out.push_back(x.get<std::string>());
    }
    return out;
  };

  for (const auto& [id, v] : doc["props"].items())
    if (!declared.count(id)) problems.push_back("props: unknown state '" + id + "'");
  for (const auto& [id, v] : doc["actions"].items())
    if (!declared.count(id)) problems.push_back("actions: unknown state '" + id + "'");
  for (const auto& [id, v] : doc["transitions"].items())
    if (!declared.count(id)) problems.push_back("transitions: unknown state '" + id + "'");

  for (const auto& name : names) {
    std::vector<std::string> props;
    if (!doc["props"].contains(name)) problems.push_back("props: missing state '" + name + "'");
    else props = string_list(doc["props"][name], "props of '" + name + "'");
    b.add_state(name, std::move(props));
  }
  for (const auto& name : names) {
    if (!doc["actions"].contains(name)) {
      problems.push_back("actions: missing state '" + name + "'");
      continue;
    }
    const auto& per_agent = doc["actions"][name];
    if (!per_agent.is_object()) {
      problems.push_back("actions of '" + name + "' must be an object keyed by agent");
      continue;
    }
    for (const auto& [agent, acts] : per_agent.items()) {
      AgentId a = 0;
      auto [p, ec] = std::from_chars(agent.data(), agent.data() + agent.size(), a);
      if (ec != std::errc{} || p != agent.data() + agent.size() || a < 1 || a > k) {
        problems.push_back("actions of '" + name + "': unknown agent '" + agent + "'");
        continue;
      }
      b.set_actions(name, a, string_list(acts, "actions of '" + name + "' agent " + agent));
    }
    for (AgentId a = 1; a <= k; ++a)
      if (!per_agent.contains(std::to_string(a)))
        problems.push_back("actions of '" + name + "': missing agent " + std::to_string(a));
  }
  for (const auto& name : names) {
    if (!doc["transitions"].contains(name)) {
      problems.push_back("transitions: missing state '" + name + "'");
      continue;
    }
    const auto& tr = doc["transitions"][name];
    if (!tr.is_object()) {
      problems.push_back("transitions of '" + name + "' must be an object");
      continue;
    }
    for (const auto& [key, target] : tr.items()) {
      if (!target.is_string()) {
        problems.push_back("transition target at '" + name + "' profile '" + key + "' must be a string");
        continue;
      }
      b.set_transition(name, split_profile(key), target.get<std::string>());
    }
  }
  // The builder reports the structural problems (totality, empty action sets,
  // unknown targets); both lists are merged so every violation is reported.
  std::optional<Model> m;
  try {
    m = b.build();
  } catch (const ModelError& e) {
    for (const auto& p : e.problems())
      if (std::find(problems.begin(), problems.end(), p) == problems.end()) problems.push_back(p);
  }
  if (!problems.empty()) throw ModelError(std::move(problems));
  return std::move(*m);
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError({"cannot open model file '" + path + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return load_model(ss.str());
}

std::string save_model(const Model& m) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["agents"] = m.agent_count();
  doc["states"] = m.state_names();
  ordered_json props = ordered_json::object();
  ordered_json actions = ordered_json::object();
  ordered_json transitions = ordered_json::object();
  for (StateIdx q = 0; q < m.state_count(); ++q) {
    const auto& name = m.state_name(q);
    props[name] = m.props(q);
    ordered_json per_agent = ordered_json::object();
    for (AgentId a = 1; a <= m.agent_count(); ++a) per_agent[std::to_string(a)] = m.actions(a, q);
    actions[name] = per_agent;
    ordered_json tr = ordered_json::object();
    for (std::size_t ord = 0; ord < m.profile_count(q); ++ord)
      tr[m.profile_key(q, m.profile_at(q, ord))] = m.state_name(m.successor(q, ord));
    transitions[name] = tr;
  }
  doc["props"] = props;
  doc["actions"] = actions;
  doc["transitions"] = transitions;
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

std::size_t branching_degree(const Model& m, StateIdx q) {
  if (q >= m.state_count()) throw ModelError({"unknown state index " + std::to_string(q)});
  std::vector<bool> seen(m.state_count(), false);
  std::size_t n = 0;
  for (std::size_t ord = 0; ord < m.profile_count(q); ++ord) {
    const auto t = m.successor(q, ord);
    if (!seen[t]) {
      seen[t] = true;
      ++n;
    }
  }
  return n;
}

Ordinal stable_bound(const Model& m) { return Ordinal(m.state_count()); }

BranchingReport branching_report(const Model& m) {
  BranchingReport r;
  for (StateIdx q = 0; q < m.state_count(); ++q) r.degree.push_back(branching_degree(m, q));
  r.image_finite = true;
  r.stable_bound = stable_bound(m);
  return r;
}

Model line_model(std::size_t n) {
  Model::Builder b(1);
  for (std::size_t i = 0; i <= n; ++i) {
    std::vector<std::string> props;
    if (i == n) props.push_back("p");
    b.add_state("q" + std::to_string(i), std::move(props));
  }
  for (std::size_t i = 0; i <= n; ++i) {
    const auto name = "q" + std::to_string(i);
    b.set_actions(name, 1, {"0"});
    b.set_all_transitions(name, "q" + std::to_string(i == n ? n : i + 1));
  }
  return b.build();
}

Model fig3_truncation() {
  Model::Builder b(1);
  for (int i = 0; i <= 5; ++i) {
    std::vector<std::string> props;
    if (i == 3) props.push_back("p");
    b.add_state("q" + std::to_string(i), std::move(props));
  }
  for (int i = 0; i <= 5; ++i) {
    const auto name = "q" + std::to_string(i);
    b.set_actions(name, 1, {"0"});
    b.set_all_transitions(name, "q" + std::to_string(i == 5 ? 5 : i + 1));
  }
  return b.build();
}

// ---------------------------------------------------------------------------

bool ActionDomain::contains(std::string_view action) const {
  if (!all_naturals) return std::find(finite.begin(), finite.end(), action) != finite.end();
  if (action.empty() || (action.size() > 1 && action[0] == '0')) return false;
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(action.data(), action.data() + action.size(), v);
  return ec == std::errc{} && p == action.data() + action.size();
}

std::string ActionDomain::at(std::size_t i) const {
  return all_naturals ? std::to_string(i) : finite.at(i);
}

std::vector<std::string> ModelArena::props(const std::string& state) const {
  return model_->props(model_->state(state));
}

ActionDomain ModelArena::actions(AgentId agent, const std::string& state) const {
  return ActionDomain{false, model_->actions(agent, model_->state(state))};
}

std::string ModelArena::step(const std::string& state, const std::vector<std::string>& profile) const {
  const auto q = model_->state(state);
  if (profile.size() != model_->agent_count()) throw ModelError({"profile length mismatch"});
  ActionTuple t;
  for (AgentId a = 1; a <= model_->agent_count(); ++a) {
    const auto& acts = model_->actions(a, q);
    auto it = std::find(acts.begin(), acts.end(), profile[a - 1]);
    if (it == acts.end())
      throw ModelError({"action '" + profile[a - 1] + "' not available to agent " + std::to_string(a) + " at '" +
                        state + "'"});
    t.push_back(static_cast<std::uint32_t>(it - acts.begin()));
  }
  return model_->state_name(model_->successor(q, t));
}

namespace {

class Fig2Model final : public LazyModel {
 public:
  std::string name() const override { return "fig2"; }
  std::string initial() const override { return "q0"; }
  std::size_t agent_count() const override { return 1; }

  bool has_state(const std::string& s) const override { return s == "q0" || decode(s).has_value(); }

  std::vector<std::string> props(const std::string& s) const override {
    if (s == "q0") return {};
    const auto ij = require(s);
    if (ij.first == ij.second) return {"p"};
    return {};
  }

  ActionDomain actions(AgentId agent, const std::string& s) const override {
    if (agent != 1) throw ModelError({"unknown agent " + std::to_string(agent)});
    if (s == "q0") return ActionDomain{true, {}};
    require(s);
    return ActionDomain{false, {"0"}};
  }

  std::string step(const std::string& s, const std::vector<std::string>& profile) const override {
    if (profile.size() != 1) throw ModelError({"profile length mismatch"});
    if (!actions(1, s).contains(profile[0]))
      throw ModelError({"action '" + profile[0] + "' not available at '" + s + "'"});
    if (s == "q0") return encode(std::stoull(profile[0]), 0);
    const auto [i, j] = require(s);
    return encode(i, j + 1);
  }

  static std::string encode(std::uint64_t i, std::uint64_t j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
  }

  static std::optional<std::pair<std::uint64_t, std::uint64_t>> decode(std::string_view s) {
    if (s.size() < 5 || s.front() != '(' || s.back() != ')') return std::nullopt;
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) return std::nullopt;
    std::uint64_t i = 0;
    std::uint64_t j = 0;
    auto a = s.substr(1, comma - 1);
    auto b = s.substr(comma + 1, s.size() - comma - 2);
    auto r1 = std::from_chars(a.data(), a.data() + a.size(), i);
    auto r2 = std::from_chars(b.data(), b.data() + b.size(), j);
    if (r1.ec != std::errc{} || r1.ptr != a.data() + a.size() || r2.ec != std::errc{} ||
        r2.ptr != b.data() + b.size())
      return std::nullopt;
    return std::make_pair(i, j);
  }

 private:
  static std::pair<std::uint64_t, std::uint64_t> require(const std::string& s) {
    auto ij = decode(s);
    if (!ij) throw ModelError({"unknown state '" + s + "'"});
    return *ij;
  }
};

}  // namespace

std::shared_ptr<const LazyModel> fig2_lazy_model() {
  static const auto m = std::make_shared<const Fig2Model>();
  return m;
}

std::shared_ptr<const LazyModel> lazy_model(std::string_view name) {
  if (name == "fig2") return fig2_lazy_model();
  throw ModelError({"unknown lazy model '" + std::string(name) + "'"});
}

std::vector<std::string> lazy_model_names() { return {"fig2"}; }

}  // namespace atlgts
