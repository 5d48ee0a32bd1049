#include "atlgts/random_gen.hpp"

namespace atlgts {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace

Model random_model(std::mt19937_64& rng, const RandomModelOptions& opt) {
  const auto agents = pick(rng, 1, opt.max_agents);
  const auto n = pick(rng, 1, opt.max_states);
  Model::Builder b(agents);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> props;
    for (const char* p : {"p", "q", "r"})
      if (rng() % 2) props.emplace_back(p);
    names.push_back("s" + std::to_string(i));
    b.add_state(names.back(), std::move(props));
  }
  for (const auto& s : names) {
    std::vector<std::vector<std::string>> acts;
    for (AgentId a = 1; a <= agents; ++a) {
      std::vector<std::string> list;
      const auto k = pick(rng, 1, opt.max_actions);
      for (std::size_t i = 0; i < k; ++i) list.push_back("a" + std::to_string(i));
      b.set_actions(s, a, list);
      acts.push_back(std::move(list));
    }
    // Odometer over full profiles.
    std::vector<std::size_t> idx(agents, 0);
    while (true) {
      std::vector<std::string> profile;
      for (std::size_t a = 0; a < agents; ++a) profile.push_back(acts[a][idx[a]]);
      b.set_transition(s, profile, names[pick(rng, 0, n - 1)]);
      std::size_t a = agents;
      while (a > 0 && ++idx[a - 1] == acts[a - 1].size()) idx[--a] = 0;
      if (a == 0) break;
    }
  }
  return b.build();
}

Formula random_formula(std::mt19937_64& rng, std::size_t agents, std::size_t max_depth) {
  static const char* props[] = {"p", "q", "r"};
  if (max_depth == 0 || rng() % 4 == 0) {
    const auto r = rng() % 8;
    if (r == 6) return Formula::top();
    if (r == 7) return Formula::bottom();
    return Formula::prop(props[r % 3]);
  }
  std::vector<AgentId> ids;
  for (AgentId a = 1; a <= agents; ++a)
    if (rng() % 2) ids.push_back(a);
  const AgentSet coalition(ids);
  auto sub = [&] { return random_formula(rng, agents, max_depth - 1); };
  switch (rng() % 8) {
    case 0: return Formula::neg(sub());
    case 1: {
      auto l = sub();
      return Formula::disj(std::move(l), sub());
    }
    case 2: {
      auto l = sub();
      return Formula::conj(std::move(l), sub());
    }
    case 3: return Formula::coop_x(coalition, sub());
    case 4: {
      auto l = sub();
      return Formula::coop_u(coalition, std::move(l), sub());
    }
    case 5: {
      auto l = sub();
      return Formula::coop_r(coalition, std::move(l), sub());
    }
    case 6: return Formula::coop_f(coalition, sub());
    default: return Formula::coop_g(coalition, sub());
  }
}

}  // namespace atlgts
