#pragma once

#include <cstdint>
#include <random>

#include "atlgts/formula.hpp"
#include "atlgts/model.hpp"

namespace atlgts {

struct RandomModelOptions {
  std::size_t max_states = 6;
  std::size_t max_agents = 2;
  std::size_t max_actions = 3;
};

/// Random finite model over props p, q, r with states s0.. and actions a0..
Model random_model(std::mt19937_64& rng, const RandomModelOptions& opt = {});

/// Random formula of depth <= max_depth with coalitions over 1..agents.
Formula random_formula(std::mt19937_64& rng, std::size_t agents, std::size_t max_depth = 3);

}  // namespace atlgts
