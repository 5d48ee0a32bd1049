#include "atlgts/difftest.hpp"

#include <algorithm>
#include <random>

#include "atlgts/random_gen.hpp"
#include "atlgts/semantics.hpp"

namespace atlgts {

namespace {

std::string truth_row(const Model& m, const StateSet& s) {
  std::string out;
  for (StateIdx q = 0; q < m.state_count(); ++q) out += m.state_name(q) + "=" + (s[q] ? "1 " : "0 ");
  return out;
}

// Smallest subformula (by size) on which the four kinds or the oracle split.
std::optional<DifftestFailure> check(const Model& m, const Formula& f, const DifftestOptions& opt, bool& oracle_ran) {
  const auto report = compare_semantics(m, f);
  std::optional<Formula> worst;
  std::string detail;
  for (const auto& d : report.disagreements) {
    const auto g = parse_formula(d.formula);
    if (!worst || g.size() < worst->size()) {
      worst = g;
      detail = "at " + d.state + ":";
      for (const auto& [k, v] : d.values) detail += " " + k + "=" + (v ? "true" : "false");
    }
  }
  oracle_ran = false;
  if (!worst) {
    try {
      const auto oracle = oracle_evaluate(m, f, opt.oracle_max_strategies);
      oracle_ran = true;
      const auto standard = evaluate(m, f, SemanticsKind::standard());
      for (std::size_t i = 0; i < oracle.formulas.size(); ++i) {
        const auto j = standard.index_of(oracle.formulas[i]);
        if (oracle.truth[i] != standard.truth[j] && (!worst || oracle.formulas[i].size() < worst->size())) {
          worst = oracle.formulas[i];
          detail = "oracle " + truth_row(m, oracle.truth[i]) + "/ standard " + truth_row(m, standard.truth[j]);
        }
      }
    } catch (const OracleGuardError&) {
    }
  }
  if (!worst) return std::nullopt;
  return DifftestFailure{0, save_model(m), print_formula(*worst), detail};
}

}  // namespace

DifftestResult run_difftest(const DifftestOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  DifftestResult r;
  for (std::size_t i = 0; i < opt.models; ++i) {
    const auto m = random_model(rng);
    for (std::size_t k = 0; k < opt.formulas_per_model; ++k) {
      const auto f = random_formula(rng, m.agent_count());
      bool oracle_ran = false;
      auto failure = check(m, f, opt, oracle_ran);
      ++r.instances;
      if (oracle_ran) ++r.oracle_checked;
      if (failure) {
        failure->model_index = i;
        r.failure = std::move(failure);
        return r;
      }
    }
  }
  return r;
}

void print_difftest(const DifftestOptions& opt, const DifftestResult& r, std::ostream& out) {
  out << "seed " << opt.seed << ", " << opt.models << " models x " << opt.formulas_per_model << " formulas\n";
  out << r.instances << " instances checked, " << r.oracle_checked << " also against the oracle\n";
  if (r.ok()) {
    out << "no disagreements\n";
    return;
  }
  out << "DISAGREEMENT in model #" << r.failure->model_index << " on " << r.failure->formula << "\n";
  out << r.failure->detail << "\n" << r.failure->model_json;
}

}  // namespace atlgts
