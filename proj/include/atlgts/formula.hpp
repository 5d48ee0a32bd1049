#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace atlgts {

using AgentId = std::uint32_t;

/// Sorted, duplicate-free set of agent ids (agents are numbered from 1).
class AgentSet {
 public:
  AgentSet() = default;
  AgentSet(std::initializer_list<AgentId> ids);
  explicit AgentSet(std::vector<AgentId> ids);

  const std::vector<AgentId>& ids() const { return ids_; }
  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }
  bool contains(AgentId a) const;
  /// Agents of {1..agent_count} not in this set.
  AgentSet complement(std::size_t agent_count) const;

  bool operator==(const AgentSet&) const = default;
  auto operator<=>(const AgentSet&) const = default;

 private:
  std::vector<AgentId> ids_;
};

class Formula {
 public:
  enum class Kind { Prop, True, False, Not, Or, CoopX, CoopU, CoopR };

  static Formula prop(std::string name);
  static Formula top();
  static Formula bottom();
  static Formula neg(Formula sub);
  static Formula disj(Formula left, Formula right);
  /// Conjunction is sugar: builds ~(~left | ~right).
  static Formula conj(Formula left, Formula right);
  static Formula coop_x(AgentSet coalition, Formula sub);
  static Formula coop_u(AgentSet coalition, Formula lhs, Formula rhs);
  static Formula coop_r(AgentSet coalition, Formula lhs, Formula rhs);
  /// <<A>> F f == <<A>> (true U f)
  static Formula coop_f(AgentSet coalition, Formula sub);
  /// <<A>> G f == <<A>> (false R f)
  static Formula coop_g(AgentSet coalition, Formula sub);

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const AgentSet& coalition() const { return node_->coalition; }
  /// Operand of Not/CoopX, left operand of Or/CoopU/CoopR.
  const Formula& lhs() const { return *node_->lhs; }
  const Formula& rhs() const { return *node_->rhs; }
  const Formula& sub() const { return *node_->lhs; }

  bool is_strategic() const;
  /// Number of AST nodes.
  std::size_t size() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    AgentSet coalition;
    std::shared_ptr<const Formula> lhs;
    std::shared_ptr<const Formula> rhs;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Kind k, std::string name, AgentSet coalition,
                      const Formula* lhs, const Formula* rhs);

  std::shared_ptr<const Node> node_;
};

class FormulaParseError : public std::runtime_error {
 public:
  FormulaParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found);
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

Formula parse_formula(std::string_view text);
std::string print_formula(const Formula& f);

/// Post-order, duplicate-free; children precede parents.
std::vector<Formula> subformulas(const Formula& f);

/// U^n_A(psi, theta): U^0 = theta, U^{n+1} = theta | (psi & <<A>> X U^n).
Formula unfold_U(const AgentSet& coalition, const Formula& psi, const Formula& theta, std::size_t n);
/// G^n_A(theta): G^0 = theta, G^{n+1} = theta & <<A>> X G^n.
Formula unfold_G(const AgentSet& coalition, const Formula& theta, std::size_t n);

}  // namespace atlgts
