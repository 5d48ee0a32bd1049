#include "atlgts/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <optional>
#include <unordered_set>

namespace atlgts {

AgentSet::AgentSet(std::initializer_list<AgentId> ids) : AgentSet(std::vector<AgentId>(ids)) {}

AgentSet::AgentSet(std::vector<AgentId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool AgentSet::contains(AgentId a) const { return std::binary_search(ids_.begin(), ids_.end(), a); }

AgentSet AgentSet::complement(std::size_t agent_count) const {
  std::vector<AgentId> out;
  for (AgentId a = 1; a <= agent_count; ++a)
    if (!contains(a)) out.push_back(a);
  return AgentSet(std::move(out));
}

// ---------------------------------------------------------------------------

Formula Formula::make(Kind k, std::string name, AgentSet coalition, const Formula* lhs,
                      const Formula* rhs) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->name = std::move(name);
  n->coalition = std::move(coalition);
  if (lhs) n->lhs = std::make_shared<const Formula>(*lhs);
  if (rhs) n->rhs = std::make_shared<const Formula>(*rhs);
  return Formula(std::move(n));
}

Formula Formula::prop(std::string name) { return make(Kind::Prop, std::move(name), {}, nullptr, nullptr); }
Formula Formula::top() { return make(Kind::True, {}, {}, nullptr, nullptr); }
Formula Formula::bottom() { return make(Kind::False, {}, {}, nullptr, nullptr); }
Formula Formula::neg(Formula sub) { return make(Kind::Not, {}, {}, &sub, nullptr); }
Formula Formula::disj(Formula l, Formula r) { return make(Kind::Or, {}, {}, &l, &r); }
Formula Formula::conj(Formula l, Formula r) {
  return neg(disj(neg(std::move(l)), neg(std::move(r))));
}
Formula Formula::coop_x(AgentSet a, Formula sub) { return make(Kind::CoopX, {}, std::move(a), &sub, nullptr); }
Formula Formula::coop_u(AgentSet a, Formula l, Formula r) { return make(Kind::CoopU, {}, std::move(a), &l, &r); }
Formula Formula::coop_r(AgentSet a, Formula l, Formula r) { return make(Kind::CoopR, {}, std::move(a), &l, &r); }
Formula Formula::coop_f(AgentSet a, Formula sub) { return coop_u(std::move(a), top(), std::move(sub)); }
Formula Formula::coop_g(AgentSet a, Formula sub) { return coop_r(std::move(a), bottom(), std::move(sub)); }

bool Formula::is_strategic() const {
  const auto k = kind();
  return k == Kind::CoopX || k == Kind::CoopU || k == Kind::CoopR;
}

std::size_t Formula::size() const {
  std::size_t n = 1;
  if (node_->lhs) n += node_->lhs->size();
  if (node_->rhs) n += node_->rhs->size();
  return n;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.name != y.name || x.coalition != y.coalition) return false;
  if (bool(x.lhs) != bool(y.lhs) || bool(x.rhs) != bool(y.rhs)) return false;
  if (x.lhs && !(*x.lhs == *y.lhs)) return false;
  if (x.rhs && !(*x.rhs == *y.rhs)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string print_coalition(const AgentSet& a) {
  std::string out = "<<";
  for (std::size_t i = 0; i < a.ids().size(); ++i) {
    if (i) out += ',';
    out += std::to_string(a.ids()[i]);
  }
  return out + ">>";
}

void print_into(const Formula& f, std::string& out);

// Operand position that only admits the `unary` production.
void print_unary(const Formula& f, std::string& out) {
  if (f.kind() == Formula::Kind::Or) {
    out += '(';
    print_into(f, out);
    out += ')';
  } else {
    print_into(f, out);
  }
}

void print_into(const Formula& f, std::string& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Prop: out += f.name(); break;
    case K::True: out += "true"; break;
    case K::False: out += "false"; break;
    case K::Not:
      out += '~';
      print_unary(f.sub(), out);
      break;
    case K::Or:
      print_into(f.lhs(), out);
      out += " | ";
      print_unary(f.rhs(), out);
      break;
    case K::CoopX:
      out += print_coalition(f.coalition()) + " X ";
      print_unary(f.sub(), out);
      break;
    case K::CoopU:
    case K::CoopR:
      out += print_coalition(f.coalition()) + " (";
      print_into(f.lhs(), out);
      out += f.kind() == K::CoopU ? " U " : " R ";
      print_into(f.rhs(), out);
      out += ')';
      break;
  }
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::string out;
  print_into(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

FormulaParseError::FormulaParseError(std::size_t offset, std::vector<std::string> expected,
                                     const std::string& found)
    : std::runtime_error([&] {
        std::string msg = "syntax error at offset " + std::to_string(offset) + ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
          if (i) msg += i + 1 == expected.size() ? " or " : ", ";
          msg += expected[i];
        }
        return msg + ", found " + found;
      }()),
      offset_(offset),
      expected_(std::move(expected)) {}

namespace {

enum class Tok { End, LCoop, RCoop, LParen, RParen, Tilde, Bar, Amp, Comma, Nat, Ident, True, False, U, R, X, F, G };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;
};

std::string describe(const Token& t) {
  return t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { lex(); }

  Formula parse() {
    Formula f = formula();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  std::string_view text_;
  std::vector<Token> toks_;
  std::size_t at_ = 0;

  void lex() {
    std::size_t i = 0;
    auto push = [&](Tok k, std::size_t start, std::size_t len) {
      toks_.push_back({k, start, std::string(text_.substr(start, len))});
    };
    while (i < text_.size()) {
      const char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (text_.substr(i, 2) == "<<") { push(Tok::LCoop, i, 2); i += 2; continue; }
      if (text_.substr(i, 2) == ">>") { push(Tok::RCoop, i, 2); i += 2; continue; }
      switch (c) {
        case '(': push(Tok::LParen, i, 1); ++i; continue;
        case ')': push(Tok::RParen, i, 1); ++i; continue;
        case '~': push(Tok::Tilde, i, 1); ++i; continue;
        case '|': push(Tok::Bar, i, 1); ++i; continue;
        case '&': push(Tok::Amp, i, 1); ++i; continue;
        case ',': push(Tok::Comma, i, 1); ++i; continue;
        default: break;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
        push(Tok::Nat, i, j - i);
        i = j;
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
          ++j;
        const auto word = text_.substr(i, j - i);
        Tok k = Tok::Ident;
        if (word == "true") k = Tok::True;
        else if (word == "false") k = Tok::False;
        else if (word == "U") k = Tok::U;
        else if (word == "R") k = Tok::R;
        else if (word == "X") k = Tok::X;
        else if (word == "F") k = Tok::F;
        else if (word == "G") k = Tok::G;
        push(k, i, j - i);
        i = j;
        continue;
      }
      throw FormulaParseError(i, {"a formula token"}, "'" + std::string(1, c) + "'");
    }
    toks_.push_back({Tok::End, text_.size(), ""});
  }

  const Token& peek() const { return toks_[at_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++at_;
    return true;
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw FormulaParseError(peek().offset, std::move(expected), describe(peek()));
  }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) fail({what});
    return toks_[at_++];
  }

  Formula formula() {
    Formula f = conj();
    while (accept(Tok::Bar)) f = Formula::disj(std::move(f), conj());
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (accept(Tok::Amp)) f = Formula::conj(std::move(f), unary());
    return f;
  }

  Formula unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Tilde: ++at_; return Formula::neg(unary());
      case Tok::True: ++at_; return Formula::top();
      case Tok::False: ++at_; return Formula::bottom();
      case Tok::Ident: ++at_; return Formula::prop(t.text);
      case Tok::LCoop: return coop();
      case Tok::LParen: {
        ++at_;
        Formula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      default:
        fail({"'~'", "'true'", "'false'", "identifier", "'<<'", "'('"});
    }
  }

  Formula coop() {
    expect(Tok::LCoop, "'<<'");
    std::vector<AgentId> agents;
    if (peek().kind == Tok::Nat) {
      do {
        const Token& n = expect(Tok::Nat, "agent number");
        AgentId v = 0;
        auto [p, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), v);
        if (ec != std::errc{}) throw FormulaParseError(n.offset, {"agent number"}, describe(n));
        agents.push_back(v);
      } while (accept(Tok::Comma));
    }
    if (peek().kind != Tok::RCoop) fail({"agent number", "','", "'>>'"});
    ++at_;
    AgentSet coalition(std::move(agents));
    if (accept(Tok::X)) return Formula::coop_x(std::move(coalition), unary());
    if (accept(Tok::F)) return Formula::coop_f(std::move(coalition), unary());
    if (accept(Tok::G)) return Formula::coop_g(std::move(coalition), unary());
    if (!accept(Tok::LParen)) fail({"'X'", "'F'", "'G'", "'('"});
    Formula lhs = formula();
    const bool until = peek().kind == Tok::U;
    if (!until && peek().kind != Tok::R) fail({"'U'", "'R'", "'|'", "'&'"});
    ++at_;
    Formula rhs = formula();
    expect(Tok::RParen, "')'");
    return until ? Formula::coop_u(std::move(coalition), std::move(lhs), std::move(rhs))
                 : Formula::coop_r(std::move(coalition), std::move(lhs), std::move(rhs));
  }
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------

std::vector<Formula> subformulas(const Formula& f) {
  std::vector<Formula> out;
  std::unordered_set<std::string> seen;
  std::function<void(const Formula&)> visit = [&](const Formula& g) {
    using K = Formula::Kind;
    switch (g.kind()) {
      case K::Not:
      case K::CoopX: visit(g.sub()); break;
      case K::Or:
      case K::CoopU:
      case K::CoopR:
        visit(g.lhs());
        visit(g.rhs());
        break;
      default: break;
    }
    if (seen.insert(print_formula(g)).second) out.push_back(g);
  };
  visit(f);
  return out;
}

Formula unfold_U(const AgentSet& coalition, const Formula& psi, const Formula& theta, std::size_t n) {
  Formula f = theta;
  for (std::size_t i = 0; i < n; ++i)
    f = Formula::disj(theta, Formula::conj(psi, Formula::coop_x(coalition, f)));
  return f;
}

Formula unfold_G(const AgentSet& coalition, const Formula& theta, std::size_t n) {
  Formula f = theta;
  for (std::size_t i = 0; i < n; ++i) f = Formula::conj(theta, Formula::coop_x(coalition, f));
  return f;
}

}  // namespace atlgts
