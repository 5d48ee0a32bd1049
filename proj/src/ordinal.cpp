#include "atlgts/ordinal.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace atlgts {

Ordinal::Ordinal(std::uint64_t n) {
  if (n > 0) terms_.push_back({0, n});
}

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coefficient == 0)
      throw std::invalid_argument("ordinal term with zero coefficient");
    if (i > 0 && terms[i].exponent >= terms[i - 1].exponent)
      throw std::invalid_argument("ordinal exponents must strictly decrease");
  }
  Ordinal o;
  o.terms_ = std::move(terms);
  return o;
}

Ordinal Ordinal::omega(std::uint64_t coefficient) { return omega_pow(1, coefficient); }

Ordinal Ordinal::omega_pow(std::uint32_t exponent, std::uint64_t coefficient) {
  return from_terms({{exponent, coefficient}});
}

std::uint64_t Ordinal::finite_value() const {
  if (!is_finite()) throw std::domain_error("ordinal " + to_string() + " is infinite");
  return terms_.empty() ? 0 : terms_.front().coefficient;
}

Ordinal Ordinal::successor() const {
  Ordinal o = *this;
  if (o.is_successor())
    ++o.terms_.back().coefficient;
  else
    o.terms_.push_back({0, 1});
  return o;
}

Ordinal Ordinal::predecessor() const {
  if (is_zero()) throw std::domain_error("zero has no predecessor");
  if (is_limit()) throw std::domain_error("limit ordinal has no predecessor");
  Ordinal o = *this;
  if (--o.terms_.back().coefficient == 0) o.terms_.pop_back();
  return o;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const auto n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = a.terms_[i];
    const auto& y = b.terms_[i];
    if (x.exponent != y.exponent) return x.exponent <=> y.exponent;
    if (x.coefficient != y.coefficient) return x.coefficient <=> y.coefficient;
  }
  return a.terms_.size() <=> b.terms_.size();
}

Comparison compare(const Ordinal& a, const Ordinal& b) {
  const auto c = a <=> b;
  if (c < 0) return Comparison::less;
  if (c > 0) return Comparison::greater;
  return Comparison::equal;
}

std::string Ordinal::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += '+';
    if (t.exponent == 0) {
      out += std::to_string(t.coefficient);
      continue;
    }
    out += 'w';
    if (t.exponent > 1) out += '^' + std::to_string(t.exponent);
    if (t.coefficient > 1) out += '*' + std::to_string(t.coefficient);
  }
  return out;
}

namespace {

struct OrdinalReader {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("bad ordinal '" + std::string(text) + "' at offset " +
                                std::to_string(pos) + ": " + what);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  std::uint64_t number() {
    skip_ws();
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (ec != std::errc{}) fail("expected a natural number");
    pos = static_cast<std::size_t>(p - text.data());
    return v;
  }

  bool accept(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
};

}  // namespace

Ordinal Ordinal::parse(std::string_view text) {
  OrdinalReader r{text};
  std::vector<Term> terms;
  do {
    Term t{0, 1};
    if (r.accept('w')) {
      t.exponent = 1;
      if (r.accept('^')) {
        const auto e = r.number();
        if (e == 0 || e > UINT32_MAX) r.fail("exponent must be a positive natural");
        t.exponent = static_cast<std::uint32_t>(e);
      }
      if (r.accept('*')) t.coefficient = r.number();
    } else {
      t.coefficient = r.number();
    }
    if (t.coefficient == 0) {
      // "0" alone is the zero ordinal; a zero term inside a sum is rejected.
      if (t.exponent == 0 && terms.empty()) {
        r.skip_ws();
        if (r.pos == text.size()) return Ordinal{};
      }
      r.fail("zero coefficient");
    }
    if (!terms.empty() && t.exponent >= terms.back().exponent)
      r.fail("exponents must strictly decrease");
    terms.push_back(t);
  } while (r.accept('+'));
  r.skip_ws();
  if (r.pos != text.size()) r.fail("trailing characters");
  return from_terms(std::move(terms));
}

}  // namespace atlgts
