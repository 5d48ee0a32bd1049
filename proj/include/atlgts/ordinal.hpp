#pragma once

#include <compare>
#include <stdexcept>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace atlgts {

/// Ordinal below w^w in Cantor normal form: sum of w^exponent * coefficient
/// with strictly decreasing exponents and positive coefficients.
class Ordinal {
 public:
  struct Term {
    std::uint32_t exponent;
    std::uint64_t coefficient;
    bool operator==(const Term&) const = default;
  };

  Ordinal() = default;
  Ordinal(std::uint64_t n);  // NOLINT(google-explicit-constructor): naturals are ordinals

  /// Builds from terms; throws std::invalid_argument unless exponents strictly
  /// decrease and coefficients are positive.
  static Ordinal from_terms(std::vector<Term> terms);
  static Ordinal omega(std::uint64_t coefficient = 1);
  static Ordinal omega_pow(std::uint32_t exponent, std::uint64_t coefficient = 1);

  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const { return terms_.empty() || terms_.front().exponent == 0; }
  bool is_limit() const { return !terms_.empty() && terms_.back().exponent != 0; }
  bool is_successor() const { return !terms_.empty() && terms_.back().exponent == 0; }

  /// Finite value; throws std::domain_error for infinite ordinals.
  std::uint64_t finite_value() const;

  Ordinal successor() const;
  /// The b with b + 1 == *this. Throws std::domain_error on zero or limits.
  Ordinal predecessor() const;

  std::string to_string() const;
  static Ordinal parse(std::string_view text);

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b) = default;

 private:
  std::vector<Term> terms_;
};

enum class Comparison { less, equal, greater };
Comparison compare(const Ordinal& a, const Ordinal& b);

}  // namespace atlgts
