#include <tuple>
#include <doctest.h>

#include <random>

#include "atlgts/ordinal.hpp"

using atlgts::Ordinal;

TEST_CASE("naturals") {
  CHECK(Ordinal(0).is_zero());
  CHECK(Ordinal(5).is_finite());
  CHECK(Ordinal(5).is_successor());
  CHECK_FALSE(Ordinal(5).is_limit());
  CHECK(Ordinal(5).finite_value() == 5);
  CHECK(Ordinal(5).predecessor() == Ordinal(4));
  CHECK(Ordinal(4).successor() == Ordinal(5));
  CHECK(Ordinal(7).to_string() == "7");
  CHECK(Ordinal(0).to_string() == "0");
}

TEST_CASE("infinite ordinals print and classify") {
  const auto w = Ordinal::omega();
  CHECK(w.to_string() == "w");
  CHECK(w.is_limit());
  CHECK_FALSE(w.is_finite());
  CHECK(w.successor().to_string() == "w+1");
  CHECK(w.successor().is_successor());
  CHECK(w.successor().predecessor() == w);
  CHECK(Ordinal::omega(2).to_string() == "w*2");
  CHECK(Ordinal::omega_pow(2).to_string() == "w^2");
  CHECK(Ordinal::from_terms({{2, 1}, {1, 3}, {0, 4}}).to_string() == "w^2+w*3+4");
  CHECK_THROWS_AS(w.predecessor(), std::domain_error);
  CHECK_THROWS_AS(Ordinal(0).predecessor(), std::domain_error);
  CHECK_THROWS_AS(w.finite_value(), std::domain_error);
  CHECK_THROWS_AS(Ordinal::from_terms({{0, 1}, {1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Ordinal::from_terms({{1, 0}}), std::invalid_argument);
}

TEST_CASE("order") {
  const auto w = Ordinal::omega();
  CHECK(Ordinal(1000000) < w);
  CHECK(w < w.successor());
  CHECK(w.successor() < Ordinal::omega(2));
  CHECK(Ordinal::omega(100) < Ordinal::omega_pow(2));
  CHECK(Ordinal::from_terms({{2, 1}, {0, 1}}) > Ordinal::from_terms({{2, 1}}));
  CHECK(atlgts::compare(w, w) == atlgts::Comparison::equal);
  CHECK(atlgts::compare(Ordinal(3), w) == atlgts::Comparison::less);
  CHECK(atlgts::compare(Ordinal::omega(2), w) == atlgts::Comparison::greater);
}

TEST_CASE("parse") {
  CHECK(Ordinal::parse("0") == Ordinal(0));
  CHECK(Ordinal::parse("12") == Ordinal(12));
  CHECK(Ordinal::parse("w") == Ordinal::omega());
  CHECK(Ordinal::parse("w+1") == Ordinal::omega().successor());
  CHECK(Ordinal::parse("w*2+3") == Ordinal::from_terms({{1, 2}, {0, 3}}));
  CHECK(Ordinal::parse("w^2+w") == Ordinal::from_terms({{2, 1}, {1, 1}}));
  for (const char* bad : {"", "x", "1+w", "w+w", "w*0", "w^", "-1", "w+"})
    CHECK_THROWS_AS(Ordinal::parse(bad), std::invalid_argument);
}

TEST_CASE("property: print/parse round trip and order agrees with a reference encoding") {
  std::mt19937_64 rng(7);
  // Reference: ordinals below w^3 as (a, b, c) for w^2*a + w*b + c, ordered lexicographically.
  auto make = [](std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::vector<Ordinal::Term> t;
    if (a) t.push_back({2, a});
    if (b) t.push_back({1, b});
    if (c) t.push_back({0, c});
    return Ordinal::from_terms(t);
  };
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t x[3], y[3];
    for (auto& v : x) v = rng() % 3;
    for (auto& v : y) v = rng() % 3;
    const auto a = make(x[0], x[1], x[2]);
    const auto b = make(y[0], y[1], y[2]);
    CHECK(Ordinal::parse(a.to_string()) == a);
    const auto ref = std::tie(x[0], x[1], x[2]) <=> std::tie(y[0], y[1], y[2]);
    CHECK((a <=> b) == ref);
    CHECK(a.is_limit() == (x[2] == 0 && (x[0] || x[1])));
    if (a.is_successor()) CHECK(a.predecessor().successor() == a);
  }
}
