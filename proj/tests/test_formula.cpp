#include <doctest.h>

#include <memory>
#include <random>

#include "confstl/formula.hpp"
#include "support/reference.hpp"

using namespace confstl;

namespace {
const ChannelNames kNames{"latency", "backlog"};
}

TEST_CASE("parse builds the expected tree") {
  const auto f = parse_formula("G[0,60](latency < 100) & G[56,60](backlog < 30)", kNames);
  REQUIRE(f.kind() == NodeKind::And);
  REQUIRE(f.children().size() == 2);
  const auto& g = f.children()[0];
  CHECK(g.kind() == NodeKind::Always);
  CHECK(g.window() == Interval{0, 60});
  const auto& atom = g.child();
  CHECK(atom.kind() == NodeKind::Atom);
  // latency < 100 is stored as -latency > -100
  CHECK(atom.coefficients()[0] == -1.0);
  CHECK(atom.coefficients()[1] == 0.0);
  CHECK(atom.offset() == -100.0);
  CHECK(f.temporal_count() == 2);
  CHECK(f.depth() == 3);
}

TEST_CASE("and binds tighter than or") {
  const auto f = parse_formula("latency > 1 | latency > 2 & backlog > 3", kNames);
  REQUIRE(f.kind() == NodeKind::Or);
  CHECK(f.children().size() == 2);
  const auto g = parse_formula("(latency > 1 | latency > 2) & backlog > 3", kNames);
  CHECK(g.kind() == NodeKind::And);
}

TEST_CASE("chains of one operator flatten") {
  const auto f = parse_formula("latency > 1 & backlog > 2 & latency > 3", kNames);
  CHECK(f.kind() == NodeKind::And);
  CHECK(f.children().size() == 3);
}

TEST_CASE("linear atoms and unbounded windows") {
  const auto f = parse_formula("F[2,inf](0.5*latency - 2 backlog > -1.25)", kNames);
  CHECK(f.kind() == NodeKind::Eventually);
  CHECK(f.window().lo == 2);
  CHECK_FALSE(f.window().hi.has_value());
  CHECK(f.child().coefficients()[0] == 0.5);
  CHECK(f.child().coefficients()[1] == -2.0);
  CHECK(f.child().offset() == -1.25);
}

TEST_CASE("malformed input is rejected with a position") {
  CHECK_THROWS_AS(parse_formula("G[0,60](latency < )", kNames), ParseError);
  CHECK_THROWS_AS(parse_formula("G[5,2](latency < 1)", kNames), ParseError);
  CHECK_THROWS_AS(parse_formula("jitter > 1", kNames), ParseError);
  CHECK_THROWS_AS(parse_formula("latency > 1 &", kNames), ParseError);
  CHECK_THROWS_AS(parse_formula("(latency > 1", kNames), ParseError);
  try {
    parse_formula("latency > 1 ) ", kNames);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 12);
  }
}

TEST_CASE("format then parse recovers the canonical tree") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto f = ref::random_formula(rng, 2, 3, 4, 10);
    const auto text = format_formula(f, kNames);
    const auto back = parse_formula(text, kNames);
    CHECK(back == canonicalize(f, kNames));
    CHECK(format_formula(back, kNames) == text);
  }
}

TEST_CASE("canonical text ignores Boolean child order") {
  const auto a = parse_formula("latency > 1 & G[0,3](backlog < 2)", kNames);
  const auto b = parse_formula("G[0,3](backlog < 2) & latency > 1", kNames);
  CHECK(format_formula(a, kNames) == format_formula(b, kNames));
  CHECK(canonicalize(a, kNames) == canonicalize(b, kNames));
}

TEST_CASE("constructors validate their arguments") {
  CHECK_THROWS(Formula::conjunction({}));
  CHECK_THROWS(Formula::always(Interval{-1, 3}, Formula::atom({1.0}, 0.0)));
  CHECK_THROWS(Formula::always(Interval{4, 3}, Formula::atom({1.0}, 0.0)));
}
