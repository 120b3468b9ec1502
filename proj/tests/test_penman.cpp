#include <string>

#include "doctest.h"

#include "amrsumm/penman.hpp"
#include "test_support.hpp"

using namespace amrsumm;

namespace {

const char* kFigure = R"((s / see-01
  :ARG0 (i / i)
  :ARG1 (d / dog
    :poss (p / person
      :name (n / name :op1 "Joe"))
    :ARG0-of (r / run-02
      :location (g / garden)))))";

bool has_edge(const AmrGraph& g, const std::string& src, const std::string& tgt,
              const std::string& rel) {
  for (const AmrEdge& e : g.edges)
    if (e.source == src && e.target == tgt && e.relation == rel) return true;
  return false;
}

}  // namespace

TEST_CASE("nested graph with inverse relation and string constant") {
  const AmrGraph g = parse_penman(kFigure);
  CHECK(g.root == "s");
  CHECK(g.nodes.size() == 8);  // 7 variables + "Joe"
  CHECK(g.edges.size() == 7);

  const AmrNode* d = g.find("d");
  REQUIRE(d != nullptr);
  CHECK(d->concept_label == "dog");
  CHECK(d->kind == NodeKind::variable);

  // :ARG0-of points the stored edge the other way
  CHECK(has_edge(g, "r", "d", "ARG0"));
  CHECK_FALSE(has_edge(g, "d", "r", "ARG0-of"));

  // the string constant hangs off the name node with a synthetic variable
  const AmrNode* joe = g.find("_c0");
  REQUIRE(joe != nullptr);
  CHECK(joe->kind == NodeKind::string_constant);
  CHECK(joe->concept_label == "Joe");
  CHECK(has_edge(g, "n", "_c0", "op1"));
}

TEST_CASE("constant kinds") {
  const AmrGraph g = parse_penman(
      "(d / date-entity :month 4 :day 8 :year 2002 :mode interrogative :polarity - :quant 3.5)");
  int numeric = 0, symbol = 0;
  for (const AmrNode& n : g.nodes) {
    if (n.kind == NodeKind::numeric_constant) ++numeric;
    if (n.kind == NodeKind::symbol_constant) ++symbol;
  }
  CHECK(numeric == 4);  // 4, 8, 2002, 3.5
  CHECK(symbol == 2);   // interrogative, -
}

TEST_CASE("reentrant variable becomes a second edge, not a new node") {
  const AmrGraph g = parse_penman("(r / run-02 :ARG0 (d / dog) :location (g / garden :poss d))");
  CHECK(g.nodes.size() == 3);
  CHECK(has_edge(g, "g", "d", "poss"));
  int in_deg = 0;
  for (const AmrEdge& e : g.edges)
    if (e.target == "d") ++in_deg;
  CHECK(in_deg == 2);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_penman("(a / x"), ParseError);
  CHECK_THROWS_AS(parse_penman("(a x)"), ParseError);
  CHECK_THROWS_AS(parse_penman("(a / x) junk"), ParseError);
  CHECK_THROWS_AS(parse_penman("(a / x :ARG0 (a / y))"), ParseError);   // duplicate variable
  CHECK_THROWS_AS(parse_penman("(a / x :ARG0 b)"), ParseError);        // undefined variable
  CHECK_THROWS_AS(parse_penman("(a / x : (b / y))"), ParseError);      // empty relation
  CHECK_THROWS_AS(parse_penman("(a / x :op1 \"oops)"), ParseError);    // unterminated string
  CHECK_THROWS_AS(parse_penman(""), ParseError);

  try {
    parse_penman("(a / x :ARG0 (b / y :ARG1 a))");  // a -> b -> a
    FAIL("cycle accepted");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("cycle") != std::string::npos);
  }
}

TEST_CASE("parse errors carry a byte offset") {
  try {
    parse_penman("(a / x :ARG0 undefined_var)");
    FAIL("undefined variable accepted");
  } catch (const ParseError& e) {
    CHECK(e.offset > 0);
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
}

TEST_CASE("serialization is order-canonical") {
  const AmrGraph a = parse_penman("(a / x :ARG1 (c / z) :ARG0 (b / y))");
  const AmrGraph b = parse_penman("(a / x :ARG0 (b / y) :ARG1 (c / z))");
  CHECK(serialize_penman(a) == serialize_penman(b));
}

TEST_CASE("serialization reintroduces -of where the walk runs backwards") {
  const AmrGraph g =
      parse_penman("(b / bark-01 :ARG0 (d / dog :ARG1-of (h / hear-01 :ARG0 (c / child))))");
  const std::string text = serialize_penman(g);
  CHECK(text.find(":ARG1-of") != std::string::npos);
  CHECK(testsupport::graph_equal(g, parse_penman(text)));
}

TEST_CASE("round trip over assorted graphs") {
  const char* cases[] = {
      kFigure,
      "(c / chase-01 :ARG0 (d / dog) :ARG1 (c2 / cat))",
      "(r / run-02 :ARG0 (d / dog) :location (g / garden :poss d))",
      "(v / visit-01 :ARG0 (p / person :name (n / name :op1 \"New\" :op2 \"York\")))",
      "(s / stay-01 :polarity - :ARG0 (p / person))",
      "(d / date-entity :day 8 :year 2002 :month 4)",
      "(a / and :op1 (x / thing :quant 3) :op2 (y / say-01 :ARG1 x))",
  };
  for (const char* text : cases) {
    const AmrGraph g = parse_penman(text);
    const AmrGraph again = parse_penman(serialize_penman(g));
    CHECK_MESSAGE(testsupport::graph_equal(g, again), text);
  }
}

TEST_CASE("serialization rejects broken graphs") {
  CHECK_THROWS_AS(serialize_penman(AmrGraph{}), Error);

  AmrGraph g;
  g.nodes.push_back({"a", "x", NodeKind::variable, false, false});
  g.nodes.push_back({"b", "y", NodeKind::variable, false, false});
  g.nodes.push_back({"c", "z", NodeKind::variable, false, false});
  g.edges.push_back({"b", "c", "ARG0"});  // unreachable from the root
  g.root = "a";
  CHECK_THROWS_AS(serialize_penman(g), Error);

  AmrGraph h;
  h.nodes.push_back({"a", "x", NodeKind::variable, false, false});
  h.edges.push_back({"a", "ghost", "ARG0"});
  h.root = "a";
  CHECK_THROWS_AS(serialize_penman(h), Error);
}
