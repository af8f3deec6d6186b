#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "secreg/dsl.hpp"
#include "secreg/regions.hpp"

using namespace secreg;

TEST_CASE("a full secrecy-rate inequality parses into twelve entropy atoms") {
  const IneqSystem sys = parse_system(
      "R1 <= I(U0,U1;Y1|Q,V0,V1) - I(U0;Z|Q) - I(U1;Z|Q,U0,V0)\n");
  REQUIRE(sys.inequalities.size() == 1);
  const LinIneq& ineq = sys.inequalities[0];
  CHECK(ineq.coeffs.at("R1") == Rat(1));
  CHECK(ineq.constant.terms().size() == 12);
  CHECK(ineq.constant.offset() == Rat(0));
  // Spot-check a few atoms and their signs.
  CHECK(ineq.constant.terms().at(make_varset({"Q", "U0", "U1", "V0", "V1"})) ==
        Rat(1));
  CHECK(ineq.constant.terms().at(make_varset({"Q", "V0", "V1"})) == Rat(-1));
  CHECK(ineq.constant.terms().at(make_varset({"Q", "U0", "Z"})) == Rat(1));
  CHECK(ineq.constant.terms().at(make_varset({"Q", "U0", "V0"})) == Rat(1));
}

TEST_CASE("lower bounds are normalized to upper bounds by negation") {
  const IneqSystem sys = parse_system("R1 >= 0\n");
  REQUIRE(sys.inequalities.size() == 1);
  CHECK(sys.inequalities[0].coeffs.at("R1") == Rat(-1));
  CHECK(sys.inequalities[0].constant.is_zero());
}

TEST_CASE("overlapping mutual-information arguments are rejected with a location") {
  try {
    parse_system("R1 <= I(X;X)\n");
    FAIL("expected a parse error");
  } catch (const DslError& e) {
    CHECK(e.line == 1);
    CHECK(e.col > 1);
  }
  CHECK_THROWS_AS(parse_system("R1 <= I(X,Y;Y|Q)\n"), DslError);
  CHECK_THROWS_AS(parse_system("R1 <= I(X;Y|X)\n"), DslError);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_system("R1 <= H(X)\nR2 <= H(\n");
    FAIL("expected a parse error");
  } catch (const DslError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("rational coefficients and constants") {
  const IneqSystem sys = parse_system("R1 <= 3/2 H(X) - 1/2\n");
  REQUIRE(sys.inequalities.size() == 1);
  CHECK(sys.inequalities[0].constant.terms().at(make_varset({"X"})) == Rat(3, 2));
  CHECK(sys.inequalities[0].constant.offset() == Rat(-1, 2));
}

TEST_CASE("comments, declarations, and assumption routing") {
  const IneqSystem sys = parse_system(
      "# rates first\n"
      "vars R1 R2\n"
      "R1 <= H(X)  # trailing comment\n"
      "0 <= I(X;Y|Z)\n");
  CHECK(sys.rate_vars == std::vector<std::string>({"R1", "R2"}));
  CHECK(sys.inequalities.size() == 1);
  REQUIRE(sys.assumptions.size() == 1);
  CHECK(sys.assumptions[0].atom_only());
}

TEST_CASE("primed variable names survive a round trip") {
  const IneqSystem sys = parse_system("R1 <= H(Y1'|Z')\n");
  const IneqSystem back = parse_system(print_system(sys));
  REQUIRE(back.inequalities.size() == 1);
  CHECK(back.inequalities[0] == sys.inequalities[0]);
}

TEST_CASE("print-parse round trip is the identity on every builtin system") {
  for (const auto& name : all_region_ids()) {
    CAPTURE(name);
    const IneqSystem sys = builtin_system(name).system;
    const IneqSystem back = parse_system(print_system(sys));
    CHECK(back.rate_vars == sys.rate_vars);
    REQUIRE(back.inequalities.size() == sys.inequalities.size());
    for (std::size_t i = 0; i < sys.inequalities.size(); ++i) {
      CHECK(back.inequalities[i] == sys.inequalities[i]);
    }
    REQUIRE(back.assumptions.size() == sys.assumptions.size());
    for (std::size_t i = 0; i < sys.assumptions.size(); ++i) {
      CHECK(back.assumptions[i] == sys.assumptions[i]);
    }
    // Printing the reparse reproduces the text byte for byte.
    CHECK(print_system(back) == print_system(sys));
  }
}
