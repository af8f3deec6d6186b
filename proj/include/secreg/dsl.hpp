#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "secreg/polyhedra.hpp"

namespace secreg {

struct DslError : std::runtime_error {
  DslError(std::size_t line, std::size_t col, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  std::size_t line;
  std::size_t col;
};

// Text format for inequality systems. One inequality per line:
//
//   <affine rate expression> <= <info expression>
//   <affine rate expression> >= <info expression>
//
// The info expression is a +/- separated list of H(A,B|C) and I(A;B|C)
// terms and rational constants, each with an optional rational coefficient
// ("3/2*H(X)" or "3/2 H(X)"). Rate variables are declared by first use or
// up front with a "vars R1 R2 ..." line. Rationals are written "p/q".
// Variable names are alphanumeric with optional trailing apostrophes
// (Y1', Z'). "#" starts a comment. ">=" lines are normalized to "<=" by
// negation; lines without rate variables become assumptions.
IneqSystem parse_system(const std::string& text);

// Canonical rendering that parses back to the same system.
std::string print_system(const IneqSystem& system);

}  // namespace secreg
