#include "secreg/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <vector>

namespace secreg {

namespace {

enum class Tok {
  name,
  number,
  plus,
  minus,
  star,
  lparen,
  rparen,
  comma,
  semi,
  bar,
  le,
  ge,
  newline,
  end
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
        continue;
      }
      break;
    }
    if (pos_ >= text_.size()) return {Tok::end, "", line_, col_};
    const std::size_t line = line_, col = col_;
    char c = text_[pos_];
    if (c == '\n') {
      advance();
      return {Tok::newline, "\n", line, col};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        num += text_[pos_];
        advance();
      }
      if (pos_ < text_.size() && text_[pos_] == '/') {
        num += '/';
        advance();
        if (pos_ >= text_.size() ||
            !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          throw DslError(line, col, "malformed rational");
        }
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          num += text_[pos_];
          advance();
        }
      }
      return {Tok::number, num, line, col};
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string name;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        name += text_[pos_];
        advance();
      }
      while (pos_ < text_.size() && text_[pos_] == '\'') {
        name += '\'';
        advance();
      }
      return {Tok::name, name, line, col};
    }
    if (c == '<' || c == '>') {
      if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '=') {
        throw DslError(line, col, std::string("expected '") + c + "='");
      }
      advance();
      advance();
      return {c == '<' ? Tok::le : Tok::ge, c == '<' ? "<=" : ">=", line, col};
    }
    advance();
    switch (c) {
      case '+':
        return {Tok::plus, "+", line, col};
      case '-':
        return {Tok::minus, "-", line, col};
      case '*':
        return {Tok::star, "*", line, col};
      case '(':
        return {Tok::lparen, "(", line, col};
      case ')':
        return {Tok::rparen, ")", line, col};
      case ',':
        return {Tok::comma, ",", line, col};
      case ';':
        return {Tok::semi, ";", line, col};
      case '|':
        return {Tok::bar, "|", line, col};
      default:
        throw DslError(line, col, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { bump(); }

  IneqSystem parse() {
    IneqSystem system;
    while (cur_.kind != Tok::end) {
      if (cur_.kind == Tok::newline) {
        bump();
        continue;
      }
      if (cur_.kind == Tok::name && cur_.text == "vars" &&
          peek_.kind == Tok::name) {
        bump();
        while (cur_.kind == Tok::name) {
          declare(cur_.text);
          bump();
        }
        expect_line_end();
        continue;
      }
      parse_inequality(system);
    }
    return system;
  }

 private:
  void bump() {
    cur_ = peek_valid_ ? peek_ : lexer_.next();
    peek_ = lexer_.next();
    peek_valid_ = true;
  }

  void expect_line_end() {
    if (cur_.kind != Tok::newline && cur_.kind != Tok::end) {
      throw DslError(cur_.line, cur_.col, "expected end of line");
    }
    if (cur_.kind == Tok::newline) bump();
  }

  void declare(const std::string& name) {
    if (std::find(rate_vars_.begin(), rate_vars_.end(), name) ==
        rate_vars_.end()) {
      rate_vars_.push_back(name);
    }
  }

  Rat parse_number() {
    Rat r = parse_rational(cur_.text);
    bump();
    return r;
  }

  std::vector<std::string> parse_namelist() {
    std::vector<std::string> names;
    while (true) {
      if (cur_.kind != Tok::name) {
        throw DslError(cur_.line, cur_.col, "expected variable name");
      }
      names.push_back(cur_.text);
      bump();
      if (cur_.kind != Tok::comma) break;
      bump();
    }
    return names;
  }

  // H(A,B|C) or I(A;B|C); the leading name token is already current.
  InfoExpr parse_atom_term() {
    const Token head = cur_;
    const bool mutual = head.text == "I";
    if (!mutual && head.text != "H") {
      throw DslError(head.line, head.col, "expected H(...) or I(...) term");
    }
    bump();
    if (cur_.kind != Tok::lparen) {
      throw DslError(cur_.line, cur_.col, "expected '('");
    }
    bump();
    auto first = parse_namelist();
    std::vector<std::string> second;
    if (mutual) {
      if (cur_.kind != Tok::semi) {
        throw DslError(cur_.line, cur_.col, "expected ';'");
      }
      bump();
      second = parse_namelist();
    }
    std::vector<std::string> given;
    if (cur_.kind == Tok::bar) {
      bump();
      given = parse_namelist();
    }
    if (cur_.kind != Tok::rparen) {
      throw DslError(cur_.line, cur_.col, "expected ')'");
    }
    bump();
    try {
      if (mutual) {
        return mutual_info_expr(make_varset(first), make_varset(second),
                                make_varset(given));
      }
      return cond_entropy_expr(make_varset(first), make_varset(given));
    } catch (const std::invalid_argument& e) {
      throw DslError(head.line, head.col, e.what());
    }
  }

  InfoExpr parse_info_expr() {
    InfoExpr expr;
    bool first = true;
    while (true) {
      Rat sign = 1;
      if (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
        if (cur_.kind == Tok::minus) sign = -1;
        bump();
      } else if (!first) {
        break;
      }
      first = false;
      Rat coeff = sign;
      bool saw_number = false;
      if (cur_.kind == Tok::number) {
        coeff = sign * parse_number();
        saw_number = true;
        if (cur_.kind == Tok::star) bump();
      }
      if (cur_.kind == Tok::name) {
        expr += parse_atom_term() * coeff;
      } else if (saw_number) {
        expr.add_offset(coeff);
      } else {
        throw DslError(cur_.line, cur_.col, "expected term");
      }
    }
    return expr;
  }

  void parse_inequality(IneqSystem& system) {
    std::map<std::string, Rat> coeffs;
    Rat lhs_const = 0;
    bool first = true;
    while (true) {
      Rat sign = 1;
      if (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
        if (cur_.kind == Tok::minus) sign = -1;
        bump();
      } else if (!first) {
        break;
      }
      first = false;
      Rat coeff = sign;
      bool saw_number = false;
      if (cur_.kind == Tok::number) {
        coeff = sign * parse_number();
        saw_number = true;
        if (cur_.kind == Tok::star) bump();
      }
      if (cur_.kind == Tok::name) {
        declare(cur_.text);
        coeffs[cur_.text] += coeff;
        bump();
      } else if (saw_number) {
        lhs_const += coeff;
      } else {
        throw DslError(cur_.line, cur_.col,
                       "expected rate variable or constant");
      }
    }
    if (cur_.kind != Tok::le && cur_.kind != Tok::ge) {
      throw DslError(cur_.line, cur_.col, "expected '<=' or '>='");
    }
    const bool flip = cur_.kind == Tok::ge;
    const std::size_t line = cur_.line;
    bump();
    InfoExpr rhs = parse_info_expr();
    expect_line_end();

    LinIneq ineq;
    if (flip) {
      for (auto& [v, c] : coeffs) c = -c;
      lhs_const = -lhs_const;
      rhs = -rhs;
    }
    ineq.coeffs = std::move(coeffs);
    ineq.constant = rhs - InfoExpr::constant(lhs_const);
    ineq.tag = "L" + std::to_string(line);
    system.rate_vars = rate_vars_;
    system.add(std::move(ineq));
  }

  Lexer lexer_;
  Token cur_;
  Token peek_;
  bool peek_valid_ = false;
  std::vector<std::string> rate_vars_;
};

}  // namespace

IneqSystem parse_system(const std::string& text) {
  Parser parser(text);
  return parser.parse();
}

std::string print_system(const IneqSystem& system) {
  std::ostringstream os;
  if (!system.rate_vars.empty()) {
    os << "vars";
    for (const auto& v : system.rate_vars) os << " " << v;
    os << "\n";
  }
  for (const auto& ineq : system.inequalities) os << ineq.to_string() << "\n";
  for (const auto& a : system.assumptions) {
    os << "0 <= " << a.constant.to_string() << "\n";
  }
  return os.str();
}

}  // namespace secreg
