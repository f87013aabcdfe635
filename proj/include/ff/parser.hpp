#pragma once

// Text input for 1-forms in x, y:
//
//   expr  := term (('+' | '-') term)*
//   term  := unary ('*' unary)*
//   unary := ('+' | '-') unary | power
//   power := atom ('^' integer)?
//   atom  := number | x | y | <parameter> | i | dx | dy | d(expr) | (expr)
//
// Numbers are "5", "1/2", "0.25" or "1e-3". The parameter symbol exists only
// in param mode and the imaginary unit only in float mode.

#include <string>
#include <string_view>

#include "ff/error.hpp"
#include "ff/foliation.hpp"

namespace ff {

enum class RingMode { Exact, Float, Param };

struct ModeSpec {
  RingMode mode = RingMode::Exact;
  std::string param = "b";

  // "exact", "float" or "param:NAME".
  static ModeSpec parse(std::string_view text);
  std::string str() const;
};

class ParseError : public InputError {
 public:
  ParseError(std::string code, const std::string& what, std::size_t offset)
      : InputError(std::move(code), what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

template <CoefficientRing R>
OneForm2<R> parse_form(std::string_view text, const std::string& param = "b");

// A function of x and y (no differentials).
template <CoefficientRing R>
Series2<R> parse_function(std::string_view text, const std::string& param = "b");

template <CoefficientRing R>
struct InputExpression {
  std::string source;
  ModeSpec mode;
  int order;
  OneForm2<R> form;

  std::string canonical() const { return form.to_string(mode.param); }
};

template <CoefficientRing R>
InputExpression<R> parse_expr(std::string_view text, const ModeSpec& mode, int order) {
  return {std::string(text), mode, order, parse_form<R>(text, mode.param)};
}

}  // namespace ff
