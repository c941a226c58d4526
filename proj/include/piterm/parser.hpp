#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "piterm/syntax.hpp"

namespace piterm {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Concrete syntax:
///   0 | P | Q | a<v1,...,vn> | a(x1,...,xn).P | !a(x1,...,xn).P
///   new a[:T][fun]. P | (new a[:T][fun]) P
/// with `a` and `a<>` standing for a unit output, `a.P` and `a().P` for a
/// unit input. Values are `*`, names, naturals, `+` and `*`. Comments run
/// from `--` to the end of the line. Binders always get fresh names.
Process parse_process(std::string_view text);

/// `Unit`, `Nat`, `#k[T,...]`, `ik[T,...]`, `ok[T,...]`.
Type parse_type(std::string_view text);

/// Bindings of the form `name : type`, one per line (commas also separate).
std::vector<std::pair<Name, Type>> parse_bindings(std::string_view text);

}  // namespace piterm
