#pragma once

#include <string>

#include "mats/common.hpp"

namespace mats {

/// Parses a closed-form scalar expression over the coordinates (x1, x2).
///
/// Grammar (version 1, stable for config files):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := unary ('^' factor)?          right associative
///   unary  := '-' unary | primary
///   primary:= number | 'x1' | 'x2' | 'r2' | '|x|^2' | 'pi'
///           | ('exp'|'sqrt'|'abs'|'log'|'sin'|'cos') '(' expr ')'
///           | '(' expr ')'
/// 'r2' and the literal token '|x|^2' both denote x1^2 + x2^2.
///
/// Throws ConfigError with the offending position on malformed input.
ScalarFn parse_expression(const std::string& text);

}  // namespace mats
