#pragma once

#include <string>
#include <string_view>

#include "gfa/expr.hpp"

namespace gfa {

/// Parses the family-definition expression language:
///
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | factor
///   factor := base ('^' exponent)?
///   base   := number | ident | ident '(' expr ')' | '(' expr ')'
///
/// Identifiers: eps, x1..xd, exp, sin, cos, log, sqrt, bump, gauss, bumpd<k>.
/// Exponents are signed numbers or parenthesized expressions; a parenthesized
/// constant folds to a rational power, a non-constant exponent is rewritten
/// to exp(e * log(base)).
/// Errors carry line/column positions.
ExprPtr parse(std::string_view text);

/// Text format for family files:
///   # comment
///   dim = 1
///   name = mollifier
///   u = eps^-1 * bump(x1/eps)
struct FamilyFile {
    int dim = 1;
    std::string name;
    ExprPtr u;
};

FamilyFile parse_family_file(std::string_view text);
FamilyFile load_family_file(const std::string& path);

}  // namespace gfa
