#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nonfail/core_ir.hpp"

namespace nonfail {

/// Generic S-expression node with its source position.
struct SExpr {
    enum class Kind { Atom, String, List };
    Kind kind = Kind::Atom;
    std::string text;
    std::vector<SExpr> items;
    SourcePos pos;

    bool is_atom(std::string_view s) const { return kind == Kind::Atom && text == s; }
};

/// Reads a sequence of S-expressions. `;` starts a line comment.
std::vector<SExpr> read_sexprs(std::string_view text);

/// Parses the textual IR. Declared names are qualified with the module
/// name; references stay unqualified until `resolve_program`. Throws IrError
/// for syntax errors, duplicate declarations, arity mismatches between a
/// rule and its declared arity, and unbound variables.
CoreProgram parse_program(std::string_view text);

/// Parses a standalone type such as `(List a)`; used by interface files.
TypeExpr parse_type(std::string_view text);

/// Parses one expression in an existing variable scope (test helper).
ExprPtr parse_expr(std::string_view text, const std::vector<std::string>& scope = {});

/// Inverse of parse_program, modulo whitespace and comments. References
/// are printed unqualified.
std::string print_program(const CoreProgram& program);
std::string print_expr(const Expr& e);
std::string print_type(const TypeExpr& t);

}  // namespace nonfail
