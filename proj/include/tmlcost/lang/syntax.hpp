#pragma once

#include "tmlcost/lang/ast.hpp"

#include <string>
#include <string_view>

namespace tmlcost::lang {

/// Parses and checks a whole program.
///
/// Grammar (whitespace and `//` comments are ignored):
///
///     program ::= method* main
///     method  ::= T m '(' [T x {',' T x}] ')' block
///     main    ::= block 'with' k
///     block   ::= '{' (F y ';')* stmt* '}'
///     stmt    ::= x '=' rhs ';' | 'if' '(' e ')' block ['else' block]
///               | 'job' '(' e ')' ';' | 'return' e ';'
///     rhs     ::= e | e '!' m '(' args ')' | e '.' m '(' args ')' | e '.' 'get'
///               | 'new' 'Class' 'with' e | 'new' 'local' 'Class'
///
/// Declarations at the top of nested blocks are hoisted to the enclosing
/// method. Throws ParseError or WellFormednessError.
Program parse_program(std::string_view text);

/// Parses without the well-formedness pass.
Program parse_program_unchecked(std::string_view text);

/// Parses a single expression and classifies it.
Expr parse_expr(std::string_view text);

/// Duplicate names, `return` with a continuation, assignment to undeclared
/// variables and non-variable synchronous-call arguments are rejected.
void check_well_formed(const Program& p);

std::string print_program(const Program& p);
std::string print_method(const MethodDecl& m);
std::string print_stmt(const Stmt& s, int indent = 0);
std::string print_expr(const Expr& e);
std::string print_raw(const RawExpr& e);

const char* type_name(SimpleType t);
std::string type_name(const FullType& t);

}  // namespace tmlcost::lang
