#pragma once

#include "tmlcost/btypes/btype.hpp"
#include "tmlcost/lang/ast.hpp"

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tmlcost::btypes {

class TypeError : public std::runtime_error {
public:
  enum class Kind {
    UnboundVariable,
    RestrictionViolation,
    UnknownMethod,
    GetOnNonFuture,
    ReturnTypeMismatch,
    ArityMismatch,
    NotSizeTyped,
    TypeMismatch,
  };
  TypeError(Kind k, const std::string& msg, lang::SourceLoc loc = {});
  Kind kind;
  lang::SourceLoc loc;
  std::string method;  // enclosing method, filled in by type_program
};

const char* kind_name(TypeError::Kind k);

/// Every error found while typing a program.
class TypeErrors : public std::runtime_error {
public:
  explicit TypeErrors(std::vector<TypeError> errs);
  std::vector<TypeError> errors;
  bool has(TypeError::Kind k) const;
};

/// Fresh names for one derivation: `fresh("f")` yields f, f1, f2, ...
/// skipping anything already taken.
class NameSupply {
public:
  NameSupply() = default;
  explicit NameSupply(std::set<std::string> taken) : taken_(std::move(taken)) {}
  std::string fresh(const std::string& base);
  void reserve(const std::string& name) { taken_.insert(name); }

private:
  std::set<std::string> taken_;
};

ExtValue type_expr(const TypeEnv& env, const lang::Expr& e);

struct RhsTyping {
  ExtValue value;
  Atom atom;
  TypeEnv env;
};

/// `target` is the assigned variable; it seeds the name of a fresh future.
RhsTyping type_rhs(const TypeEnv& env, const lang::Rhs& z, NameSupply& names, const std::string& target = "f");

BTypePtr type_stmt(const TypeEnv& env, const lang::Stmt& s, NameSupply& names);

/// Signature of `m` applied to `actuals` (receiver first): header names
/// are replaced by the actuals and unbound names in the result are
/// renamed fresh.
BasicValue instantiate_signature(const TypeEnv& env, const std::string& m, const std::vector<BasicValue>& actuals,
                                 NameSupply& names);

/// First pass: headers and return values of every method.
std::map<std::string, Signature> bootstrap_signatures(const lang::Program& p);

MethodBType type_method(const std::shared_ptr<const std::map<std::string, Signature>>& sigs,
                        const lang::MethodDecl& m);

/// Types all methods and the main body. Throws TypeErrors listing every
/// method that fails.
BProgram type_program(const lang::Program& p);

/// Name of the main block's receiver cog.
inline constexpr const char* kStartCog = "start";

}  // namespace tmlcost::btypes
