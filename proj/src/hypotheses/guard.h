#pragma once

#include "fields.h"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace swi::hypotheses {

enum class CompareOp { lt, le, gt, ge, eq, ne };

std::string to_string(CompareOp op);
CompareOp negate(CompareOp op);

// Right-hand side of a comparison: a literal or a named parameter ($epsilon).
struct Operand {
    Value literal;
    std::string param; // non-empty for a parameter reference

    bool operator==(const Operand &) const = default;
};

struct GuardExpr {
    enum class Kind { constant, field, compare, in, negation, conjunction, disjunction };

    Kind kind = Kind::constant;
    bool constant = false;
    std::string field;
    CompareOp op = CompareOp::eq;
    Operand rhs;
    std::vector<Value> members;
    std::vector<GuardExpr> children;

    bool operator==(const GuardExpr &) const = default;
};

using GuardParams = std::map<std::string, double>;

GuardParams default_guard_params();

// Parses and type-checks a guard. Grammar:
//   expr  := and ('||' and)*
//   and   := unary ('&&' unary)*
//   unary := '!' unary | '(' expr ')' | atom
//   atom  := field [op value | 'in' '{' value (',' value)* '}']
//   value := number | true | false | $param | word
// Throws SchemaError naming the offending field, parameter or token.
GuardExpr parse_guard(const std::string &text);

// Canonical text; parse_guard(print_guard(g)) == g.
std::string print_guard(const GuardExpr &g);

// Every field the guard mentions.
std::vector<std::string> guard_fields_used(const GuardExpr &g);

// Reference evaluator: walks the expression tree and looks each field up
// directly on the records.
bool evaluate(const GuardExpr &g, const analysis::DiagnosticFeatures &features,
              const linguistics::WordProperties &props, const GuardParams &params = default_guard_params());

bool compare_values(const Value &lhs, CompareOp op, const Value &rhs);
Value resolve(const Operand &operand, const GuardParams &params);

} // namespace swi::hypotheses
