#pragma once

#include "../hypotheses/guard.h"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace swi::planner {

// Ground (predicate, value) tuple.
struct Fact {
    std::string predicate;
    nlohmann::json value;
};

using FactBase = std::vector<Fact>;

// A term is a ground value or a variable ("?name").
struct Term {
    std::string variable;
    nlohmann::json constant;

    static Term var(std::string name) { return {std::move(name), nullptr}; }
    static Term ground(nlohmann::json v) { return {"", std::move(v)}; }
    bool is_variable() const { return !variable.empty(); }
};

struct Pattern {
    std::string predicate;
    Term term;
};

// Test applied to a bound variable once all patterns have unified.
struct Constraint {
    enum class Kind { compare, member, non_member } kind;
    std::string variable;
    hypotheses::CompareOp op = hypotheses::CompareOp::eq;
    hypotheses::Operand operand;
    std::vector<hypotheses::Value> members;
};

struct Clause {
    std::vector<Pattern> patterns;
    std::vector<Constraint> constraints;
};

// Disjunction of clauses; empty means unsatisfiable.
struct Rule {
    std::vector<Clause> clauses;
};

using Bindings = std::map<std::string, nlohmann::json>;

// Guard -> rule in disjunctive normal form (negations pushed to atoms).
Rule compile_guard(const hypotheses::GuardExpr &guard);

// First satisfying binding of the rule against the facts, if any.
std::optional<Bindings> unify(const Rule &rule, const FactBase &facts,
                              const hypotheses::GuardParams &params = hypotheses::default_guard_params());

} // namespace swi::planner
