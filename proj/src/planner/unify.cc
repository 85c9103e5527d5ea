#include "unify.h"

#include "../common/errors.h"

using namespace std;
using nlohmann::json;
using namespace swi::hypotheses;

namespace swi::planner {

namespace {

json to_json_value(const Value &v) {
    if (auto b = get_if<bool>(&v))
        return *b;
    if (auto d = get_if<double>(&v))
        return *d;
    return get<string>(v);
}

Value from_json_value(const json &j) {
    if (j.is_boolean())
        return j.get<bool>();
    if (j.is_number())
        return j.get<double>();
    if (j.is_string())
        return j.get<string>();
    throw SchemaError("fact value is not a scalar: " + j.dump());
}

struct Compiler {
    int next_var = 0;

    string fresh() { return "?v" + to_string(next_var++); }

    // One atom (possibly negated) as a single-clause rule.
    Rule atom(const GuardExpr &g, bool negated) {
        Clause c;
        const FieldInfo *info = find_field(g.field);
        switch (g.kind) {
        case GuardExpr::Kind::field:
            c.patterns.push_back({g.field, Term::ground(!negated)});
            break;
        case GuardExpr::Kind::compare: {
            const CompareOp op = negated ? hypotheses::negate(g.op) : g.op;
            const bool equality = op == CompareOp::eq || op == CompareOp::ne;
            if (info->type != FieldType::number && equality && g.rhs.param.empty()) {
                if (op == CompareOp::eq) {
                    c.patterns.push_back({g.field, Term::ground(to_json_value(g.rhs.literal))});
                    break;
                }
                if (info->type == FieldType::boolean) {
                    c.patterns.push_back({g.field, Term::ground(!get<bool>(g.rhs.literal))});
                    break;
                }
            }
            string v = fresh();
            c.patterns.push_back({g.field, Term::var(v)});
            c.constraints.push_back({Constraint::Kind::compare, v, op, g.rhs, {}});
            break;
        }
        case GuardExpr::Kind::in: {
            string v = fresh();
            c.patterns.push_back({g.field, Term::var(v)});
            c.constraints.push_back(
                {negated ? Constraint::Kind::non_member : Constraint::Kind::member, v, CompareOp::eq, {}, g.members});
            break;
        }
        default:
            break;
        }
        return {{c}};
    }

    static Rule conjoin(const Rule &a, const Rule &b) {
        Rule out;
        for (const Clause &x : a.clauses)
            for (const Clause &y : b.clauses) {
                Clause c = x;
                c.patterns.insert(c.patterns.end(), y.patterns.begin(), y.patterns.end());
                c.constraints.insert(c.constraints.end(), y.constraints.begin(), y.constraints.end());
                out.clauses.push_back(std::move(c));
            }
        return out;
    }

    static Rule disjoin(Rule a, const Rule &b) {
        a.clauses.insert(a.clauses.end(), b.clauses.begin(), b.clauses.end());
        return a;
    }

    Rule compile(const GuardExpr &g, bool negated) {
        switch (g.kind) {
        case GuardExpr::Kind::constant:
            return (g.constant != negated) ? Rule{{Clause{}}} : Rule{};
        case GuardExpr::Kind::negation:
            return compile(g.children.front(), !negated);
        case GuardExpr::Kind::conjunction:
        case GuardExpr::Kind::disjunction: {
            // De Morgan: a negated conjunction is a disjunction of negations.
            const bool as_and = (g.kind == GuardExpr::Kind::conjunction) != negated;
            Rule acc = as_and ? Rule{{Clause{}}} : Rule{};
            for (const auto &child : g.children) {
                Rule r = compile(child, negated);
                acc = as_and ? conjoin(acc, r) : disjoin(std::move(acc), r);
            }
            return acc;
        }
        default:
            return atom(g, negated);
        }
    }
};

bool unify_term(const Term &term, const json &value, Bindings &env) {
    if (!term.is_variable())
        return term.constant == value;
    auto it = env.find(term.variable);
    if (it != env.end())
        return it->second == value;
    env[term.variable] = value;
    return true;
}

bool check(const Constraint &c, const Bindings &env, const GuardParams &params) {
    const Value v = from_json_value(env.at(c.variable));
    switch (c.kind) {
    case Constraint::Kind::compare:
        return compare_values(v, c.op, resolve(c.operand, params));
    case Constraint::Kind::member:
    case Constraint::Kind::non_member: {
        bool found = false;
        for (const Value &m : c.members)
            found = found || compare_values(v, CompareOp::eq, m);
        return found == (c.kind == Constraint::Kind::member);
    }
    }
    return false;
}

// Depth-first search over fact choices for each pattern.
bool solve(const Clause &clause, size_t k, const FactBase &facts, Bindings &env, const GuardParams &params) {
    if (k == clause.patterns.size()) {
        for (const Constraint &c : clause.constraints)
            if (!check(c, env, params))
                return false;
        return true;
    }
    const Pattern &p = clause.patterns[k];
    for (const Fact &f : facts) {
        if (f.predicate != p.predicate)
            continue;
        Bindings trial = env;
        if (!unify_term(p.term, f.value, trial))
            continue;
        if (solve(clause, k + 1, facts, trial, params)) {
            env = std::move(trial);
            return true;
        }
    }
    return false;
}

} // namespace

Rule compile_guard(const GuardExpr &guard) {
    Compiler c;
    return c.compile(guard, false);
}

optional<Bindings> unify(const Rule &rule, const FactBase &facts, const GuardParams &params) {
    for (const Clause &clause : rule.clauses) {
        Bindings env;
        if (solve(clause, 0, facts, env, params))
            return env;
    }
    return nullopt;
}

} // namespace swi::planner
