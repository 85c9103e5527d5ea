#include "guard.h"

#include "../common/errors.h"

#include <cctype>
#include <cmath>
#include <sstream>

using namespace std;

namespace swi::hypotheses {

string to_string(CompareOp op) {
    switch (op) {
    case CompareOp::lt:
        return "<";
    case CompareOp::le:
        return "<=";
    case CompareOp::gt:
        return ">";
    case CompareOp::ge:
        return ">=";
    case CompareOp::eq:
        return "==";
    case CompareOp::ne:
        return "!=";
    }
    return "?";
}

CompareOp negate(CompareOp op) {
    switch (op) {
    case CompareOp::lt:
        return CompareOp::ge;
    case CompareOp::le:
        return CompareOp::gt;
    case CompareOp::gt:
        return CompareOp::le;
    case CompareOp::ge:
        return CompareOp::lt;
    case CompareOp::eq:
        return CompareOp::ne;
    case CompareOp::ne:
        return CompareOp::eq;
    }
    return op;
}

GuardParams default_guard_params() {
    return {{"epsilon", 0.15}};
}

namespace {

struct Token {
    enum class Kind { word, number, param, op, end } kind;
    string text;
    size_t pos;
};

vector<Token> lex(const string &s) {
    vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const size_t start = i;
        if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < s.size() && (isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                ++i;
            out.push_back({Token::Kind::word, s.substr(start, i - start), start});
        } else if (isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size())) {
            while (i < s.size() && (isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'))
                ++i;
            out.push_back({Token::Kind::number, s.substr(start, i - start), start});
        } else if (c == '$') {
            ++i;
            while (i < s.size() && (isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                ++i;
            out.push_back({Token::Kind::param, s.substr(start + 1, i - start - 1), start});
        } else {
            static const vector<string> ops{"||", "&&", "<=", ">=", "==", "!=", "<", ">", "!", "(", ")", "{", "}", ","};
            bool matched = false;
            for (const string &op : ops) {
                if (s.compare(i, op.size(), op) == 0) {
                    out.push_back({Token::Kind::op, op, start});
                    i += op.size();
                    matched = true;
                    break;
                }
            }
            if (!matched)
                throw SchemaError("guard: unexpected character '" + string(1, c) + "' at " + std::to_string(i));
        }
    }
    out.push_back({Token::Kind::end, "", s.size()});
    return out;
}

class Parser {
public:
    explicit Parser(const string &text) : tokens(lex(text)) {}

    GuardExpr parse() {
        GuardExpr e = parse_or();
        if (peek().kind != Token::Kind::end)
            fail("unexpected '" + peek().text + "'");
        return e;
    }

private:
    vector<Token> tokens;
    size_t at = 0;

    const Token &peek() const { return tokens[at]; }
    Token next() { return tokens[at++]; }
    bool accept(const string &op) {
        if (peek().kind == Token::Kind::op && peek().text == op) {
            ++at;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const string &what) const {
        throw SchemaError("guard: " + what + " at " + std::to_string(peek().pos));
    }

    GuardExpr parse_or() {
        GuardExpr first = parse_and();
        if (!(peek().kind == Token::Kind::op && peek().text == "||"))
            return first;
        GuardExpr e;
        e.kind = GuardExpr::Kind::disjunction;
        e.children.push_back(std::move(first));
        while (accept("||"))
            e.children.push_back(parse_and());
        return e;
    }

    GuardExpr parse_and() {
        GuardExpr first = parse_unary();
        if (!(peek().kind == Token::Kind::op && peek().text == "&&"))
            return first;
        GuardExpr e;
        e.kind = GuardExpr::Kind::conjunction;
        e.children.push_back(std::move(first));
        while (accept("&&"))
            e.children.push_back(parse_unary());
        return e;
    }

    GuardExpr parse_unary() {
        if (accept("!")) {
            GuardExpr e;
            e.kind = GuardExpr::Kind::negation;
            e.children.push_back(parse_unary());
            return e;
        }
        if (accept("(")) {
            GuardExpr e = parse_or();
            if (!accept(")"))
                fail("expected ')'");
            return e;
        }
        return parse_atom();
    }

    Value parse_value(const FieldInfo &field, Operand *operand) {
        Token t = next();
        switch (t.kind) {
        case Token::Kind::number:
            if (field.type != FieldType::number)
                fail("field '" + field.name + "' is not numeric");
            return stod(t.text);
        case Token::Kind::param: {
            if (!operand)
                fail("parameter not allowed here");
            if (!default_guard_params().count(t.text))
                throw SchemaError("guard: unknown parameter '$" + t.text + "'");
            if (field.type != FieldType::number)
                fail("field '" + field.name + "' is not numeric");
            operand->param = t.text;
            return 0.0;
        }
        case Token::Kind::word:
            if (t.text == "true" || t.text == "false") {
                if (field.type != FieldType::boolean)
                    fail("field '" + field.name + "' is not boolean");
                return t.text == "true";
            }
            if (field.type != FieldType::enumeration ||
                find(field.values.begin(), field.values.end(), t.text) == field.values.end())
                throw SchemaError("guard: '" + t.text + "' is not a value of field '" + field.name + "'");
            return t.text;
        default:
            --at;
            fail("expected a value");
        }
    }

    GuardExpr parse_atom() {
        Token t = next();
        if (t.kind != Token::Kind::word) {
            --at;
            fail("expected a field name");
        }
        GuardExpr e;
        if (t.text == "true" || t.text == "false") {
            e.kind = GuardExpr::Kind::constant;
            e.constant = t.text == "true";
            return e;
        }
        const FieldInfo *field = find_field(t.text);
        if (!field)
            throw SchemaError("guard: unknown field '" + t.text + "'");
        e.field = t.text;

        if (peek().kind == Token::Kind::word && peek().text == "in") {
            ++at;
            if (!accept("{"))
                fail("expected '{'");
            e.kind = GuardExpr::Kind::in;
            do {
                e.members.push_back(parse_value(*field, nullptr));
            } while (accept(","));
            if (!accept("}"))
                fail("expected '}'");
            return e;
        }
        static const map<string, CompareOp> ops{{"<", CompareOp::lt},  {"<=", CompareOp::le}, {">", CompareOp::gt},
                                                {">=", CompareOp::ge}, {"==", CompareOp::eq}, {"!=", CompareOp::ne}};
        if (peek().kind == Token::Kind::op && ops.count(peek().text)) {
            e.kind = GuardExpr::Kind::compare;
            e.op = ops.at(next().text);
            if (field->type != FieldType::number && e.op != CompareOp::eq && e.op != CompareOp::ne)
                fail("ordering comparison on non-numeric field '" + field->name + "'");
            e.rhs.literal = parse_value(*field, &e.rhs);
            return e;
        }
        if (field->type != FieldType::boolean)
            fail("field '" + field->name + "' is not boolean and needs a comparison");
        e.kind = GuardExpr::Kind::field;
        return e;
    }
};

string print_value(const Value &v) {
    if (auto d = get_if<double>(&v)) {
        ostringstream out;
        out << *d;
        return out.str();
    }
    return to_string(v);
}

void print(const GuardExpr &g, ostringstream &out, int parent) {
    // precedence: 1 or, 2 and, 3 unary/atom
    switch (g.kind) {
    case GuardExpr::Kind::constant:
        out << (g.constant ? "true" : "false");
        return;
    case GuardExpr::Kind::field:
        out << g.field;
        return;
    case GuardExpr::Kind::compare:
        out << g.field << " " << to_string(g.op) << " ";
        if (!g.rhs.param.empty())
            out << "$" << g.rhs.param;
        else
            out << print_value(g.rhs.literal);
        return;
    case GuardExpr::Kind::in:
        out << g.field << " in {";
        for (size_t i = 0; i < g.members.size(); ++i)
            out << (i ? ", " : "") << print_value(g.members[i]);
        out << "}";
        return;
    case GuardExpr::Kind::negation:
        out << "!";
        print(g.children.front(), out, 3);
        return;
    case GuardExpr::Kind::conjunction:
    case GuardExpr::Kind::disjunction: {
        const int mine = g.kind == GuardExpr::Kind::disjunction ? 1 : 2;
        // Nested same-kind groups keep their parentheses so the tree shape
        // survives a round trip.
        const bool paren = parent >= mine;
        if (paren)
            out << "(";
        for (size_t i = 0; i < g.children.size(); ++i) {
            if (i)
                out << (mine == 1 ? " || " : " && ");
            print(g.children[i], out, mine);
        }
        if (paren)
            out << ")";
        return;
    }
    }
}

void collect(const GuardExpr &g, vector<string> &out) {
    if (!g.field.empty() && find(out.begin(), out.end(), g.field) == out.end())
        out.push_back(g.field);
    for (const auto &c : g.children)
        collect(c, out);
}

} // namespace

GuardExpr parse_guard(const string &text) {
    return Parser(text).parse();
}

string print_guard(const GuardExpr &g) {
    ostringstream out;
    print(g, out, 0);
    return out.str();
}

vector<string> guard_fields_used(const GuardExpr &g) {
    vector<string> out;
    collect(g, out);
    return out;
}

bool compare_values(const Value &lhs, CompareOp op, const Value &rhs) {
    if (lhs.index() != rhs.index())
        return op == CompareOp::ne;
    if (auto a = get_if<double>(&lhs)) {
        const double b = get<double>(rhs);
        constexpr double tol = 1e-9;
        switch (op) {
        case CompareOp::lt:
            return *a < b - tol;
        case CompareOp::le:
            return *a <= b + tol;
        case CompareOp::gt:
            return *a > b + tol;
        case CompareOp::ge:
            return *a >= b - tol;
        case CompareOp::eq:
            return fabs(*a - b) <= tol;
        case CompareOp::ne:
            return fabs(*a - b) > tol;
        }
    }
    switch (op) {
    case CompareOp::eq:
        return lhs == rhs;
    case CompareOp::ne:
        return lhs != rhs;
    default:
        return false;
    }
}

Value resolve(const Operand &operand, const GuardParams &params) {
    if (operand.param.empty())
        return operand.literal;
    auto it = params.find(operand.param);
    if (it == params.end())
        throw SchemaError("guard: parameter '$" + operand.param + "' has no value");
    return it->second;
}

bool evaluate(const GuardExpr &g, const analysis::DiagnosticFeatures &features,
              const linguistics::WordProperties &props, const GuardParams &params) {
    switch (g.kind) {
    case GuardExpr::Kind::constant:
        return g.constant;
    case GuardExpr::Kind::field:
        return get<bool>(field_value(g.field, features, props));
    case GuardExpr::Kind::compare:
        return compare_values(field_value(g.field, features, props), g.op, resolve(g.rhs, params));
    case GuardExpr::Kind::in: {
        const Value v = field_value(g.field, features, props);
        for (const Value &m : g.members)
            if (compare_values(v, CompareOp::eq, m))
                return true;
        return false;
    }
    case GuardExpr::Kind::negation:
        return !evaluate(g.children.front(), features, props, params);
    case GuardExpr::Kind::conjunction:
        for (const auto &c : g.children)
            if (!evaluate(c, features, props, params))
                return false;
        return true;
    case GuardExpr::Kind::disjunction:
        for (const auto &c : g.children)
            if (evaluate(c, features, props, params))
                return true;
        return false;
    }
    return false;
}

} // namespace swi::hypotheses
