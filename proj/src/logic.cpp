#include "claimguard/logic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

namespace claimguard {
namespace logic {

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

Term Term::constant(EntityId id) {
    Term t;
    t.kind = TermKind::Constant;
    t.name = std::move(id);
    return t;
}

Term Term::variable(std::string name) {
    Term t;
    t.kind = TermKind::Variable;
    t.name = std::move(name);
    return t;
}

Term Term::num(double v) {
    Term t;
    t.kind = TermKind::Number;
    t.number = v;
    return t;
}

Term Term::timepoint(std::string iso) {
    Term t;
    t.kind = TermKind::Timepoint;
    t.time = std::move(iso);
    return t;
}

Term Term::from_object(const ObjectValue& v) {
    switch (v.kind) {
    case ValueKind::Entity: return constant(v.entity);
    case ValueKind::Number: return num(v.number);
    case ValueKind::Time: return timepoint(v.time);
    }
    return {};
}

std::string Term::text() const {
    switch (kind) {
    case TermKind::Constant: return name;
    case TermKind::Variable: return "?" + name;
    case TermKind::Number: return format_number(number);
    case TermKind::Timepoint: return time;
    }
    return {};
}

bool Term::operator==(const Term& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
    case TermKind::Constant:
    case TermKind::Variable: return name == o.name;
    case TermKind::Number: return number == o.number;
    case TermKind::Timepoint: return time == o.time;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Builtins
// ---------------------------------------------------------------------------

Builtin builtin_from_name(const std::string& name) {
    if (name == "lt") return Builtin::Lt;
    if (name == "leq") return Builtin::Leq;
    if (name == "eq_num") return Builtin::EqNum;
    if (name == "before") return Builtin::Before;
    if (name == "after") return Builtin::After;
    if (name == "same_time") return Builtin::SameTime;
    if (name == "eq_id") return Builtin::EqId;
    return Builtin::None;
}

std::string builtin_name(Builtin b) {
    switch (b) {
    case Builtin::None: return {};
    case Builtin::Lt: return "lt";
    case Builtin::Leq: return "leq";
    case Builtin::EqNum: return "eq_num";
    case Builtin::Before: return "before";
    case Builtin::After: return "after";
    case Builtin::SameTime: return "same_time";
    case Builtin::EqId: return "eq_id";
    }
    return {};
}

bool Literal::ground() const {
    for (const Term& t : args)
        if (t.is_var()) return false;
    return true;
}

bool Literal::same_symbol(const Literal& o) const {
    return builtin == o.builtin && predicate == o.predicate && args.size() == o.args.size();
}

std::string Literal::text() const {
    std::string out = negated ? "~" : "";
    out += symbol();
    out.push_back('(');
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out.push_back(',');
        out += args[i].text();
    }
    out.push_back(')');
    return out;
}

BuiltinEval eval_builtin_atom(const Literal& lit) {
    if (lit.builtin == Builtin::None || lit.args.size() != 2) return BuiltinEval::Symbolic;
    const Term& a = lit.args[0];
    const Term& b = lit.args[1];
    if (!a.ground() || !b.ground()) return BuiltinEval::Symbolic;
    auto both = [&](TermKind k) { return a.kind == k && b.kind == k; };
    auto to_eval = [](bool v) { return v ? BuiltinEval::True : BuiltinEval::False; };
    switch (lit.builtin) {
    case Builtin::Lt:
        return both(TermKind::Number) ? to_eval(a.number < b.number) : BuiltinEval::Symbolic;
    case Builtin::Leq:
        return both(TermKind::Number) ? to_eval(a.number <= b.number) : BuiltinEval::Symbolic;
    case Builtin::Before:
        return both(TermKind::Timepoint) ? to_eval(a.time < b.time) : BuiltinEval::Symbolic;
    case Builtin::After:
        return both(TermKind::Timepoint) ? to_eval(a.time > b.time) : BuiltinEval::Symbolic;
    case Builtin::EqNum:
        if (both(TermKind::Number)) return to_eval(std::fabs(a.number - b.number) <= lit.eq_tolerance);
        if (a.kind == TermKind::Number || b.kind == TermKind::Number) return BuiltinEval::False;
        return BuiltinEval::Symbolic;
    case Builtin::SameTime:
        if (both(TermKind::Timepoint)) return to_eval(a.time == b.time);
        if (a.kind == TermKind::Timepoint || b.kind == TermKind::Timepoint)
            return BuiltinEval::False;
        return BuiltinEval::Symbolic;
    case Builtin::EqId:
        if (a.kind != b.kind) return BuiltinEval::False;
        if (both(TermKind::Number)) return to_eval(std::fabs(a.number - b.number) <= 1e-9);
        if (both(TermKind::Timepoint)) return to_eval(a.time == b.time);
        return to_eval(a.name == b.name); // unique-names assumption
    case Builtin::None: break;
    }
    return BuiltinEval::Symbolic;
}

// ---------------------------------------------------------------------------
// Clauses
// ---------------------------------------------------------------------------

void Clause::normalize() {
    std::sort(literals.begin(), literals.end(),
              [](const Literal& a, const Literal& b) { return a.text() < b.text(); });
    literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
}

std::string Clause::text() const {
    if (literals.empty()) return "<empty>";
    std::string out;
    for (std::size_t i = 0; i < literals.size(); ++i) {
        if (i) out += " | ";
        out += literals[i].text();
    }
    return out;
}

std::string Clause::canonical_text() const {
    // order literals with variables masked, then rename in first occurrence
    std::vector<std::size_t> order(literals.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto masked = [&](const Literal& l) {
        std::string out = l.negated ? "~" : "";
        out += l.symbol();
        out.push_back('(');
        for (std::size_t i = 0; i < l.args.size(); ++i) {
            if (i) out.push_back(',');
            out += l.args[i].is_var() ? "?*" : l.args[i].text();
        }
        out.push_back(')');
        return out;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return masked(literals[a]) < masked(literals[b]); });
    std::map<std::string, std::string> rename;
    std::string out;
    for (std::size_t idx : order) {
        Literal l = literals[idx];
        for (Term& t : l.args) {
            if (!t.is_var()) continue;
            auto it = rename.find(t.name);
            if (it == rename.end())
                it = rename.emplace(t.name, "v" + std::to_string(rename.size())).first;
            t.name = it->second;
        }
        if (!out.empty()) out += " | ";
        out += l.text();
    }
    return out.empty() ? "<empty>" : out;
}

Clause make_unit(Literal lit, ClauseOrigin origin, std::optional<Triple> source) {
    Clause c;
    c.literals.push_back(std::move(lit));
    c.origin = origin;
    c.source = std::move(source);
    return c;
}

namespace {

Literal atom_to_literal(const RuleAtom& atom, bool negated) {
    Literal l;
    Builtin b = builtin_from_name(atom.predicate);
    if (b != Builtin::None)
        l.builtin = b;
    else
        l.predicate = atom.predicate;
    l.negated = negated;
    for (const RuleAtom::Arg& arg : atom.args)
        l.args.push_back(arg.is_var ? Term::variable(arg.var) : Term::from_object(arg.value));
    return l;
}

} // namespace

Clause clause_from_rule(const Rule& rule) {
    Clause c;
    c.origin = ClauseOrigin::RuleClause;
    for (const RuleAtom& atom : rule.body) c.literals.push_back(atom_to_literal(atom, true));
    c.literals.push_back(atom_to_literal(rule.head, false));
    c.normalize();
    return c;
}

// ---------------------------------------------------------------------------
// Substitution and unification
// ---------------------------------------------------------------------------

std::string substitution_text(const Substitution& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ", ";
        out += "?" + s[i].first + "->" + s[i].second.text();
    }
    out += "}";
    return out;
}

Term apply_substitution(const Term& t, const Substitution& s) {
    if (!t.is_var()) return t;
    for (const auto& [var, repl] : s)
        if (var == t.name) return repl;
    return t;
}

Literal apply_substitution(const Literal& l, const Substitution& s) {
    Literal out = l;
    for (Term& t : out.args) t = apply_substitution(t, s);
    return out;
}

namespace {

// composes {var -> term} into s, keeping s idempotent
void extend(Substitution& s, const std::string& var, const Term& term) {
    for (auto& [v, t] : s)
        if (t.is_var() && t.name == var) t = term;
    s.emplace_back(var, term);
}

} // namespace

std::optional<Substitution> unify(const Literal& a, const Literal& b) {
    if (!a.same_symbol(b)) return std::nullopt;
    Substitution s;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        Term x = apply_substitution(a.args[i], s);
        Term y = apply_substitution(b.args[i], s);
        if (x == y) continue;
        if (x.is_var()) {
            extend(s, x.name, y);
        } else if (y.is_var()) {
            extend(s, y.name, x);
        } else {
            return std::nullopt; // distinct ground terms
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Translation and premise selection
// ---------------------------------------------------------------------------

Literal translate_to_fol(const Claim& claim) {
    Literal l;
    Builtin b = builtin_from_name(claim.triple.predicate);
    if (b != Builtin::None)
        l.builtin = b;
    else
        l.predicate = claim.triple.predicate;
    l.negated = claim.polarity == Polarity::Negated;
    l.args.push_back(Term::constant(claim.triple.subject));
    l.args.push_back(Term::from_object(claim.triple.object));
    return l;
}

std::vector<Clause> shipped_axioms() {
    static const char* kAxioms[] = {
        "~before(?x,?y) | ~before(?y,?z) | before(?x,?z)",
        "~after(?x,?y) | before(?y,?x)",
        "~before(?x,?y) | after(?y,?x)",
        "~same_time(?x,?y) | same_time(?y,?x)",
        "~same_time(?x,?y) | ~same_time(?y,?z) | same_time(?x,?z)",
        "~before(?x,?y) | ~before(?y,?x)",
        "~causes(?x,?y) | ~causes(?y,?z) | causes(?x,?z)",
        "~causes(?x,?y) | ~causes(?y,?x)",
    };
    std::vector<Clause> out;
    for (const char* text : kAxioms) {
        Clause c = parse_clause_text(text);
        c.origin = ClauseOrigin::Axiom;
        out.push_back(std::move(c));
    }
    return out;
}

namespace {

Literal literal_from_triple(const Triple& t) {
    Literal l;
    Builtin b = builtin_from_name(t.predicate);
    if (b != Builtin::None)
        l.builtin = b;
    else
        l.predicate = t.predicate;
    l.args.push_back(Term::constant(t.subject));
    l.args.push_back(Term::from_object(t.object));
    return l;
}

Builtin equality_for_range(const Declarations& decls, const EntityId& predicate) {
    auto it = decls.ranges.find(predicate);
    if (it == decls.ranges.end()) return Builtin::EqId;
    switch (it->second) {
    case ValueKind::Number: return Builtin::EqNum;
    case ValueKind::Time: return Builtin::SameTime;
    case ValueKind::Entity: return Builtin::EqId;
    }
    return Builtin::EqId;
}

std::set<std::string> clause_symbols(const Clause& c) {
    std::set<std::string> out;
    for (const Literal& l : c.literals) out.insert(l.symbol());
    return out;
}

} // namespace

std::vector<Clause> extract_premises(const KnowledgeGraph& graph, const Literal& goal,
                                     const std::vector<Rule>& rules) {
    // entities of the goal, expanded to their connected component in the graph
    std::set<EntityId> component;
    {
        std::vector<EntityId> frontier;
        for (const Term& t : goal.args)
            if (t.kind == TermKind::Constant && graph.vertices().count(t.name) &&
                component.insert(t.name).second)
                frontier.push_back(t.name);
        while (!frontier.empty()) {
            EntityId e = frontier.back();
            frontier.pop_back();
            for (std::size_t idx : graph.touching(e)) {
                const Triple& t = graph.edges()[idx].triple;
                if (component.insert(t.subject).second) frontier.push_back(t.subject);
                if (t.object.kind == ValueKind::Entity && component.insert(t.object.entity).second)
                    frontier.push_back(t.object.entity);
            }
        }
    }

    std::set<std::string> predicates{goal.symbol()};

    // (a) unit clauses for edges in the component or sharing the goal predicate
    std::vector<const Triple*> selected_edges;
    auto edge_selected = [&](const Triple& t, const std::set<std::string>& preds) {
        if (component.count(t.subject)) return true;
        if (t.object.kind == ValueKind::Entity && component.count(t.object.entity)) return true;
        return preds.count(t.predicate) > 0;
    };
    for (const Edge& e : graph.edges()) {
        if (edge_selected(e.triple, predicates)) {
            selected_edges.push_back(&e.triple);
            predicates.insert(e.triple.predicate);
        }
    }

    // (b) rule clauses reachable through the predicate set, to closure
    std::vector<Clause> rule_clauses;
    for (const Rule& r : rules) rule_clauses.push_back(clause_from_rule(r));
    for (Clause& ax : shipped_axioms()) rule_clauses.push_back(std::move(ax));
    std::vector<bool> included(rule_clauses.size(), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < rule_clauses.size(); ++i) {
            if (included[i]) continue;
            std::set<std::string> syms = clause_symbols(rule_clauses[i]);
            bool hit = std::any_of(syms.begin(), syms.end(),
                                   [&](const std::string& s) { return predicates.count(s) > 0; });
            if (hit) {
                included[i] = true;
                changed = true;
                predicates.insert(syms.begin(), syms.end());
            }
        }
    }

    // second edge pass: facts whose predicate became relevant through rules
    for (const Edge& e : graph.edges()) {
        if (!edge_selected(e.triple, predicates)) continue;
        if (std::find(selected_edges.begin(), selected_edges.end(), &e.triple) ==
            selected_edges.end())
            selected_edges.push_back(&e.triple);
    }

    std::vector<Clause> premises;
    for (const Triple* t : selected_edges)
        premises.push_back(make_unit(literal_from_triple(*t), ClauseOrigin::Fact, *t));
    for (std::size_t i = 0; i < rule_clauses.size(); ++i)
        if (included[i]) premises.push_back(rule_clauses[i]);

    // (c) functional-predicate contradiction schemas, always included
    const Declarations& decls = graph.declarations();
    for (const EntityId& p : decls.functional) {
        Clause c;
        c.origin = ClauseOrigin::Constraint;
        Literal l1;
        l1.predicate = p;
        l1.negated = true;
        l1.args = {Term::variable("x"), Term::variable("y")};
        Literal l2 = l1;
        l2.args = {Term::variable("x"), Term::variable("z")};
        Literal eq;
        eq.builtin = equality_for_range(decls, p);
        eq.args = {Term::variable("y"), Term::variable("z")};
        c.literals = {std::move(l1), std::move(l2), std::move(eq)};
        c.normalize();
        premises.push_back(std::move(c));
    }
    return premises;
}

// ---------------------------------------------------------------------------
// FOL text syntax
// ---------------------------------------------------------------------------

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, static_cast<int>(pos));
    }
};

std::string parse_ident(Cursor& c) {
    c.skip_ws();
    std::size_t start = c.pos;
    while (c.pos < c.text.size()) {
        char ch = c.text[c.pos];
        if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.' ||
            ch == ':' || ch == '+')
            ++c.pos;
        else
            break;
    }
    if (c.pos == start) c.fail("expected identifier");
    return c.text.substr(start, c.pos - start);
}

Term parse_term(Cursor& c) {
    c.skip_ws();
    if (c.pos < c.text.size() && c.text[c.pos] == '?') {
        ++c.pos;
        return Term::variable(parse_ident(c));
    }
    std::string tok = parse_ident(c);
    if (looks_like_number(tok)) {
        return Term::num(ObjectValue::parse(tok).number);
    }
    if (looks_like_time(tok)) return Term::timepoint(tok);
    return Term::constant(normalize_entity(tok));
}

Literal parse_literal_at(Cursor& c) {
    c.skip_ws();
    Literal l;
    if (c.pos < c.text.size() && c.text[c.pos] == '~') {
        l.negated = true;
        ++c.pos;
    }
    std::string name = parse_ident(c);
    Builtin b = builtin_from_name(name);
    if (b != Builtin::None)
        l.builtin = b;
    else
        l.predicate = normalize_entity(name);
    c.skip_ws();
    if (c.pos >= c.text.size() || c.text[c.pos] != '(') c.fail("expected '('");
    ++c.pos;
    while (true) {
        l.args.push_back(parse_term(c));
        c.skip_ws();
        if (c.pos >= c.text.size()) c.fail("expected ',' or ')'");
        if (c.text[c.pos] == ',') {
            ++c.pos;
            continue;
        }
        if (c.text[c.pos] == ')') {
            ++c.pos;
            break;
        }
        c.fail("expected ',' or ')'");
    }
    return l;
}

} // namespace

Literal parse_literal_text(const std::string& text) {
    Cursor c{text};
    Literal l = parse_literal_at(c);
    if (!c.eof()) c.fail("trailing input after literal");
    return l;
}

Clause parse_clause_text(const std::string& text) {
    Cursor c{text};
    Clause out;
    out.literals.push_back(parse_literal_at(c));
    while (!c.eof()) {
        if (c.text[c.pos] != '|') c.fail("expected '|'");
        ++c.pos;
        out.literals.push_back(parse_literal_at(c));
    }
    out.normalize();
    return out;
}

} // namespace logic
} // namespace claimguard
