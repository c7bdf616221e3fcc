#include "claimguard/logic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

// Independent replay of proof traces. This file deliberately re-implements
// substitution application, builtin evaluation, and resolution checking
// instead of calling the prover's code paths. Shared data types only.

namespace claimguard {
namespace logic {

namespace {

struct CheckFail {
    std::string reason;
};

using Binding = std::map<std::string, Term>;

Binding parse_unifier(const std::string& text) {
    Binding out;
    if (text.empty() || text == "{}") return out;
    if (text.front() != '{' || text.back() != '}') throw CheckFail{"bad unifier syntax: " + text};
    std::string body = text.substr(1, text.size() - 2);
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t next = body.find(", ", pos);
        std::string item = body.substr(pos, next == std::string::npos ? next : next - pos);
        std::size_t arrow = item.find("->");
        if (arrow == std::string::npos || item.empty() || item[0] != '?')
            throw CheckFail{"bad unifier entry: " + item};
        std::string var = item.substr(1, arrow - 1);
        std::string term_text = item.substr(arrow + 2);
        Term t;
        if (!term_text.empty() && term_text[0] == '?') {
            t = Term::variable(term_text.substr(1));
        } else if (looks_like_number(term_text)) {
            t = Term::num(ObjectValue::parse(term_text).number);
        } else if (looks_like_time(term_text)) {
            t = Term::timepoint(term_text);
        } else {
            t = Term::constant(term_text);
        }
        out[var] = t;
        if (next == std::string::npos) break;
        pos = next + 2;
    }
    return out;
}

Term subst_term(const Term& t, const Binding& b) {
    if (t.kind != TermKind::Variable) return t;
    auto it = b.find(t.name);
    return it == b.end() ? t : it->second;
}

Literal subst_literal(const Literal& l, const Binding& b) {
    Literal out = l;
    for (Term& t : out.args) t = subst_term(t, b);
    return out;
}

Literal primed(const Literal& l) {
    Literal out = l;
    for (Term& t : out.args)
        if (t.kind == TermKind::Variable) t.name += "'";
    return out;
}

bool same_atom(const Literal& a, const Literal& b) {
    if (a.builtin != b.builtin || a.predicate != b.predicate || a.args.size() != b.args.size())
        return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!(a.args[i] == b.args[i])) return false;
    return true;
}

std::multiset<std::string> literal_texts(const std::vector<Literal>& lits) {
    std::multiset<std::string> out;
    for (const Literal& l : lits) out.insert(l.text());
    return out;
}

// checker's own ground-builtin evaluation; mirrors the documented semantics
enum class Tri { T, F, S };

Tri eval_atom(const Literal& l) {
    if (l.builtin == Builtin::None || l.args.size() != 2) return Tri::S;
    const Term& a = l.args[0];
    const Term& b = l.args[1];
    if (a.kind == TermKind::Variable || b.kind == TermKind::Variable) return Tri::S;
    auto nums = a.kind == TermKind::Number && b.kind == TermKind::Number;
    auto times = a.kind == TermKind::Timepoint && b.kind == TermKind::Timepoint;
    switch (l.builtin) {
    case Builtin::Lt: return nums ? (a.number < b.number ? Tri::T : Tri::F) : Tri::S;
    case Builtin::Leq: return nums ? (a.number <= b.number ? Tri::T : Tri::F) : Tri::S;
    case Builtin::Before: return times ? (a.time < b.time ? Tri::T : Tri::F) : Tri::S;
    case Builtin::After: return times ? (a.time > b.time ? Tri::T : Tri::F) : Tri::S;
    case Builtin::EqNum:
        if (nums) return std::fabs(a.number - b.number) <= l.eq_tolerance ? Tri::T : Tri::F;
        if (a.kind == TermKind::Number || b.kind == TermKind::Number) return Tri::F;
        return Tri::S;
    case Builtin::SameTime:
        if (times) return a.time == b.time ? Tri::T : Tri::F;
        if (a.kind == TermKind::Timepoint || b.kind == TermKind::Timepoint) return Tri::F;
        return Tri::S;
    case Builtin::EqId:
        if (a.kind != b.kind) return Tri::F;
        if (nums) return std::fabs(a.number - b.number) <= 1e-9 ? Tri::T : Tri::F;
        if (times) return a.time == b.time ? Tri::T : Tri::F;
        return a.name == b.name ? Tri::T : Tri::F;
    case Builtin::None: break;
    }
    return Tri::S;
}

void check_resolve(const ProofStep& step, const Clause& parent0, const Clause& parent1) {
    Binding sigma = parse_unifier(step.unifier);
    std::vector<Literal> left;
    for (const Literal& l : parent0.literals) left.push_back(primed(l));

    const auto want = literal_texts(step.resolvent.literals);
    for (std::size_t i = 0; i < left.size(); ++i) {
        for (std::size_t j = 0; j < parent1.literals.size(); ++j) {
            const Literal& a = left[i];
            const Literal& b = parent1.literals[j];
            if (a.negated == b.negated) continue;
            Literal sa = subst_literal(a, sigma);
            Literal sb = subst_literal(b, sigma);
            if (!same_atom(sa, sb)) continue;
            // candidate resolved pair; rebuild the resolvent
            std::set<std::string> texts;
            for (std::size_t k = 0; k < left.size(); ++k)
                if (k != i) texts.insert(subst_literal(left[k], sigma).text());
            for (std::size_t k = 0; k < parent1.literals.size(); ++k)
                if (k != j) texts.insert(subst_literal(parent1.literals[k], sigma).text());
            std::multiset<std::string> got(texts.begin(), texts.end());
            if (got == want) return;
        }
    }
    throw CheckFail{"step " + std::to_string(step.id) +
                    ": no complementary pair yields the recorded resolvent"};
}

void check_simplify(const ProofStep& step, const Clause& parent) {
    std::multiset<std::string> kept;
    for (const Literal& l : parent.literals) {
        Tri v = eval_atom(l);
        if (v == Tri::S) {
            kept.insert(l.text());
            continue;
        }
        bool truth = (v == Tri::T) != l.negated;
        if (truth)
            throw CheckFail{"step " + std::to_string(step.id) +
                            ": parent contains a true builtin, clause is satisfied"};
        // false literal: must be dropped
    }
    if (kept != literal_texts(step.resolvent.literals))
        throw CheckFail{"step " + std::to_string(step.id) +
                        ": resolvent does not match builtin simplification of parent"};
}

} // namespace

bool check_trace(const ProofTrace& trace, std::string* why) {
    try {
        if (trace.steps.empty()) throw CheckFail{"empty trace"};
        std::map<int, Clause> clauses;
        for (const ProofStep& step : trace.steps) {
            if (clauses.count(step.id)) throw CheckFail{"duplicate step id"};
            for (int p : step.parents)
                if (!clauses.count(p))
                    throw CheckFail{"step " + std::to_string(step.id) +
                                    " references unknown parent " + std::to_string(p)};
            switch (step.kind) {
            case ProofStep::Kind::Input:
                if (!step.parents.empty()) throw CheckFail{"input step with parents"};
                break;
            case ProofStep::Kind::Resolve:
                if (step.parents.size() != 2) throw CheckFail{"resolve step needs 2 parents"};
                check_resolve(step, clauses.at(step.parents[0]), clauses.at(step.parents[1]));
                break;
            case ProofStep::Kind::Simplify:
                if (step.parents.size() != 1) throw CheckFail{"simplify step needs 1 parent"};
                check_simplify(step, clauses.at(step.parents[0]));
                break;
            }
            clauses[step.id] = step.resolvent;
        }
        if (!trace.steps.back().resolvent.empty())
            throw CheckFail{"final step does not yield the empty clause"};
        return true;
    } catch (const CheckFail& f) {
        if (why) *why = f.reason;
        return false;
    }
}

} // namespace logic
} // namespace claimguard
