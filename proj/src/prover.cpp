#include "claimguard/logic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace claimguard {
namespace logic {

namespace {

struct StoredClause {
    Clause clause;
    int id = 0;
    int depth = 0;
    std::vector<int> parents;
    std::string unifier;
    std::string note;
    bool from_goal = false; // descends from the negated goal / claim unit
    ProofStep::Kind kind = ProofStep::Kind::Input;
};

// Saturation state. A session owns its clause sets; sessions are independent.
struct Saturation {
    const ProverLimits& limits;
    std::vector<StoredClause> store;
    std::unordered_set<std::string> seen; // canonical clause texts
    // passive queue ordered by (literal count, id): unit preference, then age
    std::set<std::pair<std::size_t, int>> passive;
    std::vector<int> active;
    bool clipped = false; // some clause was discarded by a budget
    int empty_id = -1;

    explicit Saturation(const ProverLimits& l) : limits(l) {}

    // Simplifies ground builtins. Returns false when the clause is satisfied
    // (a literal evaluates true) and should be dropped entirely.
    static bool simplify_builtins(Clause& c, std::string& note) {
        std::vector<Literal> kept;
        std::vector<std::string> removed;
        for (const Literal& l : c.literals) {
            BuiltinEval ev = eval_builtin_atom(l);
            if (ev == BuiltinEval::Symbolic) {
                kept.push_back(l);
                continue;
            }
            bool truth = (ev == BuiltinEval::True) != l.negated;
            if (truth) return false; // clause satisfied
            removed.push_back(l.text());
        }
        if (!removed.empty()) {
            note = "evaluated false: ";
            for (std::size_t i = 0; i < removed.size(); ++i) {
                if (i) note += ", ";
                note += removed[i];
            }
        }
        c.literals = std::move(kept);
        return true;
    }

    static bool tautology(const Clause& c) {
        for (std::size_t i = 0; i < c.literals.size(); ++i)
            for (std::size_t j = i + 1; j < c.literals.size(); ++j) {
                const Literal& a = c.literals[i];
                const Literal& b = c.literals[j];
                if (a.negated != b.negated && a.same_symbol(b)) {
                    Literal pa = a;
                    pa.negated = false;
                    Literal pb = b;
                    pb.negated = false;
                    if (pa == pb) return true;
                }
            }
        return false;
    }

    // Adds a clause after normalization + builtin simplification. A clause
    // that needed simplification is stored twice: the raw resolvent and the
    // Simplify step, so traces replay literally.
    void add(Clause c, ProofStep::Kind kind, std::vector<int> parents, std::string unifier,
             bool from_goal) {
        if (empty_id >= 0) return;
        if (store.size() >= limits.max_clauses) {
            clipped = true;
            return;
        }
        int depth = 0;
        for (int p : parents) depth = std::max(depth, store[p].depth);
        if (kind != ProofStep::Kind::Input) ++depth;
        if (depth > limits.max_depth) {
            clipped = true;
            return;
        }
        c.normalize();
        if (tautology(c)) return;

        Clause simplified = c;
        std::string note;
        if (!simplify_builtins(simplified, note)) return; // satisfied
        simplified.normalize();

        bool needs_simplify_step = simplified.literals.size() != c.literals.size();
        const Clause& final_clause = needs_simplify_step ? simplified : c;
        std::string key = final_clause.canonical_text();
        if (!seen.insert(key).second) return;

        if (needs_simplify_step) {
            // raw clause first (not enqueued), then the simplified one
            StoredClause raw;
            raw.clause = std::move(c);
            raw.id = static_cast<int>(store.size());
            raw.depth = depth;
            raw.parents = std::move(parents);
            raw.unifier = std::move(unifier);
            raw.from_goal = from_goal;
            raw.kind = kind;
            int raw_id = raw.id;
            store.push_back(std::move(raw));

            StoredClause fin;
            fin.clause = std::move(simplified);
            fin.id = static_cast<int>(store.size());
            fin.depth = depth;
            fin.parents = {raw_id};
            fin.note = std::move(note);
            fin.from_goal = from_goal;
            fin.kind = ProofStep::Kind::Simplify;
            int fin_id = fin.id;
            bool is_empty = fin.clause.empty();
            store.push_back(std::move(fin));
            if (is_empty)
                empty_id = fin_id;
            else
                passive.insert({store[fin_id].clause.literals.size(), fin_id});
        } else {
            StoredClause sc;
            sc.clause = std::move(c);
            sc.id = static_cast<int>(store.size());
            sc.depth = depth;
            sc.parents = std::move(parents);
            sc.unifier = std::move(unifier);
            sc.from_goal = from_goal;
            sc.kind = kind;
            int id = sc.id;
            bool is_empty = sc.clause.empty();
            store.push_back(std::move(sc));
            if (is_empty)
                empty_id = id;
            else
                passive.insert({store[id].clause.literals.size(), id});
        }
    }

    // All binary resolvents of the given clause against one active clause.
    // Convention shared with the trace checker: the first parent's variables
    // are renamed apart by appending a prime.
    void resolve_pair(int given_id, int active_id) {
        Clause given = store[given_id].clause;
        for (Literal& l : given.literals)
            for (Term& t : l.args)
                if (t.is_var()) t.name += "'";
        const Clause& other = store[active_id].clause;
        for (std::size_t i = 0; i < given.literals.size(); ++i) {
            for (std::size_t j = 0; j < other.literals.size(); ++j) {
                const Literal& a = given.literals[i];
                const Literal& b = other.literals[j];
                if (a.negated == b.negated || !a.same_symbol(b)) continue;
                auto mgu = unify(a, b);
                if (!mgu) continue;
                Clause resolvent;
                resolvent.origin = ClauseOrigin::Resolvent;
                for (std::size_t k = 0; k < given.literals.size(); ++k)
                    if (k != i) resolvent.literals.push_back(apply_substitution(given.literals[k], *mgu));
                for (std::size_t k = 0; k < other.literals.size(); ++k)
                    if (k != j) resolvent.literals.push_back(apply_substitution(other.literals[k], *mgu));
                bool from_goal = store[given_id].from_goal || store[active_id].from_goal;
                add(std::move(resolvent), ProofStep::Kind::Resolve, {given_id, active_id},
                    substitution_text(*mgu), from_goal);
                if (empty_id >= 0) return;
            }
        }
    }

    ProverResult run(const std::vector<Clause>& inputs) {
        for (const Clause& c : inputs) {
            bool from_goal =
                c.origin == ClauseOrigin::NegatedGoal || c.origin == ClauseOrigin::ClaimUnit;
            Clause copy = c;
            add(std::move(copy), ProofStep::Kind::Input, {}, {}, from_goal);
        }
        while (empty_id < 0 && !passive.empty()) {
            if (store.size() >= limits.max_clauses) {
                clipped = true;
                break;
            }
            auto it = passive.begin();
            int given = it->second;
            passive.erase(it);
            for (int act : active) {
                resolve_pair(given, act);
                if (empty_id >= 0) break;
            }
            // self-resolution matters for clauses like symmetry axioms
            if (empty_id < 0) resolve_pair(given, given);
            active.push_back(given);
        }

        ProverResult result;
        result.generated = store.size();
        if (empty_id >= 0) {
            result.outcome = ProofOutcome::Proved;
            result.trace = build_trace(empty_id);
            result.trace->premise_inconsistent = !store[empty_id].from_goal;
            collect_facts(empty_id, result.participating_facts);
        } else {
            result.outcome = clipped ? ProofOutcome::BudgetExhausted : ProofOutcome::Saturated;
        }
        return result;
    }

    ProofTrace build_trace(int goal_id) const {
        // ancestors of the empty clause, topologically ordered by id
        std::set<int> needed;
        std::vector<int> stack{goal_id};
        while (!stack.empty()) {
            int id = stack.back();
            stack.pop_back();
            if (!needed.insert(id).second) continue;
            for (int p : store[id].parents) stack.push_back(p);
        }
        ProofTrace trace;
        std::map<int, int> renumber;
        for (int id : needed) renumber[id] = static_cast<int>(renumber.size());
        for (int id : needed) {
            const StoredClause& sc = store[id];
            ProofStep step;
            step.kind = sc.kind;
            step.id = renumber[id];
            for (int p : sc.parents) step.parents.push_back(renumber[p]);
            step.unifier = sc.unifier;
            step.resolvent = sc.clause;
            step.note = sc.note;
            trace.steps.push_back(std::move(step));
        }
        return trace;
    }

    void collect_facts(int goal_id, std::vector<Triple>& out) const {
        std::set<int> needed;
        std::vector<int> stack{goal_id};
        while (!stack.empty()) {
            int id = stack.back();
            stack.pop_back();
            if (!needed.insert(id).second) continue;
            for (int p : store[id].parents) stack.push_back(p);
        }
        std::set<std::string> seen_keys;
        for (int id : needed) {
            const StoredClause& sc = store[id];
            if (sc.kind != ProofStep::Kind::Input || !sc.clause.source) continue;
            if ((sc.clause.origin == ClauseOrigin::Fact ||
                 sc.clause.origin == ClauseOrigin::ClaimUnit) &&
                seen_keys.insert(sc.clause.source->key()).second)
                out.push_back(*sc.clause.source);
        }
        std::sort(out.begin(), out.end());
    }
};

} // namespace

std::vector<std::string> ProofTrace::render() const {
    std::vector<std::string> out;
    for (const ProofStep& s : steps) {
        std::string line = "[" + std::to_string(s.id) + "] ";
        switch (s.kind) {
        case ProofStep::Kind::Input: line += "input: "; break;
        case ProofStep::Kind::Resolve:
            line += "resolve(" + std::to_string(s.parents[0]) + "," +
                    std::to_string(s.parents[1]) + ") " + s.unifier + ": ";
            break;
        case ProofStep::Kind::Simplify:
            line += "simplify(" + std::to_string(s.parents[0]) + ")";
            if (!s.note.empty()) line += " [" + s.note + "]";
            line += ": ";
            break;
        }
        line += s.resolvent.text();
        out.push_back(std::move(line));
    }
    return out;
}

ProverResult refute(const std::vector<Clause>& premises, const ProverLimits& limits) {
    Saturation s(limits);
    return s.run(premises);
}

ProverResult theorem_prove(const std::vector<Clause>& premises, const Literal& goal,
                           const ProverLimits& limits) {
    std::vector<Clause> inputs = premises;
    Literal negated = goal;
    negated.negated = !negated.negated;
    inputs.push_back(make_unit(std::move(negated), ClauseOrigin::NegatedGoal));
    return refute(inputs, limits);
}

// ---------------------------------------------------------------------------
// Claim verification entry points
// ---------------------------------------------------------------------------

ContradictionResult find_contradictions(const KnowledgeGraph& graph, const Literal& claim_literal,
                                        const std::vector<Rule>& rules,
                                        const ProverLimits& limits) {
    std::vector<Clause> premises = extract_premises(graph, claim_literal, rules);
    premises.push_back(make_unit(claim_literal, ClauseOrigin::ClaimUnit));
    ProverResult r = refute(premises, limits);
    ContradictionResult out;
    if (r.outcome == ProofOutcome::Proved) {
        Contradiction c;
        c.derivation = *r.trace;
        for (const Triple& t : r.participating_facts) c.evidence.push_back(t);
        out.contradictions.push_back(std::move(c));
    } else if (r.outcome == ProofOutcome::BudgetExhausted) {
        out.budget_exhausted = true; // reported as "no contradiction found"
    }
    return out;
}

ConsistencyCheck check_consistent(const Claim& claim, const KnowledgeGraph& graph,
                                  const std::vector<Rule>& rules, const ProverLimits& limits) {
    ConsistencyCheck out;
    Literal lit = translate_to_fol(claim);

    ContradictionResult contra = find_contradictions(graph, lit, rules, limits);
    out.budget_exhausted = contra.budget_exhausted;
    if (!contra.contradictions.empty()) {
        out.status = ClaimStatus::Contradicted;
        Contradiction& c = contra.contradictions.front();
        // evidence excludes the claim itself unless the refutation used
        // nothing else (self-contradictory under the axioms alone)
        for (const Triple& t : c.evidence)
            if (!(t == claim.triple)) out.evidence.push_back(t);
        if (out.evidence.empty()) out.evidence.push_back(claim.triple);
        out.proof = std::move(c.derivation);
        return out;
    }

    std::vector<Clause> premises = extract_premises(graph, lit, rules);
    ProverResult support = theorem_prove(premises, lit, limits);
    if (support.outcome == ProofOutcome::Proved && !support.trace->premise_inconsistent) {
        out.status = ClaimStatus::Supported;
        out.evidence = support.participating_facts;
        out.proof = std::move(*support.trace);
        return out;
    }
    if (support.outcome == ProofOutcome::BudgetExhausted) out.budget_exhausted = true;
    out.status = ClaimStatus::Unverifiable;
    return out;
}

} // namespace logic
} // namespace claimguard
