#pragma once

#include "claimguard/core.hpp"
#include "claimguard/kgraph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace claimguard {
namespace logic {

// ---------------------------------------------------------------------------
// Terms and literals
// ---------------------------------------------------------------------------

enum class TermKind { Constant, Variable, Number, Timepoint };

struct Term {
    TermKind kind = TermKind::Constant;
    EntityId name;      // Constant / Variable
    double number = 0.0;
    std::string time;

    static Term constant(EntityId id);
    static Term variable(std::string name);
    static Term num(double v);
    static Term timepoint(std::string iso);
    static Term from_object(const ObjectValue& v);

    bool is_var() const { return kind == TermKind::Variable; }
    bool ground() const { return kind != TermKind::Variable; }
    std::string text() const;
    bool operator==(const Term& o) const;
};

/// Interpreted predicates. Evaluated eagerly once both args are ground:
/// lt/leq/eq_num over numbers, before/after/same_time over ISO timepoints,
/// eq_id as constant identity (unique-names assumption).
enum class Builtin { None, Lt, Leq, EqNum, Before, After, SameTime, EqId };

Builtin builtin_from_name(const std::string& name);
std::string builtin_name(Builtin b);

struct Literal {
    EntityId predicate;             // empty when builtin != None
    Builtin builtin = Builtin::None;
    std::vector<Term> args;
    bool negated = false;
    double eq_tolerance = 1e-9;     // used by eq_num only

    bool ground() const;
    bool same_symbol(const Literal& o) const;
    std::string text() const;       // pred(a,b) with ~ for negation
    std::string symbol() const { return builtin == Builtin::None ? predicate : builtin_name(builtin); }
    bool operator==(const Literal& o) const { return text() == o.text(); }
};

/// Comparison builtins (lt, leq, before, after) evaluate only when both args
/// are in their domain and stay symbolic otherwise; equality builtins
/// (eq_num, same_time, eq_id) additionally evaluate cross-kind ground pairs
/// to false. Negation is not applied here.
enum class BuiltinEval { True, False, Symbolic };
BuiltinEval eval_builtin_atom(const Literal& lit);

enum class ClauseOrigin { Fact, RuleClause, Constraint, NegatedGoal, ClaimUnit, Resolvent, Axiom };

struct Clause {
    std::vector<Literal> literals; // disjunction; kept sorted + deduped
    ClauseOrigin origin = ClauseOrigin::Fact;
    std::optional<Triple> source;  // set when origin == Fact / ClaimUnit

    bool empty() const { return literals.empty(); }
    bool unit() const { return literals.size() == 1; }
    void normalize();              // sort + dedup literals
    std::string text() const;      // "lit | lit | lit" or "<empty>"
    /// Variables renamed v0,v1,... in first-occurrence order; dedup key.
    std::string canonical_text() const;
};

Clause make_unit(Literal lit, ClauseOrigin origin, std::optional<Triple> source = std::nullopt);
Clause clause_from_rule(const Rule& rule);

// ---------------------------------------------------------------------------
// Substitutions and unification
// ---------------------------------------------------------------------------

using Substitution = std::vector<std::pair<std::string, Term>>; // var -> term, ordered

std::string substitution_text(const Substitution& s);
Term apply_substitution(const Term& t, const Substitution& s);
Literal apply_substitution(const Literal& l, const Substitution& s);

/// Most general unifier of two literals with the same symbol and arity.
/// Polarity is not inspected here. Failure is a value.
std::optional<Substitution> unify(const Literal& a, const Literal& b);

// ---------------------------------------------------------------------------
// Proof traces
// ---------------------------------------------------------------------------

struct ProofStep {
    enum class Kind { Input, Resolve, Simplify };
    Kind kind = Kind::Input;
    int id = 0;                    // clause id in the trace
    std::vector<int> parents;      // empty for Input, 2 for Resolve, 1 for Simplify
    std::string unifier;           // rendered substitution for Resolve
    Clause resolvent;              // the clause this step yields
    std::string note;              // e.g. evaluated builtin literals
};

struct ProofTrace {
    std::vector<ProofStep> steps;  // topologically ordered; last yields <empty>
    bool premise_inconsistent = false;

    std::vector<std::string> render() const;
};

/// Independent replay of a trace: every Resolve step must be a valid binary
/// resolution under its recorded unifier and every Simplify step must remove
/// exactly the false ground builtins of its parent; the last step must be the
/// empty clause. Implemented without the prover's machinery.
bool check_trace(const ProofTrace& trace, std::string* why = nullptr);

// ---------------------------------------------------------------------------
// Prover
// ---------------------------------------------------------------------------

struct ProverLimits {
    std::size_t max_clauses = 50000;
    int max_depth = 40;
};

enum class ProofOutcome { Proved, Saturated, BudgetExhausted };

struct ProverResult {
    ProofOutcome outcome = ProofOutcome::Saturated;
    std::optional<ProofTrace> trace;          // set when Proved
    std::vector<Triple> participating_facts;  // fact/claim units in the refutation
    std::size_t generated = 0;
};

/// Saturates `premises` and returns a refutation when the empty clause is
/// derivable. Given-clause loop; selection by (literal count, insertion id).
ProverResult refute(const std::vector<Clause>& premises, const ProverLimits& limits = {});

/// Entailment check: refutes premises ∪ {¬goal}.
ProverResult theorem_prove(const std::vector<Clause>& premises, const Literal& goal,
                           const ProverLimits& limits = {});

// ---------------------------------------------------------------------------
// Claim verification (translation, premise selection, contradiction search)
// ---------------------------------------------------------------------------

/// Asserted claim -> positive ground literal predicate(subject, object).
Literal translate_to_fol(const Claim& claim);

/// Axioms always available to the prover: transitivity and orientation for
/// symbolic before/after/same_time, transitivity for `causes`; plus the
/// anti-symmetry constraint schemas. Subject to premise selection like any
/// other rule clause.
std::vector<Clause> shipped_axioms();

/// Premise selection for a goal over a closed graph: (a) unit clauses for
/// edges in the goal's connected neighborhood or sharing its predicate,
/// (b) rule clauses reachable through the selected predicate set,
/// (c) functional-predicate constraint schemas from the declarations.
std::vector<Clause> extract_premises(const KnowledgeGraph& graph, const Literal& goal,
                                     const std::vector<Rule>& rules);

struct Contradiction {
    std::vector<Triple> evidence;
    ProofTrace derivation;
};

struct ContradictionResult {
    std::vector<Contradiction> contradictions;
    bool budget_exhausted = false; // reported conservatively as "none found"
};

/// Refutes premises ∪ {claim literal}; evidence lists the premise units that
/// participate in the refutation.
ContradictionResult find_contradictions(const KnowledgeGraph& graph, const Literal& claim_literal,
                                        const std::vector<Rule>& rules,
                                        const ProverLimits& limits = {});

struct ConsistencyCheck {
    ClaimStatus status = ClaimStatus::Unverifiable;
    std::vector<Triple> evidence;
    std::optional<ProofTrace> proof;
    bool budget_exhausted = false;
};

/// Contradicted iff find_contradictions is non-empty; else supported iff the
/// claim is provable from the graph; else unverifiable. Budget exhaustion
/// never yields "supported".
ConsistencyCheck check_consistent(const Claim& claim, const KnowledgeGraph& graph,
                                  const std::vector<Rule>& rules, const ProverLimits& limits = {});

// ---------------------------------------------------------------------------
// FOL text syntax (debugging + `prove` subcommand)
// ---------------------------------------------------------------------------

/// `pred(arg,...)`, `~` negation, `|` disjunction, `?x` variables.
/// Throws ParseError with a 0-based column in `line` on failure.
Literal parse_literal_text(const std::string& text);
Clause parse_clause_text(const std::string& text);

} // namespace logic
} // namespace claimguard
