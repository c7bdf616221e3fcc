#pragma once

#include "claimguard/core.hpp"

#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace claimguard {

struct FixpointBudgetExceeded : Error {
    using Error::Error;
};

/// Predicate declarations carried from the KB into graph and prover.
struct Declarations {
    std::set<EntityId> functional;           // at most one object per subject
    std::map<EntityId, ValueKind> ranges;    // declared object kind per predicate
};

/// Immutable after load; shareable across threads.
class KnowledgeBase {
public:
    /// TSV: subject<TAB>predicate<TAB>object[<TAB>confidence], `#` comments,
    /// `#!functional p` and `#!range p {entity|number|time}` directives.
    /// Duplicate (s,p,o) collapse keeping the max confidence.
    static KnowledgeBase load_file(const std::string& path);
    static KnowledgeBase parse(const std::string& text);

    void add(Triple t);
    void declare_functional(const EntityId& predicate);
    void declare_range(const EntityId& predicate, ValueKind kind);
    void finalize(); // sorts, dedups, rebuilds the adjacency index

    const std::vector<Triple>& triples() const { return triples_; }
    const Declarations& declarations() const { return decls_; }
    bool is_entity(const EntityId& id) const { return entities_.count(id) > 0; }
    const std::set<EntityId>& entities() const { return entities_; }

    /// Indices of triples whose subject or entity-object equals `e`.
    const std::vector<std::size_t>& touching(const EntityId& e) const;

private:
    std::vector<Triple> triples_;
    Declarations decls_;
    std::set<EntityId> entities_;
    std::unordered_map<EntityId, std::vector<std::size_t>> adjacency_;
};

enum class EdgeProvenance { Mined, Inferred };

struct Edge {
    Triple triple;
    EdgeProvenance provenance = EdgeProvenance::Mined;
};

/// Query-specific entity/relation graph, closed under the applied rule set.
class KnowledgeGraph {
public:
    void add_vertex(const EntityId& e);
    /// Returns true when the triple was new.
    bool add_edge(const Triple& t, EdgeProvenance prov);
    bool has_fact(const Triple& t) const;

    const std::set<EntityId>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Declarations& declarations() const { return decls_; }
    void set_declarations(Declarations d) { decls_ = std::move(d); }

    /// Edge indices touching an entity (subject or entity object).
    const std::vector<std::size_t>& touching(const EntityId& e) const;

    std::size_t count(EdgeProvenance prov) const;

private:
    std::set<EntityId> vertices_;
    std::vector<Edge> edges_;
    std::unordered_set<std::string> edge_keys_;
    std::unordered_map<EntityId, std::vector<std::size_t>> adjacency_;
    Declarations decls_;
};

/// Range-restricted Horn rule: body atoms imply the head atom. No function
/// symbols, so forward chaining terminates.
struct RuleAtom {
    EntityId predicate;
    // each arg is either a variable name (leading '?') or a ground value
    struct Arg {
        bool is_var = false;
        std::string var;
        ObjectValue value;
    };
    std::vector<Arg> args; // arity 2 for graph rules
};

struct Rule {
    std::vector<RuleAtom> body;
    RuleAtom head;
    std::string text; // original source line, for traces

    void validate() const; // non-empty body, head vars ⊆ body vars
};

/// Rules file: one `atom & atom -> atom` per line, variables prefixed `?`.
std::vector<Rule> parse_rules(const std::string& text);
std::vector<Rule> load_rules_file(const std::string& path);

/// Derives `mentioned_entities` by greedy longest n-gram match (up to 4
/// tokens) against the KB entity vocabulary.
QueryContext make_query_context(const std::string& text, const KnowledgeBase& kb);

/// Union of claim subjects/objects (entity kind only) and context mentions.
std::set<EntityId> collect_entities(const QueryContext& context, const std::vector<Claim>& claims);

/// All KB triples whose subject or object is reachable within `hops` edges of
/// a seed entity; hops=0 returns triples directly touching the seeds.
std::vector<Triple> mine_relations(const std::set<EntityId>& entities, const KnowledgeBase& kb,
                                   int hops);

struct ChainingOptions {
    std::size_t inferred_cap = 100000; // FixpointBudgetExceeded above this
};

/// Forward-chains to fixpoint. Inferred edges carry min body-edge confidence.
KnowledgeGraph apply_rules(KnowledgeGraph graph, const std::vector<Rule>& rules,
                           const ChainingOptions& opts = {});

/// collect_entities → mine_relations → apply_rules.
KnowledgeGraph build_graph(const QueryContext& context, const std::vector<Claim>& claims,
                           const KnowledgeBase& kb, const std::vector<Rule>& rules, int hops,
                           const ChainingOptions& opts = {});

/// Builds a closed graph directly from a knowledge state's facts.
KnowledgeGraph graph_from_facts(const std::vector<Triple>& facts, const Declarations& decls,
                                const std::vector<Rule>& rules, const ChainingOptions& opts = {});

} // namespace claimguard
