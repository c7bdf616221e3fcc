#include "claimguard/kgraph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <queue>
#include <sstream>

namespace claimguard {

// ---------------------------------------------------------------------------
// KnowledgeBase
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::size_t> kNoEdges;

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t p = 0;
    while (true) {
        std::size_t tab = line.find('\t', p);
        out.push_back(line.substr(p, tab == std::string::npos ? tab : tab - p));
        if (tab == std::string::npos) break;
        p = tab + 1;
    }
    return out;
}

ValueKind parse_kind(const std::string& s, int lineno) {
    if (s == "entity") return ValueKind::Entity;
    if (s == "number") return ValueKind::Number;
    if (s == "time") return ValueKind::Time;
    throw ParseError("unknown range kind: " + s, lineno);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace

void KnowledgeBase::add(Triple t) {
    if (t.confidence < 0.0 || t.confidence > 1.0)
        throw Error("triple confidence out of [0,1]: " + t.key());
    auto range = decls_.ranges.find(t.predicate);
    if (range != decls_.ranges.end() && range->second != t.object.kind)
        throw Error("object kind violates declared range for predicate: " + t.predicate);
    triples_.push_back(std::move(t));
}

void KnowledgeBase::declare_functional(const EntityId& predicate) {
    decls_.functional.insert(predicate);
}

void KnowledgeBase::declare_range(const EntityId& predicate, ValueKind kind) {
    decls_.ranges[predicate] = kind;
}

void KnowledgeBase::finalize() {
    // re-check ranges declared after the triples were added
    for (const Triple& t : triples_) {
        auto range = decls_.ranges.find(t.predicate);
        if (range != decls_.ranges.end() && range->second != t.object.kind)
            throw Error("object kind violates declared range for predicate: " + t.predicate);
    }
    std::sort(triples_.begin(), triples_.end(), [](const Triple& a, const Triple& b) {
        std::string ka = a.key(), kb = b.key();
        if (ka != kb) return ka < kb;
        return a.confidence > b.confidence; // keep max confidence first
    });
    triples_.erase(std::unique(triples_.begin(), triples_.end(),
                               [](const Triple& a, const Triple& b) { return a.same_fact(b); }),
                   triples_.end());
    entities_.clear();
    adjacency_.clear();
    for (std::size_t i = 0; i < triples_.size(); ++i) {
        const Triple& t = triples_[i];
        entities_.insert(t.subject);
        adjacency_[t.subject].push_back(i);
        if (t.object.kind == ValueKind::Entity) {
            entities_.insert(t.object.entity);
            if (t.object.entity != t.subject) adjacency_[t.object.entity].push_back(i);
        }
    }
}

const std::vector<std::size_t>& KnowledgeBase::touching(const EntityId& e) const {
    auto it = adjacency_.find(e);
    return it == adjacency_.end() ? kNoEdges : it->second;
}

KnowledgeBase KnowledgeBase::parse(const std::string& text) {
    KnowledgeBase kb;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.rfind("#!", 0) == 0) {
            std::istringstream d(t.substr(2));
            std::string directive;
            d >> directive;
            if (directive == "functional") {
                std::string pred;
                if (!(d >> pred)) throw ParseError("#!functional needs a predicate", lineno);
                kb.declare_functional(normalize_entity(pred));
            } else if (directive == "range") {
                std::string pred, kind;
                if (!(d >> pred >> kind)) throw ParseError("#!range needs predicate and kind", lineno);
                kb.declare_range(normalize_entity(pred), parse_kind(kind, lineno));
            } else {
                throw ParseError("unknown directive: #!" + directive, lineno);
            }
            continue;
        }
        if (t[0] == '#') continue;
        auto cols = split_tabs(line);
        if (cols.size() != 3 && cols.size() != 4)
            throw ParseError("expected 3 or 4 tab-separated columns", lineno);
        Triple tr;
        try {
            tr.subject = normalize_entity(cols[0]);
            tr.predicate = normalize_entity(cols[1]);
            tr.object = ObjectValue::parse(trim(cols[2]));
        } catch (const NormalizationError& e) {
            throw ParseError(e.what(), lineno);
        }
        if (cols.size() == 4) {
            try {
                tr.confidence = std::stod(cols[3]);
            } catch (const std::exception&) {
                throw ParseError("bad confidence: " + cols[3], lineno);
            }
        }
        try {
            kb.add(std::move(tr));
        } catch (const Error& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    kb.finalize();
    return kb;
}

KnowledgeBase KnowledgeBase::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open KB file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

// ---------------------------------------------------------------------------
// KnowledgeGraph
// ---------------------------------------------------------------------------

void KnowledgeGraph::add_vertex(const EntityId& e) {
    vertices_.insert(e);
}

bool KnowledgeGraph::add_edge(const Triple& t, EdgeProvenance prov) {
    std::string key = t.key();
    if (!edge_keys_.insert(key).second) return false;
    std::size_t idx = edges_.size();
    edges_.push_back({t, prov});
    vertices_.insert(t.subject);
    adjacency_[t.subject].push_back(idx);
    if (t.object.kind == ValueKind::Entity) {
        vertices_.insert(t.object.entity);
        if (t.object.entity != t.subject) adjacency_[t.object.entity].push_back(idx);
    }
    return true;
}

bool KnowledgeGraph::has_fact(const Triple& t) const {
    return edge_keys_.count(t.key()) > 0;
}

const std::vector<std::size_t>& KnowledgeGraph::touching(const EntityId& e) const {
    auto it = adjacency_.find(e);
    return it == adjacency_.end() ? kNoEdges : it->second;
}

std::size_t KnowledgeGraph::count(EdgeProvenance prov) const {
    std::size_t n = 0;
    for (const Edge& e : edges_)
        if (e.provenance == prov) ++n;
    return n;
}

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

void Rule::validate() const {
    if (body.empty()) throw Error("rule body empty: " + text);
    std::set<std::string> body_vars;
    for (const RuleAtom& a : body) {
        if (a.args.size() != 2) throw Error("rule atoms must be binary: " + text);
        for (const RuleAtom::Arg& arg : a.args)
            if (arg.is_var) body_vars.insert(arg.var);
    }
    if (head.args.size() != 2) throw Error("rule atoms must be binary: " + text);
    for (const RuleAtom::Arg& arg : head.args)
        if (arg.is_var && !body_vars.count(arg.var))
            throw Error("rule not range-restricted (head variable " + arg.var +
                        " unbound): " + text);
}

namespace {

RuleAtom parse_atom(const std::string& text, int lineno) {
    auto open = text.find('(');
    auto close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw ParseError("malformed atom: " + text, lineno);
    RuleAtom atom;
    atom.predicate = normalize_entity(trim(text.substr(0, open)));
    std::string args = text.substr(open + 1, close - open - 1);
    std::istringstream in(args);
    std::string piece;
    while (std::getline(in, piece, ',')) {
        piece = trim(piece);
        if (piece.empty()) throw ParseError("empty atom argument: " + text, lineno);
        RuleAtom::Arg arg;
        if (piece[0] == '?') {
            arg.is_var = true;
            arg.var = piece.substr(1);
            if (arg.var.empty()) throw ParseError("bare '?' variable: " + text, lineno);
        } else {
            arg.value = ObjectValue::parse(piece);
        }
        atom.args.push_back(std::move(arg));
    }
    if (atom.args.empty()) throw ParseError("atom has no arguments: " + text, lineno);
    return atom;
}

} // namespace

std::vector<Rule> parse_rules(const std::string& text) {
    std::vector<Rule> rules;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto arrow = t.find("->");
        if (arrow == std::string::npos) throw ParseError("rule missing '->'", lineno);
        Rule r;
        r.text = t;
        r.head = parse_atom(trim(t.substr(arrow + 2)), lineno);
        std::string body = t.substr(0, arrow);
        std::size_t p = 0;
        while (true) {
            std::size_t amp = body.find('&', p);
            std::string piece = trim(body.substr(p, amp == std::string::npos ? amp : amp - p));
            if (!piece.empty()) r.body.push_back(parse_atom(piece, lineno));
            if (amp == std::string::npos) break;
            p = amp + 1;
        }
        try {
            r.validate();
        } catch (const Error& e) {
            throw ParseError(e.what(), lineno);
        }
        rules.push_back(std::move(r));
    }
    return rules;
}

std::vector<Rule> load_rules_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open rules file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_rules(buf.str());
}

// ---------------------------------------------------------------------------
// Query context
// ---------------------------------------------------------------------------

QueryContext make_query_context(const std::string& text, const KnowledgeBase& kb) {
    QueryContext ctx;
    ctx.text = text;
    std::vector<std::string> tokens;
    {
        std::string cur;
        for (unsigned char c : text) {
            if (std::isalnum(c) || c == '_') {
                cur.push_back(static_cast<char>(std::tolower(c)));
            } else if (!cur.empty()) {
                tokens.push_back(cur);
                cur.clear();
            }
        }
        if (!cur.empty()) tokens.push_back(cur);
    }
    std::set<EntityId> found;
    const std::size_t kMaxGram = 4;
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t matched = 0;
        for (std::size_t n = std::min(kMaxGram, tokens.size() - i); n >= 1 && !matched; --n) {
            std::string joined;
            for (std::size_t k = 0; k < n; ++k) {
                if (k) joined.push_back('_');
                joined += tokens[i + k];
            }
            if (kb.is_entity(joined)) {
                found.insert(joined);
                matched = n;
            }
        }
        i += matched ? matched : 1;
    }
    ctx.mentioned_entities.assign(found.begin(), found.end());
    return ctx;
}

// ---------------------------------------------------------------------------
// Graph construction
// ---------------------------------------------------------------------------

std::set<EntityId> collect_entities(const QueryContext& context, const std::vector<Claim>& claims) {
    std::set<EntityId> out(context.mentioned_entities.begin(), context.mentioned_entities.end());
    for (const Claim& c : claims) {
        out.insert(c.triple.subject);
        if (c.triple.object.kind == ValueKind::Entity) out.insert(c.triple.object.entity);
    }
    return out;
}

std::vector<Triple> mine_relations(const std::set<EntityId>& entities, const KnowledgeBase& kb,
                                   int hops) {
    std::set<EntityId> reached = entities;
    for (int h = 0; h < hops; ++h) {
        std::set<EntityId> next = reached;
        for (const EntityId& e : reached) {
            for (std::size_t idx : kb.touching(e)) {
                const Triple& t = kb.triples()[idx];
                next.insert(t.subject);
                if (t.object.kind == ValueKind::Entity) next.insert(t.object.entity);
            }
        }
        if (next.size() == reached.size()) break;
        reached.swap(next);
    }
    std::set<std::size_t> indices;
    for (const EntityId& e : reached)
        for (std::size_t idx : kb.touching(e)) indices.insert(idx);
    std::vector<Triple> out;
    out.reserve(indices.size());
    for (std::size_t idx : indices) out.push_back(kb.triples()[idx]);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Backtracking join of rule body atoms against graph edges.
struct RuleMatcher {
    const KnowledgeGraph& graph;
    const Rule& rule;
    std::map<std::string, ObjectValue> binding;
    // each match records the min confidence over matched body edges
    std::vector<std::pair<Triple, double>> results;

    bool bind_arg(const RuleAtom::Arg& arg, const ObjectValue& v,
                  std::vector<std::string>& bound_here) {
        if (!arg.is_var) return arg.value == v;
        auto it = binding.find(arg.var);
        if (it != binding.end()) return it->second == v;
        binding[arg.var] = v;
        bound_here.push_back(arg.var);
        return true;
    }

    void match(std::size_t atom_idx, double conf) {
        if (atom_idx == rule.body.size()) {
            Triple t;
            const RuleAtom& h = rule.head;
            ObjectValue subj =
                h.args[0].is_var ? binding.at(h.args[0].var) : h.args[0].value;
            if (subj.kind != ValueKind::Entity) return; // subjects are entities
            t.subject = subj.entity;
            t.predicate = h.predicate;
            t.object = h.args[1].is_var ? binding.at(h.args[1].var) : h.args[1].value;
            t.confidence = conf;
            results.emplace_back(std::move(t), conf);
            return;
        }
        const RuleAtom& atom = rule.body[atom_idx];
        for (const Edge& e : graph.edges()) {
            if (e.triple.predicate != atom.predicate) continue;
            if (atom.args.size() != 2) continue;
            std::vector<std::string> bound_here;
            bool ok = bind_arg(atom.args[0], ObjectValue::make_entity(e.triple.subject), bound_here) &&
                      bind_arg(atom.args[1], e.triple.object, bound_here);
            if (ok) match(atom_idx + 1, std::min(conf, e.triple.confidence));
            for (const std::string& v : bound_here) binding.erase(v);
        }
    }
};

} // namespace

KnowledgeGraph apply_rules(KnowledgeGraph graph, const std::vector<Rule>& rules,
                           const ChainingOptions& opts) {
    if (rules.empty()) return graph;
    std::size_t inferred = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Rule& rule : rules) {
            RuleMatcher m{graph, rule, {}, {}};
            m.match(0, 1.0);
            for (auto& [triple, conf] : m.results) {
                (void)conf;
                if (graph.add_edge(triple, EdgeProvenance::Inferred)) {
                    changed = true;
                    if (++inferred > opts.inferred_cap)
                        throw FixpointBudgetExceeded(
                            "inferred edge count exceeded cap of " +
                            std::to_string(opts.inferred_cap));
                }
            }
        }
    }
    return graph;
}

KnowledgeGraph build_graph(const QueryContext& context, const std::vector<Claim>& claims,
                           const KnowledgeBase& kb, const std::vector<Rule>& rules, int hops,
                           const ChainingOptions& opts) {
    std::set<EntityId> seeds = collect_entities(context, claims);
    KnowledgeGraph g;
    g.set_declarations(kb.declarations());
    for (const EntityId& e : seeds) g.add_vertex(e);
    for (const Triple& t : mine_relations(seeds, kb, hops)) g.add_edge(t, EdgeProvenance::Mined);
    return apply_rules(std::move(g), rules, opts);
}

KnowledgeGraph graph_from_facts(const std::vector<Triple>& facts, const Declarations& decls,
                                const std::vector<Rule>& rules, const ChainingOptions& opts) {
    KnowledgeGraph g;
    g.set_declarations(decls);
    std::vector<Triple> sorted = facts;
    std::sort(sorted.begin(), sorted.end());
    for (const Triple& t : sorted) g.add_edge(t, EdgeProvenance::Mined);
    return apply_rules(std::move(g), rules, opts);
}

} // namespace claimguard
