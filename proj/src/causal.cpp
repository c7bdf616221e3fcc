#include "claimguard/causal.hpp"
#include "claimguard/rng.hpp"

#include <algorithm>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace claimguard {

void ScmConfig::validate() const {
    if (hops < 0) throw Error("scm hops must be >= 0");
    if (n_draws < 1) throw Error("scm n_draws must be >= 1");
    for (const auto& [name, rate] : confounders) {
        if (!known_confounder(name)) throw Error("unknown confounder: " + name);
        if (rate < 0.0 || rate > 1.0) throw Error("confounder rate out of [0,1]: " + name);
    }
}

// ---------------------------------------------------------------------------
// Interventions
// ---------------------------------------------------------------------------

KnowledgeState apply_intervention(KnowledgeState state, const Intervention& iv) {
    switch (iv.kind) {
    case Intervention::Kind::RemoveFact:
        state.remove_intervened(iv.target);
        break;
    case Intervention::Kind::ReplaceObject: {
        if (!iv.replacement) throw InvalidIntervention("replace_object needs a replacement");
        if (iv.replacement->subject != iv.target.subject ||
            iv.replacement->predicate != iv.target.predicate)
            throw InvalidIntervention("replacement must keep subject and predicate");
        state.remove_intervened(iv.target);
        state.insert(*iv.replacement, Provenance::Intervened);
        break;
    }
    case Intervention::Kind::InjectFact:
        state.insert(iv.target, Provenance::Intervened);
        break;
    }
    return state;
}

KnowledgeState estimate_knowledge_state(const QueryContext& context,
                                        const std::vector<Claim>& claims, const KnowledgeBase& kb,
                                        int hops) {
    KnowledgeState state;
    std::set<EntityId> seeds = collect_entities(context, claims);
    for (const Triple& t : mine_relations(seeds, kb, hops)) state.insert(t, Provenance::Kb);
    return state;
}

KnowledgeState generate_counterfactual(const KnowledgeState& k, const Claim& claim) {
    KnowledgeState out = k;
    std::vector<Triple> matching;
    for (const Triple& t : out.facts())
        if (t.subject == claim.triple.subject && t.predicate == claim.triple.predicate)
            matching.push_back(t);
    for (const Triple& t : matching) out.remove_intervened(t);
    return out;
}

Response generate_alternative(const QueryContext& context, const KnowledgeState& k_prime,
                              const Generator& generator) {
    return generator.generate(context, k_prime);
}

// ---------------------------------------------------------------------------
// Consistency and the detection loop
// ---------------------------------------------------------------------------

double check_consistency(const Response& y, const Response& y_prime) {
    std::set<std::string> a, b;
    for (const Claim& c : y.claims) a.insert(c.id);
    for (const Claim& c : y_prime.claims) b.insert(c.id);
    if (a.empty() && b.empty()) return 1.0;
    std::size_t shared = 0;
    for (const std::string& id : a) shared += b.count(id);
    std::size_t unioned = a.size() + b.size() - shared;
    return static_cast<double>(shared) / static_cast<double>(unioned);
}

double p_causal_from_consistencies(const std::vector<double>& consistencies) {
    if (consistencies.empty()) return 0.0;
    double sum = 0.0;
    for (double c : consistencies) sum += 1.0 - c;
    return sum / static_cast<double>(consistencies.size());
}

CausalDetection causal_detect(const QueryContext& context, const Response& response,
                              const KnowledgeBase& kb, const Generator& generator, int hops,
                              bool parallel) {
    CausalDetection out;
    if (response.claims.empty()) {
        out.trace.push_back("causal: no claims extracted, p_causal=0");
        return out;
    }
    KnowledgeState k = estimate_knowledge_state(context, response.claims, kb, hops);
    const std::size_t n = response.claims.size();
    out.consistencies.assign(n, 0.0);

    bool serialize_generator = generator.reentrancy() == Reentrancy::Serial;
    auto one = [&](std::size_t i) {
        KnowledgeState k_prime = generate_counterfactual(k, response.claims[i]);
        Response y_prime = generate_alternative(context, k_prime, generator);
        out.consistencies[i] = check_consistency(response, y_prime);
    };

    if (parallel && !serialize_generator) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < static_cast<long>(n); ++i) one(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) one(i);
    }

    out.p_causal = p_causal_from_consistencies(out.consistencies);
    for (std::size_t i = 0; i < n; ++i)
        out.trace.push_back("causal: claim " + response.claims[i].id +
                            " consistency=" + format_fixed6(out.consistencies[i]));
    return out;
}

// ---------------------------------------------------------------------------
// Causal effect
// ---------------------------------------------------------------------------

bool known_confounder(const std::string& name) {
    return name == "drop_rare_facts";
}

KnowledgeState apply_confounder(const std::string& name, KnowledgeState state) {
    if (name == "drop_rare_facts") {
        std::vector<Triple> rare;
        for (const Triple& t : state.facts())
            if (t.confidence < 0.5) rare.push_back(t);
        for (const Triple& t : rare) state.remove_intervened(t);
        return state;
    }
    throw Error("unknown confounder: " + name);
}

int hallucination_indicator(const KnowledgeState& state, const Claim& claim,
                            const std::vector<Rule>& rules, const Declarations& decls,
                            const logic::ProverLimits& limits) {
    KnowledgeGraph g = graph_from_facts(state.facts(), decls, rules);
    logic::ConsistencyCheck check = logic::check_consistent(claim, g, rules, limits);
    return check.status == ClaimStatus::Supported ? 0 : 1;
}

namespace {

double estimate_h_probability(const KnowledgeState& state, const Claim& claim,
                              const ScmConfig& scm, const std::vector<Rule>& rules,
                              const Declarations& decls, const logic::ProverLimits& limits) {
    double total = 0.0;
    for (int draw = 0; draw < scm.n_draws; ++draw) {
        Rng rng(mix_seed(scm.seed_h, static_cast<std::uint64_t>(draw)));
        KnowledgeState biased = state;
        for (const auto& [name, rate] : scm.confounders) // std::map: name order
            if (rng.bernoulli(rate)) biased = apply_confounder(name, std::move(biased));
        total += hallucination_indicator(biased, claim, rules, decls, limits);
    }
    return total / static_cast<double>(scm.n_draws);
}

} // namespace

double estimate_causal_effect(const KnowledgeState& k, const KnowledgeState& k0,
                              const ScmConfig& scm, const Claim& claim,
                              const std::vector<Rule>& rules, const Declarations& decls,
                              const logic::ProverLimits& limits) {
    scm.validate();
    double p_k = estimate_h_probability(k, claim, scm, rules, decls, limits);
    double p_k0 = estimate_h_probability(k0, claim, scm, rules, decls, limits);
    return p_k - p_k0;
}

} // namespace claimguard
