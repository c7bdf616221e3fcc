#pragma once

#include "claimguard/core.hpp"
#include "claimguard/generator.hpp"
#include "claimguard/kgraph.hpp"
#include "claimguard/logic.hpp"

#include <map>
#include <string>
#include <vector>

namespace claimguard {

struct InvalidIntervention : Error {
    using Error::Error;
};

/// Structural-causal-model configuration: estimator scope, noise seeds, and
/// the registry of synthetic-experiment bias switches.
struct ScmConfig {
    int hops = 2;                        // knowledge-state estimator radius
    std::uint64_t seed_k = 0;            // U_K
    std::uint64_t seed_y = 0;            // U_Y
    std::uint64_t seed_h = 0;            // U_H
    int n_draws = 1;                     // noise draws per probability estimate
    std::map<std::string, double> confounders; // name -> rate in [0,1]

    void validate() const;
};

struct Intervention {
    enum class Kind { RemoveFact, ReplaceObject, InjectFact };
    Kind kind = Kind::RemoveFact;
    Triple target;
    std::optional<Triple> replacement; // ReplaceObject: same subject/predicate
};

KnowledgeState apply_intervention(KnowledgeState state, const Intervention& iv);

/// Knowledge-state estimation: facts mined around the query entities, all
/// with kb provenance. Symbolic stand-in for the encoder form of f_K.
KnowledgeState estimate_knowledge_state(const QueryContext& context,
                                        const std::vector<Claim>& claims, const KnowledgeBase& kb,
                                        int hops);

/// do-intervention severing the claim's causal support: every fact sharing
/// (subject, predicate) with the claim is removed and tombstoned.
KnowledgeState generate_counterfactual(const KnowledgeState& k, const Claim& claim);

/// Y' = f_Y(X, K', U_Y).
Response generate_alternative(const QueryContext& context, const KnowledgeState& k_prime,
                              const Generator& generator);

/// Jaccard similarity of the two claim-id sets; both empty -> 1.0.
double check_consistency(const Response& y, const Response& y_prime);

/// The aggregation step: sum(1 - consistency) / count; empty -> 0.
double p_causal_from_consistencies(const std::vector<double>& consistencies);

struct CausalDetection {
    double p_causal = 0.0;
    std::vector<double> consistencies; // one per claim, response order
    std::vector<std::string> trace;
};

/// Per-claim counterfactual loop: counterfactual state, alternative response,
/// consistency against the original. Claims are independent; `parallel`
/// selects the OpenMP kernel, the serial path is the reference.
CausalDetection causal_detect(const QueryContext& context, const Response& response,
                              const KnowledgeBase& kb, const Generator& generator, int hops,
                              bool parallel = false);

/// Hallucination indicator: 1 when the claim is contradicted or unverifiable
/// against a graph built from the state's facts.
int hallucination_indicator(const KnowledgeState& state, const Claim& claim,
                            const std::vector<Rule>& rules, const Declarations& decls,
                            const logic::ProverLimits& limits = {});

/// CE = P(H=1|do(K=k)) - P(H=1|do(K=k0)), estimated under n seeded noise
/// draws of the confounder switches. Both probabilities share the same draw
/// sequence, so CE(k,k) = 0 exactly and CE is antisymmetric.
double estimate_causal_effect(const KnowledgeState& k, const KnowledgeState& k0,
                              const ScmConfig& scm, const Claim& claim,
                              const std::vector<Rule>& rules, const Declarations& decls,
                              const logic::ProverLimits& limits = {});

/// The registered confounder transformations, applied by name when a seeded
/// Bernoulli(rate) draw fires. "drop_rare_facts" removes facts with
/// confidence < 0.5.
KnowledgeState apply_confounder(const std::string& name, KnowledgeState state);
bool known_confounder(const std::string& name);

} // namespace claimguard
