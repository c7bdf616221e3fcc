#include "claimguard/generator.hpp"

#include <algorithm>

#include <httplib.h>
#include <json.hpp>

namespace claimguard {

// ---------------------------------------------------------------------------
// Mock generator
// ---------------------------------------------------------------------------

Response MockGenerator::generate(const QueryContext& context,
                                 const KnowledgeState& constraints) const {
    std::vector<Triple> facts;
    if (context.mentioned_entities.empty()) {
        facts = constraints.facts();
    } else {
        for (const Triple& t : constraints.facts())
            if (std::binary_search(context.mentioned_entities.begin(),
                                   context.mentioned_entities.end(), t.subject))
                facts.push_back(t);
    }
    std::sort(facts.begin(), facts.end()); // (subject, predicate, object)

    // Sentence rendering only when every predicate has a phrase; otherwise
    // everything goes through directives so re-extraction stays exact.
    bool all_phrased = std::all_of(facts.begin(), facts.end(), [&](const Triple& t) {
        return grammar_.has_predicate(t.predicate);
    });

    Response out;
    for (const Triple& t : facts) {
        Claim c = Claim::make(t, Polarity::Asserted);
        ClaimGrammar empty;
        std::string sentence = render_claim(c, all_phrased ? grammar_ : empty);
        std::size_t begin = out.text.size();
        out.text += sentence;
        c.span = {begin, out.text.size()};
        out.text.push_back(' ');
        bool duplicate = std::any_of(out.claims.begin(), out.claims.end(),
                                     [&](const Claim& e) { return e.id == c.id; });
        if (!duplicate) out.claims.push_back(std::move(c));
    }
    if (!out.text.empty()) out.text.pop_back(); // trailing space
    out.claim_confidences = std::vector<double>(out.claims.size(), 1.0);
    return out;
}

// ---------------------------------------------------------------------------
// Remote generator
// ---------------------------------------------------------------------------

Response RemoteGenerator::generate(const QueryContext& context,
                                   const KnowledgeState& constraints) const {
    nlohmann::json req;
    req["context"] = context.text;
    auto& arr = req["constraints"] = nlohmann::json::array();
    for (const Triple& t : constraints.facts()) {
        nlohmann::json jt;
        jt["subject"] = t.subject;
        jt["predicate"] = t.predicate;
        jt["object"] = t.object.canonical();
        jt["confidence"] = t.confidence;
        arr.push_back(std::move(jt));
    }
    const std::string body = req.dump();

    httplib::Client client(options_.endpoint);
    client.set_connection_timeout(0, options_.timeout_ms * 1000);
    client.set_read_timeout(options_.timeout_ms / 1000, (options_.timeout_ms % 1000) * 1000);

    httplib::Result res;
    for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
        res = client.Post("/generate", body, "application/json");
        if (res) break;
    }
    if (!res)
        throw GeneratorUnavailable("generator endpoint unreachable: " + options_.endpoint);
    if (res->status != 200)
        throw GeneratorUnavailable("generator returned HTTP " + std::to_string(res->status));

    Response out;
    try {
        nlohmann::json j = nlohmann::json::parse(res->body);
        out.text = j.at("text").get<std::string>();
        if (j.contains("claim_confidences")) {
            std::vector<double> confs;
            for (const auto& v : j.at("claim_confidences")) confs.push_back(v.get<double>());
            out.claim_confidences = std::move(confs);
        }
    } catch (const nlohmann::json::exception& e) {
        throw GeneratorUnavailable(std::string("generator protocol violation: ") + e.what());
    }
    out.claims = extract_response_claims(out.text, grammar_);
    if (out.claim_confidences && out.claim_confidences->size() != out.claims.size())
        out.claim_confidences.reset(); // counts disagree: drop rather than misalign
    return out;
}

} // namespace claimguard
