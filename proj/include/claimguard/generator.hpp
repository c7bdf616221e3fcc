#pragma once

#include "claimguard/core.hpp"
#include "claimguard/extraction.hpp"

#include <memory>
#include <string>

namespace claimguard {

struct GeneratorUnavailable : Error {
    using Error::Error;
};

enum class Reentrancy { Serial, Concurrent };

/// Text-generation boundary: produces a response constrained to a knowledge
/// state. Implementations must be deterministic for fixed inputs and seed.
class Generator {
public:
    virtual ~Generator() = default;
    virtual Response generate(const QueryContext& context,
                              const KnowledgeState& constraints) const = 0;
    virtual Reentrancy reentrancy() const = 0;
};

/// Faithful-by-construction renderer: emits exactly the constraint facts whose
/// subject is mentioned in the context (all facts when there are no mentions),
/// sorted by (subject, predicate, object). Claim confidences are all 1.0.
class MockGenerator : public Generator {
public:
    MockGenerator(ClaimGrammar grammar, std::uint64_t seed = 0)
        : grammar_(std::move(grammar)), seed_(seed) {}

    Response generate(const QueryContext& context,
                      const KnowledgeState& constraints) const override;
    Reentrancy reentrancy() const override { return Reentrancy::Concurrent; }

    std::uint64_t seed() const { return seed_; }
    const ClaimGrammar& grammar() const { return grammar_; }

private:
    ClaimGrammar grammar_;
    std::uint64_t seed_; // reserved for sampling variation; rendering is exact
};

struct RemoteOptions {
    std::string endpoint;   // e.g. http://127.0.0.1:8080
    int timeout_ms = 5000;
    int max_retries = 2;    // connect retries; generation is read-only
    Reentrancy reentrancy = Reentrancy::Serial;
};

/// POST /generate {context, constraints:[{subject,predicate,object,confidence}]}
/// -> {text, claim_confidences}. Claims are re-extracted with the grammar.
class RemoteGenerator : public Generator {
public:
    RemoteGenerator(RemoteOptions options, ClaimGrammar grammar)
        : options_(std::move(options)), grammar_(std::move(grammar)) {}

    Response generate(const QueryContext& context,
                      const KnowledgeState& constraints) const override;
    Reentrancy reentrancy() const override { return options_.reentrancy; }

private:
    RemoteOptions options_;
    ClaimGrammar grammar_;
};

} // namespace claimguard
