#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace claimguard {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NormalizationError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& msg, int line) : Error(msg), line(line) {}
    int line;
};

struct MalformedDirective : ParseError {
    using ParseError::ParseError;
};

struct InputOutOfRange : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Entities and object values
// ---------------------------------------------------------------------------

/// Canonical entity token: lowercase, [a-z0-9_], words joined by underscores.
using EntityId = std::string;

/// Lowercases, strips punctuation, collapses whitespace runs to a single
/// underscore. Idempotent. Throws NormalizationError when nothing survives.
EntityId normalize_entity(const std::string& surface);

/// Title-cased surface form for rendering ("new_york_city" -> "New York City").
std::string entity_surface(const EntityId& id);

enum class ValueKind { Entity, Number, Time };

/// Object position of a triple: an entity, a number, or an ISO-8601 time point.
struct ObjectValue {
    ValueKind kind = ValueKind::Entity;
    EntityId entity;     // kind == Entity
    double number = 0.0; // kind == Number
    std::string time;    // kind == Time, normalized ISO-8601

    static ObjectValue make_entity(EntityId id);
    static ObjectValue make_number(double v);
    static ObjectValue make_time(std::string iso);

    /// Classifies a raw token: number first, then ISO date, else entity.
    static ObjectValue parse(const std::string& token);

    /// Lexical form used for serialization. Parsing the result with parse()
    /// restores an equal value.
    std::string canonical() const;

    /// Kind-tagged form used for hashing and ordering ("e:ulm", "n:1879").
    std::string tagged() const;

    bool operator==(const ObjectValue& o) const { return tagged() == o.tagged(); }
    bool operator<(const ObjectValue& o) const { return tagged() < o.tagged(); }
};

bool looks_like_number(const std::string& token);
bool looks_like_time(const std::string& token);

/// Shortest round-trip decimal form of a double ("1879", "0.5", "1.25e-07").
std::string format_number(double v);

/// Fixed 6-decimal form used by the canonical report document.
std::string format_fixed6(double v);

// ---------------------------------------------------------------------------
// Triples, claims, responses
// ---------------------------------------------------------------------------

struct Triple {
    EntityId subject;
    EntityId predicate;
    ObjectValue object;
    double confidence = 1.0; // in [0,1]

    /// (subject, predicate, object) identity; confidence excluded.
    std::string key() const;
    bool same_fact(const Triple& o) const { return key() == o.key(); }
    bool operator<(const Triple& o) const { return key() < o.key(); }
    bool operator==(const Triple& o) const { return key() == o.key(); }
};

enum class Polarity { Asserted, Negated };

struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0; // half-open, character offsets into the response text
};

struct Claim {
    Triple triple;
    Polarity polarity = Polarity::Asserted;
    SourceSpan span;
    std::string id; // stable content hash, excludes span

    static Claim make(Triple t, Polarity p, SourceSpan span = {});
};

/// Content hash over (subject, predicate, object, polarity). FNV-1a, hex.
std::string claim_id(const Triple& t, Polarity p);

struct QueryContext {
    std::string text;
    std::vector<EntityId> mentioned_entities; // derived, sorted, unique
};

struct Response {
    std::string text;
    std::vector<Claim> claims; // unique by id, text order
    std::optional<std::vector<double>> claim_confidences;
};

// ---------------------------------------------------------------------------
// Knowledge state
// ---------------------------------------------------------------------------

enum class Provenance { Kb, Inferred, Intervened };

/// Weighted fact set targeted by do-interventions. Facts are keyed by
/// (subject, predicate, object); intervened entries are tracked as tombstones
/// in the provenance map and never appear in `facts`.
class KnowledgeState {
public:
    void insert(const Triple& t, Provenance prov);
    /// Removes the fact and records an intervened tombstone for it.
    bool remove_intervened(const Triple& t);

    bool contains(const Triple& t) const;
    const std::vector<Triple>& facts() const { return facts_; }
    std::optional<Provenance> provenance_of(const Triple& t) const;
    std::size_t size() const { return facts_.size(); }
    bool empty() const { return facts_.empty(); }

    bool operator==(const KnowledgeState& o) const { return facts_ == o.facts_; }

private:
    std::vector<Triple> facts_; // kept sorted by key
    std::map<std::string, Provenance> provenance_;
};

// ---------------------------------------------------------------------------
// Verdict report
// ---------------------------------------------------------------------------

enum class ClaimStatus { Supported, Contradicted, Unverifiable };
enum class Verdict { Accept, Flag, Reject };

std::string to_string(ClaimStatus s);
std::string to_string(Verdict v);
std::string to_string(Polarity p);

struct VerdictThresholds {
    double flag_at = 0.35;   // score >= flag_at  -> at least flag
    double reject_at = 0.65; // score >= reject_at -> reject
};

Verdict verdict_from_score(double score, const VerdictThresholds& t);

struct ClaimVerdict {
    Claim claim;
    ClaimStatus status = ClaimStatus::Unverifiable;
    std::vector<Triple> evidence;   // non-empty whenever status == Contradicted
    std::vector<std::string> proof; // rendered refutation/derivation replay
};

/// The pipeline's output artifact. Field set matches the canonical report
/// document exactly, so serialize/parse round-trips.
struct VerdictReport {
    double score = 0.0;
    Verdict verdict = Verdict::Accept;
    double p_causal = 0.0;
    double p_symbolic = 0.0;
    double uncertainty = 0.0;
    std::vector<ClaimVerdict> per_claim;
    std::vector<std::string> trace;
};

/// Canonical report document: JSON text, keys sorted, real-valued scores at
/// fixed 6-decimal precision, byte-deterministic for equal inputs.
std::string serialize_report(const VerdictReport& report);

/// Inverse of serialize_report for documents it produced.
VerdictReport parse_report(const std::string& doc);

/// Structural equality at the canonical precision (numbers compared after
/// rounding to 6 decimals).
bool reports_equal(const VerdictReport& a, const VerdictReport& b);

// ---------------------------------------------------------------------------
// Hashing / misc
// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

} // namespace claimguard
