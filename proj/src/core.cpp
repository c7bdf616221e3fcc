#include "claimguard/core.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include <json.hpp>

namespace claimguard {

// ---------------------------------------------------------------------------
// Entity normalization
// ---------------------------------------------------------------------------

EntityId normalize_entity(const std::string& surface) {
    std::string out;
    out.reserve(surface.size());
    bool pending_sep = false;
    for (unsigned char c : surface) {
        if (std::isspace(c)) {
            if (!out.empty()) pending_sep = true;
            continue;
        }
        if (std::isalnum(c) || c == '_') {
            if (pending_sep) {
                out.push_back('_');
                pending_sep = false;
            }
            out.push_back(static_cast<char>(std::tolower(c)));
        }
        // other punctuation is stripped
    }
    if (out.empty())
        throw NormalizationError("entity empty after normalization: \"" + surface + "\"");
    return out;
}

std::string entity_surface(const EntityId& id) {
    std::string out;
    bool start = true;
    for (char c : id) {
        if (c == '_') {
            out.push_back(' ');
            start = true;
        } else {
            out.push_back(start ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c);
            start = false;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Object values
// ---------------------------------------------------------------------------

bool looks_like_number(const std::string& token) {
    if (token.empty()) return false;
    const char* begin = token.data();
    const char* end = begin + token.size();
    if (*begin == '+') ++begin; // from_chars rejects a leading '+'
    double v;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    return ec == std::errc() && ptr == end && begin != end;
}

bool looks_like_time(const std::string& token) {
    // YYYY-MM-DD with optional THH:MM[:SS][Z]
    auto digits = [&](std::size_t at, std::size_t n) {
        if (at + n > token.size()) return false;
        for (std::size_t i = 0; i < n; ++i)
            if (!std::isdigit(static_cast<unsigned char>(token[at + i]))) return false;
        return true;
    };
    if (!(digits(0, 4) && token.size() >= 10 && token[4] == '-' && digits(5, 2) &&
          token[7] == '-' && digits(8, 2)))
        return false;
    if (token.size() == 10) return true;
    std::size_t i = 10;
    if (token[i] != 'T') return false;
    if (!(digits(i + 1, 2) && i + 3 < token.size() && token[i + 3] == ':' && digits(i + 4, 2)))
        return false;
    i += 6;
    if (i < token.size() && token[i] == ':') {
        if (!digits(i + 1, 2)) return false;
        i += 3;
    }
    if (i < token.size() && token[i] == 'Z') ++i;
    return i == token.size();
}

ObjectValue ObjectValue::make_entity(EntityId id) {
    ObjectValue v;
    v.kind = ValueKind::Entity;
    v.entity = std::move(id);
    return v;
}

ObjectValue ObjectValue::make_number(double d) {
    ObjectValue v;
    v.kind = ValueKind::Number;
    v.number = d;
    return v;
}

ObjectValue ObjectValue::make_time(std::string iso) {
    ObjectValue v;
    v.kind = ValueKind::Time;
    v.time = std::move(iso);
    return v;
}

ObjectValue ObjectValue::parse(const std::string& token) {
    if (looks_like_number(token)) {
        const char* begin = token.data();
        if (*begin == '+') ++begin;
        double d;
        std::from_chars(begin, token.data() + token.size(), d);
        return make_number(d);
    }
    if (looks_like_time(token)) return make_time(token);
    return make_entity(normalize_entity(token));
}

std::string ObjectValue::canonical() const {
    switch (kind) {
    case ValueKind::Entity: return entity;
    case ValueKind::Number: return format_number(number);
    case ValueKind::Time: return time;
    }
    return {};
}

std::string ObjectValue::tagged() const {
    switch (kind) {
    case ValueKind::Entity: return "e:" + entity;
    case ValueKind::Number: return "n:" + format_number(number);
    case ValueKind::Time: return "t:" + time;
    }
    return {};
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string format_fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Triples and claims
// ---------------------------------------------------------------------------

std::string Triple::key() const {
    std::string k = subject;
    k.push_back('\t');
    k += predicate;
    k.push_back('\t');
    k += object.tagged();
    return k;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string claim_id(const Triple& t, Polarity p) {
    std::string content = t.key();
    content.push_back('\t');
    content += (p == Polarity::Negated ? "neg" : "pos");
    return hex64(fnv1a64(content));
}

Claim Claim::make(Triple t, Polarity p, SourceSpan span) {
    Claim c;
    c.id = claim_id(t, p);
    c.triple = std::move(t);
    c.polarity = p;
    c.span = span;
    return c;
}

// ---------------------------------------------------------------------------
// Knowledge state
// ---------------------------------------------------------------------------

void KnowledgeState::insert(const Triple& t, Provenance prov) {
    auto it = std::lower_bound(facts_.begin(), facts_.end(), t);
    if (it != facts_.end() && it->same_fact(t)) {
        if (t.confidence > it->confidence) it->confidence = t.confidence;
    } else {
        facts_.insert(it, t);
    }
    provenance_[t.key()] = prov;
}

bool KnowledgeState::remove_intervened(const Triple& t) {
    auto it = std::lower_bound(facts_.begin(), facts_.end(), t);
    if (it == facts_.end() || !it->same_fact(t)) return false;
    facts_.erase(it);
    provenance_[t.key()] = Provenance::Intervened;
    return true;
}

bool KnowledgeState::contains(const Triple& t) const {
    auto it = std::lower_bound(facts_.begin(), facts_.end(), t);
    return it != facts_.end() && it->same_fact(t);
}

std::optional<Provenance> KnowledgeState::provenance_of(const Triple& t) const {
    auto it = provenance_.find(t.key());
    if (it == provenance_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

std::string to_string(ClaimStatus s) {
    switch (s) {
    case ClaimStatus::Supported: return "supported";
    case ClaimStatus::Contradicted: return "contradicted";
    case ClaimStatus::Unverifiable: return "unverifiable";
    }
    return {};
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Accept: return "accept";
    case Verdict::Flag: return "flag";
    case Verdict::Reject: return "reject";
    }
    return {};
}

std::string to_string(Polarity p) {
    return p == Polarity::Negated ? "negated" : "asserted";
}

Verdict verdict_from_score(double score, const VerdictThresholds& t) {
    if (score >= t.reject_at) return Verdict::Reject;
    if (score >= t.flag_at) return Verdict::Flag;
    return Verdict::Accept;
}

// ---------------------------------------------------------------------------
// Canonical report document
//
// Hand-rolled writer: key order and number formatting are part of the format,
// so we do not delegate output to a generic dumper. Parsing uses nlohmann.
// ---------------------------------------------------------------------------

namespace {

void write_json_string(std::string& out, const std::string& s) {
    out.push_back('"');
    for (unsigned char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\b': out += "\\b"; break;
        case '\f': out += "\\f"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (c < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out.push_back(static_cast<char>(c));
            }
        }
    }
    out.push_back('"');
}

void write_string_array(std::string& out, const std::vector<std::string>& items) {
    out.push_back('[');
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out.push_back(',');
        write_json_string(out, items[i]);
    }
    out.push_back(']');
}

void write_triple(std::string& out, const Triple& t) {
    out += "{\"confidence\":";
    out += format_fixed6(t.confidence);
    out += ",\"object\":";
    write_json_string(out, t.object.canonical());
    out += ",\"predicate\":";
    write_json_string(out, t.predicate);
    out += ",\"subject\":";
    write_json_string(out, t.subject);
    out.push_back('}');
}

Triple triple_from_json(const nlohmann::json& j) {
    Triple t;
    t.subject = j.at("subject").get<std::string>();
    t.predicate = j.at("predicate").get<std::string>();
    t.object = ObjectValue::parse(j.at("object").get<std::string>());
    t.confidence = j.at("confidence").get<double>();
    return t;
}

ClaimStatus status_from_string(const std::string& s) {
    if (s == "supported") return ClaimStatus::Supported;
    if (s == "contradicted") return ClaimStatus::Contradicted;
    if (s == "unverifiable") return ClaimStatus::Unverifiable;
    throw Error("unknown claim status: " + s);
}

Verdict verdict_from_string(const std::string& s) {
    if (s == "accept") return Verdict::Accept;
    if (s == "flag") return Verdict::Flag;
    if (s == "reject") return Verdict::Reject;
    throw Error("unknown verdict: " + s);
}

double round6(double v) {
    return std::round(v * 1e6) / 1e6;
}

} // namespace

std::string serialize_report(const VerdictReport& r) {
    std::string out;
    out += "{\"claims\":[";
    for (std::size_t i = 0; i < r.per_claim.size(); ++i) {
        const ClaimVerdict& cv = r.per_claim[i];
        if (i) out.push_back(',');
        out += "{\"evidence\":[";
        for (std::size_t e = 0; e < cv.evidence.size(); ++e) {
            if (e) out.push_back(',');
            write_triple(out, cv.evidence[e]);
        }
        out += "],\"id\":";
        write_json_string(out, cv.claim.id);
        out += ",\"object\":";
        write_json_string(out, cv.claim.triple.object.canonical());
        out += ",\"polarity\":";
        write_json_string(out, to_string(cv.claim.polarity));
        out += ",\"predicate\":";
        write_json_string(out, cv.claim.triple.predicate);
        out += ",\"proof\":";
        write_string_array(out, cv.proof);
        out += ",\"status\":";
        write_json_string(out, to_string(cv.status));
        out += ",\"subject\":";
        write_json_string(out, cv.claim.triple.subject);
        out.push_back('}');
    }
    out += "],\"p_causal\":";
    out += format_fixed6(r.p_causal);
    out += ",\"p_symbolic\":";
    out += format_fixed6(r.p_symbolic);
    out += ",\"score\":";
    out += format_fixed6(r.score);
    out += ",\"trace\":";
    write_string_array(out, r.trace);
    out += ",\"uncertainty\":";
    out += format_fixed6(r.uncertainty);
    out += ",\"verdict\":";
    write_json_string(out, to_string(r.verdict));
    out += "}\n";
    return out;
}

VerdictReport parse_report(const std::string& doc) {
    nlohmann::json j = nlohmann::json::parse(doc);
    VerdictReport r;
    r.score = j.at("score").get<double>();
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    r.p_causal = j.at("p_causal").get<double>();
    r.p_symbolic = j.at("p_symbolic").get<double>();
    r.uncertainty = j.at("uncertainty").get<double>();
    for (const auto& line : j.at("trace")) r.trace.push_back(line.get<std::string>());
    for (const auto& jc : j.at("claims")) {
        ClaimVerdict cv;
        Triple t;
        t.subject = jc.at("subject").get<std::string>();
        t.predicate = jc.at("predicate").get<std::string>();
        t.object = ObjectValue::parse(jc.at("object").get<std::string>());
        Polarity p =
            jc.at("polarity").get<std::string>() == "negated" ? Polarity::Negated : Polarity::Asserted;
        cv.claim = Claim::make(std::move(t), p);
        if (cv.claim.id != jc.at("id").get<std::string>())
            throw Error("report claim id does not match claim content");
        cv.status = status_from_string(jc.at("status").get<std::string>());
        for (const auto& je : jc.at("evidence")) cv.evidence.push_back(triple_from_json(je));
        for (const auto& jp : jc.at("proof")) cv.proof.push_back(jp.get<std::string>());
        r.per_claim.push_back(std::move(cv));
    }
    return r;
}

bool reports_equal(const VerdictReport& a, const VerdictReport& b) {
    auto neq = [](double x, double y) { return round6(x) != round6(y); };
    if (neq(a.score, b.score) || a.verdict != b.verdict || neq(a.p_causal, b.p_causal) ||
        neq(a.p_symbolic, b.p_symbolic) || neq(a.uncertainty, b.uncertainty))
        return false;
    if (a.trace != b.trace || a.per_claim.size() != b.per_claim.size()) return false;
    for (std::size_t i = 0; i < a.per_claim.size(); ++i) {
        const ClaimVerdict& x = a.per_claim[i];
        const ClaimVerdict& y = b.per_claim[i];
        if (x.claim.id != y.claim.id || x.status != y.status || x.proof != y.proof) return false;
        if (x.evidence.size() != y.evidence.size()) return false;
        for (std::size_t e = 0; e < x.evidence.size(); ++e) {
            if (!(x.evidence[e] == y.evidence[e])) return false;
            if (neq(x.evidence[e].confidence, y.evidence[e].confidence)) return false;
        }
    }
    return true;
}

} // namespace claimguard
