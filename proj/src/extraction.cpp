#include "claimguard/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace claimguard {

// ---------------------------------------------------------------------------
// Grammar
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> tokenize_lower(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string strip_token_punct(const std::string& tok) {
    std::string out;
    for (unsigned char c : tok)
        if (std::isalnum(c) || c == '_' || c == '-' || c == '.' || c == ':' || c == '+')
            out.push_back(static_cast<char>(c));
    return out;
}

} // namespace

void ClaimGrammar::add_pattern(const std::string& phrase, const EntityId& predicate) {
    Pattern p;
    p.phrase = tokenize_lower(phrase);
    p.predicate = predicate;
    p.order = static_cast<int>(patterns_.size());
    if (p.phrase.empty()) throw Error("empty verb phrase in lexicon");
    auto longer = [](const Pattern& a, const Pattern& b) {
        if (a.phrase.size() != b.phrase.size()) return a.phrase.size() > b.phrase.size();
        return a.order < b.order;
    };
    patterns_.insert(std::upper_bound(patterns_.begin(), patterns_.end(), p, longer), std::move(p));
}

const ClaimGrammar::Pattern* ClaimGrammar::pattern_for(const EntityId& predicate) const {
    const Pattern* best = nullptr;
    for (const Pattern& p : patterns_)
        if (p.predicate == predicate && (!best || p.order < best->order)) best = &p;
    return best;
}

ClaimGrammar ClaimGrammar::parse(const std::string& text) {
    ClaimGrammar g;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed = line;
        while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
            trimmed.pop_back();
        if (trimmed.empty() || trimmed[0] == '#') continue;
        auto tab = trimmed.find('\t');
        if (tab == std::string::npos)
            throw ParseError("lexicon line missing tab separator", lineno);
        std::string phrase = trimmed.substr(0, tab);
        std::string predicate = trimmed.substr(tab + 1);
        g.add_pattern(phrase, normalize_entity(predicate));
    }
    return g;
}

ClaimGrammar ClaimGrammar::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lexicon file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

// ---------------------------------------------------------------------------
// Sentence splitting: [.?!] followed by whitespace or end. Abbreviations are
// not handled.
// ---------------------------------------------------------------------------

std::vector<Sentence> split_sentences(const std::string& text) {
    std::vector<Sentence> out;
    std::size_t start = 0;
    std::size_t i = 0;
    auto flush = [&](std::size_t end) {
        while (start < end && std::isspace(static_cast<unsigned char>(text[start]))) ++start;
        if (start >= end) {
            start = end;
            return;
        }
        Sentence s;
        s.span = {start, end};
        s.tokens = tokenize_lower(text.substr(start, end - start));
        for (std::string& t : s.tokens) t = strip_token_punct(t);
        s.tokens.erase(std::remove_if(s.tokens.begin(), s.tokens.end(),
                                      [](const std::string& t) { return t.empty(); }),
                       s.tokens.end());
        if (!s.tokens.empty()) out.push_back(std::move(s));
        start = end;
    };
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.' || c == '?' || c == '!') {
            std::size_t j = i;
            while (j + 1 < text.size() &&
                   (text[j + 1] == '.' || text[j + 1] == '?' || text[j + 1] == '!'))
                ++j;
            if (j + 1 >= text.size() || std::isspace(static_cast<unsigned char>(text[j + 1]))) {
                flush(j + 1);
                i = j;
            }
        }
    }
    flush(text.size());
    return out;
}

// ---------------------------------------------------------------------------
// Grammar extraction
// ---------------------------------------------------------------------------

namespace {

std::optional<Claim> match_sentence(const Sentence& s, const ClaimGrammar& grammar) {
    // Negation markers are lifted out before pattern matching.
    std::vector<std::string> toks;
    bool negated = false;
    for (const std::string& t : s.tokens) {
        const auto& markers = grammar.negation_markers();
        if (std::find(markers.begin(), markers.end(), t) != markers.end()) {
            negated = true;
            continue;
        }
        toks.push_back(t);
    }
    for (const ClaimGrammar::Pattern& p : grammar.patterns()) {
        const std::size_t n = p.phrase.size();
        if (toks.size() < n + 2) continue; // need a subject and an object
        for (std::size_t at = 1; at + n < toks.size(); ++at) {
            if (!std::equal(p.phrase.begin(), p.phrase.end(), toks.begin() + at)) continue;
            std::string subject_text;
            for (std::size_t k = 0; k < at; ++k) {
                if (k) subject_text.push_back(' ');
                subject_text += toks[k];
            }
            std::string object_text;
            for (std::size_t k = at + n; k < toks.size(); ++k) {
                if (k > at + n) object_text.push_back(' ');
                object_text += toks[k];
            }
            try {
                Triple t;
                t.subject = normalize_entity(subject_text);
                t.predicate = p.predicate;
                t.object = ObjectValue::parse(object_text);
                return Claim::make(std::move(t),
                                   negated ? Polarity::Negated : Polarity::Asserted, s.span);
            } catch (const NormalizationError&) {
                return std::nullopt;
            }
        }
    }
    return std::nullopt;
}

void push_unique(std::vector<Claim>& claims, Claim c) {
    for (const Claim& existing : claims)
        if (existing.id == c.id) return;
    claims.push_back(std::move(c));
}

} // namespace

std::vector<Claim> extract_claims(const std::string& text, const ClaimGrammar& grammar,
                                  std::vector<std::string>* skipped) {
    std::vector<Claim> claims;
    for (const Sentence& s : split_sentences(text)) {
        if (auto c = match_sentence(s, grammar)) {
            push_unique(claims, std::move(*c));
        } else if (skipped) {
            skipped->push_back(text.substr(s.span.begin, s.span.end - s.span.begin));
        }
    }
    return claims;
}

// ---------------------------------------------------------------------------
// Structured claim directives
// ---------------------------------------------------------------------------

bool has_claim_directives(const std::string& text) {
    return text.find("@claim(") != std::string::npos;
}

std::vector<Claim> parse_structured_claims(const std::string& text) {
    std::vector<Claim> claims;
    std::size_t line_start = 0;
    int lineno = 0;
    while (line_start <= text.size()) {
        std::size_t line_end = text.find('\n', line_start);
        if (line_end == std::string::npos) line_end = text.size();
        ++lineno;
        std::size_t pos = line_start;
        while (true) {
            std::size_t at = text.find("@claim(", pos);
            if (at == std::string::npos || at >= line_end) break;
            bool negated = at > line_start && text[at - 1] == '!';
            std::size_t close = text.find(')', at);
            if (close == std::string::npos || close >= line_end)
                throw MalformedDirective("unterminated @claim directive", lineno);
            std::string args = text.substr(at + 7, close - (at + 7));
            std::vector<std::string> parts;
            std::size_t p = 0;
            while (true) {
                std::size_t comma = args.find(',', p);
                parts.push_back(args.substr(p, comma == std::string::npos ? comma : comma - p));
                if (comma == std::string::npos) break;
                p = comma + 1;
            }
            if (parts.size() != 3)
                throw MalformedDirective("@claim expects 3 arguments, got " +
                                             std::to_string(parts.size()),
                                         lineno);
            for (std::string& part : parts) {
                while (!part.empty() && std::isspace(static_cast<unsigned char>(part.front())))
                    part.erase(part.begin());
                while (!part.empty() && std::isspace(static_cast<unsigned char>(part.back())))
                    part.pop_back();
                if (part.empty()) throw MalformedDirective("empty @claim argument", lineno);
            }
            try {
                Triple t;
                t.subject = normalize_entity(parts[0]);
                t.predicate = normalize_entity(parts[1]);
                t.object = ObjectValue::parse(parts[2]);
                SourceSpan span{negated ? at - 1 : at, close + 1};
                push_unique(claims, Claim::make(std::move(t),
                                                negated ? Polarity::Negated : Polarity::Asserted,
                                                span));
            } catch (const NormalizationError& e) {
                throw MalformedDirective(e.what(), lineno);
            }
            pos = close + 1;
        }
        if (line_end == text.size()) break;
        line_start = line_end + 1;
    }
    return claims;
}

std::vector<Claim> extract_response_claims(const std::string& text, const ClaimGrammar& grammar,
                                           std::vector<std::string>* skipped) {
    if (has_claim_directives(text)) return parse_structured_claims(text);
    return extract_claims(text, grammar, skipped);
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

std::string render_claim(const Claim& claim, const ClaimGrammar& grammar) {
    const ClaimGrammar::Pattern* pat = grammar.pattern_for(claim.triple.predicate);
    std::string object_text = claim.triple.object.kind == ValueKind::Entity
                                  ? entity_surface(claim.triple.object.entity)
                                  : claim.triple.object.canonical();
    if (!pat) {
        std::string out = claim.polarity == Polarity::Negated ? "!@claim(" : "@claim(";
        out += claim.triple.subject;
        out += ", ";
        out += claim.triple.predicate;
        out += ", ";
        out += claim.triple.object.canonical();
        out += ")";
        return out;
    }
    std::string out = entity_surface(claim.triple.subject);
    const auto& phrase = pat->phrase;
    for (std::size_t i = 0; i < phrase.size(); ++i) {
        out.push_back(' ');
        out += phrase[i];
        if (claim.polarity == Polarity::Negated && i == 0 && phrase.size() >= 2) out += " not";
    }
    if (claim.polarity == Polarity::Negated && phrase.size() < 2) {
        // single-token phrase: marker goes in front of it
        auto at = out.rfind(phrase[0]);
        out.insert(at, "not ");
    }
    out.push_back(' ');
    out += object_text;
    out.push_back('.');
    return out;
}

} // namespace claimguard
