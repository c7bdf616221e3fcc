#pragma once

#include "claimguard/core.hpp"

#include <string>
#include <vector>

namespace claimguard {

/// Controlled subject–verb-phrase–object grammar. Patterns are matched
/// longest-first, ties broken by lexicon file order.
class ClaimGrammar {
public:
    struct Pattern {
        std::vector<std::string> phrase; // lowercase tokens, e.g. {"was","born","in"}
        EntityId predicate;
        int order = 0; // position in the lexicon file
    };

    /// Adds `verb phrase -> predicate`. Keeps longest-match ordering.
    void add_pattern(const std::string& phrase, const EntityId& predicate);

    const std::vector<Pattern>& patterns() const { return patterns_; }
    const std::vector<std::string>& negation_markers() const { return negation_markers_; }

    /// Canonical phrase for a predicate: the first lexicon entry mapping to it.
    const Pattern* pattern_for(const EntityId& predicate) const;
    bool has_predicate(const EntityId& predicate) const { return pattern_for(predicate) != nullptr; }

    /// Lexicon file: one `verb phrase<TAB>predicate` per line, `#` comments.
    static ClaimGrammar load_file(const std::string& path);
    static ClaimGrammar parse(const std::string& text);

private:
    std::vector<Pattern> patterns_; // sorted: longer phrases first, then file order
    std::vector<std::string> negation_markers_ = {"not", "never"};
};

struct Sentence {
    SourceSpan span;
    std::vector<std::string> tokens; // raw word tokens
};

/// Splits on [.?!] followed by whitespace or end of text.
std::vector<Sentence> split_sentences(const std::string& text);

/// One claim per matched subject–pattern–object sentence; unmatched sentences
/// are skipped (noted in `skipped`), duplicates collapse by claim id.
std::vector<Claim> extract_claims(const std::string& text, const ClaimGrammar& grammar,
                                  std::vector<std::string>* skipped = nullptr);

/// `@claim(subject, predicate, object)` with optional `!` prefix for negation.
/// Throws MalformedDirective with the 1-based line number.
std::vector<Claim> parse_structured_claims(const std::string& text);

bool has_claim_directives(const std::string& text);

/// Directive syntax when present wins over grammar extraction; otherwise the
/// grammar is applied. Single entry point used by the pipeline.
std::vector<Claim> extract_response_claims(const std::string& text, const ClaimGrammar& grammar,
                                           std::vector<std::string>* skipped = nullptr);

/// Renders a claim back to its canonical sentence on the grammar's covered
/// fragment; falls back to directive syntax for predicates without a phrase.
std::string render_claim(const Claim& claim, const ClaimGrammar& grammar);

} // namespace claimguard
