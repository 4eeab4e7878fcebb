#ifndef COSMO_LEXICON_HPP
#define COSMO_LEXICON_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cosmo/core.hpp"

namespace cosmo {

struct UnknownLanguage : Error {
    explicit UnknownLanguage(const std::string& lang)
        : Error("unknown lexicon language: '" + lang + "'"), lang(lang) {}
    std::string lang;
};

struct MissingEntry : Error {
    MissingEntry(const CsmId& id, const std::string& lang)
        : Error("no keyword for " + to_string(id) + " in language '" + lang + "'") {}
};

struct NotAKeyword : Error {
    NotAKeyword(const std::string& word, const std::string& lang)
        : Error("'" + word + "' is not a keyword in language '" + lang + "'"), word(word) {}
    std::string word;
};

struct LexiconFormatError : Error {
    LexiconFormatError(int line, const std::string& what)
        : Error("lexicon csv line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

/// Per-concept row: optional Wikidata item plus keyword and label per language.
struct LexiconEntry {
    std::string wikidata;  // empty when no item is assigned yet
    std::map<std::string, std::string> keyword;
    std::map<std::string, std::string> label;
    bool operator==(const LexiconEntry&) const = default;
};

/// Keyword table for the 14 language concepts, indexed by CSM id.
/// The concept ids are language-neutral; every natural language plugs in
/// through one keyword per concept. The "csm" language is the pivot whose
/// keywords are the CSM ids themselves.
class Lexicon {
public:
    static constexpr int concept_count = 14;

    const LexiconEntry& entry(CsmId id) const;
    LexiconEntry& entry(CsmId id);

    /// Languages with at least one keyword, sorted.
    std::vector<std::string> languages() const;
    bool has_language(const std::string& lang) const;

    /// Throws UnknownLanguage / MissingEntry.
    std::string keyword(CsmId id, const std::string& lang) const;
    std::string label(CsmId id, const std::string& lang) const;

    /// Reverse keyword lookup; consults the spelling-alias table.
    /// Throws UnknownLanguage / NotAKeyword.
    CsmId lookup(const std::string& word, const std::string& lang) const;
    std::optional<CsmId> try_lookup(const std::string& word, const std::string& lang) const;

    /// Languages whose keyword set contains the word, sorted.
    std::vector<std::string> languages_with_keyword(const std::string& word) const;

    bool operator==(const Lexicon&) const = default;

    /// Built-in table covering en, es, eu and the csm pivot.
    static const Lexicon& builtin();

    /// Notation-independent shorthand keywords (TC, IC, SubTC, ...).
    /// Only a subset of concepts has one.
    static std::optional<CsmId> shorthand_lookup(const std::string& word);
    static std::string shorthand_keyword(CsmId id);  // throws MissingEntry
    static const std::vector<std::pair<CsmId, std::string>>& shorthand_table();

private:
    std::array<LexiconEntry, concept_count> entries_;
};

/// csv schema: csm_id,wikidata_item,lang,keyword,label (one row per id+lang).
Lexicon load_lexicon_csv(const std::string& path);
void save_lexicon_csv(const Lexicon& lexicon, const std::string& path);

}  // namespace cosmo

#endif
