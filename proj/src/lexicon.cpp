#include "cosmo/lexicon.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace cosmo {

namespace {

struct BuiltinRow {
    int csm;
    const char* wikidata;
    const char* en_kw;
    const char* en_label;
    const char* es_kw;
    const char* es_label;
    const char* eu_kw;
    const char* eu_label;
};

// Keywords are the camel-cased labels; where published listings and the
// vocabulary table disagree on a spelling, the listing form wins and the
// other spelling is carried as an alias below.
const BuiltinRow kBuiltinRows[] = {
    {1, "Q35120", "Object", "Object", "Entidad", "Entidad", "Izaki", "Izaki"},
    {2, "", "ObjectType", "Object type", "TipoDeEntidad", "Tipo de entidad", "IzakiMota",
     "izaki mota"},
    {3, "Q18616576", "Property", "Property", "Propiedad", "Propiedad", "Propietatea",
     "propietatea"},
    {4, "Q117747915", "Role", "Role", "Rol", "Rol", "Rol", "Rol"},
    {5, "Q11348", "Function", "Function", "Funcion", "Función", "Funtzio", "Funtzio"},
    {6, "Q1049476", "InstanceConstructor", "Instance Constructor", "ConstructorDeInstancia",
     "Constructor de instancia", "InstantziaEraikitzaile", "instantzia eraikitzaile"},
    {7, "", "TypeConstructor", "Type constructor", "ConstructorDeTipo", "Constructor de tipo",
     "TipoEraikitzaile", "tipo eraikitzaile"},
    {8, "", "SubConstructorOf", "Subconstructor of", "SubConstructorDe", "Subconstructor de",
     "HonakoBerreraikitzaile", "honako berreraikitzaile"},
    {9, "P31", "InstanceOf", "InstanceOf", "InstanciaDe", "Instancia de", "HonakoHauDa",
     "honako hau da"},
    {10, "P527", "PartOf", "Part of", "ParteDe", "Parte de", "Osatuta", "Osatuta"},
    {11, "Q17853087", "Join", "Join", "Unión", "Unión", "Bildura", "bildura"},
    {12, "Q29557567", "IsMandatory", "IsMandatory", "EsObligatorio", "Es obligatorio",
     "Nahitaezko", "nahitaezko"},
    {13, "Q82799", "Name", "Name", "Nombre", "Nombre", "Izen", "Izen"},
    {14, "Q42750658", "ValueConstraint", "Value constraint", "RestricciónDeValor",
     "Restricción de valor", "BalioMurrizte", "balio murrizte"},
};

// Spellings found in circulating model text that map onto a canonical keyword.
struct AliasRow {
    const char* lang;
    const char* word;
    int csm;
};
const AliasRow kAliases[] = {
    {"es", "Propriedad", 3},
    {"es", "TipoDeEntitdad", 2},
    {"es", "Función", 5},
};

Lexicon make_builtin() {
    Lexicon lex;
    for (const auto& row : kBuiltinRows) {
        auto& e = lex.entry(CsmId{row.csm});
        e.wikidata = row.wikidata;
        std::string id = to_string(CsmId{row.csm});
        e.keyword = {{"en", row.en_kw}, {"es", row.es_kw}, {"eu", row.eu_kw}, {"csm", id}};
        e.label = {{"en", row.en_label}, {"es", row.es_label}, {"eu", row.eu_label}, {"csm", id}};
    }
    return lex;
}

void check_csm_range(CsmId id) {
    if (id.number < 1 || id.number > Lexicon::concept_count)
        throw CsmOutOfRange(to_string(id));
}

// Minimal csv: quotes a field only when it needs them.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line, int lineno) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw LexiconFormatError(lineno, "unterminated quote");
    fields.push_back(cur);
    return fields;
}

}  // namespace

const LexiconEntry& Lexicon::entry(CsmId id) const {
    check_csm_range(id);
    return entries_[static_cast<std::size_t>(id.number - 1)];
}

LexiconEntry& Lexicon::entry(CsmId id) {
    check_csm_range(id);
    return entries_[static_cast<std::size_t>(id.number - 1)];
}

std::vector<std::string> Lexicon::languages() const {
    std::set<std::string> langs;
    for (const auto& e : entries_)
        for (const auto& [lang, kw] : e.keyword) langs.insert(lang);
    return {langs.begin(), langs.end()};
}

bool Lexicon::has_language(const std::string& lang) const {
    for (const auto& e : entries_)
        if (e.keyword.count(lang)) return true;
    return false;
}

std::string Lexicon::keyword(CsmId id, const std::string& lang) const {
    if (!has_language(lang)) throw UnknownLanguage(lang);
    const auto& kw = entry(id).keyword;
    auto it = kw.find(lang);
    if (it == kw.end()) throw MissingEntry(id, lang);
    return it->second;
}

std::string Lexicon::label(CsmId id, const std::string& lang) const {
    if (!has_language(lang)) throw UnknownLanguage(lang);
    const auto& lb = entry(id).label;
    auto it = lb.find(lang);
    if (it == lb.end()) throw MissingEntry(id, lang);
    return it->second;
}

std::optional<CsmId> Lexicon::try_lookup(const std::string& word, const std::string& lang) const {
    for (int n = 1; n <= concept_count; ++n) {
        const auto& kw = entries_[static_cast<std::size_t>(n - 1)].keyword;
        auto it = kw.find(lang);
        if (it != kw.end() && it->second == word) return CsmId{n};
    }
    for (const auto& alias : kAliases)
        if (lang == alias.lang && word == alias.word) return CsmId{alias.csm};
    return std::nullopt;
}

CsmId Lexicon::lookup(const std::string& word, const std::string& lang) const {
    if (!has_language(lang)) throw UnknownLanguage(lang);
    if (auto id = try_lookup(word, lang)) return *id;
    throw NotAKeyword(word, lang);
}

std::vector<std::string> Lexicon::languages_with_keyword(const std::string& word) const {
    std::vector<std::string> out;
    for (const auto& lang : languages())
        if (try_lookup(word, lang)) out.push_back(lang);
    return out;
}

const Lexicon& Lexicon::builtin() {
    static const Lexicon lex = make_builtin();
    return lex;
}

const std::vector<std::pair<CsmId, std::string>>& Lexicon::shorthand_table() {
    static const std::vector<std::pair<CsmId, std::string>> table = {
        {CsmId{7}, "TC"},     {CsmId{6}, "IC"},   {CsmId{8}, "SubTC"}, {CsmId{9}, "InstOf"},
        {CsmId{10}, "Po"},    {CsmId{11}, "Join"}, {CsmId{12}, "IsMand"},
    };
    return table;
}

std::optional<CsmId> Lexicon::shorthand_lookup(const std::string& word) {
    for (const auto& [id, kw] : shorthand_table())
        if (kw == word) return id;
    return std::nullopt;
}

std::string Lexicon::shorthand_keyword(CsmId id) {
    for (const auto& [tid, kw] : shorthand_table())
        if (tid == id) return kw;
    throw MissingEntry(id, "shorthand");
}

Lexicon load_lexicon_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lexicon csv: " + path);
    Lexicon lex;
    std::string line;
    int lineno = 0;
    bool sawHeader = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line, lineno);
        if (!sawHeader) {
            if (fields.size() != 5 || fields[0] != "csm_id")
                throw LexiconFormatError(lineno, "expected header csm_id,wikidata_item,lang,keyword,label");
            sawHeader = true;
            continue;
        }
        if (fields.size() != 5) throw LexiconFormatError(lineno, "expected 5 fields");
        Identifier id;
        try {
            id = classify_identifier(fields[0]);
        } catch (const Error&) {
            throw LexiconFormatError(lineno, "bad csm id: " + fields[0]);
        }
        const auto* csm = std::get_if<CsmId>(&id);
        if (!csm) throw LexiconFormatError(lineno, "bad csm id: " + fields[0]);
        if (fields[3].empty()) throw LexiconFormatError(lineno, "empty keyword");
        auto& e = lex.entry(*csm);
        e.wikidata = fields[1];
        if (e.keyword.count(fields[2]))
            throw LexiconFormatError(lineno, "duplicate row for " + fields[0] + "/" + fields[2]);
        e.keyword[fields[2]] = fields[3];
        e.label[fields[2]] = fields[4].empty() ? fields[3] : fields[4];
    }
    if (!sawHeader) throw LexiconFormatError(lineno, "missing header");
    return lex;
}

void save_lexicon_csv(const Lexicon& lexicon, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write lexicon csv: " + path);
    out << "csm_id,wikidata_item,lang,keyword,label\n";
    for (int n = 1; n <= Lexicon::concept_count; ++n) {
        CsmId id{n};
        const auto& e = lexicon.entry(id);
        for (const auto& [lang, kw] : e.keyword) {
            auto lb = e.label.count(lang) ? e.label.at(lang) : std::string{};
            out << to_string(id) << ',' << csv_field(e.wikidata) << ',' << csv_field(lang) << ','
                << csv_field(kw) << ',' << csv_field(lb) << '\n';
        }
    }
}

}  // namespace cosmo
