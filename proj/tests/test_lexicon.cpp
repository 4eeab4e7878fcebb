#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cosmo/lexicon.hpp"

using namespace cosmo;

namespace {

/// Temp file that deletes itself; contents written on construction.
struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& contents, const char* suffix = ".csv") {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("cosmo_lexicon_" + std::to_string(++counter) + suffix);
        std::ofstream(path) << contents;
    }
    ~TempFile() { std::filesystem::remove(path); }
    std::string str() const { return path.string(); }
};

}  // namespace

TEST_SUITE("lexicon") {

TEST_CASE("builtin table covers the pivot and three natural languages") {
    const Lexicon& lex = Lexicon::builtin();
    CHECK(lex.languages() == std::vector<std::string>{"csm", "en", "es", "eu"});
    CHECK(lex.has_language("en"));
    CHECK_FALSE(lex.has_language("fr"));

    CHECK(lex.keyword(CsmId{7}, "en") == "TypeConstructor");
    CHECK(lex.keyword(CsmId{7}, "es") == "ConstructorDeTipo");
    CHECK(lex.keyword(CsmId{7}, "eu") == "TipoEraikitzaile");
    CHECK(lex.keyword(CsmId{6}, "en") == "InstanceConstructor");
    CHECK(lex.keyword(CsmId{2}, "es") == "TipoDeEntidad");
    CHECK(lex.keyword(CsmId{9}, "eu") == "HonakoHauDa");

    // The pivot's keywords are the concept ids themselves.
    for (int n = 1; n <= Lexicon::concept_count; ++n)
        CHECK(lex.keyword(CsmId{n}, "csm") == to_string(CsmId{n}));

    CHECK(lex.label(CsmId{6}, "en") == "Instance Constructor");
    CHECK(lex.label(CsmId{2}, "es") == "Tipo de entidad");
    CHECK(lex.entry(CsmId{1}).wikidata == "Q35120");
    CHECK(lex.entry(CsmId{2}).wikidata.empty());
}

TEST_CASE("reverse lookup resolves canonical keywords and aliases") {
    const Lexicon& lex = Lexicon::builtin();
    CHECK(lex.lookup("TypeConstructor", "en") == CsmId{7});
    CHECK(lex.lookup("Propiedad", "es") == CsmId{3});

    // Variant spellings seen in circulating model text.
    CHECK(lex.lookup("Propriedad", "es") == CsmId{3});
    CHECK(lex.lookup("TipoDeEntitdad", "es") == CsmId{2});
    CHECK(lex.lookup("Función", "es") == CsmId{5});
    // ... but the canonical spelling is what serialization uses.
    CHECK(lex.keyword(CsmId{5}, "es") == "Funcion");

    CHECK(lex.try_lookup("NotAWord", "en") == std::nullopt);
    CHECK_THROWS_AS(lex.lookup("NotAWord", "en"), NotAKeyword);
    CHECK_THROWS_AS(lex.lookup("Object", "fr"), UnknownLanguage);
    CHECK_THROWS_AS((void)lex.keyword(CsmId{1}, "fr"), UnknownLanguage);
}

TEST_CASE("languages_with_keyword reports every language sharing a spelling") {
    const Lexicon& lex = Lexicon::builtin();
    CHECK(lex.languages_with_keyword("Rol") == std::vector<std::string>{"es", "eu"});
    CHECK(lex.languages_with_keyword("Object") == std::vector<std::string>{"en"});
    CHECK(lex.languages_with_keyword("CSM003") == std::vector<std::string>{"csm"});
    CHECK(lex.languages_with_keyword("zzz").empty());
}

TEST_CASE("shorthand keywords are notation-level, not per language") {
    CHECK(Lexicon::shorthand_lookup("TC") == CsmId{7});
    CHECK(Lexicon::shorthand_lookup("IC") == CsmId{6});
    CHECK(Lexicon::shorthand_lookup("SubTC") == CsmId{8});
    CHECK(Lexicon::shorthand_lookup("InstOf") == CsmId{9});
    CHECK(Lexicon::shorthand_lookup("Po") == CsmId{10});
    CHECK(Lexicon::shorthand_lookup("Join") == CsmId{11});
    CHECK(Lexicon::shorthand_lookup("IsMand") == CsmId{12});
    CHECK(Lexicon::shorthand_lookup("tc") == std::nullopt);

    CHECK(Lexicon::shorthand_keyword(CsmId{7}) == "TC");
    // Object has no shorthand form.
    CHECK_THROWS_AS((void)Lexicon::shorthand_keyword(CsmId{1}), MissingEntry);
}

TEST_CASE("csv round trip preserves the whole table") {
    TempFile tmp("");
    save_lexicon_csv(Lexicon::builtin(), tmp.str());
    Lexicon loaded = load_lexicon_csv(tmp.str());
    CHECK(loaded == Lexicon::builtin());
}

TEST_CASE("csv quoting survives commas, quotes and custom languages") {
    Lexicon lex = Lexicon::builtin();
    lex.entry(CsmId{1}).keyword["de"] = "Objekt";
    lex.entry(CsmId{1}).label["de"] = "Objekt, das \"Ding\"";
    TempFile tmp("");
    save_lexicon_csv(lex, tmp.str());
    Lexicon loaded = load_lexicon_csv(tmp.str());
    CHECK(loaded == lex);
    CHECK(loaded.label(CsmId{1}, "de") == "Objekt, das \"Ding\"");
}

TEST_CASE("the shipped lexicon csv matches the builtin table") {
    Lexicon shipped = load_lexicon_csv(std::string(COSMO_DATA_DIR) + "/lexicon.csv");
    CHECK(shipped == Lexicon::builtin());
}

TEST_CASE("csv loader rejects malformed input with line numbers") {
    auto load = [](const std::string& text) {
        TempFile tmp(text);
        return load_lexicon_csv(tmp.str());
    };
    CHECK_THROWS_AS(load(""), LexiconFormatError);  // missing header
    CHECK_THROWS_AS(load("wrong,header\n"), LexiconFormatError);
    CHECK_THROWS_AS(load("csm_id,wikidata_item,lang,keyword,label\nQ42,,en,Object,\n"),
                    LexiconFormatError);  // not a csm id
    CHECK_THROWS_AS(load("csm_id,wikidata_item,lang,keyword,label\nCSM001,,en,,\n"),
                    LexiconFormatError);  // empty keyword
    CHECK_THROWS_AS(load("csm_id,wikidata_item,lang,keyword,label\nCSM001,,en,Object\n"),
                    LexiconFormatError);  // four fields
    CHECK_THROWS_AS(
        load("csm_id,wikidata_item,lang,keyword,label\nCSM001,,en,Object,\nCSM001,,en,Thing,\n"),
        LexiconFormatError);  // duplicate id+lang row
    CHECK_THROWS_AS(load("csm_id,wikidata_item,lang,keyword,label\nCSM001,,en,\"Obj,ect\n"),
                    LexiconFormatError);  // unterminated quote
    CHECK_THROWS_AS(load_lexicon_csv("/nonexistent/lexicon.csv"), Error);

    try {
        load("csm_id,wikidata_item,lang,keyword,label\nCSM001,,en,Object,\nbad line\n");
        FAIL("expected LexiconFormatError");
    } catch (const LexiconFormatError& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("a partial csv only knows the languages it defines") {
    TempFile tmp(
        "csm_id,wikidata_item,lang,keyword,label\n"
        "CSM007,,en,TypeConstructor,Type constructor\n"
        "CSM003,Q18616576,en,Property,\n");
    Lexicon lex = load_lexicon_csv(tmp.str());
    CHECK(lex.languages() == std::vector<std::string>{"en"});
    CHECK(lex.keyword(CsmId{7}, "en") == "TypeConstructor");
    // CSM001 has no row, so the keyword is missing even though "en" exists.
    CHECK_THROWS_AS((void)lex.keyword(CsmId{1}, "en"), MissingEntry);
    // An empty label column falls back to the keyword.
    CHECK(lex.label(CsmId{3}, "en") == "Property");
}

}  // TEST_SUITE
