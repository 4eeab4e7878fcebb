#include "cosmo/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cosmo/algebra.hpp"
#include "cosmo/core.hpp"
#include "cosmo/dot.hpp"
#include "cosmo/eval.hpp"
#include "cosmo/fol.hpp"
#include "cosmo/lexicon.hpp"
#include "cosmo/sparql.hpp"
#include "cosmo/syntax.hpp"
#include "cosmo/validate.hpp"

namespace cosmo::cli {

namespace {

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(what) {}
};

/// Loads through fn, reclassifying failures as I/O so the caller exits 3.
template <typename Fn>
auto load_or_io(Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw IoError(e.what());
    }
}

std::string read_input(const std::string& file, std::istream& in) {
    if (file.empty() || file == "-") {
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream f(file);
    if (!f) throw IoError("cannot open input file: " + file);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

void print_diagnostics(const ParseResult& r, std::ostream& err) {
    for (const ParseDiagnostic& d : r.diagnostics) err << to_string(d) << "\n";
}

/// Parses the input text or reports why it cannot be parsed. Returns
/// nullopt after printing diagnostics (caller exits 1).
std::optional<ParseResult> parse_or_report(const std::string& text, const ParseOptions& opts,
                                           std::ostream& err) {
    ParseResult r = parse(text, opts);
    print_diagnostics(r, err);
    if (!r.ok()) return std::nullopt;
    return r;
}

const Constructor* pick_constructor(const Model& model, const std::string& name,
                                    std::string* problem) {
    std::vector<const Constructor*> all = model.constructors();
    if (!name.empty()) {
        const Constructor* c = model.find_constructor(name);
        if (!c) *problem = "no constructor named '" + name + "' in the input";
        return c;
    }
    if (all.empty()) {
        *problem = "the input declares no constructor";
        return nullptr;
    }
    if (all.size() > 1) {
        *problem = "the input declares several constructors; pick one with --name";
        return nullptr;
    }
    return all[0];
}

std::string dump_model(const Model& model) {
    std::ostringstream os;
    for (const Declaration& decl : model.declarations) {
        if (const auto* link = std::get_if<Link>(&decl)) {
            os << "link " << to_string(link->kind) << " " << link->from.name << " "
               << link->to.name << "\n";
            continue;
        }
        const auto& c = std::get<Constructor>(decl);
        os << "constructor " << c.name.name << " "
           << (c.kind == ConstructorKind::Type ? "type" : "instance") << "\n";
        for (std::size_t b = 0; b < c.blocks.size(); ++b) {
            const Block& block = c.blocks[b];
            os << "  block " << b + 1 << "\n";
            os << "    predicate " << to_string(block.predicate.pitem) << " ("
               << block.predicate.var1.name << ", " << block.predicate.var2.name << ")\n";
            for (const RoleDecl* role : {&block.role1, &block.role2}) {
                os << "    role " << role->var.name;
                if (role->name) os << " [" << to_string(*role->name) << "]";
                os << " " << to_string(role->filler);
                if (role->constraint) os << " {" << serialize_constraint(*role->constraint) << "}";
                os << "\n";
            }
            for (const FunctionDecl& fn : block.functions) {
                os << "    function " << to_string(fn.zitem) << " (";
                for (std::size_t i = 0; i < fn.args.size(); ++i)
                    os << (i ? ", " : "") << to_string(fn.args[i]);
                os << ")";
                if (fn.constraint) os << " {" << serialize_constraint(*fn.constraint) << "}";
                os << "\n";
            }
            for (const JoinDecl& join : block.joins)
                os << "    join " << to_string(join.left) << " " << to_string(join.right) << "\n";
            for (const LocalVar& mand : block.mandatories)
                os << "    mandatory " << mand.name << "\n";
            for (const Instantiation& inst : block.instantiations)
                os << "    instantiation " << to_string(inst.typeItem) << " = "
                   << to_string(inst.instanceItem) << "\n";
        }
    }
    return os.str();
}

void print_selection(const SelectionResult& sel, std::ostream& out) {
    out << "constructor " << sel.constructor.name << "\n";
    out << "realisable " << (sel.realisable ? "true" : "false") << "\n";
    for (std::size_t b = 0; b < sel.blocks.size(); ++b) {
        const BlockSelection& bs = sel.blocks[b];
        out << "block " << b + 1 << "\n";
        for (const auto& [s, o] : bs.tuples)
            out << "  tuple " << to_string(s) << " " << to_string(o) << "\n";
        for (const std::string& id : bs.reified) out << "  reified " << id << "\n";
        for (const auto& [zitem, outputs] : bs.functionOutputs)
            for (const std::string& value : outputs)
                out << "  function " << to_string(zitem) << " " << value << "\n";
        for (const std::string& note : bs.notes) out << "  note " << note << "\n";
    }
}

/// Serialize one constructor in the notation and language the input used.
std::string render_like_input(const Constructor& c, const ParseResult& r) {
    Model single;
    single.declarations.emplace_back(c);
    SyntaxKind syntax = r.syntax.value_or(SyntaxKind::Longform);
    std::string lang = r.lang.empty() ? "en" : r.lang;
    return serialize(single, syntax, lang);
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"tooling for content-selection constructor models"};
    app.name("cosmo");
    app.require_subcommand(1);

    std::function<int()> action;

    // --- parse ---
    auto* parseCmd = app.add_subcommand("parse", "parse and dump the canonical AST");
    std::string parseFile, parseSyntax, parseLang;
    parseCmd->add_option("file", parseFile, "input file (default: stdin)");
    parseCmd->add_option("--syntax", parseSyntax, "force notation: long|short")
        ->check(CLI::IsMember({"long", "short"}));
    parseCmd->add_option("--lang", parseLang, "force lexicon language");
    parseCmd->callback([&] {
        action = [&]() -> int {
            ParseOptions opts;
            if (parseSyntax == "long") opts.syntax = SyntaxKind::Longform;
            if (parseSyntax == "short") opts.syntax = SyntaxKind::Shorthand;
            if (!parseLang.empty()) opts.lang = parseLang;
            auto r = parse_or_report(read_input(parseFile, in), opts, err);
            if (!r) return 1;
            out << dump_model(*r->model);
            return 0;
        };
    });

    // --- check ---
    auto* checkCmd = app.add_subcommand("check", "validate a model");
    std::string checkFile, checkCatalog;
    bool checkOpenWorld = false;
    checkCmd->add_option("file", checkFile, "input file (default: stdin)");
    auto* catalogOpt =
        checkCmd->add_option("--catalog", checkCatalog, "item catalog file for existence checks");
    checkCmd->add_flag("--open-world", checkOpenWorld, "skip existence checks (default)")
        ->excludes(catalogOpt);
    checkCmd->callback([&] {
        action = [&]() -> int {
            auto r = parse_or_report(read_input(checkFile, in), {}, err);
            if (!r) return 1;
            ItemCatalog catalog = ItemCatalog::open_world();
            if (!checkCatalog.empty()) {
                catalog = load_or_io([&] { return ItemCatalog::from_file(checkCatalog); });
            }
            ValidationReport report = validate(*r->model, catalog);
            bool hardFindings = false;
            for (const Finding& f : report.findings) {
                out << to_string(f) << "\n";
                if (f.severity == FindingSeverity::Error) hardFindings = true;
            }
            return hardFindings ? 1 : 0;
        };
    });

    // --- fmt ---
    auto* fmtCmd = app.add_subcommand("fmt", "reformat into a notation");
    std::string fmtFile, fmtTo, fmtLang;
    fmtCmd->add_option("file", fmtFile, "input file (default: stdin)");
    fmtCmd->add_option("--to", fmtTo, "target notation: long|short")
        ->required()
        ->check(CLI::IsMember({"long", "short"}));
    fmtCmd->add_option("--lang", fmtLang, "target lexicon language (default: input's, else en)");
    fmtCmd->callback([&] {
        action = [&]() -> int {
            auto r = parse_or_report(read_input(fmtFile, in), {}, err);
            if (!r) return 1;
            SyntaxKind to = fmtTo == "long" ? SyntaxKind::Longform : SyntaxKind::Shorthand;
            std::string lang = !fmtLang.empty() ? fmtLang : (r->lang.empty() ? "en" : r->lang);
            out << serialize(*r->model, to, lang);
            return 0;
        };
    });

    // --- translate ---
    auto* trCmd = app.add_subcommand("translate", "relexicalize into another language");
    std::string trFile, trLang, trGraph;
    bool trResolve = false;
    trCmd->add_option("file", trFile, "input file (default: stdin)");
    trCmd->add_option("--lang", trLang, "target lexicon language")->required();
    trCmd->add_flag("--resolve-labels", trResolve, "append item labels as comments");
    trCmd->add_option("--graph", trGraph, "graph file supplying labels")->needs("--resolve-labels");
    trCmd->callback([&] {
        action = [&]() -> int {
            if (trResolve && trGraph.empty()) {
                err << "--resolve-labels needs --graph FILE\n";
                return 2;
            }
            auto r = parse_or_report(read_input(trFile, in), {}, err);
            if (!r) return 1;
            SyntaxKind syntax = r->syntax.value_or(SyntaxKind::Longform);
            out << serialize(*r->model, syntax, trLang);
            if (trResolve) {
                KnowledgeGraph g = load_or_io([&] { return load_graph(trGraph); });
                std::set<ItemId> items;
                for (const Constructor* c : r->model->constructors())
                    for (const Block& block : c->blocks) {
                        items.insert(block.predicate.pitem);
                        items.insert(block.role1.filler);
                        items.insert(block.role2.filler);
                        if (block.role1.name) items.insert(*block.role1.name);
                        if (block.role2.name) items.insert(*block.role2.name);
                        for (const FunctionDecl& fn : block.functions) {
                            items.insert(fn.zitem);
                            items.insert(fn.args.begin(), fn.args.end());
                        }
                        for (const JoinDecl& join : block.joins) {
                            items.insert(join.left);
                            items.insert(join.right);
                        }
                        for (const Instantiation& inst : block.instantiations) {
                            items.insert(inst.typeItem);
                            items.insert(inst.instanceItem);
                        }
                    }
                for (const ItemId& item : items)
                    if (auto label = g.label(item, trLang))
                        out << "// " << to_string(item) << " = " << *label << "\n";
            }
            return 0;
        };
    });

    // --- fol ---
    auto* folCmd = app.add_subcommand("fol", "translate to first-order logic");
    std::string folFile;
    bool folUnicode = false;
    folCmd->add_option("file", folFile, "input file (default: stdin)");
    folCmd->add_flag("--unicode", folUnicode, "render with logical symbols");
    folCmd->callback([&] {
        action = [&]() -> int {
            auto r = parse_or_report(read_input(folFile, in), {}, err);
            if (!r) return 1;
            TheoryFragment theory = translate(*r->model);
            out << render_theory(theory,
                                 folUnicode ? RenderStyle::Unicode : RenderStyle::Ascii);
            return 0;
        };
    });

    // --- eval ---
    auto* evalCmd = app.add_subcommand("eval", "run constructors over a local graph");
    std::string evalFile, evalGraph, evalFunctions, evalLang = "en";
    evalCmd->add_option("file", evalFile, "input file (default: stdin)");
    evalCmd->add_option("--graph", evalGraph, "knowledge graph file")->required();
    evalCmd->add_option("--functions", evalFunctions, "function manifest file");
    evalCmd->add_option("--lang", evalLang, "label language for constraints and functions");
    evalCmd->callback([&] {
        action = [&]() -> int {
            auto r = parse_or_report(read_input(evalFile, in), {}, err);
            if (!r) return 1;
            KnowledgeGraph g = load_or_io([&] { return load_graph(evalGraph); });
            FunctionRegistry registry;
            if (!evalFunctions.empty())
                registry = load_or_io([&] { return load_function_manifest(evalFunctions); });
            bool first = true;
            for (const Constructor* c : r->model->constructors()) {
                if (!first) out << "\n";
                first = false;
                print_selection(eval_constructor(*c, g, registry, evalLang), out);
            }
            for (const Link* link : r->model->links()) {
                if (!first) out << "\n";
                first = false;
                bool holds = check_link(*link, *r->model, g, registry, evalLang);
                out << "link " << to_string(link->kind) << "(" << link->from.name << ", "
                    << link->to.name << ") " << (holds ? "holds" : "fails") << "\n";
            }
            return 0;
        };
    });

    // --- sparql ---
    auto* spCmd = app.add_subcommand("sparql", "compile to a SPARQL query");
    std::string spFile, spEndpoint, spLang = "en";
    bool spExecute = false;
    int spTimeoutMs = 30000;
    std::size_t spMaxRows = 1000;
    spCmd->add_option("file", spFile, "input file (default: stdin)");
    spCmd->add_option("--endpoint", spEndpoint, "SPARQL endpoint URL")->envname("COSMO_ENDPOINT");
    spCmd->add_flag("--execute", spExecute, "run the query against the endpoint");
    spCmd->add_option("--timeout-ms", spTimeoutMs, "request timeout in milliseconds")
        ->check(CLI::PositiveNumber);
    spCmd->add_option("--max-rows", spMaxRows, "result row cap")->check(CLI::PositiveNumber);
    spCmd->add_option("--lang", spLang, "label language used in FILTERs");
    spCmd->callback([&] {
        action = [&]() -> int {
            auto r = parse_or_report(read_input(spFile, in), {}, err);
            if (!r) return 1;
            if (spExecute && spEndpoint.empty()) {
                err << "--execute needs --endpoint URL (or COSMO_ENDPOINT)\n";
                return 2;
            }
            SparqlConfig cfg;
            cfg.lang = spLang;
            bool first = true;
            for (const Constructor* c : r->model->constructors()) {
                CompiledQuery q = compile(*c, cfg);
                if (!spExecute) {
                    if (!first) out << "\n";
                    out << q.text;
                } else {
                    EndpointConfig ep;
                    ep.url = spEndpoint;
                    ep.timeoutMs = spTimeoutMs;
                    ep.maxRows = spMaxRows;
                    for (const ResultRow& row : execute(q, ep)) {
                        out << "row";
                        for (const auto& [var, value] : row.bindings)
                            out << " " << var << "=" << render_graph_value(value);
                        out << "\n";
                    }
                }
                first = false;
            }
            return 0;
        };
    });

    // --- generalize ---
    auto* genCmd = app.add_subcommand("generalize", "strip instantiations, make a type");
    std::string genFile, genName;
    genCmd->add_option("file", genFile, "input file (default: stdin)");
    genCmd->add_option("--name", genName, "constructor to transform");
    genCmd->callback([&] {
        action = [&]() -> int {
            auto r = parse_or_report(read_input(genFile, in), {}, err);
            if (!r) return 1;
            std::string problem;
            const Constructor* c = pick_constructor(*r->model, genName, &problem);
            if (!c) {
                err << problem << "\n";
                return genName.empty() ? 2 : 1;
            }
            out << render_like_input(generalize(*c), *r);
            return 0;
        };
    });

    // --- instantiate ---
    auto* instCmd = app.add_subcommand("instantiate", "bind type items, make an instance");
    std::string instFile, instName;
    std::vector<std::string> instBinds;
    instCmd->add_option("file", instFile, "input file (default: stdin)");
    instCmd->add_option("--name", instName, "constructor to transform");
    instCmd->add_option("--bind", instBinds, "type=instance item pair (repeatable)")
        ->required()
        ->allow_extra_args(false);
    instCmd->callback([&] {
        action = [&]() -> int {
            BindingSet bindings;
            for (const std::string& spec : instBinds) {
                auto eq = spec.find('=');
                std::string why;
                if (eq != std::string::npos) {
                    try {
                        Identifier t = classify_identifier(spec.substr(0, eq));
                        Identifier i = classify_identifier(spec.substr(eq + 1));
                        const auto* ti = std::get_if<ItemId>(&t);
                        const auto* ii = std::get_if<ItemId>(&i);
                        if (ti && ii && ti->kind == ItemKind::Q && ii->kind == ItemKind::Q) {
                            bindings[*ti] = *ii;
                            continue;
                        }
                        why = "both sides must be Q items";
                    } catch (const Error& e) {
                        why = e.what();
                    }
                } else {
                    why = "expected T=I";
                }
                err << "bad --bind '" << spec << "': " << why << "\n";
                return 2;
            }
            auto r = parse_or_report(read_input(instFile, in), {}, err);
            if (!r) return 1;
            std::string problem;
            const Constructor* c = pick_constructor(*r->model, instName, &problem);
            if (!c) {
                err << problem << "\n";
                return instName.empty() ? 2 : 1;
            }
            out << render_like_input(instantiate(*c, bindings), *r);
            return 0;
        };
    });

    // --- merge ---
    auto* mergeCmd = app.add_subcommand("merge", "concatenate two constructors");
    std::string mergeA, mergeB, mergeFile, mergeName;
    mergeCmd->add_option("A", mergeA, "first constructor name")->required();
    mergeCmd->add_option("B", mergeB, "second constructor name")->required();
    mergeCmd->add_option("file", mergeFile, "input file (default: stdin)");
    mergeCmd->add_option("--name", mergeName, "name of the merged constructor")->required();
    mergeCmd->callback([&] {
        action = [&]() -> int {
            auto r = parse_or_report(read_input(mergeFile, in), {}, err);
            if (!r) return 1;
            const Constructor* a = r->model->find_constructor(mergeA);
            const Constructor* b = r->model->find_constructor(mergeB);
            if (!a || !b) {
                err << "no constructor named '" << (a ? mergeB : mergeA) << "' in the input\n";
                return 1;
            }
            MergeResult merged = merge(*a, *b, mergeName);
            for (const auto& [from, to] : merged.renamings)
                err << "renamed '" << from << "' of " << mergeB << " to '" << to << "'\n";
            out << render_like_input(merged.constructor, *r);
            return 0;
        };
    });

    // --- dot ---
    auto* dotCmd = app.add_subcommand("dot", "export a Graphviz diagram");
    std::string dotFile;
    dotCmd->add_option("file", dotFile, "input file (default: stdin)");
    dotCmd->callback([&] {
        action = [&]() -> int {
            auto r = parse_or_report(read_input(dotFile, in), {}, err);
            if (!r) return 1;
            out << export_dot(*r->model);
            return 0;
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        return action ? action() : 2;
    } catch (const UnknownLanguage& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const Timeout& e) {
        err << e.what() << "\n";
        return 3;
    } catch (const HttpError& e) {
        err << e.what() << "\n";
        return 3;
    } catch (const MalformedResults& e) {
        err << e.what() << "\n";
        return 3;
    } catch (const GraphFormatError& e) {
        err << e.what() << "\n";
        return 3;
    } catch (const MereologyViolation& e) {
        err << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        err << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return 1;
    }
}

}  // namespace cosmo::cli
