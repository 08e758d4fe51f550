#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "fpg/fiber_product.hpp"
#include "fpg/pipeline.hpp"

using namespace fpg;

namespace {

std::string catalog_path_or_default(std::string given) {
    if (!given.empty()) return given;
    if (const char* env = std::getenv("FPG_CATALOG")) return env;
    std::ifstream probe("data/catalog.json");
    return probe ? "data/catalog.json" : "catalog.json";
}

double budget_from_env() {
    if (const char* env = std::getenv("FPG_BUDGET_SECONDS")) return std::atof(env);
    return 0;
}

uint64_t grid_checksum(const IntMatrix& m) {
    std::string s = write_int_grid(m);
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fpg: fiber products of free groups over finite perfect quotients"};
    app.require_subcommand(1);
    std::string catalog_opt;
    app.add_option("--catalog", catalog_opt, "catalog file (default: $FPG_CATALOG, then data/catalog.json)");

    std::string entry, entry_b, out_path, format = "json", strategy = "hlt", map_file, dump_prefix;
    long long max_cosets = 1'000'000;
    int cls = 3, dwyer_k = 3;
    std::string variant = "tietze";

    auto* c_catalog = app.add_subcommand("catalog", "list or validate a catalog");
    std::string catalog_action, catalog_file;
    c_catalog->add_option("action", catalog_action, "list | validate")->required();
    c_catalog->add_option("path", catalog_file, "catalog path (defaults to the resolved catalog)");

    auto* c_order = app.add_subcommand("order", "coset enumeration: |Q|");
    c_order->add_option("entry", entry)->required();
    c_order->add_option("--max-cosets", max_cosets);
    c_order->add_option("--strategy", strategy, "hlt | felsch");

    auto* c_schreier = app.add_subcommand("schreier", "Schreier basis and action matrices");
    c_schreier->add_option("entry", entry)->required();
    c_schreier->add_option("--dump-matrices", dump_prefix, "write matrices as <prefix>.A<i>.txt, <prefix>.inc.txt");

    auto* c_h1 = app.add_subcommand("h1", "abelianization invariants");
    c_h1->add_option("entry", entry)->required();

    auto* c_h2 = app.add_subcommand("h2-fiber", "H2(F x_Q F) via H1(F; R_ab)");
    c_h2->add_option("entry", entry)->required();

    auto* c_five = app.add_subcommand("five-term", "five-term exactness report");
    c_five->add_option("entry", entry)->required();

    auto* c_kernel = app.add_subcommand("kernel", "ker{H2(F x_Q F) -> H2(F x F)}");
    c_kernel->add_option("entry", entry)->required();

    auto* c_nq = app.add_subcommand("nq", "nilpotent quotient sections");
    c_nq->add_option("entry", entry)->required();
    c_nq->add_option("--class", cls)->required();

    auto* c_dwyer = app.add_subcommand("dwyer", "finite-stage Dwyer filtration of the entry's group");
    c_dwyer->add_option("entry", entry)->required();
    c_dwyer->add_option("--k", dwyer_k)->required();

    auto* c_stallings = app.add_subcommand("stallings", "lower-central section comparison");
    c_stallings->add_option("entryA", entry)->required();
    c_stallings->add_option("entryB", entry_b)->required();
    c_stallings->add_option("--map", map_file, "one target word per source generator, one per line")->required();
    c_stallings->add_option("--class", cls);

    auto* c_main = app.add_subcommand("main-construction", "end-to-end construction and report");
    c_main->add_option("entry", entry)->required();
    c_main->add_option("--class", cls);
    c_main->add_option("--presentation", variant, "big | tietze");
    c_main->add_option("--out", out_path);
    c_main->add_option("--format", format, "json | text | csv");
    c_main->add_option("--max-cosets", max_cosets);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_catalog->parsed()) {
            std::string path = catalog_file.empty() ? catalog_path_or_default(catalog_opt) : catalog_file;
            Catalog cat = load_catalog(path); // throws with entry/field context
            if (catalog_action == "list") {
                for (const auto& ce : cat.entries)
                    std::cout << ce.name << ": " << format_presentation(ce.pres)
                              << (ce.expected_order ? " |Q|=" + std::to_string(*ce.expected_order) : "")
                              << (ce.h3_claim ? " H3=" + *ce.h3_claim : "") << "\n";
            } else if (catalog_action == "validate") {
                std::cout << "ok: " << cat.entries.size() << " entries\n";
            } else {
                std::cerr << "unknown catalog action: " << catalog_action << "\n";
                return 1;
            }
            return 0;
        }

        Catalog cat = load_catalog(catalog_path_or_default(catalog_opt));

        if (c_order->parsed()) {
            const auto& ce = find_entry(cat, entry);
            EnumStrategy st = strategy == "felsch" ? EnumStrategy::Felsch : EnumStrategy::Hlt;
            CosetTable t = todd_coxeter(ce.pres, max_cosets, st);
            std::cout << "|Q| = " << group_order(t) << " (" << strategy << ", " << t.coset_count()
                      << " cosets)\n";
            return 0;
        }
        if (c_schreier->parsed()) {
            const auto& ce = find_entry(cat, entry);
            SchreierData sd = schreier_data(todd_coxeter(ce.pres, max_cosets));
            std::cout << "basis-count = " << sd.basis_count() << "\n";
            auto acts = action_on_Rab(sd);
            for (size_t i = 0; i < acts.size(); ++i)
                std::cout << "A" << i + 1 << " checksum = " << grid_checksum(acts[i]) << "\n";
            IntMatrix inc = inclusion_to_Fab(sd);
            std::cout << "inc checksum = " << grid_checksum(inc) << "\n";
            if (!dump_prefix.empty()) {
                for (size_t i = 0; i < acts.size(); ++i) {
                    std::ofstream f(dump_prefix + ".A" + std::to_string(i + 1) + ".txt");
                    f << write_int_grid(acts[i]);
                }
                std::ofstream f(dump_prefix + ".inc.txt");
                f << write_int_grid(inc);
            }
            return 0;
        }
        if (c_h1->parsed()) {
            const auto& ce = find_entry(cat, entry);
            std::cout << nlohmann::json{{"entry", entry}, {"h1", invariants_to_json(h1(ce.pres))}}.dump(2)
                      << "\n";
            return 0;
        }
        if (c_h2->parsed()) {
            const auto& ce = find_entry(cat, entry);
            SchreierData sd = schreier_data(todd_coxeter(ce.pres, max_cosets));
            auto r = h2_fiber_product(sd);
            std::cout << nlohmann::json{{"entry", entry},
                                        {"h2_fiber", invariants_to_json(r.invariants)}}
                             .dump(2)
                      << "\n";
            return 0;
        }
        if (c_five->parsed()) {
            const auto& ce = find_entry(cat, entry);
            SchreierData sd = schreier_data(todd_coxeter(ce.pres, max_cosets));
            FiveTermReport f = five_term_check(sd);
            std::cout << nlohmann::json{{"entry", entry},
                                        {"h2_q", invariants_to_json(f.h2q)},
                                        {"h1_fiber", invariants_to_json(f.h1_fiber)},
                                        {"h1_direct", invariants_to_json(f.h1_direct)},
                                        {"h1_q", invariants_to_json(f.h1q)},
                                        {"exact", f.exact()}}
                             .dump(2)
                      << "\n";
            return 0;
        }
        if (c_kernel->parsed()) {
            const auto& ce = find_entry(cat, entry);
            SchreierData sd = schreier_data(todd_coxeter(ce.pres, max_cosets));
            InducedH2Kernel k = induced_h2_kernel(sd);
            std::cout << nlohmann::json{{"entry", entry},
                                        {"kernel", invariants_to_json(k.invariants)},
                                        {"surjective", k.surjective}}
                             .dump(2)
                      << "\n";
            return 0;
        }
        if (c_nq->parsed()) {
            const auto& ce = find_entry(cat, entry);
            PcPresentation pc = nilpotent_quotient(ce.pres, cls);
            nlohmann::json sec = nlohmann::json::array();
            for (const auto& s : pc.sections) sec.push_back(invariants_to_json(s));
            std::cout << nlohmann::json{{"entry", entry}, {"class", cls}, {"sections", sec}}.dump(2)
                      << "\n";
            return 0;
        }
        if (c_dwyer->parsed()) {
            const auto& ce = find_entry(cat, entry);
            DwyerData dd = dwyer_data(ce.pres, dwyer_k);
            nlohmann::json rows = nlohmann::json::array();
            for (int k = 1; k <= dwyer_k; ++k)
                rows.push_back(nlohmann::json{{"k", k}, {"phi", invariants_to_json(dwyer_phi_from_data(dd, k))}});
            std::cout << nlohmann::json{{"entry", entry}, {"table", rows}}.dump(2) << "\n";
            return 0;
        }
        if (c_stallings->parsed()) {
            const auto& a = find_entry(cat, entry);
            const auto& b = find_entry(cat, entry_b);
            std::ifstream mf(map_file);
            if (!mf) throw DomainError("stallings: cannot open map file " + map_file);
            PresentationMorphism f;
            f.source = a.pres;
            f.target = b.pres;
            std::string line;
            while (std::getline(mf, line)) {
                if (line.empty()) continue;
                f.images.push_back(parse_word(line, b.pres.rank, b.pres.names));
            }
            if (int(f.images.size()) != a.pres.rank)
                throw DomainError("stallings: map file must list one word per source generator");
            auto verdicts = stallings_compare(a.pres, b.pres, f, cls);
            for (const auto& v : verdicts)
                std::cout << "k=" << v.weight << " " << v.source.to_string() << " -> "
                          << v.target.to_string() << " iso=" << (v.isomorphism ? "yes" : "no") << "\n";
            return 0;
        }
        if (c_main->parsed()) {
            const auto& ce = find_entry(cat, entry);
            MainOptions opt;
            opt.class_bound = cls;
            opt.use_tietze = variant != "big";
            opt.max_cosets = max_cosets;
            opt.budget_seconds = budget_from_env();
            ConstructionReport rep = run_main_construction(ce, opt);
            std::string body = format == "text"  ? report_to_text(rep)
                               : format == "csv" ? dwyer_table_csv(rep)
                                                 : report_to_json(rep);
            if (!out_path.empty()) {
                std::ofstream f(out_path);
                f << body;
            } else {
                std::cout << body;
            }
            return rep.exit_code;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
