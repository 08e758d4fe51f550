#include "fpg/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "fpg/fiber_product.hpp"

namespace fpg {

using nlohmann::json;

// --- catalog -----------------------------------------------------------------

namespace {

AbelianGroupInvariants invariants_from_json(const json& j, const std::string& where) {
    AbelianGroupInvariants inv;
    if (!j.is_object() || !j.contains("rank"))
        throw DomainError(where + ": expected {rank, torsion}");
    inv.free_rank = j.at("rank").get<int>();
    if (j.contains("torsion"))
        for (const auto& t : j.at("torsion")) {
            if (t.is_number_integer())
                inv.torsion.push_back(Int(long(t.get<long long>())));
            else
                inv.torsion.push_back(Int(t.get<std::string>()));
        }
    return inv;
}

} // namespace

json invariants_to_json(const AbelianGroupInvariants& inv) {
    json t = json::array();
    for (const Int& d : inv.torsion) {
        if (d.fits_slong_p())
            t.push_back(d.get_si());
        else
            t.push_back(d.get_str());
    }
    return json{{"rank", inv.free_rank}, {"torsion", t}, {"pretty", inv.to_string()}};
}

Catalog parse_catalog(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("catalog: ") + e.what(), e.byte);
    }
    if (!j.contains("entries") || !j.at("entries").is_array())
        throw DomainError("catalog: missing top-level \"entries\" array");
    Catalog cat;
    std::set<std::string> seen;
    for (const auto& je : j.at("entries")) {
        GroupCatalogEntry e;
        if (!je.contains("name")) throw DomainError("catalog: entry without a name");
        e.name = je.at("name").get<std::string>();
        if (!seen.insert(e.name).second)
            throw DomainError("catalog: duplicate entry name \"" + e.name + "\"");
        std::vector<std::string> names;
        for (const auto& g : je.at("generators")) names.push_back(g.get<std::string>());
        int rank = int(names.size());
        std::vector<Word> rels;
        for (const auto& r : je.at("relators")) {
            try {
                rels.push_back(parse_relator(r.get<std::string>(), rank, names));
            } catch (const ParseError& pe) {
                throw ParseError("catalog entry \"" + e.name + "\", relator \"" +
                                     r.get<std::string>() + "\": " + pe.what(),
                                 pe.position);
            }
        }
        e.pres = make_presentation(rank, std::move(rels), names);
        if (je.contains("expected")) {
            const auto& ex = je.at("expected");
            if (ex.contains("order")) e.expected_order = ex.at("order").get<long long>();
            if (ex.contains("h1"))
                e.expected_h1 = invariants_from_json(ex.at("h1"), "entry \"" + e.name + "\" expected.h1");
            if (ex.contains("h3_claim")) e.h3_claim = ex.at("h3_claim").get<std::string>();
        }
        cat.entries.push_back(std::move(e));
    }
    return cat;
}

Catalog load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("catalog: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_catalog(ss.str());
}

const GroupCatalogEntry& find_entry(const Catalog& c, const std::string& name) {
    for (const auto& e : c.entries)
        if (e.name == name) return e;
    throw DomainError("catalog: no entry named \"" + name + "\"");
}

std::string builtin_catalog_text() {
    return R"({
  "entries": [
    {
      "name": "binary-icosahedral",
      "generators": ["a", "b"],
      "relators": ["aaaaa = bbb", "bbb = baba"],
      "expected": {"order": 120, "h1": {"rank": 0, "torsion": []}, "h3_claim": "Z/120"}
    },
    {
      "name": "a5-triangle",
      "generators": ["a", "b"],
      "relators": ["aa", "bbb", "ababababab"],
      "expected": {"order": 60, "h1": {"rank": 0, "torsion": []}}
    },
    {
      "name": "trivial",
      "generators": ["x"],
      "relators": ["x"],
      "expected": {"order": 1, "h1": {"rank": 0, "torsion": []}}
    },
    {
      "name": "z2",
      "generators": ["a"],
      "relators": ["aa"],
      "expected": {"order": 2, "h1": {"rank": 0, "torsion": [2]}}
    }
  ]
}
)";
}

// --- main construction ---------------------------------------------------------

namespace {

class StageClock {
public:
    explicit StageClock(double budget_seconds, std::vector<std::pair<std::string, double>>& out)
        : budget_(budget_seconds), out_(out) {}

    template <typename F>
    auto run(const std::string& stage, F&& f) {
        auto t0 = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(f())>) {
            f();
            finish_(stage, t0);
        } else {
            auto r = f();
            finish_(stage, t0);
            return r;
        }
    }

private:
    double budget_;
    std::vector<std::pair<std::string, double>>& out_;

    void finish_(const std::string& stage, std::chrono::steady_clock::time_point t0) {
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out_.emplace_back(stage, s);
        if (budget_ > 0 && s > budget_)
            throw LimitError("stage \"" + stage + "\" exceeded FPG_BUDGET_SECONDS (" +
                             std::to_string(s) + "s)");
    }
};

void add_claim(ConstructionReport& r, const std::string& id, const std::string& statement,
               bool pass, const std::string& detail = "", bool asserted = true) {
    r.checklist.push_back({id, statement, detail, pass, asserted});
}

} // namespace

ConstructionReport run_main_construction(const GroupCatalogEntry& e, const MainOptions& opt_in) {
    MainOptions opt = opt_in;
    if (opt.budget_seconds > 0 && opt.nq.deadline_seconds == 0)
        opt.nq.deadline_seconds = opt.budget_seconds; // the stage cap reaches into collection
    ConstructionReport rep;
    rep.entry = e.name;
    rep.class_bound = opt.class_bound;
    rep.presentation_variant = opt.use_tietze ? "tietze" : "big";
    StageClock clock(opt.budget_seconds, rep.timings_seconds);

    // hypothesis gate: balanced and perfect
    rep.balanced = is_balanced(e.pres);
    rep.h1_q = clock.run("h1", [&] { return h1(e.pres); });
    const bool perfect = rep.h1_q.trivial();
    if (!rep.balanced || !perfect) {
        rep.hypotheses_ok = false;
        rep.hypotheses_note = !rep.balanced
                                  ? "presentation not balanced (" + std::to_string(e.pres.relators.size()) +
                                        " relators, " + std::to_string(e.pres.rank) + " generators)"
                                  : "H1 = " + rep.h1_q.to_string() + " != 0";
        rep.exit_code = 2;
        add_claim(rep, "balanced", "presentation is balanced", rep.balanced);
        add_claim(rep, "perfect", "H1(Q) = 0", perfect);
        return rep;
    }
    rep.hypotheses_ok = true;
    if (!e.h3_claim) {
        rep.hypotheses_note = "hypotheses violated: H3 claim absent";
        rep.exit_code = 2;
    }
    add_claim(rep, "balanced", "presentation is balanced", true);
    add_claim(rep, "perfect", "H1(Q) = 0", true);

    CosetTable table = clock.run("todd_coxeter", [&] { return todd_coxeter(e.pres, opt.max_cosets); });
    rep.order_q = group_order(table);
    SchreierData sd = clock.run("schreier", [&] { return schreier_data(table); });
    rep.rank_r = sd.basis_count();

    rep.superperfect = clock.run("superperfect", [&] { return is_superperfect(e.pres, sd); });
    add_claim(rep, "superperfect", "H1(Q) = H2(Q) = 0", rep.superperfect);

    rep.five_term = clock.run("five_term", [&] { return five_term_check(sd); });
    add_claim(rep, "five_term_exact", "five-term sequence exact at all four junctions",
              rep.five_term.exact());

    const int rank = e.pres.rank;
    add_claim(rep, "h1_rank_2k",
              "H1(F x_Q F) = H1(F x F) = Z^" + std::to_string(2 * rank),
              rep.five_term.h1_fiber == AbelianGroupInvariants::free(2 * rank) &&
                  rep.five_term.h1_direct == AbelianGroupInvariants::free(2 * rank));

    H1FreeResult h2f = clock.run("h2_fiber", [&] { return h2_fiber_product(sd); });
    rep.h2_fiber = h2f.invariants;
    rep.h2_direct = AbelianGroupInvariants::free(rank * rank);

    InducedH2Kernel ind = clock.run("induced_kernel", [&] { return induced_h2_kernel(sd); });
    rep.kernel = ind.invariants;
    rep.kernel_surjective = ind.surjective;
    add_claim(rep, "h2_onto", "H2(F x_Q F) -> H2(F x F) is onto", ind.surjective);
    add_claim(rep, "tensor_square_onto",
              "(R_ab (x) R_ab)_Q surjects onto F_ab (x) F_ab",
              clock.run("tensor_square", [&] { return tensor_square_surjects(sd); }));

    FinitePresentation big = clock.run("semidirect", [&] { return semidirect_product_rf(sd); });
    rep.h1_fiber_presented = clock.run("h1_semidirect", [&] { return h1(big); });
    add_claim(rep, "h1_cross_check",
              "H1 of the materialized semidirect presentation matches the five-term value",
              rep.h1_fiber_presented == rep.five_term.h1_fiber);

    // choose the working presentation of F x_Q F
    FinitePresentation fiber = big;
    std::vector<int> gen_origin(size_t(big.rank));
    for (int g = 0; g < big.rank; ++g) gen_origin[size_t(g)] = g;
    std::vector<int> relator_fate(big.relators.size());
    for (size_t i = 0; i < big.relators.size(); ++i) relator_fate[i] = int(i);
    rep.tietze_minimal = true;
    if (opt.use_tietze) {
        TietzeResult tz = clock.run("tietze", [&] { return tietze_eliminate(big, opt.tietze_budget); });
        fiber = tz.pres;
        gen_origin = tz.surviving_generator;
        relator_fate = tz.relator_fate;
        rep.tietze_minimal = tz.minimal_reached;
    }
    rep.fiber_generators = fiber.rank;
    rep.fiber_relators = int(fiber.relators.size());

    // Stallings comparison against F x F through the inclusion
    FinitePresentation direct = direct_product(free_presentation(rank), free_presentation(rank));
    std::vector<Word> all_images = fiber_inclusion_images(sd);
    PresentationMorphism f;
    f.source = fiber;
    f.target = direct;
    for (int g = 0; g < fiber.rank; ++g) f.images.push_back(all_images[size_t(gen_origin[size_t(g)])]);
    rep.stallings = clock.run("stallings", [&] {
        return stallings_compare(fiber, direct, f, opt.class_bound, opt.nq);
    });
    for (const auto& v : rep.stallings)
        add_claim(rep, "stallings_iso_" + std::to_string(v.weight),
                  "gamma_" + std::to_string(v.weight) + " section map is an isomorphism",
                  v.isomorphism,
                  v.source.to_string() + " -> " + v.target.to_string());

    // Dwyer filtration of the working presentation's free central extension
    DwyerData dd = clock.run("dwyer", [&] { return dwyer_data(fiber, opt.class_bound, opt.nq); });
    rep.kernel_central = true; // dwyer_data verifies centrality of every relator class
    add_claim(rep, "kernel_central", "relator classes are central in E/[E,K]", rep.kernel_central);

    // kernel basis columns, folded through the Tietze relator fate
    std::vector<std::vector<Int>> folded;
    for (int c = 0; c < ind.kernel_vectors.cols(); ++c) {
        std::vector<Int> v(fiber.relators.size());
        for (int j = 0; j < ind.kernel_vectors.rows(); ++j) {
            int t = relator_fate[size_t(j)];
            if (t >= 0) v[size_t(t)] += ind.kernel_vectors(j, c);
        }
        folded.push_back(std::move(v));
    }
    int min_depth = opt.class_bound + 1;
    clock.run("dwyer_containment", [&] {
        for (const auto& v : folded) min_depth = std::min(min_depth, dwyer_depth_of_combination(dd, v));
    });
    for (int k = 1; k <= opt.class_bound; ++k) {
        DwyerRow row;
        row.k = k;
        row.phi = dwyer_phi_from_data(dd, k);
        row.kernel_contained = min_depth >= k + 1;
        add_claim(rep, "dwyer_contains_" + std::to_string(k),
                  "image of ker{H2(FxQF)->H2(FxF)} lies in phi_" + std::to_string(k + 1),
                  row.kernel_contained, "phi = " + row.phi.to_string());
        rep.dwyer.push_back(std::move(row));
    }
    rep.dwyer_stabilized = rep.dwyer.size() >= 2 &&
                           rep.dwyer[rep.dwyer.size() - 1].phi == rep.dwyer[rep.dwyer.size() - 2].phi;

    const bool kernel_nonzero = !rep.kernel.trivial();
    if (e.h3_claim) {
        add_claim(rep, "kernel_nonzero",
                  "ker{H2(F x_Q F) -> H2(F x F)} != 0 (forced by H3(Q) = " + *e.h3_claim + ")",
                  kernel_nonzero);
        rep.not_relatively_perfect = kernel_nonzero && rep.kernel_central;
        add_claim(rep, "not_relatively_perfect",
                  "the kernel is central and nonzero, hence not relatively perfect",
                  rep.not_relatively_perfect);
    } else {
        add_claim(rep, "kernel_value", "kernel computed (no H3 claim: no Main-Theorem assertion)",
                  true, "kernel = " + rep.kernel.to_string(), /*asserted=*/false);
    }

    if (rep.exit_code != 2) {
        bool all = true;
        for (const auto& c : rep.checklist)
            if (c.asserted && !c.pass) all = false;
        rep.exit_code = all ? 0 : 3;
    }
    return rep;
}

// --- rendering -----------------------------------------------------------------

namespace {

json op_value(const char* op, const json& v) { return json{{"op", op}, {"value", v}}; }

json five_term_to_json(const FiveTermReport& f) {
    return json{
        {"h2_q", op_value("schur_multiplier_finite", invariants_to_json(f.h2q))},
        {"h1_fiber", op_value("five_term_check", invariants_to_json(f.h1_fiber))},
        {"h1_direct", op_value("five_term_check", invariants_to_json(f.h1_direct))},
        {"h1_q", op_value("h1", invariants_to_json(f.h1q))},
        {"inc_cokernel", op_value("five_term_check", invariants_to_json(f.inc_cokernel))},
        {"exact",
         json{{"at_h2_q", f.exact_at_h2q},
              {"at_h1_fiber", f.exact_at_h1_fiber},
              {"at_h1_direct", f.exact_at_h1_direct},
              {"at_h1_q", f.exact_at_h1q},
              {"all", f.exact()}}},
    };
}

} // namespace

std::string report_to_json(const ConstructionReport& r, bool with_timings) {
    json j;
    j["inputs"] = {{"entry", r.entry},
                   {"class_bound", r.class_bound},
                   {"presentation_variant", r.presentation_variant}};
    j["version"] = r.version;
    j["hypotheses"] = {{"ok", r.hypotheses_ok}, {"note", r.hypotheses_note}};
    j["exit_code"] = r.exit_code;
    j["provenance_notes"] = nlohmann::json::array(
        {"transfinite statements (gamma_omega != gamma_{omega+1} = 1 at ordinal omega, and the "
         "identification of the computed kernel with ker{G -> E(G)}) are not machine-checkable; "
         "the checklist asserts their finite-stage and homological equivalents",
         "residual nilpotence of F x F is used as known background, not verified here",
         "H3(Q) enters only as catalog metadata (h3_claim); it is never computed",
         "no check is attempted that relatively perfect subgroups are normally generated by "
         "finitely many elements (no algorithm for this is implemented)"});

    json c;
    c["balanced"] = op_value("is_balanced", r.balanced);
    c["h1_q"] = op_value("h1", invariants_to_json(r.h1_q));
    if (r.hypotheses_ok) {
        c["order_q"] = op_value("todd_coxeter", r.order_q);
        c["rank_r"] = op_value("schreier_data", r.rank_r);
        c["superperfect"] = op_value("is_superperfect", r.superperfect);
        c["five_term"] = five_term_to_json(r.five_term);
        c["h1_fiber_presented"] = op_value("h1", invariants_to_json(r.h1_fiber_presented));
        c["h2_fiber"] = op_value("h2_fiber_product", invariants_to_json(r.h2_fiber));
        c["h2_direct"] = op_value("h1_free_with_coefficients", invariants_to_json(r.h2_direct));
        c["induced_h2_surjective"] = op_value("induced_h2_kernel", r.kernel_surjective);
        c["gamma_omega"] = json{
            {"op", "induced_h2_kernel"},
            {"value", invariants_to_json(r.kernel)},
            {"label", "machine-computed: ker{H2(F x_Q F) -> H2(F x F)}; its identification with "
                      "gamma_omega(G) and with ker{G -> E(G)} is supplied by the cited theory, "
                      "not recomputed here"}};
        c["fiber_presentation"] = json{{"generators", r.fiber_generators},
                                       {"relators", r.fiber_relators},
                                       {"tietze_minimal", r.tietze_minimal}};
        json st = json::array();
        for (const auto& v : r.stallings)
            st.push_back(json{{"weight", v.weight},
                              {"source", invariants_to_json(v.source)},
                              {"target", invariants_to_json(v.target)},
                              {"well_defined", v.well_defined},
                              {"isomorphism", v.isomorphism},
                              {"op", "stallings_compare"}});
        c["stallings"] = st;
        json dw = json::array();
        for (const auto& row : r.dwyer)
            dw.push_back(json{{"k", row.k},
                              {"phi", invariants_to_json(row.phi)},
                              {"kernel_contained", row.kernel_contained},
                              {"op", "dwyer_phi"}});
        c["dwyer"] = json{{"table", dw}, {"stabilized", r.dwyer_stabilized}};
        c["not_relatively_perfect"] = op_value("run_main_construction", r.not_relatively_perfect);
    }
    j["computed"] = c;

    json cl = json::array();
    for (const auto& cc : r.checklist)
        cl.push_back(json{{"id", cc.id},
                          {"statement", cc.statement},
                          {"pass", cc.pass},
                          {"asserted", cc.asserted},
                          {"detail", cc.detail}});
    j["checklist"] = cl;

    if (with_timings) {
        json t = json::array();
        for (const auto& [k, v] : r.timings_seconds) t.push_back(json{{"stage", k}, {"seconds", v}});
        j["timings"] = t;
    }
    return j.dump(2) + "\n";
}

std::string report_to_text(const ConstructionReport& r) {
    std::ostringstream os;
    os << "construction report: " << r.entry << " (" << r.version << ")\n";
    os << "  variant=" << r.presentation_variant << " class_bound=" << r.class_bound << "\n";
    if (!r.hypotheses_ok || !r.hypotheses_note.empty())
        os << "  *** " << (r.hypotheses_ok ? r.hypotheses_note : "hypotheses violated: " + r.hypotheses_note)
           << " ***\n";
    if (r.hypotheses_ok) {
        os << "  |Q| = " << r.order_q << ", rank(R) = " << r.rank_r << "\n";
        os << "  H1(Q) = " << r.h1_q.to_string() << ", superperfect = " << (r.superperfect ? "yes" : "no")
           << "\n";
        os << "  H1(F x_Q F) = " << r.five_term.h1_fiber.to_string()
           << ", H1(F x F) = " << r.five_term.h1_direct.to_string()
           << ", five-term exact = " << (r.five_term.exact() ? "yes" : "no") << "\n";
        os << "  H2(F x_Q F) = " << r.h2_fiber.to_string() << ", H2(F x F) = " << r.h2_direct.to_string()
           << "\n";
        os << "  kernel (= gamma_omega(G), identified) = " << r.kernel.to_string()
           << ", onto = " << (r.kernel_surjective ? "yes" : "no") << "\n";
        os << "  fiber presentation: " << r.fiber_generators << " generators, " << r.fiber_relators
           << " relators" << (r.tietze_minimal ? "" : " (tietze budget hit: non-minimal)") << "\n";
        for (const auto& v : r.stallings)
            os << "  stallings k=" << v.weight << ": " << v.source.to_string() << " -> "
               << v.target.to_string() << " iso=" << (v.isomorphism ? "yes" : "no") << "\n";
        for (const auto& row : r.dwyer)
            os << "  dwyer k=" << row.k << ": phi_" << row.k + 1 << " = " << row.phi.to_string()
               << ", kernel contained = " << (row.kernel_contained ? "yes" : "no") << "\n";
    }
    os << "  claim checklist:\n";
    for (const auto& c : r.checklist)
        os << "    [" << (c.pass ? "PASS" : "FAIL") << (c.asserted ? "" : "*") << "] " << c.id << ": "
           << c.statement << (c.detail.empty() ? "" : " [" + c.detail + "]") << "\n";
    os << "  timings:\n";
    for (const auto& [k, v] : r.timings_seconds) os << "    " << k << ": " << v << "s\n";
    os << "  exit code: " << r.exit_code << "\n";
    return os.str();
}

std::string dwyer_table_csv(const ConstructionReport& r) {
    std::ostringstream os;
    os << "k,phi,kernel_contained\n";
    for (const auto& row : r.dwyer)
        os << row.k << "," << row.phi.to_string() << "," << (row.kernel_contained ? 1 : 0) << "\n";
    return os.str();
}

} // namespace fpg
