#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpg/homology.hpp"
#include "fpg/nilpotent.hpp"

namespace fpg {

inline constexpr const char* kToolkitVersion = "fpg 0.1.0";

struct GroupCatalogEntry {
    std::string name;
    FinitePresentation pres;
    std::optional<long long> expected_order;
    std::optional<AbelianGroupInvariants> expected_h1;
    std::optional<std::string> h3_claim; // literature value, never computed here
};

struct Catalog {
    std::vector<GroupCatalogEntry> entries;
};

Catalog parse_catalog(const std::string& json_text);
Catalog load_catalog(const std::string& path);
const GroupCatalogEntry& find_entry(const Catalog& c, const std::string& name);
std::string builtin_catalog_text(); // the shipped entries, also installed as data/catalog.json

nlohmann::json invariants_to_json(const AbelianGroupInvariants& inv);

struct MainOptions {
    int class_bound = 3;
    bool use_tietze = true; // materialize F x_Q F on the reduced presentation
    size_t tietze_budget = 20000;
    long long max_cosets = 1'000'000;
    double budget_seconds = 0; // per stage; 0 = unlimited
    NqOptions nq;
};

struct ClaimCheck {
    std::string id, statement, detail;
    bool pass = false;
    bool asserted = true; // false: reported but not part of the exit status
};

struct DwyerRow {
    int k = 0;
    AbelianGroupInvariants phi;           // phi_{k+1} at class k+1
    bool kernel_contained = false;        // image of the H2 kernel lies in phi_{k+1}
};

struct ConstructionReport {
    std::string entry;
    std::string presentation_variant; // "big" or "tietze"
    int class_bound = 0;
    std::string version = kToolkitVersion;

    bool hypotheses_ok = false;
    std::string hypotheses_note;

    bool balanced = false;
    AbelianGroupInvariants h1_q;
    long long order_q = 0;
    int rank_r = 0;
    bool superperfect = false;
    FiveTermReport five_term;
    AbelianGroupInvariants h1_fiber_presented; // from the materialized presentation
    AbelianGroupInvariants h2_fiber;
    AbelianGroupInvariants h2_direct;
    AbelianGroupInvariants kernel; // = gamma_omega(G), identified (not computed transfinite)
    bool kernel_surjective = false;
    int fiber_generators = 0, fiber_relators = 0; // of the variant actually used
    bool tietze_minimal = false;
    std::vector<WeightVerdict> stallings;
    std::vector<DwyerRow> dwyer;
    bool dwyer_stabilized = false;
    bool kernel_central = false;
    bool not_relatively_perfect = false;

    std::vector<ClaimCheck> checklist;
    std::vector<std::pair<std::string, double>> timings_seconds;
    int exit_code = 0; // 0 = claims pass, 2 = hypotheses violated, 3 = claim failed
};

ConstructionReport run_main_construction(const GroupCatalogEntry& e, const MainOptions& opt = {});

// Canonical JSON: key-sorted, two-space indent, newline-terminated, stable
// across runs (timings are excluded unless asked for).
std::string report_to_json(const ConstructionReport& r, bool with_timings = false);
std::string report_to_text(const ConstructionReport& r);
std::string dwyer_table_csv(const ConstructionReport& r);

} // namespace fpg
