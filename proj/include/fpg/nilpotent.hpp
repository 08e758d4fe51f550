#pragma once

#include <utility>
#include <vector>

#include "fpg/presentation.hpp"
#include "fpg/zlinalg.hpp"

namespace fpg {

// Sparse normal word over pc generators: (generator, exponent) pairs in
// strictly increasing generator order.
using PcWord = std::vector<std::pair<int, Int>>;
// Dense exponent vector of a collected element.
using PcExp = std::vector<Int>;

// How a pc generator came into existence; drives which relations receive
// tails on the next covering step.
struct PcDefinition {
    enum Kind { Image, Power, Comm } kind = Image;
    int a = -1, b = -1; // Image: source gen a. Power: g_a^{d}. Comm: [g_a, g_b], a > b.
};

// Weighted polycyclic presentation of G/gamma_{cls+1}(G), weight-graded:
// gamma_k of the presented group is the span of the generators of weight
// >= k. Generators are ordered by weight, then by creation order.
struct PcPresentation {
    int ngens = 0;
    int cls = 0;
    std::vector<int> weight;              // per gen
    std::vector<Int> exponent;            // per gen, 0 = infinite order
    std::vector<PcWord> power;            // tail of g_i^{exponent[i]}, gens > i
    std::vector<std::vector<PcWord>> comm; // comm[j][i] = [g_j, g_i] for i < j; empty = trivial
    std::vector<PcDefinition> defs;       // per gen
    std::vector<PcWord> image;            // epimorphism image per source generator
    std::vector<bool> image_is_def;       // per source generator
    std::vector<Word> preimage;           // per gen: a word over the source generators
    std::vector<AbelianGroupInvariants> sections; // gamma_k/gamma_{k+1}, k = 1..cls
    std::vector<int> first_of_weight;     // size cls+2; gens of weight w: [fow[w], fow[w+1])
    FinitePresentation source;

    int gens_of_weight(int w) const { return first_of_weight[size_t(w + 1)] - first_of_weight[size_t(w)]; }
};

struct NqOptions {
    long long collect_budget = 2'000'000'000; // mul_gen steps per quotient run
    double deadline_seconds = 0;              // wall clock for the whole run; 0 = none
};

// Collection from the left. Working elements are dense exponent vectors;
// multiplication by g^e splits off the suffix of heavier generators and
// conjugates it through, with power normalization against the stored tails.
class Collector {
public:
    explicit Collector(const PcPresentation& pc, long long budget = -1);

    const PcPresentation& pc() const { return pc_; }

    PcExp one() const { return PcExp(size_t(pc_.ngens)); }
    bool is_one(const PcExp& a) const;

    void mul_gen(PcExp& a, int g, const Int& e) const;
    void mul(PcExp& a, const PcExp& b) const;
    void mul_word(PcExp& a, const PcWord& w) const;
    PcExp inverse(const PcExp& a) const;
    PcExp pow(PcExp a, Int n) const;
    PcExp commutator(const PcExp& a, const PcExp& b) const;

    // least weight of a nonzero coordinate; cls+1 for the identity
    int weight_of(const PcExp& a) const;

    // evaluation through the epimorphism (generator images cached)
    PcExp eval(const Word& w) const;

    bool commutes_with_everything(const PcExp& a) const;

private:
    const PcPresentation& pc_;
    long long budget_;
    mutable long long ops_ = 0;
    mutable std::vector<PcExp> image_cache_, image_inv_cache_;
    mutable std::vector<bool> image_cached_;

    void tick_() const;
    PcExp conj_gen_(int h, int g, int sign) const;       // g^-sign h g^sign
    PcExp conj_elem_(const PcExp& x, int g, int sign) const;
    void normalize_power_(PcExp& a, int g) const;
};

// Class-by-class nilpotent quotient: covering step with central tails on
// every non-defining relation and non-defining image, consistency and
// relator equations solved by row HNF, survivors adopted as the weight-(c+1)
// layer. Stops early when a layer vanishes (the series has stabilized).
PcPresentation nilpotent_quotient(const FinitePresentation& p, int cls, const NqOptions& opts = {});

// Collects the consistency test words; returns true when all collapse to the
// identity. use_weight_bound = false checks every overlap regardless of
// weight (slower; for tests).
bool pc_consistent(const PcPresentation& pc, bool use_weight_bound = true);

PcExp evaluate(const PcPresentation& pc, const Word& w);
// least k with a nonzero weight-k coordinate; cls+1 when trivial at this class
int weight_of(const PcPresentation& pc, const Word& w);
bool is_trivial_at_class(const PcPresentation& pc, const Word& w);

// Quotient onto class k (drop generators of weight > k).
PcPresentation truncate(const PcPresentation& pc, int k);

// Relation lattice of the weight-k section (columns in Z^{gens_of_weight(k)}).
IntMatrix section_relation_lattice(const PcPresentation& pc, int k);

// Evaluates every source relator image under f in the target quotient;
// true iff all collapse (Stallings hypothesis certificate).
bool certify_morphism(const PresentationMorphism& f, const PcPresentation& target_nq);

struct WeightVerdict {
    int weight = 0;
    AbelianGroupInvariants source, target;
    bool well_defined = false;
    bool isomorphism = false;
};

// Per-weight verdicts on the induced maps gamma_k/gamma_{k+1}(A) ->
// gamma_k/gamma_{k+1}(B) for k <= cls. Throws DomainError unless f's relator
// images evaluate trivially in B's quotient.
std::vector<WeightVerdict> stallings_compare(const FinitePresentation& a,
                                             const FinitePresentation& b,
                                             const PresentationMorphism& f, int cls,
                                             const NqOptions& opts = {});

// Finite-stage Dwyer filtration machinery for G presented by p, computed in
// W = F/[F,R] via the relator classes (central in W). The map
//   m : Z^{#relators} -> W/gamma_{kmax+2},  v -> prod relator_class[i]^{v_i}
// is a homomorphism into the center; stage w records a basis of
// V_w = {v : m(v) in gamma_w} and the weight-w block of m on it, which is
// linear there. phi_{k+1}(G) = m(V_{k+1}) inside gamma_{k+1}.
struct DwyerStage {
    IntMatrix v_basis;           // columns: basis of V_w in Z^{#relators}
    IntMatrix block_map;         // weight-w coordinates of m on that basis
    IntMatrix section_relations; // relation lattice of the weight-w section
};

struct DwyerData {
    PcPresentation w_nq;              // nilpotent quotient of W at class kmax+1
    std::vector<PcExp> relator_class; // one central element per relator of p
    std::vector<DwyerStage> stages;   // stages[i] is weight w = i+1, i = 0..kmax
};

DwyerData dwyer_data(const FinitePresentation& p, int kmax, const NqOptions& opts = {});

// Invariants of (central span of relator classes) meet gamma_{k+1}, inside
// the class-(k+1) quotient of W: the finite-stage phi_{k+1}(G).
AbelianGroupInvariants dwyer_phi(const FinitePresentation& p, int k, const NqOptions& opts = {});
AbelianGroupInvariants dwyer_phi_from_data(const DwyerData& dd, int k);

// Largest d <= kmax+1 such that prod_i relator_class[i]^{coeffs[i]} lies in
// gamma_{d+1} of the class-(kmax+1) quotient (kmax+1 means trivial there).
int dwyer_depth_of_combination(const DwyerData& dd, const std::vector<Int>& coeffs);

} // namespace fpg
