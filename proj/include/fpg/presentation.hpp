#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fpg/words.hpp"

namespace fpg {

// Finite presentation <x_1..x_rank | relators>. Relators are stored reduced
// and nonempty; freely trivial relators are dropped (with a warning) rather
// than rejected, since Tietze steps routinely create them.
struct FinitePresentation {
    int rank = 0;
    std::vector<std::string> names; // empty, or one label per generator
    std::vector<Word> relators;

    std::string generator_name(int g) const;
};

// Validates indices, reduces relators, drops empty ones. Warnings (one line
// per dropped relator) are appended to `warnings` when given.
FinitePresentation make_presentation(int rank, std::vector<Word> relators,
                                     std::vector<std::string> names = {},
                                     std::vector<std::string>* warnings = nullptr);

// Parses either a relator word or a relation "u = v" (converted to u v^-1).
Word parse_relator(std::string_view text, int rank, const std::vector<std::string>& names);

bool is_balanced(const FinitePresentation& p);

// <x_i | [x_j, r_k] for all j, k>; presents F/[F,R].
FinitePresentation free_central_extension(const FinitePresentation& p);

// Disjoint generators, both relator sets, cross commutators [g1, g2].
FinitePresentation direct_product(const FinitePresentation& p1, const FinitePresentation& p2);

FinitePresentation free_presentation(int rank, std::vector<std::string> names = {});

// A homomorphism candidate between presented groups: one target word per
// source generator. Trivility of relator images is the caller's job to
// certify (see nilpotent::certify_morphism); `certified` records the result.
struct PresentationMorphism {
    FinitePresentation source, target;
    std::vector<Word> images; // one per source generator
    bool certified = false;
};

Word apply_morphism(const PresentationMorphism& f, const Word& w);

// Result of repeated single-occurrence generator elimination.
struct TietzeResult {
    FinitePresentation pres;
    bool minimal_reached = false;             // fixpoint hit within budget
    std::vector<int> surviving_generator;     // new gen index -> original gen index
    std::vector<Word> generator_images;       // original gen -> word over new gens
    // original relator index -> index into pres.relators, or -1 when the
    // relator was consumed by an elimination (or became freely trivial);
    // consumed relators map to the identity class of the relation module.
    std::vector<int> relator_fate;
};

// Eliminates generators that occur exactly once (up to inversion) in some
// relator, substituting throughout, smallest defining relator first. Stops at
// fixpoint, or before any substitution would push a relator beyond
// `max_relator_length` (then minimal_reached = false).
TietzeResult tietze_eliminate(const FinitePresentation& p, size_t max_relator_length);

std::string format_presentation(const FinitePresentation& p);

} // namespace fpg
