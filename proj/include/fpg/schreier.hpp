#pragma once

#include <utility>
#include <vector>

#include "fpg/coset_table.hpp"
#include "fpg/zlinalg.hpp"

namespace fpg {

// Reidemeister-Schreier data for R = ker(F ->> Q) read off a complete coset
// table: a prefix-closed transversal (BFS from coset 0), and the free basis
// of R indexed by the non-tree edges (coset, generator). Tree edges carry
// trivial Schreier elements and are excluded, so
//   basis_count = 1 + |Q| * (rank F - 1).
struct SchreierData {
    CosetTable table;
    std::vector<Word> transversal;        // one word of F per coset
    std::vector<std::pair<int, int>> basis; // (coset, generator) per basis element
    std::vector<int> edge_basis;          // (coset * rank + gen) -> basis index or -1

    int basis_count() const { return int(basis.size()); }
};

SchreierData schreier_data(const CosetTable& t);

// The basis element a_m as a word of F: transversal(c) g transversal(c g)^-1.
Word expand_basis_element(const SchreierData& sd, int m);

// Rewrites w in R as a word over the basis alphabet; DomainError if w is not
// in R (does not trace back to coset 0). Expanding the result through the
// basis definitions recovers w up to free reduction.
Word rewrite_in_R(const SchreierData& sd, const Word& w);

// Conjugation action of the F-generators on R_ab: column m of the matrix for
// x is the class of rewrite(x^-1 a_m x). Unimodular; relators of Q act as
// the identity.
std::vector<IntMatrix> action_on_Rab(const SchreierData& sd);

// rank(F) x basis_count matrix of exponent sums of the basis expansions;
// computes inc_*: R_ab -> F_ab.
IntMatrix inclusion_to_Fab(const SchreierData& sd);

} // namespace fpg
