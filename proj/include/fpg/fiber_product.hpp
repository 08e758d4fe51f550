#pragma once

#include "fpg/schreier.hpp"

namespace fpg {

// Presentation of R x| F ~= F x_Q F on rank(F) + basis_count generators:
// the F generators come first, then one generator per Schreier basis element
// of R. Relators are ordered i-major: for each F generator x_i and basis
// element a_m, relator index i * basis_count + m is
//   x_i^-1 a_m x_i (rewrite of the conjugate)^-1.
FinitePresentation semidirect_product_rf(const SchreierData& sd);
FinitePresentation semidirect_product_rf(const FinitePresentation& base, const CosetTable& table);

// Iterated fiber product F_n(p) via 1 -> R -> F_n(p) -> F_{n-1}(p) -> 1;
// n = 2 coincides with semidirect_product_rf.
FinitePresentation higher_fiber_product(const SchreierData& sd, int n);

// Images of the semidirect generators under the inclusion F x_Q F -> F x F,
// as words over direct_product(free rankF, free rankF) with the first factor
// leading: x_i maps to y_i z_i, a_m to its expansion written in the y's.
std::vector<Word> fiber_inclusion_images(const SchreierData& sd);

} // namespace fpg
