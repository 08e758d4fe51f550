#pragma once

#include "fpg/schreier.hpp"

namespace fpg {

// Z-module with an action of a free group: one unimodular matrix per
// generator. Relators of the quotient act trivially when the module is a
// Q-module (checked where it matters).
struct CoefficientModule {
    int dimension = 0;
    std::vector<IntMatrix> action;
};

CoefficientModule rab_module(const SchreierData& sd);
CoefficientModule trivial_module(int acting_rank, int dimension);

// rank x #relators exponent-sum matrix.
IntMatrix relator_exponent_matrix(const FinitePresentation& p);

// H_1 = cokernel of the relator exponent matrix.
AbelianGroupInvariants h1(const FinitePresentation& p);

// Coinvariance lattice: columns of (A_1 - I | ... | A_rank - I).
IntMatrix coinvariance_lattice(const CoefficientModule& m);

// Hopf / five-term: ker{ (R_ab)_F -> F_ab } for the finite quotient realized
// by sd.
AbelianGroupInvariants schur_multiplier_finite(const FinitePresentation& p, const SchreierData& sd);

bool is_superperfect(const FinitePresentation& p, const SchreierData& sd);

struct H1FreeResult {
    IntMatrix kernel;                 // columns: basis of ker(sum (A_i - I))
    AbelianGroupInvariants invariants; // free, of rank kernel.cols()
};

// H_1(F; M) = ker{ M^rank -> M, (m_i) -> sum (A_i - I) m_i }: the standard
// free-resolution instantiation. Blocks are stacked i-major.
H1FreeResult h1_free_with_coefficients(int rank, const CoefficientModule& m);

// H_2(F x_Q F) via H_1(F; R_ab); kernel columns live in Z^{rank * basis}
// and double as relator-class coordinates of the semidirect presentation.
H1FreeResult h2_fiber_product(const SchreierData& sd);

struct FiveTermReport {
    AbelianGroupInvariants h2q, h1_fiber, h1_direct, h1q;
    AbelianGroupInvariants inc_cokernel; // coker{H_1(FxQF) -> H_1(FxF)}
    IntMatrix inc_matrix;                // the (inc_* + id) block matrix
    bool exact_at_h2q = false, exact_at_h1_fiber = false;
    bool exact_at_h1_direct = false, exact_at_h1q = false;
    bool exact() const {
        return exact_at_h2q && exact_at_h1_fiber && exact_at_h1_direct && exact_at_h1q;
    }
};

// 0 -> H2(Q) -> H1(F x_Q F) -> H1(F x F) -> H1(Q) -> 0, junction by junction.
FiveTermReport five_term_check(const SchreierData& sd);

struct InducedH2Kernel {
    AbelianGroupInvariants invariants; // of ker{H2(FxQF) -> H2(FxF)}
    bool surjective = false;           // image is all of Z^{rank^2}
    IntMatrix kernel_vectors;          // columns in Z^{rank * basis}
    IntMatrix induced_on_h2;           // rank^2 x rank(H2) matrix of the map
};

// The induced map applies inc coordinate-slot-wise to the h2_fiber_product
// kernel basis, landing in H2(F x F) = Z^{rank^2}.
InducedH2Kernel induced_h2_kernel(const SchreierData& sd);

// H_0(Q; R_ab (x) R_ab): cokernel of the stacked (A_i (x) A_i - I).
// Quadratic in the basis count; refuses when dimension^2 exceeds max_cells.
AbelianGroupInvariants coinvariants_tensor_square(const SchreierData& sd,
                                                  size_t max_cells = 4'000'000);

// Cheap surjectivity of (R_ab (x) R_ab)_Q onto F_ab (x) F_ab through inc (x) inc.
bool tensor_square_surjects(const SchreierData& sd);

} // namespace fpg
