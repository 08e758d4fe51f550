#include "fpg/homology.hpp"

namespace fpg {

CoefficientModule rab_module(const SchreierData& sd) {
    return {sd.basis_count(), action_on_Rab(sd)};
}

CoefficientModule trivial_module(int acting_rank, int dimension) {
    CoefficientModule m;
    m.dimension = dimension;
    for (int i = 0; i < acting_rank; ++i) m.action.push_back(IntMatrix::identity(dimension));
    return m;
}

IntMatrix relator_exponent_matrix(const FinitePresentation& p) {
    IntMatrix e(p.rank, int(p.relators.size()));
    for (size_t r = 0; r < p.relators.size(); ++r) {
        auto v = exponent_sums(p.relators[r], p.rank);
        for (int g = 0; g < p.rank; ++g) e(g, int(r)) = v[size_t(g)];
    }
    return e;
}

AbelianGroupInvariants h1(const FinitePresentation& p) {
    return cokernel_invariants(relator_exponent_matrix(p));
}

IntMatrix coinvariance_lattice(const CoefficientModule& m) {
    IntMatrix c(m.dimension, 0);
    for (const IntMatrix& a : m.action) {
        for (int j = 0; j < m.dimension; ++j) {
            std::vector<Int> col = a.column(j);
            col[size_t(j)] -= 1;
            c.append_column(col);
        }
    }
    return c;
}

AbelianGroupInvariants schur_multiplier_finite(const FinitePresentation& p, const SchreierData& sd) {
    if (p.rank != sd.table.rank())
        throw DomainError("schur_multiplier_finite: presentation does not match the Schreier data");
    IntMatrix inc = inclusion_to_Fab(sd);
    IntMatrix coin = coinvariance_lattice(rab_module(sd));
    IntMatrix ker = kernel_basis(inc);
    // coinvariance relations die under inc (conjugation fixes exponent sums)
    if (!lattice_contains_all(ker, coin))
        throw Error("schur_multiplier_finite: coinvariance lattice escapes ker(inc); internal bug");
    return quotient_invariants(coin, ker);
}

bool is_superperfect(const FinitePresentation& p, const SchreierData& sd) {
    return h1(p).trivial() && schur_multiplier_finite(p, sd).trivial();
}

H1FreeResult h1_free_with_coefficients(int rank, const CoefficientModule& m) {
    if (int(m.action.size()) != rank)
        throw DomainError("h1_free_with_coefficients: need one action matrix per generator");
    IntMatrix stacked(m.dimension, rank * m.dimension);
    for (int i = 0; i < rank; ++i)
        for (int c = 0; c < m.dimension; ++c)
            for (int r = 0; r < m.dimension; ++r)
                stacked(r, i * m.dimension + c) = m.action[size_t(i)](r, c) - (r == c ? 1 : 0);
    H1FreeResult res;
    res.kernel = kernel_basis(stacked);
    res.invariants = AbelianGroupInvariants::free(res.kernel.cols());
    return res;
}

H1FreeResult h2_fiber_product(const SchreierData& sd) {
    return h1_free_with_coefficients(sd.table.rank(), rab_module(sd));
}

namespace {

bool lattice_equal(const IntMatrix& a, const IntMatrix& b) {
    return lattice_canonical_basis(a) == lattice_canonical_basis(b);
}

} // namespace

FiveTermReport five_term_check(const SchreierData& sd) {
    const int rank = sd.table.rank(), nb = sd.basis_count();
    const FinitePresentation& p = sd.table.presentation();

    IntMatrix inc = inclusion_to_Fab(sd);              // rank x nb
    IntMatrix coin = coinvariance_lattice(rab_module(sd)); // in Z^nb
    IntMatrix erel = relator_exponent_matrix(p);       // rank x #rel

    FiveTermReport rep;
    IntMatrix ker_inc = kernel_basis(inc);
    rep.h2q = quotient_invariants(coin, ker_inc);
    rep.h1q = cokernel_invariants(erel);
    rep.h1_direct = AbelianGroupInvariants::free(2 * rank);

    // H1(F x_Q F) = (R_ab)_F + F_ab presented on Z^{nb + rank}
    IntMatrix amb_rel(nb + rank, 0);
    for (int c = 0; c < coin.cols(); ++c) {
        std::vector<Int> col(static_cast<size_t>(nb + rank));
        for (int i = 0; i < nb; ++i) col[size_t(i)] = coin(i, c);
        amb_rel.append_column(col);
    }
    rep.h1_fiber = cokernel_invariants(amb_rel);

    // beta = inc + id : Z^{nb+rank} -> Z^{2 rank}
    IntMatrix beta(2 * rank, nb + rank);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < nb; ++j) beta(i, j) = inc(i, j);
    for (int i = 0; i < rank; ++i) beta(rank + i, nb + i) = 1;
    rep.inc_matrix = beta;
    rep.inc_cokernel = cokernel_invariants(beta);

    // exactness at H2(Q): ker(alpha) = (ker_inc meet amb relations) mod coin = 0
    rep.exact_at_h2q = lattice_equal(lattice_intersection(ker_inc, coin), coin);

    // exactness at H1(F x_Q F): ker(beta) + rel = im(alpha) + rel
    for (int c = 0; c < amb_rel.cols(); ++c) {
        std::vector<Int> img = beta * amb_rel.column(c);
        for (const Int& x : img)
            if (x != 0) throw Error("five_term_check: beta not defined on the quotient; internal bug");
    }
    IntMatrix ker_beta = kernel_basis(beta);
    IntMatrix emb_ker_inc(nb + rank, 0);
    for (int c = 0; c < ker_inc.cols(); ++c) {
        std::vector<Int> col(static_cast<size_t>(nb + rank));
        for (int i = 0; i < nb; ++i) col[size_t(i)] = ker_inc(i, c);
        emb_ker_inc.append_column(col);
    }
    rep.exact_at_h1_fiber =
        lattice_equal(lattice_sum(ker_beta, amb_rel), lattice_sum(emb_ker_inc, amb_rel));

    // exactness at H1(F x F): im(beta) = ker{gamma} = E + second factor
    IntMatrix ker_gamma(2 * rank, 0);
    for (int c = 0; c < erel.cols(); ++c) {
        std::vector<Int> col(static_cast<size_t>(2 * rank));
        for (int i = 0; i < rank; ++i) col[size_t(i)] = erel(i, c);
        ker_gamma.append_column(col);
    }
    for (int i = 0; i < rank; ++i) {
        std::vector<Int> col(static_cast<size_t>(2 * rank));
        col[size_t(rank + i)] = 1;
        ker_gamma.append_column(col);
    }
    rep.exact_at_h1_direct = lattice_equal(lattice_canonical_basis(beta), ker_gamma);

    // exactness at H1(Q): gamma is the projection composed with the quotient
    IntMatrix proj_plus_rel(rank, 0);
    for (int i = 0; i < rank; ++i) {
        std::vector<Int> col(static_cast<size_t>(rank));
        col[size_t(i)] = 1;
        proj_plus_rel.append_column(col);
    }
    rep.exact_at_h1q = cokernel_invariants(hstack(proj_plus_rel, erel)).trivial();
    return rep;
}

InducedH2Kernel induced_h2_kernel(const SchreierData& sd) {
    const int rank = sd.table.rank(), nb = sd.basis_count();
    H1FreeResult h2 = h2_fiber_product(sd);
    IntMatrix inc = inclusion_to_Fab(sd);

    // block-diagonal application of inc to each coefficient slot
    IntMatrix induced(rank * rank, h2.kernel.cols());
    for (int c = 0; c < h2.kernel.cols(); ++c)
        for (int i = 0; i < rank; ++i)
            for (int r = 0; r < rank; ++r) {
                Int s = 0;
                for (int j = 0; j < nb; ++j)
                    if (inc(r, j) != 0) s += inc(r, j) * h2.kernel(i * nb + j, c);
                induced(i * rank + r, c) = s;
            }

    InducedH2Kernel res;
    res.induced_on_h2 = induced;
    res.surjective = cokernel_invariants(induced).trivial();
    IntMatrix ker_c = kernel_basis(induced);
    res.kernel_vectors = h2.kernel * ker_c;
    res.invariants = AbelianGroupInvariants::free(ker_c.cols());
    return res;
}

AbelianGroupInvariants coinvariants_tensor_square(const SchreierData& sd, size_t max_cells) {
    const int rank = sd.table.rank(), nb = sd.basis_count();
    const size_t dim = size_t(nb) * size_t(nb);
    if (dim * dim > max_cells)
        throw LimitError("coinvariants_tensor_square: dimension " + std::to_string(dim) +
                         " exceeds the resource budget");
    auto acts = action_on_Rab(sd);
    IntMatrix stacked(int(dim), rank * int(dim));
    for (int a = 0; a < rank; ++a) {
        const IntMatrix& m = acts[size_t(a)];
        // (A (x) A)[(p,q),(r,s)] = A(p,r) A(q,s)
        for (int r = 0; r < nb; ++r)
            for (int s = 0; s < nb; ++s) {
                int colidx = a * int(dim) + r * nb + s;
                for (int pi = 0; pi < nb; ++pi) {
                    if (m(pi, r) == 0) continue;
                    for (int q = 0; q < nb; ++q)
                        if (m(q, s) != 0) stacked(pi * nb + q, colidx) = m(pi, r) * m(q, s);
                }
                stacked(r * nb + s, colidx) -= 1;
            }
    }
    return cokernel_invariants(stacked);
}

bool tensor_square_surjects(const SchreierData& sd) {
    const int rank = sd.table.rank(), nb = sd.basis_count();
    IntMatrix inc = inclusion_to_Fab(sd);
    // lattice spanned by inc_m (x) inc_n inside Z^{rank^2}
    HnfBuilder h(rank * rank);
    for (int m = 0; m < nb; ++m)
        for (int n = 0; n < nb; ++n) {
            std::vector<Int> v(size_t(rank) * size_t(rank));
            for (int i = 0; i < rank; ++i)
                for (int j = 0; j < rank; ++j) v[size_t(i * rank + j)] = inc(i, m) * inc(j, n);
            h.add_row(std::move(v));
        }
    // rows span the image lattice; surjective iff it is everything
    if (h.rank() != rank * rank) return false;
    IntMatrix hm = h.matrix();
    for (int i = 0; i < hm.rows(); ++i)
        if (hm(i, i) != 1) return false;
    return true;
}

} // namespace fpg
