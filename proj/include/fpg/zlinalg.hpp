#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "fpg/errors.hpp"

namespace fpg {

using Int = mpz_class;

// Dense matrix of arbitrary-precision integers, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(size_t(rows) * size_t(cols)) {}

    static IntMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Int& operator()(int i, int j) { return e_[size_t(i) * size_t(cols_) + size_t(j)]; }
    const Int& operator()(int i, int j) const { return e_[size_t(i) * size_t(cols_) + size_t(j)]; }

    bool operator==(const IntMatrix&) const = default;
    bool is_zero() const;

    IntMatrix transposed() const;
    void append_column(const std::vector<Int>& col);
    std::vector<Int> column(int j) const;

    std::string to_string() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Int> e_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
std::vector<Int> operator*(const IntMatrix& a, const std::vector<Int>& v);
IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);
IntMatrix vstack(const IntMatrix& a, const IntMatrix& b);

// Invariant-factor description of a finitely generated abelian group:
// free rank plus torsion coefficients d1 | d2 | ... , each >= 2.
struct AbelianGroupInvariants {
    int free_rank = 0;
    std::vector<Int> torsion;

    bool trivial() const { return free_rank == 0 && torsion.empty(); }
    bool operator==(const AbelianGroupInvariants&) const = default;
    std::string to_string() const; // "0", "Z^4", "Z/2", "Z + Z/2 + Z/6", ...

    static AbelianGroupInvariants free(int rank) { return {rank, {}}; }
};

// Exact determinant by fraction-free (Bareiss) elimination.
Int determinant(const IntMatrix& m);

// Rank over Q, also by Bareiss elimination. Independent of the HNF/SNF path.
int rank_over_q(const IntMatrix& m);

struct SmithResult {
    IntMatrix s, u, v; // u * m * v == s, u and v unimodular, s diagonal with d1 | d2 | ...
};

// Smith normal form with transforms. Pivot choice: smallest nonzero
// absolute value, ties to lowest (row, col); deterministic.
SmithResult smith_normal_form(const IntMatrix& m);

// Just the diagonal invariant factors (cheaper: no transform tracking).
std::vector<Int> smith_invariant_factors(const IntMatrix& m);

// Columns form a basis of the full (saturated) kernel lattice {x : m x = 0}.
IntMatrix kernel_basis(const IntMatrix& m);

// Invariants of Z^rows / column-lattice(m).
AbelianGroupInvariants cokernel_invariants(const IntMatrix& m);

// Invariants of the subgroup of Z^rows generated by the columns of m
// (isomorphic to Z^rank since a lattice is free).
int column_lattice_rank(const IntMatrix& m);

// --- lattice arithmetic on column lattices in Z^n ------------------------

// Canonical (column-HNF) basis of the lattice spanned by the columns.
IntMatrix lattice_canonical_basis(const IntMatrix& m);

IntMatrix lattice_sum(const IntMatrix& a, const IntMatrix& b);
IntMatrix lattice_intersection(const IntMatrix& a, const IntMatrix& b);
IntMatrix lattice_saturation(const IntMatrix& a);

bool lattice_contains(const IntMatrix& super, const std::vector<Int>& v);
bool lattice_contains_all(const IntMatrix& super, const IntMatrix& sub);

// Coordinates of v in terms of super's columns; DomainError if not contained.
std::vector<Int> lattice_solve(const IntMatrix& super, const std::vector<Int>& v);

// Invariants of super-lattice / sub-lattice (checked containment).
AbelianGroupInvariants quotient_invariants(const IntMatrix& sub, const IntMatrix& super);

// Invariants of (L + T)/T for a column lattice L and relation lattice T in
// the same ambient Z^n: the subgroup generated by L's columns inside Z^n/T.
AbelianGroupInvariants subgroup_invariants_mod(const IntMatrix& l, const IntMatrix& t);

// --- incremental row HNF --------------------------------------------------

// Maintains a fully reduced row Hermite form of the lattice spanned by the
// rows fed to add_row: pivots positive, entries above a pivot reduced into
// [0, pivot). Rows are kept sorted by pivot column.
class HnfBuilder {
public:
    explicit HnfBuilder(int cols) : cols_(cols) {}

    void add_row(std::vector<Int> v);
    int cols() const { return cols_; }
    int rank() const { return int(rows_.size()); }
    const std::vector<std::vector<Int>>& rows() const { return rows_; }
    const std::vector<int>& pivot_cols() const { return pivot_col_; }

    // Reduce v modulo the current row lattice (in place); returns true if the
    // remainder is zero, i.e. v lies in the lattice.
    bool reduce(std::vector<Int>& v) const;

    // Full back-reduction: entries above every pivot brought into [0, pivot).
    void normalize();

    IntMatrix matrix(); // rank x cols, rows normalized, in pivot order

private:
    int cols_;
    std::vector<std::vector<Int>> rows_; // echelon, sorted by pivot column
    std::vector<int> pivot_col_;
    void reduce_above_(size_t idx);
};

// Plain integer-grid text format: header "rows cols", then row-major
// whitespace-separated entries.
std::string write_int_grid(const IntMatrix& m);
IntMatrix read_int_grid(const std::string& text);

} // namespace fpg
