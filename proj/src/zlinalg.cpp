#include "fpg/zlinalg.hpp"

#include <algorithm>
#include <sstream>

namespace fpg {

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

bool IntMatrix::is_zero() const {
    for (const Int& x : e_)
        if (x != 0) return false;
    return true;
}

IntMatrix IntMatrix::transposed() const {
    IntMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

void IntMatrix::append_column(const std::vector<Int>& col) {
    if (rows_ == 0 && cols_ == 0) rows_ = int(col.size());
    if (int(col.size()) != rows_) throw DomainError("append_column: wrong height");
    std::vector<Int> ne(size_t(rows_) * size_t(cols_ + 1));
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) ne[size_t(i) * size_t(cols_ + 1) + size_t(j)] = (*this)(i, j);
        ne[size_t(i) * size_t(cols_ + 1) + size_t(cols_)] = col[size_t(i)];
    }
    e_ = std::move(ne);
    ++cols_;
}

std::vector<Int> IntMatrix::column(int j) const {
    std::vector<Int> c(static_cast<size_t>(rows_));
    for (int i = 0; i < rows_; ++i) c[size_t(i)] = (*this)(i, j);
    return c;
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        os << (i == 0 ? "[" : " ");
        for (int j = 0; j < cols_; ++j) os << (*this)(i, j) << (j + 1 < cols_ ? " " : "");
        os << (i + 1 < rows_ ? "\n" : "]");
    }
    return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) throw DomainError("matrix product: shape mismatch");
    IntMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const Int& aik = a(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < b.cols(); ++j)
                if (b(k, j) != 0) c(i, j) += aik * b(k, j);
        }
    return c;
}

std::vector<Int> operator*(const IntMatrix& a, const std::vector<Int>& v) {
    if (a.cols() != int(v.size())) throw DomainError("matrix-vector product: shape mismatch");
    std::vector<Int> r(size_t(a.rows()));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0 && v[size_t(j)] != 0) r[size_t(i)] += a(i, j) * v[size_t(j)];
    return r;
}

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows()) throw DomainError("hstack: row mismatch");
    IntMatrix c(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
        for (int j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
    }
    return c;
}

IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.cols()) throw DomainError("vstack: col mismatch");
    IntMatrix c(a.rows() + b.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) c(a.rows() + i, j) = b(i, j);
    return c;
}

std::string AbelianGroupInvariants::to_string() const {
    if (trivial()) return "0";
    std::string s;
    if (free_rank == 1)
        s = "Z";
    else if (free_rank > 1)
        s = "Z^" + std::to_string(free_rank);
    for (const Int& d : torsion) {
        if (!s.empty()) s += " + ";
        s += "Z/" + d.get_str();
    }
    return s;
}

// --- Bareiss elimination ---------------------------------------------------

namespace {

// Returns (rank, determinant-if-square-else-0). Fraction-free elimination.
std::pair<int, Int> bareiss(IntMatrix m) {
    const int rows = m.rows(), cols = m.cols();
    Int prev = 1;
    int r = 0;
    int sign = 1;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (m(i, c) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != r) {
            for (int j = 0; j < cols; ++j) swap(m(piv, j), m(r, j));
            sign = -sign;
        }
        for (int i = r + 1; i < rows; ++i) {
            for (int j = c + 1; j < cols; ++j) {
                Int t = m(r, c) * m(i, j) - m(i, c) * m(r, j);
                mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m(i, c) = 0;
        }
        prev = m(r, c);
        ++r;
    }
    Int det = 0;
    if (rows == cols) det = (r == rows) ? Int(sign * prev) : Int(0);
    return {r, det};
}

} // namespace

Int determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw DomainError("determinant: matrix not square");
    if (m.rows() == 0) return 1;
    return bareiss(m).second;
}

int rank_over_q(const IntMatrix& m) { return bareiss(m).first; }

// --- HNF builder -----------------------------------------------------------

void HnfBuilder::reduce_above_(size_t idx) {
    // reduce column pivot_col_[idx] of all earlier rows into [0, pivot)
    const int pc = pivot_col_[idx];
    const Int& d = rows_[idx][size_t(pc)];
    for (size_t r = 0; r < idx; ++r) {
        Int& a = rows_[r][size_t(pc)];
        if (a == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
        if (q == 0) continue;
        for (int j = pc; j < cols_; ++j)
            if (rows_[idx][size_t(j)] != 0) rows_[r][size_t(j)] -= q * rows_[idx][size_t(j)];
    }
}

void HnfBuilder::add_row(std::vector<Int> v) {
    if (int(v.size()) != cols_) throw DomainError("HnfBuilder: wrong row width");
    size_t idx = 0;
    for (int c = 0; c < cols_; ++c) {
        if (v[size_t(c)] == 0) {
            if (idx < rows_.size() && pivot_col_[idx] == c) ++idx;
            continue;
        }
        if (idx == rows_.size() || pivot_col_[idx] > c) {
            // new pivot at column c
            if (v[size_t(c)] < 0)
                for (Int& x : v) x = -x;
            rows_.insert(rows_.begin() + long(idx), std::move(v));
            pivot_col_.insert(pivot_col_.begin() + long(idx), c);
            reduce_above_(idx);
            return;
        }
        // existing pivot row at column c
        Int& a = rows_[idx][size_t(c)];
        Int& b = v[size_t(c)];
        if (mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) {
            Int q = b / a;
            for (int j = c; j < cols_; ++j)
                if (rows_[idx][size_t(j)] != 0) v[size_t(j)] -= q * rows_[idx][size_t(j)];
        } else {
            // replace pivot row by the gcd combination
            Int g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            Int af = a / g, bf = b / g;
            std::vector<Int>& r = rows_[idx];
            for (int j = c; j < cols_; ++j) {
                Int rj = r[size_t(j)], vj = v[size_t(j)];
                r[size_t(j)] = s * rj + t * vj;
                v[size_t(j)] = af * vj - bf * rj;
            }
            reduce_above_(idx);
        }
        ++idx;
    }
    // v reduced to zero: nothing to add
}

bool HnfBuilder::reduce(std::vector<Int>& v) const {
    if (int(v.size()) != cols_) throw DomainError("HnfBuilder::reduce: wrong width");
    for (size_t idx = 0; idx < rows_.size(); ++idx) {
        const int c = pivot_col_[idx];
        if (v[size_t(c)] == 0) continue;
        const Int& d = rows_[idx][size_t(c)];
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), v[size_t(c)].get_mpz_t(), d.get_mpz_t());
        if (q != 0)
            for (int j = c; j < cols_; ++j)
                if (rows_[idx][size_t(j)] != 0) v[size_t(j)] -= q * rows_[idx][size_t(j)];
    }
    for (const Int& x : v)
        if (x != 0) return false;
    return true;
}

void HnfBuilder::normalize() {
    // ascending pivot order: each pass only touches columns at or beyond its
    // pivot, so earlier reductions stay within range
    for (size_t idx = 0; idx < rows_.size(); ++idx) reduce_above_(idx);
}

IntMatrix HnfBuilder::matrix() {
    normalize();
    IntMatrix m(rank(), cols_);
    for (int i = 0; i < rank(); ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = rows_[size_t(i)][size_t(j)];
    return m;
}

// --- Smith normal form -----------------------------------------------------

namespace {

struct SnfState {
    IntMatrix s;
    IntMatrix *u = nullptr, *v = nullptr; // optional transforms

    void swap_rows(int a, int b) {
        if (a == b) return;
        for (int j = 0; j < s.cols(); ++j) swap(s(a, j), s(b, j));
        if (u)
            for (int j = 0; j < u->cols(); ++j) swap((*u)(a, j), (*u)(b, j));
    }
    void swap_cols(int a, int b) {
        if (a == b) return;
        for (int i = 0; i < s.rows(); ++i) swap(s(i, a), s(i, b));
        if (v)
            for (int i = 0; i < v->rows(); ++i) swap((*v)(i, a), (*v)(i, b));
    }
    void add_row_multiple(int dst, int src, const Int& q) { // row dst -= q * row src
        if (q == 0) return;
        for (int j = 0; j < s.cols(); ++j)
            if (s(src, j) != 0) s(dst, j) -= q * s(src, j);
        if (u)
            for (int j = 0; j < u->cols(); ++j)
                if ((*u)(src, j) != 0) (*u)(dst, j) -= q * (*u)(src, j);
    }
    void add_col_multiple(int dst, int src, const Int& q) { // col dst -= q * col src
        if (q == 0) return;
        for (int i = 0; i < s.rows(); ++i)
            if (s(i, src) != 0) s(i, dst) -= q * s(i, src);
        if (v)
            for (int i = 0; i < v->rows(); ++i)
                if ((*v)(i, src) != 0) (*v)(i, dst) -= q * (*v)(i, src);
    }
    void negate_row(int r) {
        for (int j = 0; j < s.cols(); ++j) s(r, j) = -s(r, j);
        if (u)
            for (int j = 0; j < u->cols(); ++j) (*u)(r, j) = -(*u)(r, j);
    }
};

void snf_run(SnfState& st) {
    IntMatrix& s = st.s;
    const int n = std::min(s.rows(), s.cols());
    for (int t = 0; t < n; ++t) {
        for (;;) {
            // pivot: smallest nonzero |entry| in the trailing block, ties to lowest (row, col)
            int pi = -1, pj = -1;
            for (int i = t; i < s.rows(); ++i)
                for (int j = t; j < s.cols(); ++j) {
                    if (s(i, j) == 0) continue;
                    if (pi < 0 || mpz_cmpabs(s(i, j).get_mpz_t(), s(pi, pj).get_mpz_t()) < 0) {
                        pi = i;
                        pj = j;
                    }
                }
            if (pi < 0) return; // trailing block is zero
            st.swap_rows(t, pi);
            st.swap_cols(t, pj);
            if (s(t, t) < 0) st.negate_row(t);

            bool clean = true;
            for (int i = t + 1; i < s.rows(); ++i) {
                if (s(i, t) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), s(i, t).get_mpz_t(), s(t, t).get_mpz_t());
                st.add_row_multiple(i, t, q);
                if (s(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < s.cols(); ++j) {
                if (s(t, j) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), s(t, j).get_mpz_t(), s(t, t).get_mpz_t());
                st.add_col_multiple(j, t, q);
                if (s(t, j) != 0) clean = false;
            }
            if (!clean) continue; // remainders became new, smaller candidates

            // divisibility: fold any non-divisible entry into row t and retry
            bool divisible = true;
            for (int i = t + 1; i < s.rows() && divisible; ++i)
                for (int j = t + 1; j < s.cols() && divisible; ++j)
                    if (s(i, j) != 0 && !mpz_divisible_p(s(i, j).get_mpz_t(), s(t, t).get_mpz_t())) {
                        st.add_row_multiple(t, i, Int(-1));
                        divisible = false;
                    }
            if (divisible) break;
        }
    }
}

} // namespace

SmithResult smith_normal_form(const IntMatrix& m) {
    SmithResult r;
    r.s = m;
    r.u = IntMatrix::identity(m.rows());
    r.v = IntMatrix::identity(m.cols());
    SnfState st{r.s, &r.u, &r.v};
    snf_run(st);
    r.s = st.s;
    return r;
}

std::vector<Int> smith_invariant_factors(const IntMatrix& m) {
    SnfState st{m, nullptr, nullptr};
    snf_run(st);
    std::vector<Int> d;
    for (int t = 0; t < std::min(st.s.rows(), st.s.cols()); ++t) {
        if (st.s(t, t) == 0) break;
        d.push_back(st.s(t, t));
    }
    return d;
}

// --- kernels, cokernels, lattices -------------------------------------------

IntMatrix kernel_basis(const IntMatrix& m) {
    // rows of [m^T | I]: combos (lambda^T m^T | lambda^T); zero left block <=> m lambda = 0
    const int nc = m.cols(), nr = m.rows();
    HnfBuilder h(nr + nc);
    for (int i = 0; i < nc; ++i) {
        std::vector<Int> row(size_t(nr + nc));
        for (int j = 0; j < nr; ++j) row[size_t(j)] = m(j, i);
        row[size_t(nr + i)] = 1;
        h.add_row(std::move(row));
    }
    h.normalize();
    IntMatrix k(nc, 0);
    for (int i = 0; i < h.rank(); ++i) {
        if (h.pivot_cols()[size_t(i)] < nr) continue; // row still touches the left block
        const auto& row = h.rows()[size_t(i)];
        std::vector<Int> col(row.begin() + nr, row.end());
        k.append_column(col);
    }
    return k;
}

AbelianGroupInvariants cokernel_invariants(const IntMatrix& m) {
    // column-HNF first (via row HNF of the transpose) to shrink wide inputs
    HnfBuilder h(m.rows());
    for (int j = 0; j < m.cols(); ++j) h.add_row(m.column(j));
    IntMatrix reduced = h.matrix().transposed();
    auto d = smith_invariant_factors(reduced);
    AbelianGroupInvariants inv;
    inv.free_rank = m.rows() - int(d.size());
    for (const Int& x : d)
        if (x >= 2) inv.torsion.push_back(x);
    return inv;
}

int column_lattice_rank(const IntMatrix& m) {
    HnfBuilder h(m.rows());
    for (int j = 0; j < m.cols(); ++j) h.add_row(m.column(j));
    return h.rank();
}

IntMatrix lattice_canonical_basis(const IntMatrix& m) {
    HnfBuilder h(m.rows());
    for (int j = 0; j < m.cols(); ++j) h.add_row(m.column(j));
    return h.matrix().transposed();
}

IntMatrix lattice_sum(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows()) throw DomainError("lattice_sum: ambient mismatch");
    return lattice_canonical_basis(hstack(a, b));
}

IntMatrix lattice_intersection(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows()) throw DomainError("lattice_intersection: ambient mismatch");
    // kernel of [a | -b] gives pairs (x; y) with a x = b y
    IntMatrix nb = b;
    for (int i = 0; i < nb.rows(); ++i)
        for (int j = 0; j < nb.cols(); ++j) nb(i, j) = -nb(i, j);
    IntMatrix k = kernel_basis(hstack(a, nb));
    IntMatrix meet(a.rows(), 0);
    for (int c = 0; c < k.cols(); ++c) {
        std::vector<Int> x(size_t(a.cols()));
        for (int i = 0; i < a.cols(); ++i) x[size_t(i)] = k(i, c);
        meet.append_column(a * x);
    }
    return lattice_canonical_basis(meet);
}

IntMatrix lattice_saturation(const IntMatrix& a) {
    // sat(L) = (L^perp)^perp
    IntMatrix perp = kernel_basis(a.transposed());
    return kernel_basis(perp.transposed());
}

bool lattice_contains(const IntMatrix& super, const std::vector<Int>& v) {
    HnfBuilder h(super.rows());
    for (int j = 0; j < super.cols(); ++j) h.add_row(super.column(j));
    std::vector<Int> r = v;
    return h.reduce(r);
}

bool lattice_contains_all(const IntMatrix& super, const IntMatrix& sub) {
    HnfBuilder h(super.rows());
    for (int j = 0; j < super.cols(); ++j) h.add_row(super.column(j));
    for (int c = 0; c < sub.cols(); ++c) {
        std::vector<Int> r = sub.column(c);
        if (!h.reduce(r)) return false;
    }
    return true;
}

std::vector<Int> lattice_solve(const IntMatrix& super, const std::vector<Int>& v) {
    // row-HNF of [super^T | I]; reducing (v^T | 0) through the pivot rows
    // accumulates the coordinates.
    const int n = super.rows(), k = super.cols();
    HnfBuilder h(n + k);
    for (int j = 0; j < k; ++j) {
        std::vector<Int> row(size_t(n + k));
        for (int i = 0; i < n; ++i) row[size_t(i)] = super(i, j);
        row[size_t(n + j)] = 1;
        h.add_row(std::move(row));
    }
    std::vector<Int> r(size_t(n + k));
    for (int i = 0; i < n; ++i) r[size_t(i)] = v[size_t(i)];
    // reduce only against rows with pivot in the left block
    for (size_t idx = 0; idx < size_t(h.rank()); ++idx) {
        const int pc = h.pivot_cols()[idx];
        if (pc >= n) break;
        if (r[size_t(pc)] == 0) continue;
        const auto& row = h.rows()[idx];
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), r[size_t(pc)].get_mpz_t(), row[size_t(pc)].get_mpz_t());
        if (q != 0)
            for (int j = pc; j < n + k; ++j)
                if (row[size_t(j)] != 0) r[size_t(j)] -= q * row[size_t(j)];
    }
    for (int i = 0; i < n; ++i)
        if (r[size_t(i)] != 0) throw DomainError("lattice_solve: vector not in lattice");
    std::vector<Int> coords(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) coords[size_t(j)] = -r[size_t(n + j)];
    return coords;
}

AbelianGroupInvariants quotient_invariants(const IntMatrix& sub, const IntMatrix& super) {
    if (sub.rows() != super.rows()) throw DomainError("quotient_invariants: ambient mismatch");
    IntMatrix sb = lattice_canonical_basis(super);
    if (!lattice_contains_all(sb, sub)) throw DomainError("quotient_invariants: sub not contained in super");
    IntMatrix x(sb.cols(), 0);
    for (int c = 0; c < sub.cols(); ++c) x.append_column(lattice_solve(sb, sub.column(c)));
    return cokernel_invariants(x);
}

AbelianGroupInvariants subgroup_invariants_mod(const IntMatrix& l, const IntMatrix& t) {
    if (l.rows() != t.rows()) throw DomainError("subgroup_invariants_mod: ambient mismatch");
    return quotient_invariants(lattice_canonical_basis(t), lattice_sum(l, t));
}

// --- integer-grid text format -----------------------------------------------

std::string write_int_grid(const IntMatrix& m) {
    std::ostringstream os;
    os << m.rows() << " " << m.cols() << "\n";
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) os << m(i, j) << (j + 1 < m.cols() ? " " : "");
        os << "\n";
    }
    return os.str();
}

IntMatrix read_int_grid(const std::string& text) {
    std::istringstream is(text);
    int rows = 0, cols = 0;
    if (!(is >> rows >> cols)) throw ParseError("integer grid: missing header", 0);
    IntMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            std::string tok;
            if (!(is >> tok)) throw ParseError("integer grid: truncated data", 0);
            m(i, j) = Int(tok);
        }
    return m;
}

} // namespace fpg
