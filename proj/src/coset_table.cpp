#include "fpg/coset_table.hpp"

#include <deque>
#include <queue>

namespace fpg {

CosetTable::CosetTable(FinitePresentation pres, int cosets)
    : pres_(std::move(pres)), cosets_(cosets), e_(size_t(cosets) * size_t(2 * pres_.rank), -1) {}

int CosetTable::trace(int coset, const Word& w) const {
    int c = coset;
    for (int32_t l : w.letters()) {
        c = act(c, letter_gen(l), letter_sign(l));
        if (c < 0) return -1;
    }
    return c;
}

namespace {

// Mutable enumeration state: table over columns 2g / 2g+1 (g / g^-1),
// union-find over cosets, pending coincidence queue.
class Enumerator {
public:
    Enumerator(const FinitePresentation& p, long long max_cosets)
        : pres_(p), ncols_(2 * p.rank), max_(max_cosets) {
        new_coset_();
    }

    void run_hlt() {
        for (int c = 0; c < size_(); ++c) {
            if (dead_(c)) continue;
            for (const Word& r : pres_.relators) {
                scan_and_fill_(c, r);
                drain_();
                if (dead_(c)) break;
            }
            if (dead_(c)) continue;
            for (int col = 0; col < ncols_ && !dead_(c); ++col)
                if (get_(c, col) < 0) {
                    set_(c, col, new_coset_());
                    drain_();
                }
        }
    }

    void run_felsch() {
        for (;;) {
            // close every deduction available before defining anything
            bool changed = true;
            while (changed) {
                changed = false;
                for (int c = 0; c < size_(); ++c) {
                    if (dead_(c)) continue;
                    for (const Word& r : pres_.relators) {
                        if (scan_no_fill_(c, r)) changed = true;
                        drain_();
                        if (dead_(c)) break;
                    }
                }
            }
            int dc = -1, dcol = -1;
            for (int c = 0; c < size_() && dc < 0; ++c) {
                if (dead_(c)) continue;
                for (int col = 0; col < ncols_; ++col)
                    if (get_(c, col) < 0) {
                        dc = c;
                        dcol = col;
                        break;
                    }
            }
            if (dc < 0) return;
            set_(dc, dcol, new_coset_());
            drain_();
        }
    }

    CosetTable standardized() const {
        // BFS over live representatives in column order gives the canonical
        // numbering; row 0 stays the subgroup coset.
        std::vector<int> index(table_.size(), -1);
        std::vector<int> order;
        std::deque<int> bfs{find_(0)};
        index[size_t(find_(0))] = 0;
        order.push_back(find_(0));
        while (!bfs.empty()) {
            int c = bfs.front();
            bfs.pop_front();
            for (int col = 0; col < ncols_; ++col) {
                int d = get_(c, col);
                if (d >= 0 && index[size_t(d)] < 0) {
                    index[size_t(d)] = int(order.size());
                    order.push_back(d);
                    bfs.push_back(d);
                }
            }
        }
        CosetTable t(pres_, int(order.size()));
        bool complete = true;
        for (size_t i = 0; i < order.size(); ++i)
            for (int g = 0; g < pres_.rank; ++g)
                for (int sign : {+1, -1}) {
                    int d = get_(order[i], 2 * g + (sign < 0 ? 1 : 0));
                    if (d < 0)
                        complete = false;
                    else
                        t.set(int(i), g, sign, index[size_t(d)]);
                }
        t.mark_complete(complete);
        return t;
    }

    long long live_count() const {
        long long n = 0;
        for (int c = 0; c < size_(); ++c)
            if (!dead_(c)) ++n;
        return n;
    }

private:
    const FinitePresentation& pres_;
    const int ncols_;
    const long long max_;
    std::vector<std::vector<int>> table_;
    std::vector<int> parent_;
    std::queue<std::pair<int, int>> pending_;

    int size_() const { return int(table_.size()); }
    bool dead_(int c) const { return parent_[size_t(c)] != c; }

    int find_(int c) const {
        while (parent_[size_t(c)] != c) c = parent_[size_t(c)];
        return c;
    }

    static int inv_col_(int col) { return col ^ 1; }

    int new_coset_() {
        if (size_() >= max_)
            throw LimitError("todd_coxeter: max_cosets = " + std::to_string(max_) +
                             " exceeded (group may be infinite or the limit too low)");
        table_.emplace_back(size_t(ncols_), -1);
        parent_.push_back(int(table_.size()) - 1);
        return int(table_.size()) - 1;
    }

    int get_(int c, int col) const {
        int e = table_[size_t(find_(c))][size_t(col)];
        return e < 0 ? -1 : find_(e);
    }

    void set_(int c, int col, int d) {
        c = find_(c);
        d = find_(d);
        int& fwd = table_[size_t(c)][size_t(col)];
        if (fwd >= 0 && find_(fwd) != d) {
            pending_.emplace(find_(fwd), d);
            return;
        }
        fwd = d;
        int& bwd = table_[size_t(d)][size_t(inv_col_(col))];
        if (bwd >= 0 && find_(bwd) != c)
            pending_.emplace(find_(bwd), c);
        else
            bwd = c;
    }

    void drain_() {
        while (!pending_.empty()) {
            auto [a, b] = pending_.front();
            pending_.pop();
            merge_(a, b);
        }
    }

    void merge_(int a, int b) {
        a = find_(a);
        b = find_(b);
        if (a == b) return;
        int keep = std::min(a, b), drop = std::max(a, b);
        parent_[size_t(drop)] = keep;
        for (int col = 0; col < ncols_; ++col) {
            int e = table_[size_t(drop)][size_t(col)];
            if (e < 0) continue;
            set_(keep, col, find_(e));
        }
    }

    static int col_of_(int32_t letter) {
        return 2 * letter_gen(letter) + (letter_sign(letter) < 0 ? 1 : 0);
    }

    void scan_and_fill_(int c, const Word& r) {
        const auto& ls = r.letters();
        int f = find_(c), b = find_(c);
        size_t i = 0, j = ls.size();
        for (;;) {
            while (i < j) {
                int d = get_(f, col_of_(ls[i]));
                if (d < 0) break;
                f = d;
                ++i;
            }
            if (i == j) {
                if (f != b) pending_.emplace(f, b);
                return;
            }
            while (j > i) {
                int d = get_(b, inv_col_(col_of_(ls[j - 1])));
                if (d < 0) break;
                b = d;
                --j;
            }
            if (i == j) {
                if (f != b) pending_.emplace(f, b);
                return;
            }
            if (j == i + 1) {
                set_(f, col_of_(ls[i]), b); // deduction closes the scan
                return;
            }
            int d = new_coset_();
            set_(f, col_of_(ls[i]), d);
            f = find_(d);
            ++i;
        }
    }

    // Felsch-style scan: only the gap-one deduction, no definitions.
    bool scan_no_fill_(int c, const Word& r) {
        const auto& ls = r.letters();
        int f = find_(c), b = find_(c);
        size_t i = 0, j = ls.size();
        while (i < j) {
            int d = get_(f, col_of_(ls[i]));
            if (d < 0) break;
            f = d;
            ++i;
        }
        if (i == j) {
            if (f != b) {
                pending_.emplace(f, b);
                return true;
            }
            return false;
        }
        while (j > i) {
            int d = get_(b, inv_col_(col_of_(ls[j - 1])));
            if (d < 0) break;
            b = d;
            --j;
        }
        if (i == j) {
            if (f != b) {
                pending_.emplace(f, b);
                return true;
            }
            return false;
        }
        if (j == i + 1) {
            set_(f, col_of_(ls[i]), b);
            return true;
        }
        return false;
    }
};

} // namespace

CosetTable todd_coxeter(const FinitePresentation& p, long long max_cosets, EnumStrategy strategy) {
    Enumerator e(p, max_cosets);
    if (strategy == EnumStrategy::Hlt)
        e.run_hlt();
    else
        e.run_felsch();
    CosetTable t = e.standardized();
    if (!t.complete())
        throw ContradictionError("todd_coxeter: enumeration finished with undefined entries");
    // every relator must trace to the identity from every coset
    for (int c = 0; c < t.coset_count(); ++c)
        for (const Word& r : p.relators)
            if (t.trace(c, r) != c)
                throw ContradictionError("todd_coxeter: relator does not close; internal bug");
    return t;
}

std::vector<std::vector<int>> permutation_action(const CosetTable& t) {
    if (!t.complete()) throw DomainError("permutation_action: incomplete table");
    std::vector<std::vector<int>> perms(size_t(t.rank()));
    for (int g = 0; g < t.rank(); ++g) {
        perms[size_t(g)].resize(size_t(t.coset_count()));
        for (int c = 0; c < t.coset_count(); ++c) perms[size_t(g)][size_t(c)] = t.act(c, g, +1);
    }
    return perms;
}

long long group_order(const CosetTable& t) {
    if (!t.complete()) throw DomainError("group_order: incomplete table");
    return t.coset_count();
}

} // namespace fpg
