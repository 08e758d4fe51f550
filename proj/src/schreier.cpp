#include "fpg/schreier.hpp"

#include <deque>

namespace fpg {

SchreierData schreier_data(const CosetTable& t) {
    if (!t.complete()) throw DomainError("schreier_data: incomplete coset table");
    const int n = t.coset_count(), rank = t.rank();

    SchreierData sd;
    sd.table = t;
    sd.transversal.assign(size_t(n), Word());
    std::vector<bool> visited(size_t(n), false);
    // tree membership per undirected edge (coset, gen), on the positive side
    std::vector<bool> tree(size_t(n) * size_t(rank), false);

    std::deque<int> bfs{0};
    visited[0] = true;
    while (!bfs.empty()) {
        int c = bfs.front();
        bfs.pop_front();
        for (int g = 0; g < rank; ++g)
            for (int sign : {+1, -1}) {
                int d = t.act(c, g, sign);
                if (visited[size_t(d)]) continue;
                visited[size_t(d)] = true;
                sd.transversal[size_t(d)] = sd.transversal[size_t(c)] * Word::generator(g, sign);
                tree[size_t(sign > 0 ? c : d) * size_t(rank) + size_t(g)] = true;
                bfs.push_back(d);
            }
    }

    sd.edge_basis.assign(size_t(n) * size_t(rank), -1);
    for (int c = 0; c < n; ++c)
        for (int g = 0; g < rank; ++g) {
            if (tree[size_t(c) * size_t(rank) + size_t(g)]) continue;
            sd.edge_basis[size_t(c) * size_t(rank) + size_t(g)] = int(sd.basis.size());
            sd.basis.emplace_back(c, g);
        }

    if (sd.basis_count() != 1 + n * (rank - 1))
        throw Error("schreier_data: basis count violates Nielsen-Schreier; internal bug");
    return sd;
}

Word expand_basis_element(const SchreierData& sd, int m) {
    auto [c, g] = sd.basis[size_t(m)];
    int d = sd.table.act(c, g, +1);
    return sd.transversal[size_t(c)] * Word::generator(g) * inverse(sd.transversal[size_t(d)]);
}

Word rewrite_in_R(const SchreierData& sd, const Word& w) {
    const int rank = sd.table.rank();
    Word out;
    int c = 0;
    for (int32_t l : w.letters()) {
        int g = letter_gen(l);
        if (letter_sign(l) > 0) {
            int m = sd.edge_basis[size_t(c) * size_t(rank) + size_t(g)];
            if (m >= 0) out.append(make_letter(m, +1));
            c = sd.table.act(c, g, +1);
        } else {
            int d = sd.table.act(c, g, -1);
            int m = sd.edge_basis[size_t(d) * size_t(rank) + size_t(g)];
            if (m >= 0) out.append(make_letter(m, -1));
            c = d;
        }
    }
    if (c != 0) throw DomainError("rewrite_in_R: word does not lie in R");
    return out;
}

std::vector<IntMatrix> action_on_Rab(const SchreierData& sd) {
    const int rank = sd.table.rank(), nb = sd.basis_count();
    std::vector<IntMatrix> mats;
    mats.reserve(size_t(rank));
    for (int g = 0; g < rank; ++g) {
        IntMatrix a(nb, nb);
        Word x = Word::generator(g);
        for (int m = 0; m < nb; ++m) {
            Word conj = inverse(x) * expand_basis_element(sd, m) * x;
            Word rw = rewrite_in_R(sd, conj);
            auto e = exponent_sums(rw, nb);
            for (int i = 0; i < nb; ++i) a(i, m) = e[size_t(i)];
        }
        mats.push_back(std::move(a));
    }
    return mats;
}

IntMatrix inclusion_to_Fab(const SchreierData& sd) {
    const int rank = sd.table.rank(), nb = sd.basis_count();
    IntMatrix inc(rank, nb);
    for (int m = 0; m < nb; ++m) {
        auto e = exponent_sums(expand_basis_element(sd, m), rank);
        for (int g = 0; g < rank; ++g) inc(g, m) = e[size_t(g)];
    }
    return inc;
}

} // namespace fpg
