#include "fpg/fiber_product.hpp"

namespace fpg {

namespace {

Word shift_word(const Word& w, int offset) {
    std::vector<int32_t> ls;
    ls.reserve(w.length());
    for (int32_t l : w.letters()) ls.push_back(make_letter(letter_gen(l) + offset, letter_sign(l)));
    return Word(std::move(ls));
}

} // namespace

FinitePresentation semidirect_product_rf(const SchreierData& sd) {
    const int rank = sd.table.rank(), nb = sd.basis_count();
    std::vector<Word> rels;
    rels.reserve(size_t(rank) * size_t(nb));
    for (int i = 0; i < rank; ++i) {
        Word x = Word::generator(i);
        for (int m = 0; m < nb; ++m) {
            Word conj = inverse(x) * expand_basis_element(sd, m) * x;
            Word rw = shift_word(rewrite_in_R(sd, conj), rank);
            Word am = Word::generator(rank + m);
            rels.push_back(inverse(x) * am * x * inverse(rw));
        }
    }
    return make_presentation(rank + nb, std::move(rels));
}

FinitePresentation semidirect_product_rf(const FinitePresentation& base, const CosetTable& table) {
    if (!table.complete()) throw DomainError("semidirect_product_rf: incomplete coset table");
    if (base.rank != table.presentation().rank || base.relators != table.presentation().relators)
        throw DomainError("semidirect_product_rf: table does not belong to the base presentation");
    return semidirect_product_rf(schreier_data(table));
}

FinitePresentation higher_fiber_product(const SchreierData& sd, int n) {
    if (n < 2) throw DomainError("higher_fiber_product: n must be >= 2");
    const int rank = sd.table.rank(), nb = sd.basis_count();

    FinitePresentation p = semidirect_product_rf(sd);
    // last tuple coordinate of each generator, as a word of F:
    // x_i = (x_i, x_i) contributes x_i, a_m = (a_m, 1) contributes nothing
    std::vector<Word> last(size_t(p.rank));
    for (int i = 0; i < rank; ++i) last[size_t(i)] = Word::generator(i);

    for (int stage = 3; stage <= n; ++stage) {
        const int old_rank = p.rank;
        std::vector<Word> rels = p.relators;
        for (int g = 0; g < old_rank; ++g) {
            Word u = last[size_t(g)];
            Word gw = Word::generator(g);
            for (int m = 0; m < nb; ++m) {
                Word conj = inverse(u) * expand_basis_element(sd, m) * u;
                Word rw = shift_word(rewrite_in_R(sd, conj), old_rank);
                Word bm = Word::generator(old_rank + m);
                rels.push_back(inverse(gw) * bm * gw * inverse(rw));
            }
        }
        p = make_presentation(old_rank + nb, std::move(rels));
        last.resize(size_t(p.rank));
        // the diagonal section repeats the last coordinate, so old generators
        // keep theirs; the new layer (1,...,1,a_m) contributes a_m
        for (int m = 0; m < nb; ++m) last[size_t(old_rank + m)] = expand_basis_element(sd, m);
    }
    return p;
}

std::vector<Word> fiber_inclusion_images(const SchreierData& sd) {
    const int rank = sd.table.rank(), nb = sd.basis_count();
    std::vector<Word> images;
    images.reserve(size_t(rank + nb));
    for (int i = 0; i < rank; ++i)
        images.push_back(Word::generator(i) * Word::generator(rank + i));
    for (int m = 0; m < nb; ++m)
        images.push_back(expand_basis_element(sd, m)); // first factor letters
    return images;
}

} // namespace fpg
