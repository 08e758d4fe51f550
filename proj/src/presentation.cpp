#include "fpg/presentation.hpp"

#include <algorithm>
#include <map>

namespace fpg {

std::string FinitePresentation::generator_name(int g) const {
    if (g >= 0 && size_t(g) < names.size()) return names[size_t(g)];
    if (rank <= 26) return std::string(1, char('a' + g));
    return "x" + std::to_string(g + 1);
}

FinitePresentation make_presentation(int rank, std::vector<Word> relators,
                                     std::vector<std::string> names,
                                     std::vector<std::string>* warnings) {
    if (rank < 0) throw DomainError("make_presentation: negative rank");
    if (!names.empty() && int(names.size()) != rank)
        throw DomainError("make_presentation: name count != rank");
    FinitePresentation p;
    p.rank = rank;
    p.names = std::move(names);
    for (auto& r : relators) {
        if (r.max_generator() >= rank)
            throw DomainError("make_presentation: relator uses generator index " +
                              std::to_string(r.max_generator()) + " >= rank " + std::to_string(rank));
        if (r.empty()) {
            if (warnings) warnings->push_back("dropped freely trivial relator");
            continue;
        }
        p.relators.push_back(std::move(r));
    }
    return p;
}

Word parse_relator(std::string_view text, int rank, const std::vector<std::string>& names) {
    size_t eq = text.find('=');
    if (eq == std::string_view::npos) return parse_word(text, rank, names);
    Word u = parse_word(text.substr(0, eq), rank, names);
    Word v = parse_word(text.substr(eq + 1), rank, names);
    return u * inverse(v);
}

bool is_balanced(const FinitePresentation& p) { return int(p.relators.size()) == p.rank; }

FinitePresentation free_central_extension(const FinitePresentation& p) {
    std::vector<Word> rels;
    rels.reserve(size_t(p.rank) * p.relators.size());
    for (int g = 0; g < p.rank; ++g)
        for (const Word& r : p.relators) rels.push_back(commutator(Word::generator(g), r));
    return make_presentation(p.rank, std::move(rels), p.names);
}

namespace {

Word shift_word(const Word& w, int offset) {
    std::vector<int32_t> ls;
    ls.reserve(w.length());
    for (int32_t l : w.letters()) ls.push_back(make_letter(letter_gen(l) + offset, letter_sign(l)));
    return Word(std::move(ls));
}

std::vector<std::string> merged_names(const FinitePresentation& p1, const FinitePresentation& p2) {
    std::vector<std::string> names;
    for (int g = 0; g < p1.rank; ++g) names.push_back(p1.generator_name(g));
    for (int g = 0; g < p2.rank; ++g) {
        std::string n = p2.generator_name(g);
        while (std::find(names.begin(), names.end(), n) != names.end()) n += "'";
        names.push_back(n);
    }
    return names;
}

} // namespace

FinitePresentation direct_product(const FinitePresentation& p1, const FinitePresentation& p2) {
    const int rank = p1.rank + p2.rank;
    std::vector<Word> rels;
    for (const Word& r : p1.relators) rels.push_back(r);
    for (const Word& r : p2.relators) rels.push_back(shift_word(r, p1.rank));
    for (int g1 = 0; g1 < p1.rank; ++g1)
        for (int g2 = 0; g2 < p2.rank; ++g2)
            rels.push_back(commutator(Word::generator(g1), Word::generator(p1.rank + g2)));
    return make_presentation(rank, std::move(rels), merged_names(p1, p2));
}

FinitePresentation free_presentation(int rank, std::vector<std::string> names) {
    return make_presentation(rank, {}, std::move(names));
}

Word apply_morphism(const PresentationMorphism& f, const Word& w) {
    Word out;
    for (int32_t l : w.letters()) {
        const Word& im = f.images[size_t(letter_gen(l))];
        out = out * (letter_sign(l) > 0 ? im : inverse(im));
    }
    return out;
}

// --- Tietze elimination ------------------------------------------------------

namespace {

// position of the unique occurrence of g (either sign) in w, or -1
int single_occurrence_pos(const Word& w, int g) {
    int pos = -1;
    for (size_t i = 0; i < w.length(); ++i)
        if (letter_gen(w.letters()[i]) == g) {
            if (pos >= 0) return -1;
            pos = int(i);
        }
    return pos;
}

Word substitute(const Word& w, int g, const Word& value) {
    Word out;
    for (int32_t l : w.letters()) {
        if (letter_gen(l) == g)
            out = out * (letter_sign(l) > 0 ? value : inverse(value));
        else
            out = out * Word(std::vector<int32_t>{l});
    }
    return out;
}

} // namespace

TietzeResult tietze_eliminate(const FinitePresentation& p, size_t max_relator_length) {
    const int n = p.rank;
    std::vector<Word> rel = p.relators;
    std::vector<int> origin(rel.size());
    for (size_t i = 0; i < rel.size(); ++i) origin[i] = int(i);

    std::vector<bool> alive(size_t(n), true);
    // images of the original generators in terms of the still-alive ones
    std::vector<Word> image(static_cast<size_t>(n));
    for (int g = 0; g < n; ++g) image[size_t(g)] = Word::generator(g);

    std::vector<int> fate(p.relators.size(), -1);
    // duplicate relators fold into the kept copy; same class in R/[F,R]
    std::vector<int> alias(p.relators.size(), -1);
    bool fixpoint = false;

    for (;;) {
        // cyclically reduce, drop trivial relators, fold exact duplicates
        std::vector<Word> nr;
        std::vector<int> no;
        for (size_t i = 0; i < rel.size(); ++i) {
            Word w = cyclically_reduce(rel[i]);
            if (w.empty()) continue;
            bool dup = false;
            for (size_t j = 0; j < nr.size() && !dup; ++j)
                if (nr[j] == w) {
                    alias[size_t(origin[i])] = no[j];
                    dup = true;
                }
            if (dup) continue;
            nr.push_back(std::move(w));
            no.push_back(origin[i]);
        }
        rel = std::move(nr);
        origin = std::move(no);

        // occurrence counts per (relator, generator)
        std::vector<std::vector<int>> occ(rel.size(), std::vector<int>(size_t(n), 0));
        std::vector<long long> total(size_t(n), 0);
        for (size_t ri = 0; ri < rel.size(); ++ri)
            for (int32_t l : rel[ri].letters()) {
                ++occ[ri][size_t(letter_gen(l))];
                ++total[size_t(letter_gen(l))];
            }

        // candidate (relator, generator) pairs with a single occurrence
        int best_r = -1, best_g = -1;
        size_t best_cost = 0;
        for (size_t ri = 0; ri < rel.size(); ++ri) {
            for (int g = 0; g < n; ++g) {
                if (!alive[size_t(g)] || occ[ri][size_t(g)] != 1) continue;
                size_t uses = size_t(total[size_t(g)] - 1);
                size_t cost = rel[ri].length() * (uses + 1);
                if (best_r < 0 || cost < best_cost) {
                    best_r = int(ri);
                    best_g = g;
                    best_cost = cost;
                }
            }
        }
        if (best_r < 0) {
            fixpoint = true;
            break;
        }

        // solve rel[best_r] for best_g: rotate so the occurrence leads, then
        // g^s * tail = 1  =>  g = (tail^-1)^s
        const Word& r = rel[size_t(best_r)];
        int pos = single_occurrence_pos(r, best_g);
        std::vector<int32_t> rot;
        const auto& ls = r.letters();
        for (size_t i = 0; i < ls.size(); ++i) rot.push_back(ls[(size_t(pos) + i) % ls.size()]);
        Word rotated(std::move(rot));
        int sign = letter_sign(rotated.letters()[0]);
        Word tail(std::vector<int32_t>(rotated.letters().begin() + 1, rotated.letters().end()));
        Word value = inverse(tail);
        if (sign < 0) value = inverse(value);

        // budget check: would any substituted relator blow past the cap?
        bool over = false;
        for (size_t ri = 0; ri < rel.size() && !over; ++ri) {
            if (int(ri) == best_r) continue;
            size_t occ = 0;
            for (int32_t l : rel[ri].letters())
                if (letter_gen(l) == best_g) ++occ;
            if (occ > 0 && rel[ri].length() + occ * value.length() > max_relator_length) over = true;
        }
        for (int g = 0; g < n && !over; ++g) {
            if (!alive[size_t(g)] || image[size_t(g)].empty()) continue;
            size_t occ = 0;
            for (int32_t l : image[size_t(g)].letters())
                if (letter_gen(l) == best_g) ++occ;
            if (occ > 0 && image[size_t(g)].length() + occ * value.length() > max_relator_length) over = true;
        }
        if (over) break;

        alive[size_t(best_g)] = false;
        fate[size_t(origin[size_t(best_r)])] = -1; // consumed
        for (size_t ri = 0; ri < rel.size(); ++ri)
            if (int(ri) != best_r) rel[ri] = substitute(rel[ri], best_g, value);
        rel.erase(rel.begin() + best_r);
        origin.erase(origin.begin() + best_r);
        for (int g = 0; g < n; ++g)
            image[size_t(g)] = substitute(image[size_t(g)], best_g, value);
    }

    // renumber the surviving generators
    TietzeResult out;
    std::vector<int> newidx(size_t(n), -1);
    std::vector<std::string> names;
    for (int g = 0; g < n; ++g)
        if (alive[size_t(g)]) {
            newidx[size_t(g)] = int(out.surviving_generator.size());
            out.surviving_generator.push_back(g);
            names.push_back(p.generator_name(g));
        }
    auto renumber = [&](const Word& w) {
        std::vector<int32_t> ls;
        for (int32_t l : w.letters()) ls.push_back(make_letter(newidx[size_t(letter_gen(l))], letter_sign(l)));
        return Word(std::move(ls));
    };
    std::vector<Word> finals;
    for (size_t i = 0; i < rel.size(); ++i) {
        Word w = renumber(rel[i]);
        if (w.empty()) continue;
        fate[size_t(origin[i])] = int(finals.size());
        finals.push_back(std::move(w));
    }
    // resolve duplicate aliases (possibly chained)
    for (size_t i = 0; i < fate.size(); ++i) {
        int a = int(i);
        size_t guard = 0;
        while (alias[size_t(a)] >= 0 && guard++ <= fate.size()) a = alias[size_t(a)];
        if (a != int(i)) fate[i] = fate[size_t(a)];
    }
    out.pres = make_presentation(int(out.surviving_generator.size()), std::move(finals), std::move(names));
    out.minimal_reached = fixpoint;
    out.generator_images.reserve(size_t(n));
    for (int g = 0; g < n; ++g) out.generator_images.push_back(renumber(image[size_t(g)]));
    out.relator_fate = std::move(fate);
    return out;
}

std::string format_presentation(const FinitePresentation& p) {
    std::string s = "<";
    for (int g = 0; g < p.rank; ++g) s += (g ? "," : " ") + p.generator_name(g);
    s += " | ";
    std::vector<std::string> names;
    for (int g = 0; g < p.rank; ++g) names.push_back(p.generator_name(g));
    for (size_t i = 0; i < p.relators.size(); ++i)
        s += (i ? ", " : "") + format_word(p.relators[i], names);
    s += " >";
    return s;
}

} // namespace fpg
