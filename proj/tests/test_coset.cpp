#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "fpg/coset_table.hpp"

using namespace fpg;

namespace {

FinitePresentation pres(int rank, std::initializer_list<const char*> rels) {
    std::vector<Word> ws;
    for (const char* r : rels) ws.push_back(parse_relator(r, rank, {}));
    return make_presentation(rank, std::move(ws));
}

using Perm = std::vector<int>;

Perm compose(const Perm& f, const Perm& g) { // x -> g(f(x))
    Perm h(f.size());
    for (size_t i = 0; i < f.size(); ++i) h[i] = g[size_t(f[i])];
    return h;
}

Perm perm_inverse(const Perm& f) {
    Perm h(f.size());
    for (size_t i = 0; i < f.size(); ++i) h[size_t(f[i])] = int(i);
    return h;
}

// independent order computation: BFS closure of the generated permutation group
long long permutation_group_order(const std::vector<Perm>& gens, long long cap = 20000) {
    std::set<Perm> seen;
    std::vector<Perm> queue;
    Perm id(gens.empty() ? 0 : gens[0].size());
    for (size_t i = 0; i < id.size(); ++i) id[i] = int(i);
    seen.insert(id);
    queue.push_back(id);
    while (!queue.empty()) {
        Perm p = queue.back();
        queue.pop_back();
        for (const Perm& g : gens) {
            Perm q = compose(p, g);
            if (seen.insert(q).second) {
                queue.push_back(q);
                if (static_cast<long long>(seen.size()) > cap) throw std::runtime_error("closure cap");
            }
        }
    }
    return static_cast<long long>(seen.size());
}

Perm eval_word_on_perms(const Word& w, const std::vector<Perm>& gens) {
    Perm p(gens[0].size());
    for (size_t i = 0; i < p.size(); ++i) p[i] = int(i);
    for (int32_t l : w.letters()) {
        const Perm& g = gens[size_t(letter_gen(l))];
        p = letter_sign(l) > 0 ? compose(p, g) : compose(p, perm_inverse(g));
    }
    return p;
}

} // namespace

TEST_CASE("trivial group enumerates to one coset") {
    CosetTable t = todd_coxeter(pres(1, {"x1"}));
    CHECK(group_order(t) == 1);
    auto perms = permutation_action(t);
    CHECK(perms[0] == Perm{0});
}

TEST_CASE("A5 triangle presentation: 60 cosets, certified by a permutation witness") {
    // witness representation on 5 points: a = (1 2)(3 4), b = (1 3 5)
    Perm a{1, 0, 3, 2, 4};
    Perm b{2, 1, 4, 3, 0};
    FinitePresentation p = pres(2, {"aa", "bbb", "ababababab"});
    std::vector<Perm> gens{a, b};
    for (const Word& r : p.relators) {
        Perm img = eval_word_on_perms(r, gens);
        for (size_t i = 0; i < img.size(); ++i) CHECK(img[i] == int(i));
    }
    long long witness_order = permutation_group_order(gens);
    CHECK(witness_order == 60);
    CosetTable t = todd_coxeter(p);
    CHECK(group_order(t) == witness_order);
}

TEST_CASE("binary icosahedral group has order 120") {
    CosetTable t = todd_coxeter(pres(2, {"aaaaa = bbb", "bbb = baba"}));
    CHECK(group_order(t) == 120);
}

TEST_CASE("relators trace to the identity from every coset") {
    for (auto strategy : {EnumStrategy::Hlt, EnumStrategy::Felsch}) {
        FinitePresentation p = pres(2, {"aa", "bbb", "ababababab"});
        CosetTable t = todd_coxeter(p, 100000, strategy);
        CHECK(t.complete());
        for (int c = 0; c < t.coset_count(); ++c)
            for (const Word& r : p.relators) CHECK(t.trace(c, r) == c);
    }
}

TEST_CASE("permutation action is transitive and respects relators") {
    FinitePresentation p = pres(2, {"aaaaa = bbb", "bbb = baba"});
    CosetTable t = todd_coxeter(p);
    auto perms = permutation_action(t);
    CHECK(perms.size() == 2);
    CHECK(perms[0].size() == 120);
    for (const Word& r : p.relators) {
        Perm img = eval_word_on_perms(r, perms);
        for (size_t i = 0; i < img.size(); ++i) CHECK(img[i] == int(i));
    }
    // transitivity via reachability
    std::set<int> reach{0};
    std::vector<int> stack{0};
    while (!stack.empty()) {
        int c = stack.back();
        stack.pop_back();
        for (int g = 0; g < 2; ++g)
            for (int s : {1, -1})
                if (reach.insert(t.act(c, g, s)).second) stack.push_back(t.act(c, g, s));
    }
    CHECK(reach.size() == 120);
    // order from the enumeration equals the permutation-group closure order
    CHECK(permutation_group_order(perms, 1000) == 120);
}

TEST_CASE("z2 action is the transposition") {
    CosetTable t = todd_coxeter(pres(1, {"aa"}));
    auto perms = permutation_action(t);
    CHECK(perms[0] == Perm{1, 0});
}

TEST_CASE("strategies agree") {
    for (const char* which : {"trivial", "z2", "a5", "ico"}) {
        FinitePresentation p = std::string(which) == "trivial" ? pres(1, {"x1"})
                               : std::string(which) == "z2"    ? pres(1, {"aa"})
                               : std::string(which) == "a5"    ? pres(2, {"aa", "bbb", "ababababab"})
                                                               : pres(2, {"aaaaa = bbb", "bbb = baba"});
        CHECK(group_order(todd_coxeter(p, 100000, EnumStrategy::Hlt)) ==
              group_order(todd_coxeter(p, 100000, EnumStrategy::Felsch)));
    }
}

TEST_CASE("limit errors are distinct from contradictions") {
    CHECK_THROWS_AS(todd_coxeter(free_presentation(2), 100), LimitError);
    CHECK_THROWS_AS(todd_coxeter(pres(2, {"aa"}), 50), LimitError);
}

TEST_CASE("incomplete table operations are rejected") {
    CosetTable t(pres(1, {"aa"}), 1);
    CHECK(!t.complete());
    CHECK_THROWS_AS(permutation_action(t), DomainError);
    CHECK_THROWS_AS(group_order(t), DomainError);
}
