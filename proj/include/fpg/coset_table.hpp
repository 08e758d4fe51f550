#pragma once

#include <vector>

#include "fpg/presentation.hpp"

namespace fpg {

// Completed (or partial) coset table for the trivial subgroup of the
// presented group: row 0 is the subgroup coset, entries are the right
// action of generators and their inverses. Standardized: cosets numbered
// in BFS discovery order, so tables are reproducible.
class CosetTable {
public:
    CosetTable() = default;
    CosetTable(FinitePresentation pres, int cosets);

    const FinitePresentation& presentation() const { return pres_; }
    int rank() const { return pres_.rank; }
    int coset_count() const { return cosets_; }
    bool complete() const { return complete_; }

    // image of `coset` under generator g^sign; -1 when undefined
    int act(int coset, int g, int sign) const { return e_[idx_(coset, g, sign)]; }
    void set(int coset, int g, int sign, int image) { e_[idx_(coset, g, sign)] = image; }

    // trace w starting at `coset`; -1 if an undefined entry is hit
    int trace(int coset, const Word& w) const;

    void mark_complete(bool b) { complete_ = b; }

private:
    FinitePresentation pres_;
    int cosets_ = 0;
    bool complete_ = false;
    std::vector<int> e_;
    size_t idx_(int c, int g, int sign) const {
        return size_t(c) * size_t(2 * pres_.rank) + size_t(2 * g + (sign < 0 ? 1 : 0));
    }
};

enum class EnumStrategy { Hlt, Felsch };

// Todd-Coxeter enumeration of the cosets of the trivial subgroup.
// HLT relator scanning with immediate coincidence handling; the Felsch
// strategy closes all deductions before defining a coset. Throws
// LimitError when more than max_cosets would be defined.
CosetTable todd_coxeter(const FinitePresentation& p, long long max_cosets = 1'000'000,
                        EnumStrategy strategy = EnumStrategy::Hlt);

// One permutation of {0..|Q|-1} per generator; requires a complete table.
std::vector<std::vector<int>> permutation_action(const CosetTable& t);

long long group_order(const CosetTable& t);

} // namespace fpg
