#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fpg/errors.hpp"

namespace fpg {

// A letter of a free-group word: generator index g >= 0 with a sign,
// packed as +(g+1) / -(g+1). Words are freely reduced on construction
// and stay reduced under every operation below.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<int32_t> letters) : ls_(std::move(letters)) { reduce_(); }

    static Word generator(int g, int sign = +1);

    const std::vector<int32_t>& letters() const { return ls_; }
    bool empty() const { return ls_.empty(); }
    size_t length() const { return ls_.size(); }

    bool operator==(const Word&) const = default;

    // largest generator index occurring, or -1 for the empty word
    int max_generator() const;

    friend Word operator*(const Word& u, const Word& v);
    void append(int32_t letter); // multiply by a single letter on the right

private:
    std::vector<int32_t> ls_;
    void reduce_();
};

inline int letter_gen(int32_t l) { return (l > 0 ? l : -l) - 1; }
inline int letter_sign(int32_t l) { return l > 0 ? +1 : -1; }
inline int32_t make_letter(int g, int sign) { return sign > 0 ? int32_t(g + 1) : -int32_t(g + 1); }

Word inverse(const Word& w);
Word conjugate(const Word& w, const Word& g); // g^-1 w g
Word commutator(const Word& h, const Word& k); // h^-1 k^-1 h k
Word power(const Word& w, long long n);

// Signed count of occurrences of each generator below `rank`.
// Throws DomainError if w uses an index >= rank.
std::vector<long> exponent_sums(const Word& w, int rank);

// Cyclic reduction: strips matching inverse first/last letters.
// Presents a conjugate element; normal closures are unaffected.
Word cyclically_reduce(const Word& w);

// Text syntax: "abAB" (lowercase generator, uppercase inverse) when all
// names are single lowercase letters, otherwise "x1 x2^-1" indexed tokens.
std::string format_word(const Word& w, const std::vector<std::string>& names = {});
Word parse_word(std::string_view text, int rank, const std::vector<std::string>& names = {});

} // namespace fpg
