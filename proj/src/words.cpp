#include "fpg/words.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace fpg {

void Word::reduce_() {
    size_t n = 0; // prefix [0, n) is reduced
    for (int32_t l : ls_) {
        if (n > 0 && ls_[n - 1] == -l)
            --n;
        else
            ls_[n++] = l;
    }
    ls_.resize(n);
}

Word Word::generator(int g, int sign) {
    Word w;
    w.ls_.push_back(make_letter(g, sign));
    return w;
}

void Word::append(int32_t letter) {
    if (!ls_.empty() && ls_.back() == -letter)
        ls_.pop_back();
    else
        ls_.push_back(letter);
}

int Word::max_generator() const {
    int m = -1;
    for (int32_t l : ls_) m = std::max(m, letter_gen(l));
    return m;
}

Word operator*(const Word& u, const Word& v) {
    Word r = u;
    r.ls_.reserve(u.length() + v.length());
    for (int32_t l : v.letters()) r.append(l);
    return r;
}

Word inverse(const Word& w) {
    std::vector<int32_t> ls(w.letters().rbegin(), w.letters().rend());
    for (int32_t& l : ls) l = -l;
    return Word(std::move(ls));
}

Word conjugate(const Word& w, const Word& g) { return inverse(g) * w * g; }

Word commutator(const Word& h, const Word& k) { return inverse(h) * inverse(k) * h * k; }

Word power(const Word& w, long long n) {
    Word base = n < 0 ? inverse(w) : w;
    long long m = n < 0 ? -n : n;
    Word r;
    for (long long i = 0; i < m; ++i) r = r * base;
    return r;
}

std::vector<long> exponent_sums(const Word& w, int rank) {
    std::vector<long> e(size_t(rank), 0);
    for (int32_t l : w.letters()) {
        int g = letter_gen(l);
        if (g >= rank)
            throw DomainError("exponent_sums: generator index " + std::to_string(g) +
                              " out of range for rank " + std::to_string(rank));
        e[size_t(g)] += letter_sign(l);
    }
    return e;
}

Word cyclically_reduce(const Word& w) {
    const auto& ls = w.letters();
    size_t a = 0, b = ls.size();
    while (b > a + 1 && ls[a] == -ls[b - 1]) {
        ++a;
        --b;
    }
    return Word(std::vector<int32_t>(ls.begin() + long(a), ls.begin() + long(b)));
}

namespace {

bool single_letter_names(int rank, const std::vector<std::string>& names) {
    if (names.size() != size_t(rank) || rank == 0 || rank > 26) return false;
    for (const auto& n : names)
        if (n.size() != 1 || !std::islower(static_cast<unsigned char>(n[0]))) return false;
    return true;
}

std::vector<std::string> default_names(int rank) {
    std::vector<std::string> names;
    names.reserve(size_t(rank));
    if (rank <= 26) {
        for (int i = 0; i < rank; ++i) names.push_back(std::string(1, char('a' + i)));
    } else {
        for (int i = 0; i < rank; ++i) names.push_back("x" + std::to_string(i + 1));
    }
    return names;
}

} // namespace

std::string format_word(const Word& w, const std::vector<std::string>& names) {
    if (w.empty()) return "1";
    int rank = w.max_generator() + 1;
    if (single_letter_names(std::max(rank, int(names.size())), names) ||
        (names.empty() && rank <= 26)) {
        const auto ns = names.empty() ? default_names(std::max(rank, 1)) : names;
        std::string s;
        for (int32_t l : w.letters()) {
            char c = ns[size_t(letter_gen(l))][0];
            s += letter_sign(l) > 0 ? c : char(std::toupper(static_cast<unsigned char>(c)));
        }
        return s;
    }
    std::string s;
    for (int32_t l : w.letters()) {
        if (!s.empty()) s += ' ';
        s += "x" + std::to_string(letter_gen(l) + 1);
        if (letter_sign(l) < 0) s += "^-1";
    }
    return s;
}

Word parse_word(std::string_view text, int rank, const std::vector<std::string>& names) {
    std::vector<int32_t> ls;
    const bool lettered = single_letter_names(rank, names) || names.empty();
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    while (i < text.size()) {
        char c = text[i];
        if (c == '1' && (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
            ++i; // identity token
            skip_ws();
            continue;
        }
        if (c == 'x' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
            // indexed token: x<k> optionally followed by ^<exp>
            size_t j = i + 1, start = j;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            int idx = 0;
            std::from_chars(text.data() + start, text.data() + j, idx);
            if (idx < 1 || idx > rank)
                throw ParseError("generator index x" + std::to_string(idx) + " out of range", i);
            long long exp = 1;
            i = j;
            if (i < text.size() && text[i] == '^') {
                ++i;
                size_t es = i;
                if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
                auto res = std::from_chars(text.data() + es, text.data() + i, exp);
                if (i == es || res.ec != std::errc() || res.ptr != text.data() + i)
                    throw ParseError("malformed exponent", es);
            }
            int sign = exp < 0 ? -1 : +1;
            long long m = exp < 0 ? -exp : exp;
            for (long long k = 0; k < m; ++k) ls.push_back(make_letter(idx - 1, sign));
            skip_ws();
            continue;
        }
        if (lettered && std::isalpha(static_cast<unsigned char>(c))) {
            char lower = char(std::tolower(static_cast<unsigned char>(c)));
            int g = -1;
            if (!names.empty()) {
                for (size_t k = 0; k < names.size(); ++k)
                    if (names[k].size() == 1 && names[k][0] == lower) g = int(k);
            } else {
                g = lower - 'a';
            }
            if (g < 0 || g >= rank)
                throw ParseError(std::string("unknown generator '") + c + "'", i);
            ls.push_back(make_letter(g, std::islower(static_cast<unsigned char>(c)) ? +1 : -1));
            ++i;
            skip_ws();
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    return Word(std::move(ls));
}

} // namespace fpg
