#include "mk/words.hpp"

#include <cstdlib>

namespace mk {

std::uint32_t word_degree(const GeneratorSet& gens, const Word& w) {
    std::uint32_t d = 0;
    for (std::uint16_t g : w) d += gens.degrees[g];
    return d;
}

std::uint64_t default_word_cap() {
    const char* env = std::getenv("MK_MAX_WORDS");
    if (!env || !*env) return 200000;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (!end || *end != '\0' || v == 0)
        throw InputError("MK_MAX_WORDS must be a positive integer");
    return v;
}

std::vector<Word> words_of_degree(const GeneratorSet& gens, std::uint32_t n) {
    if (n == 0) return {Word{}};
    std::vector<Word> out;
    for (std::uint16_t g = 0; g < gens.size(); ++g) {
        std::uint32_t d = gens.degrees[g];
        if (d > n) continue;
        for (Word w : words_of_degree(gens, n - d)) {
            Word nw;
            nw.reserve(w.size() + 1);
            nw.push_back(g);
            nw.insert(nw.end(), w.begin(), w.end());
            out.push_back(std::move(nw));
        }
    }
    return out;
}

WordTable::WordTable(GeneratorSet gens, std::uint32_t max_degree, std::uint64_t cap)
    : gens_(std::move(gens)), max_degree_(max_degree) {
    gens_.validate();

    // Count words per degree before materializing any of them, so a blown cap
    // is reported without first allocating an enormous basis.
    std::vector<std::uint64_t> count(max_degree_ + 1, 0);
    count[0] = 1;
    for (std::uint32_t n = 1; n <= max_degree_; ++n) {
        for (std::uint16_t g = 0; g < gens_.size(); ++g)
            if (gens_.degrees[g] <= n) count[n] += count[n - gens_.degrees[g]];
        if (count[n] > cap)
            throw CapExceeded("word count " + std::to_string(count[n]) + " in degree " +
                              std::to_string(n) + " exceeds the cap " + std::to_string(cap) +
                              " (raise MK_MAX_WORDS to override)");
    }

    words_.resize(max_degree_ + 1);
    index_.resize(max_degree_ + 1);
    words_[0] = {Word{}};
    for (std::uint32_t n = 1; n <= max_degree_; ++n) {
        words_[n].reserve(count[n]);
        for (std::uint16_t g = 0; g < gens_.size(); ++g) {
            std::uint32_t d = gens_.degrees[g];
            if (d > n) continue;
            for (const Word& w : words_[n - d]) {
                Word nw;
                nw.reserve(w.size() + 1);
                nw.push_back(g);
                nw.insert(nw.end(), w.begin(), w.end());
                words_[n].push_back(std::move(nw));
            }
        }
    }
    for (std::uint32_t n = 0; n <= max_degree_; ++n) {
        index_[n].reserve(words_[n].size());
        for (std::uint32_t i = 0; i < words_[n].size(); ++i)
            index_[n].emplace(words_[n][i], i);
    }
}

std::uint32_t WordTable::index_of(const Word& w) const {
    std::uint32_t n = degree_of(w);
    check_degree(n);
    auto it = index_[n].find(w);
    if (it == index_[n].end())
        throw InternalError("word not present in its degree table");
    return it->second;
}

std::uint32_t WordTable::concat_index(std::uint32_t deg_a, std::uint32_t idx_a,
                                      std::uint32_t deg_b, std::uint32_t idx_b) const {
    const Word& a = words(deg_a)[idx_a];
    const Word& b = words(deg_b)[idx_b];
    Word ab;
    ab.reserve(a.size() + b.size());
    ab.insert(ab.end(), a.begin(), a.end());
    ab.insert(ab.end(), b.begin(), b.end());
    std::uint32_t n = deg_a + deg_b;
    check_degree(n);
    auto it = index_[n].find(ab);
    if (it == index_[n].end())
        throw InternalError("concatenated word not present in its degree table");
    return it->second;
}

} // namespace mk
