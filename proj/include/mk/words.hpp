#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mk/errors.hpp"

namespace mk {

/* Ordered generator declarations.  The declaration order fixes the word basis
 * order and therefore every coordinate this engine ever prints. */
struct GeneratorSet {
    std::vector<std::string> names;
    std::vector<std::uint32_t> degrees;

    std::uint16_t size() const { return static_cast<std::uint16_t>(names.size()); }

    std::optional<std::uint16_t> index_of(const std::string& name) const {
        for (std::uint16_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return i;
        return std::nullopt;
    }

    /* An empty generator set is legal: it presents the ground field, the unit
     * of the free product. */
    void validate() const {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (degrees[i] < 1)
                throw InputError("generator " + names[i] + " has nonpositive degree");
            for (std::size_t j = i + 1; j < names.size(); ++j)
                if (names[i] == names[j])
                    throw InputError("duplicate generator " + names[i]);
        }
    }
};

/* A word is a sequence of generator indices; the empty word is the unit. */
using Word = std::vector<std::uint16_t>;

struct WordHash {
    std::size_t operator()(const Word& w) const {
        std::size_t h = 0x9e3779b97f4a7c15ull;
        for (std::uint16_t g : w) h = h * 1099511628211ull ^ (g + 1);
        return h;
    }
};

std::uint32_t word_degree(const GeneratorSet& gens, const Word& w);

/* Word-count cap per Adams degree; MK_MAX_WORDS overrides the default. */
std::uint64_t default_word_cap();

/* All words of one Adams degree in degree-lexicographic order: first
 * generator ascending, then the tail recursively. */
std::vector<Word> words_of_degree(const GeneratorSet& gens, std::uint32_t n);

/* The word bases of T(V)_0 .. T(V)_D with index lookup.  Counts are checked
 * against the cap before any degree is materialized. */
class WordTable {
public:
    WordTable(GeneratorSet gens, std::uint32_t max_degree,
              std::uint64_t cap = default_word_cap());

    const GeneratorSet& gens() const { return gens_; }
    std::uint32_t max_degree() const { return max_degree_; }
    std::uint32_t gen_degree(std::uint16_t g) const { return gens_.degrees[g]; }

    std::uint32_t dim(std::uint32_t n) const {
        check_degree(n);
        return static_cast<std::uint32_t>(words_[n].size());
    }

    const std::vector<Word>& words(std::uint32_t n) const {
        check_degree(n);
        return words_[n];
    }

    std::uint32_t degree_of(const Word& w) const { return word_degree(gens_, w); }

    std::uint32_t index_of(const Word& w) const;

    /* Index of the concatenation of two indexed words. */
    std::uint32_t concat_index(std::uint32_t deg_a, std::uint32_t idx_a,
                               std::uint32_t deg_b, std::uint32_t idx_b) const;

private:
    void check_degree(std::uint32_t n) const {
        if (n > max_degree_)
            throw InternalError("word table queried above its degree bound");
    }

    GeneratorSet gens_;
    std::uint32_t max_degree_;
    std::vector<std::vector<Word>> words_;
    std::vector<std::unordered_map<Word, std::uint32_t, WordHash>> index_;
};

} // namespace mk
