#include "mk/tensorpoly.hpp"

#include <cctype>

namespace mk {

namespace {

struct Lexer {
    const std::string& s;
    std::size_t pos = 0;

    explicit Lexer(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool done() {
        skip_ws();
        return pos >= s.size();
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }

    mpz_class number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw InputError("expected a number at position " + std::to_string(pos) +
                                           " in '" + s + "'");
        return mpz_class(s.substr(start, pos - start));
    }

    std::string name() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
            ++pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
        }
        if (pos == start) throw InputError("expected a name at position " + std::to_string(pos) +
                                           " in '" + s + "'");
        return s.substr(start, pos - start);
    }
};

} // namespace

TensorPoly parse_tensor_poly(const std::string& text, const GeneratorSet& gens) {
    TensorPoly out;
    Lexer lx(text);
    if (lx.done()) throw InputError("empty polynomial");
    bool first = true;
    while (!lx.done()) {
        int sign = 1;
        if (lx.eat('+')) {
            sign = 1;
        } else if (lx.eat('-')) {
            sign = -1;
        } else if (!first) {
            throw InputError("expected + or - between terms at position " + std::to_string(lx.pos) +
                             " in '" + text + "'");
        }
        first = false;

        Rat coeff(sign);
        Word word;
        bool more = true;
        while (more) {
            char c = lx.peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                mpz_class num = lx.number();
                mpz_class den = 1;
                if (lx.eat('/')) den = lx.number();
                Rat f = rat_from_fraction(num, den);
                coeff *= f;
            } else {
                std::string nm = lx.name();
                auto idx = gens.index_of(nm);
                if (!idx) throw InputError("unknown generator '" + nm + "'");
                unsigned long rep = 1;
                if (lx.eat('^')) rep = mpz_class(lx.number()).get_ui();
                for (unsigned long r = 0; r < rep; ++r) word.push_back(*idx);
            }
            more = lx.eat('*');
        }

        if (sgn(coeff) != 0) {
            auto [it, fresh] = out.terms.emplace(std::move(word), coeff);
            if (!fresh) {
                it->second += coeff;
                if (sgn(it->second) == 0) out.terms.erase(it);
            }
        }
    }
    return out;
}

TensorPoly reverse(const TensorPoly& p) {
    TensorPoly out;
    for (const auto& [w, c] : p.terms) {
        Word r(w.rbegin(), w.rend());
        auto [it, fresh] = out.terms.emplace(std::move(r), c);
        if (!fresh) {
            it->second += c;
            if (sgn(it->second) == 0) out.terms.erase(it);
        }
    }
    return out;
}

std::optional<std::uint32_t> homogeneous_degree(const TensorPoly& p, const GeneratorSet& gens) {
    std::optional<std::uint32_t> deg;
    for (const auto& [w, c] : p.terms) {
        std::uint32_t d = word_degree(gens, w);
        if (!deg) {
            deg = d;
        } else if (*deg != d) {
            throw InputError("inhomogeneous polynomial: terms of degree " + std::to_string(*deg) +
                             " and " + std::to_string(d));
        }
    }
    return deg;
}

std::string poly_str(const TensorPoly& p, const GeneratorSet& gens) {
    if (p.terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [w, c] : p.terms) {
        Rat a = c;
        bool neg = sgn(a) < 0;
        if (neg) a = -a;
        if (first) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        first = false;
        bool unit_coeff = (a == 1);
        if (!unit_coeff || w.empty()) out += a.get_str();
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i > 0 || !unit_coeff) out += "*";
            out += gens.names[w[i]];
        }
    }
    return out;
}

} // namespace mk
