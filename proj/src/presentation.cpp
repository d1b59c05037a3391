#include "mk/presentation.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace mk {

namespace {

std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

FieldSpec parse_field_line(const std::string& body, int lineno) {
    std::istringstream in(body);
    std::string kind;
    in >> kind;
    if (kind == "Q") {
        std::string rest;
        if (in >> rest)
            throw InputError("line " + std::to_string(lineno) + ": trailing input after 'field Q'");
        return FieldSpec{true, 0};
    }
    if (kind == "F") {
        long p = 0;
        if (!(in >> p) || p < 2)
            throw InputError("line " + std::to_string(lineno) + ": expected 'field F <prime>'");
        std::string rest;
        if (in >> rest)
            throw InputError("line " + std::to_string(lineno) + ": trailing input after field line");
        return FieldSpec{false, static_cast<std::uint32_t>(p)};
    }
    throw InputError("line " + std::to_string(lineno) + ": expected 'field Q' or 'field F <p>'");
}

GeneratorSet parse_gens_line(const std::string& body, int lineno) {
    GeneratorSet gens;
    if (strip(body).empty()) return gens; // the ground field itself
    for (const std::string& piece : split(body, ',')) {
        std::string item = strip(piece);
        if (item.empty())
            throw InputError("line " + std::to_string(lineno) + ": empty generator entry");
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw InputError("line " + std::to_string(lineno) + ": expected <name>:<degree> in '" +
                             item + "'");
        std::string name = strip(item.substr(0, colon));
        std::string degtext = strip(item.substr(colon + 1));
        if (name.empty())
            throw InputError("line " + std::to_string(lineno) + ": empty generator name");
        long deg = 0;
        try {
            std::size_t used = 0;
            deg = std::stol(degtext, &used);
            if (used != degtext.size()) throw std::invalid_argument(degtext);
        } catch (const std::exception&) {
            throw InputError("line " + std::to_string(lineno) + ": bad degree '" + degtext +
                             "' for generator " + name);
        }
        if (deg < 1)
            throw InputError("line " + std::to_string(lineno) + ": generator " + name +
                             " has nonpositive degree");
        gens.names.push_back(name);
        gens.degrees.push_back(static_cast<std::uint32_t>(deg));
    }
    gens.validate();
    return gens;
}

} // namespace

Presentation parse_presentation(const std::string& text) {
    Presentation p;
    bool have_field = false, have_gens = false;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::string line = strip(raw);
        if (line.empty()) continue;

        std::istringstream ls(line);
        std::string keyword;
        ls >> keyword;
        std::string body = strip(line.substr(keyword.size()));

        if (keyword == "field") {
            if (have_field)
                throw InputError("line " + std::to_string(lineno) + ": duplicate field line");
            p.field = parse_field_line(body, lineno);
            have_field = true;
        } else if (keyword == "gens") {
            if (!have_field)
                throw InputError("line " + std::to_string(lineno) + ": field line must come first");
            if (have_gens)
                throw InputError("line " + std::to_string(lineno) + ": duplicate gens line");
            p.gens = parse_gens_line(body, lineno);
            have_gens = true;
        } else if (keyword == "rel") {
            if (!have_gens)
                throw InputError("line " + std::to_string(lineno) +
                                 ": rel before generator declarations");
            TensorPoly poly = parse_tensor_poly(body, p.gens);
            auto deg = homogeneous_degree(poly, p.gens);
            if (!deg)
                throw InputError("line " + std::to_string(lineno) + ": relation is zero");
            if (*deg < 2)
                throw InputError("line " + std::to_string(lineno) + ": relation '" +
                                 poly_str(poly, p.gens) + "' has degree " + std::to_string(*deg) +
                                 " < 2");
            p.relations.push_back(std::move(poly));
            p.rel_degrees.push_back(*deg);
        } else {
            throw InputError("line " + std::to_string(lineno) + ": unknown keyword '" + keyword +
                             "'");
        }
    }
    if (!have_field) throw InputError("missing field line");
    if (!have_gens) throw InputError("missing gens line");
    return p;
}

Presentation parse_presentation_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_presentation(buf.str());
}

Presentation free_product(const Presentation& a, const Presentation& b) {
    if (!(a.field == b.field))
        throw InputError("free product: field mismatch (" + a.field.str() + " vs " +
                         b.field.str() + ")");
    Presentation out;
    out.field = a.field;
    out.gens = a.gens;

    // Rename colliding generators of b with numeric suffixes.
    std::vector<std::uint16_t> remap(b.gens.size());
    for (std::uint16_t i = 0; i < b.gens.size(); ++i) {
        std::string name = b.gens.names[i];
        if (out.gens.index_of(name)) {
            int suffix = 2;
            while (out.gens.index_of(name + "_" + std::to_string(suffix))) ++suffix;
            name += "_" + std::to_string(suffix);
        }
        remap[i] = static_cast<std::uint16_t>(out.gens.names.size());
        out.gens.names.push_back(name);
        out.gens.degrees.push_back(b.gens.degrees[i]);
    }

    out.relations = a.relations;
    out.rel_degrees = a.rel_degrees;
    for (std::size_t r = 0; r < b.relations.size(); ++r) {
        TensorPoly moved;
        for (const auto& [w, c] : b.relations[r].terms) {
            Word nw;
            nw.reserve(w.size());
            for (std::uint16_t g : w) nw.push_back(remap[g]);
            moved.terms.emplace(std::move(nw), c);
        }
        out.relations.push_back(std::move(moved));
        out.rel_degrees.push_back(b.rel_degrees[r]);
    }
    return out;
}

Presentation opposite(const Presentation& p) {
    Presentation out;
    out.field = p.field;
    out.gens = p.gens;
    out.rel_degrees = p.rel_degrees;
    for (const auto& rel : p.relations) out.relations.push_back(reverse(rel));
    return out;
}

} // namespace mk
