#pragma once

/* Report assembly for the command-line front end.  Every subcommand builds a
 * single ordered JSON document; the text renderer prints a human view of that
 * same document, so the two output formats cannot drift apart.  Reports carry
 * no timestamps or timings: the same configuration must produce byte-identical
 * output on every run. */

#include <json.hpp>

#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mk/algebra.hpp"
#include "mk/errors.hpp"
#include "mk/jspaces.hpp"
#include "mk/komplex.hpp"
#include "mk/presentation.hpp"
#include "mk/yoneda.hpp"

namespace mk {

using OrderedJson = nlohmann::ordered_json;

constexpr int kReportSchema = 1;

struct RunConfig {
    std::string subcommand;
    std::string input;
    std::uint32_t hdeg = 6;
    std::uint32_t adeg = 12;
    std::string field_arg; /* empty keeps the field named in the input file */
    bool debug_crosscheck = false;
    bool json = false;
    bool basis_dump = false;
    bool expect_koszul = false;
    std::uint32_t oracle_hdeg = 4;
    std::uint32_t oracle_adeg = 8;
};

/* Accepts "Q", "F 32003", "F32003" (case-insensitive, inner spaces ignored). */
inline FieldSpec parse_field_arg(const std::string& arg) {
    std::string s;
    for (char c : arg)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s == "Q" || s == "q") return FieldSpec{};
    if (!s.empty() && (s[0] == 'F' || s[0] == 'f')) {
        std::string digits = s.substr(1);
        if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos &&
            digits.size() <= 9) {
            std::uint32_t p = static_cast<std::uint32_t>(std::stoul(digits));
            if (p >= 2) return FieldSpec{false, p};
        }
    }
    throw InputError("unrecognized field '" + arg + "', expected Q or F <prime>");
}

inline std::string coeff_str(const Rat& v) { return v.get_str(); }
inline std::string coeff_str(const Fp& v) { return std::to_string(v.value()); }

inline std::string word_str(const WordTable& wt, std::uint32_t n, std::uint32_t idx) {
    if (n == 0) return "1";
    const Word& w = wt.words(n)[idx];
    std::string out;
    for (std::size_t l = 0; l < w.size(); ++l) {
        if (l > 0) out += '*';
        out += wt.gens().names[w[l]];
    }
    return out;
}

inline OrderedJson header_json(const RunConfig& cfg, const FieldSpec& field) {
    OrderedJson doc = OrderedJson::object();
    doc["schema"] = kReportSchema;
    doc["subcommand"] = cfg.subcommand;
    doc["input"] = cfg.input;
    doc["field"] = field.str();
    doc["bounds"] = OrderedJson{{"hdeg", cfg.hdeg}, {"adeg", cfg.adeg}};
    return doc;
}

inline OrderedJson presentation_json(const Presentation& p) {
    OrderedJson gens = OrderedJson::array();
    for (std::size_t g = 0; g < p.gens.names.size(); ++g)
        gens.push_back(OrderedJson{{"name", p.gens.names[g]}, {"degree", p.gens.degrees[g]}});
    OrderedJson rels = OrderedJson::array();
    for (std::size_t r = 0; r < p.relations.size(); ++r)
        rels.push_back(OrderedJson{{"degree", p.rel_degrees[r]}, {"poly", p.relation_str(r)}});
    OrderedJson out = OrderedJson::object();
    out["field"] = p.field.str();
    out["generators"] = std::move(gens);
    out["relations"] = std::move(rels);
    return out;
}

/* Dimension tables keyed by level then internal degree; zero entries are
 * dropped so a vanishing level serializes as an empty object. */
inline OrderedJson dim_table_json(const std::vector<std::vector<std::uint32_t>>& t) {
    OrderedJson out = OrderedJson::object();
    for (std::size_t i = 0; i < t.size(); ++i) {
        OrderedJson row = OrderedJson::object();
        for (std::size_t n = 0; n < t[i].size(); ++n)
            if (t[i][n] > 0) row[std::to_string(n)] = t[i][n];
        out[std::to_string(i)] = std::move(row);
    }
    return out;
}

inline OrderedJson dim_table_json(
    const std::map<std::uint32_t, std::map<std::uint32_t, std::uint32_t>>& t) {
    OrderedJson out = OrderedJson::object();
    for (const auto& [i, row] : t) {
        OrderedJson jrow = OrderedJson::object();
        for (const auto& [n, d] : row) jrow[std::to_string(n)] = d;
        out[std::to_string(i)] = std::move(jrow);
    }
    return out;
}

inline std::string verdict_str(KoszulVerdict v) {
    switch (v) {
        case KoszulVerdict::multi_koszul_up_to_bounds: return "multi-Koszul-up-to-bounds";
        case KoszulVerdict::not_multi_koszul: return "not-multi-Koszul";
        default: return "inconclusive-cap";
    }
}

inline OrderedJson witness_json(const std::optional<KoszulWitness>& w) {
    if (!w) return nullptr;
    OrderedJson out = OrderedJson::object();
    out["level"] = w->level;
    out["degree"] = w->degree;
    out["jdim"] = w->jdim;
    out["tordim"] = w->tordim;
    return out;
}

inline OrderedJson hilbert_json(const std::vector<std::uint32_t>& h) {
    return OrderedJson(h);
}

inline void append_koszul_report(OrderedJson& doc, const KoszulReport& rep) {
    doc["jdims"] = dim_table_json(rep.jdims);
    doc["tor"] = dim_table_json(rep.tor);
    doc["verdict"] = verdict_str(rep.verdict);
    doc["witness"] = witness_json(rep.witness);
    doc["euler_ok"] = rep.euler_ok;
    doc["euler_levels"] = rep.euler_levels;
    doc["vanishes_from"] = rep.vanishes_from ? OrderedJson(*rep.vanishes_from) : OrderedJson(nullptr);
    doc["crosscheck_ok"] = rep.crosscheck_ok ? OrderedJson(*rep.crosscheck_ok) : OrderedJson(nullptr);
}

template <class K>
OrderedJson basis_json(const WordTable& wt, const JFamily<K>& fam) {
    OrderedJson out = OrderedJson::object();
    for (std::uint32_t i = 0; i <= fam.hmax(); ++i) {
        OrderedJson level = OrderedJson::object();
        for (std::uint32_t n = 0; n <= fam.trunc(); ++n) {
            const auto& rows = fam.at(i).at(n).rows();
            if (rows.empty()) continue;
            OrderedJson jrows = OrderedJson::array();
            for (const SparseVec<K>& row : rows) {
                OrderedJson terms = OrderedJson::array();
                for (const auto& [col, c] : row)
                    terms.push_back(OrderedJson::array({word_str(wt, n, col), coeff_str(c)}));
                jrows.push_back(std::move(terms));
            }
            level[std::to_string(n)] = std::move(jrows);
        }
        out[std::to_string(i)] = std::move(level);
    }
    return out;
}

/* Dual pair products m2: (J_i)^# (x) (J_i')^# -> (J_{i+i'})^#.  Emitted per
 * total internal degree n as a matrix over the source basis of J_{i+i'}(n);
 * columns enumerate the full tensor basis ((n1,r1),(n2,r2)) with n1+n2 = n.
 * The transpose sign (-1)^{i i'} is folded into the entries, so the tables
 * are the multiplication of the dual algebra, not the raw inclusions. */
template <class K>
OrderedJson pairs_json(const ProductTable<K>& pt) {
    OrderedJson out = OrderedJson::object();
    for (const auto& [key, io] : pt.pairs) {
        const std::uint32_t i1 = key.first;
        const std::uint32_t i2 = key.second;
        const std::uint32_t src = i1 + i2;
        const K sign = parity_sign<K>(dual_iota_sign_exp({i1, i2}));
        OrderedJson per_n = OrderedJson::object();
        for (std::uint32_t n = 0; n <= pt.trunc; ++n) {
            const std::uint32_t nrows = pt.jdims[src][n];
            if (nrows == 0) continue;
            std::vector<std::array<std::uint32_t, 4>> cols;
            for (std::uint32_t n1 = 0; n1 <= n; ++n1) {
                const std::uint32_t n2 = n - n1;
                for (std::uint32_t r1 = 0; r1 < pt.jdims[i1][n1]; ++r1)
                    for (std::uint32_t r2 = 0; r2 < pt.jdims[i2][n2]; ++r2)
                        cols.push_back({n1, r1, n2, r2});
            }
            OrderedJson jcols = OrderedJson::array();
            for (const auto& c : cols)
                jcols.push_back(OrderedJson::array({c[0], c[1], c[2], c[3]}));
            auto eit = io.expansions.find(n);
            OrderedJson matrix = OrderedJson::array();
            for (std::uint32_t r = 0; r < nrows; ++r) {
                OrderedJson jrow = OrderedJson::array();
                for (const auto& c : cols) {
                    K acc{};
                    if (eit != io.expansions.end())
                        for (const TensorCoord<K>& tc : eit->second[r])
                            if (tc.degs[0] == c[0] && tc.rows[0] == c[1] && tc.degs[1] == c[2] &&
                                tc.rows[1] == c[3]) {
                                K t = acc + tc.coeff;
                                acc = t;
                            }
                    K signed_acc = sign * acc;
                    jrow.push_back(coeff_str(signed_acc));
                }
                matrix.push_back(std::move(jrow));
            }
            OrderedJson block = OrderedJson::object();
            block["cols"] = std::move(jcols);
            block["matrix"] = std::move(matrix);
            per_n[std::to_string(n)] = std::move(block);
        }
        out[std::to_string(i1) + "," + std::to_string(i2)] = std::move(per_n);
    }
    return out;
}

/* Structure coproducts as stored: unsigned inclusion coefficients, one map
 * per admissible target tuple, rows keyed by internal degree.  The dual
 * product signs are applied at evaluation time and are reported with the
 * pair tables instead. */
template <class K>
OrderedJson coproducts_json(const AInfStructure<K>& s) {
    OrderedJson out = OrderedJson::object();
    for (const auto& [m, maps] : s.delta) {
        OrderedJson arr = OrderedJson::array();
        for (const IotaMap<K>& io : maps) {
            OrderedJson jm = OrderedJson::object();
            jm["source"] = io.source;
            jm["targets"] = io.targets;
            OrderedJson rows_by_n = OrderedJson::object();
            for (const auto& [n, rows] : io.expansions) {
                OrderedJson jrows = OrderedJson::array();
                for (const TensorExpansion<K>& exp : rows) {
                    OrderedJson terms = OrderedJson::array();
                    for (const TensorCoord<K>& tc : exp) {
                        OrderedJson jt = OrderedJson::object();
                        jt["degs"] = tc.degs;
                        jt["rows"] = tc.rows;
                        jt["c"] = coeff_str(tc.coeff);
                        terms.push_back(std::move(jt));
                    }
                    jrows.push_back(std::move(terms));
                }
                rows_by_n[std::to_string(n)] = std::move(jrows);
            }
            jm["maps"] = std::move(rows_by_n);
            arr.push_back(std::move(jm));
        }
        out[std::to_string(m)] = std::move(arr);
    }
    return out;
}

inline OrderedJson stasheff_json(const StasheffReport& rep) {
    OrderedJson out = OrderedJson::object();
    out["ok"] = rep.ok;
    out["probes"] = rep.probes;
    OrderedJson viols = OrderedJson::array();
    for (const StasheffViolation& v : rep.violations) {
        OrderedJson jv = OrderedJson::object();
        jv["identity"] = v.identity;
        jv["source"] = v.source;
        jv["adams"] = v.adams;
        jv["detail"] = v.detail;
        viols.push_back(std::move(jv));
    }
    out["violations"] = std::move(viols);
    return out;
}

template <class K>
OrderedJson twisted_json(const TwistedReport<K>& rep) {
    OrderedJson out = OrderedJson::object();
    out["equal"] = rep.equal;
    out["levels"] = rep.levels;
    out["rows"] = rep.rows;
    out["mismatches"] = OrderedJson(rep.mismatches);
    return out;
}

inline OrderedJson k2_json(const K2Report& rep) {
    OrderedJson out = OrderedJson::object();
    out["ok"] = rep.ok;
    out["imax"] = rep.imax;
    OrderedJson fails = OrderedJson::array();
    for (const K2Failure& f : rep.failures) {
        OrderedJson jf = OrderedJson::object();
        jf["level"] = f.level;
        jf["adams"] = f.adams;
        jf["defect"] = f.defect;
        fails.push_back(std::move(jf));
    }
    out["failures"] = std::move(fails);
    return out;
}

namespace detail {

/* A cell (i, n) with n below i times the smallest generator degree is zero
 * for every algebra with this generator set, as is anything in positive
 * degree at level zero; the grid prints those as '.' instead of '0'. */
inline bool structurally_zero(std::uint32_t i, std::uint32_t n, std::uint32_t mingen) {
    if (i == 0) return n > 0;
    return n < i * mingen;
}

inline void render_grid(std::ostream& os, const std::string& name, const OrderedJson& table,
                        std::uint32_t hmax, std::uint32_t dmax, std::uint32_t mingen) {
    os << name << " (level i by degree n, '.' = zero for degree reasons):\n";
    os << "  i\\n";
    for (std::uint32_t n = 0; n <= dmax; ++n) {
        std::string cell = std::to_string(n);
        os << std::string(cell.size() >= 4 ? 1 : 4 - cell.size(), ' ') << cell;
    }
    os << "\n";
    for (std::uint32_t i = 0; i <= hmax; ++i) {
        std::string label = std::to_string(i);
        os << std::string(label.size() >= 5 ? 1 : 5 - label.size(), ' ') << label;
        const std::string ikey = std::to_string(i);
        for (std::uint32_t n = 0; n <= dmax; ++n) {
            std::string cell = "0";
            if (table.contains(ikey) && table[ikey].contains(std::to_string(n)))
                cell = table[ikey][std::to_string(n)].dump();
            else if (structurally_zero(i, n, mingen))
                cell = ".";
            os << std::string(cell.size() >= 4 ? 1 : 4 - cell.size(), ' ') << cell;
        }
        os << "\n";
    }
}

inline std::uint32_t min_generator_degree(const OrderedJson& doc) {
    std::uint32_t mg = 1;
    if (doc.contains("presentation") && doc["presentation"].contains("generators")) {
        bool first = true;
        for (const auto& g : doc["presentation"]["generators"]) {
            std::uint32_t d = g["degree"].get<std::uint32_t>();
            if (first || d < mg) mg = d;
            first = false;
        }
    }
    return mg;
}

} // namespace detail

inline void render_text(const OrderedJson& doc, std::ostream& os) {
    os << doc["subcommand"].get<std::string>() << " report for " << doc["input"].get<std::string>()
       << "\n";
    os << "field " << doc["field"].get<std::string>() << ", bounds hdeg "
       << doc["bounds"]["hdeg"].get<std::uint32_t>() << " adeg "
       << doc["bounds"]["adeg"].get<std::uint32_t>() << "\n";
    if (doc.contains("warning")) os << "warning: " << doc["warning"].get<std::string>() << "\n";
    if (doc.contains("presentation")) {
        const OrderedJson& p = doc["presentation"];
        os << "generators:";
        for (const auto& g : p["generators"])
            os << " " << g["name"].get<std::string>() << ":" << g["degree"].get<std::uint32_t>();
        os << "\n";
        os << "relations (" << p["relations"].size() << "):\n";
        for (const auto& r : p["relations"])
            os << "  [" << r["degree"].get<std::uint32_t>() << "] " << r["poly"].get<std::string>()
               << "\n";
    }
    if (doc.contains("hilbert")) {
        os << "hilbert:";
        for (const auto& d : doc["hilbert"]) os << " " << d.get<std::uint32_t>();
        os << "\n";
    }
    const std::uint32_t hmax = doc["bounds"]["hdeg"].get<std::uint32_t>();
    const std::uint32_t dmax = doc["bounds"]["adeg"].get<std::uint32_t>();
    const std::uint32_t mg = detail::min_generator_degree(doc);
    if (doc.contains("jdims")) detail::render_grid(os, "J dimensions", doc["jdims"], hmax, dmax, mg);
    if (doc.contains("tor")) detail::render_grid(os, "Tor dimensions", doc["tor"], hmax, dmax, mg);
    if (doc.contains("bar")) {
        const std::uint32_t oh = doc["oracle_bounds"]["hdeg"].get<std::uint32_t>();
        const std::uint32_t od = doc["oracle_bounds"]["adeg"].get<std::uint32_t>();
        detail::render_grid(os, "bar-resolution Tor", doc["bar"], oh, od, mg);
        detail::render_grid(os, "minimal-resolution Tor", doc["minres"], oh, od, mg);
        os << "oracle agreement: " << (doc["agree"].get<bool>() ? "yes" : "NO") << "\n";
    }
    if (doc.contains("verdict"))
        os << "verdict: " << doc["verdict"].get<std::string>() << " (hdeg " << hmax << ", adeg "
           << dmax << ")\n";
    if (doc.contains("witness") && !doc["witness"].is_null()) {
        const OrderedJson& w = doc["witness"];
        os << "witness: level " << w["level"].get<std::uint32_t>() << " degree "
           << w["degree"].get<std::uint32_t>() << " has J dim " << w["jdim"].get<std::uint32_t>()
           << " but Tor dim " << w["tordim"].get<std::uint32_t>() << "\n";
    }
    if (doc.contains("euler_ok"))
        os << "euler identity: " << (doc["euler_ok"].get<bool>() ? "holds" : "FAILS")
           << " (checked with " << doc["euler_levels"].get<std::uint32_t>() << " levels)\n";
    if (doc.contains("vanishes_from") && !doc["vanishes_from"].is_null())
        os << "levels vanish from " << doc["vanishes_from"].get<std::uint32_t>()
           << " on within the degree bound\n";
    if (doc.contains("crosscheck_ok") && !doc["crosscheck_ok"].is_null())
        os << "one-sided complex crosscheck: "
           << (doc["crosscheck_ok"].get<bool>() ? "agrees" : "DISAGREES") << "\n";
    if (doc.contains("pairs")) {
        std::size_t nonzero = 0;
        for (const auto& [key, per_n] : doc["pairs"].items()) {
            (void)key;
            if (!per_n.empty()) ++nonzero;
        }
        os << "pair products: " << doc["pairs"].size() << " bidegrees, " << nonzero
           << " with a nonzero target\n";
    }
    if (doc.contains("coproducts")) {
        os << "coproducts:";
        for (const auto& [m, maps] : doc["coproducts"].items())
            os << " arity " << m << " (" << maps.size() << " maps)";
        os << "\n";
    }
    if (doc.contains("stasheff"))
        os << "coalgebra identities: " << (doc["stasheff"]["ok"].get<bool>() ? "hold" : "FAIL")
           << " (" << doc["stasheff"]["probes"].get<std::uint64_t>() << " probes)\n";
    if (doc.contains("stasheff_algebra"))
        os << "algebra identities: "
           << (doc["stasheff_algebra"]["ok"].get<bool>() ? "hold" : "FAIL") << " ("
           << doc["stasheff_algebra"]["probes"].get<std::uint64_t>() << " probes)\n";
    if (doc.contains("reduced_ok"))
        os << "reduced coproduct identities: " << (doc["reduced_ok"].get<bool>() ? "hold" : "FAIL")
           << "\n";
    if (doc.contains("twisted"))
        os << "twisted differential matches the one-sided complex: "
           << (doc["twisted"]["equal"].get<bool>() ? "yes" : "NO") << " ("
           << doc["twisted"]["rows"].get<std::uint64_t>() << " rows)\n";
    if (doc.contains("k2"))
        os << "generation by levels one and two: " << (doc["k2"]["ok"].get<bool>() ? "yes" : "NO")
           << " (up to level " << doc["k2"]["imax"].get<std::uint32_t>() << ")\n";
    if (doc.contains("results")) {
        for (const auto& r : doc["results"]) {
            os << r["file"].get<std::string>() << " " << (r["pass"].get<bool>() ? "PASS" : "FAIL");
            if (!r["pass"].get<bool>()) {
                os << " (";
                bool first = true;
                for (const auto& [check, ok] : r.items())
                    if (check != "file" && check != "pass" && ok.is_boolean() && !ok.get<bool>()) {
                        if (!first) os << ", ";
                        os << check;
                        first = false;
                    }
                os << ")";
            }
            os << "\n";
        }
        os << "corpus: " << doc["passed"].get<std::uint32_t>() << "/"
           << doc["total"].get<std::uint32_t>() << " pass\n";
    }
}

inline void emit_report(const OrderedJson& doc, bool json_mode, std::ostream& os) {
    if (json_mode) {
        os << doc.dump(2) << "\n";
        return;
    }
    render_text(doc, os);
}

} // namespace mk
