#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "mk/report.hpp"

namespace {

using namespace mk;

/* One full analysis pass used by the corpus runner.  The slow structural
 * checks (identities, twisted differential, generation) only run on the
 * rational side; the finite-field pass is a dimension screen. */
struct CorpusChecks {
    std::vector<std::uint32_t> hilbert;
    std::vector<std::vector<std::uint32_t>> jdims;
    std::vector<std::vector<std::uint32_t>> tor;
    bool verdict_ok = false;
    bool euler_ok = false;
    bool identities_ok = false;
    bool twisted_ok = false;
    bool k2_ok = false;
};

template <class K>
CorpusChecks corpus_run(const Presentation& pres, std::uint32_t H, std::uint32_t D, bool full) {
    auto A = TruncatedAlgebra<K>::build(pres, D);
    CorpusChecks out;
    out.hilbert = A.hilbert();
    KoszulReport rep = decide_multikoszul(A, H);
    out.jdims = rep.jdims;
    out.tor = rep.tor;
    out.verdict_ok = rep.verdict == KoszulVerdict::multi_koszul_up_to_bounds;
    out.euler_ok = rep.euler_ok;
    if (!full) return out;
    JFamily<K> fam = compute_J(A, H);
    AInfStructure<K> s = ainf_coproducts(A.wt(), fam, 3, out.verdict_ok);
    out.identities_ok = check_stasheff_coalgebra(s, 4).ok && check_stasheff_algebra(s, 4).ok &&
                        check_counit_axioms(s) && check_reduced_identity(s, 3).ok;
    auto right = build_complex(A, fam, ComplexKind::right);
    out.twisted_ok = twisted_complex_check(A, fam, s, right).equal;
    out.k2_ok = k2_check(A.wt(), fam, H).ok;
    return out;
}

int run_corpus(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(cfg.input))
        throw InputError("corpus directory '" + cfg.input + "' not found");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(cfg.input))
        if (entry.path().extension() == ".alg") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InputError("no .alg files in '" + cfg.input + "'");

    OrderedJson doc = header_json(cfg, FieldSpec{});
    doc["field"] = "Q + F 32003";
    OrderedJson results = OrderedJson::array();
    std::uint32_t passed = 0;
    for (const fs::path& file : files) {
        OrderedJson r = OrderedJson::object();
        r["file"] = file.filename().string();
        bool pass = false;
        try {
            Presentation pres = parse_presentation_file(file.string());
            pres.field = FieldSpec{};
            CorpusChecks q = corpus_run<Rat>(pres, cfg.hdeg, cfg.adeg, true);
            Presentation pf = pres;
            pf.field = FieldSpec{false, 32003};
            Fp::set_modulus(32003);
            CorpusChecks m = corpus_run<Fp>(pf, cfg.hdeg, cfg.adeg, false);
            bool fields_agree = q.hilbert == m.hilbert;
            if (q.jdims != m.jdims) fields_agree = false;
            if (q.tor != m.tor) fields_agree = false;
            r["verdict_ok"] = q.verdict_ok;
            r["euler_ok"] = q.euler_ok;
            r["identities_ok"] = q.identities_ok;
            r["twisted_ok"] = q.twisted_ok;
            r["k2_ok"] = q.k2_ok;
            r["fields_agree"] = fields_agree;
            pass = q.verdict_ok && q.euler_ok && q.identities_ok && q.twisted_ok && q.k2_ok &&
                   fields_agree;
        } catch (const std::exception& e) {
            r["error"] = e.what();
        }
        r["pass"] = pass;
        if (pass) ++passed;
        results.push_back(std::move(r));
    }
    doc["results"] = std::move(results);
    doc["passed"] = passed;
    doc["total"] = static_cast<std::uint32_t>(files.size());
    doc["ok"] = passed == files.size();
    emit_report(doc, cfg.json, std::cout);
    return passed == files.size() ? 0 : 1;
}

template <class K>
int run_sub(const RunConfig& cfg, const Presentation& pres) {
    const std::string& sc = cfg.subcommand;

    if (sc == "oracle") {
        auto A = TruncatedAlgebra<K>::build(pres, cfg.oracle_adeg);
        auto bar = bar_tor(A, cfg.oracle_hdeg, cfg.oracle_adeg);
        auto minres = minimal_resolution_tor(A, cfg.oracle_hdeg);
        OrderedJson doc = header_json(cfg, pres.field);
        doc["oracle_bounds"] =
            OrderedJson{{"hdeg", cfg.oracle_hdeg}, {"adeg", cfg.oracle_adeg}};
        doc["presentation"] = presentation_json(pres);
        doc["bar"] = dim_table_json(bar);
        doc["minres"] = dim_table_json(minres);
        const bool agree = bar == minres;
        doc["agree"] = agree;
        emit_report(doc, cfg.json, std::cout);
        return agree ? 0 : 1;
    }

    auto A = TruncatedAlgebra<K>::build(pres, cfg.adeg);
    OrderedJson doc = header_json(cfg, pres.field);
    doc["presentation"] = presentation_json(pres);
    doc["hilbert"] = hilbert_json(A.hilbert());

    if (sc == "hilbert") {
        emit_report(doc, cfg.json, std::cout);
        return 0;
    }

    if (sc == "jspaces") {
        JFamily<K> fam = compute_J(A, cfg.hdeg, cfg.debug_crosscheck);
        doc["jdims"] = dim_table_json(fam.dim_table());
        if (cfg.basis_dump) doc["bases"] = basis_json(A.wt(), fam);
        emit_report(doc, cfg.json, std::cout);
        return 0;
    }

    if (sc == "tor") {
        doc["tor"] = dim_table_json(minimal_resolution_tor(A, cfg.hdeg));
        emit_report(doc, cfg.json, std::cout);
        return 0;
    }

    if (sc == "check") {
        KoszulReport rep = decide_multikoszul(A, cfg.hdeg, cfg.debug_crosscheck);
        append_koszul_report(doc, rep);
        emit_report(doc, cfg.json, std::cout);
        if (cfg.expect_koszul && rep.verdict != KoszulVerdict::multi_koszul_up_to_bounds) return 1;
        return 0;
    }

    /* yoneda and ainfty share the setup: the Koszulity verdict decides
     * whether the tables come with the structure theorem behind them. */
    KoszulReport rep = decide_multikoszul(A, cfg.hdeg);
    const bool hyp = rep.verdict == KoszulVerdict::multi_koszul_up_to_bounds;
    JFamily<K> fam = compute_J(A, cfg.hdeg);
    if (!hyp) doc["warning"] = "formal tables, no theorem applies";
    doc["verdict"] = verdict_str(rep.verdict);
    doc["jdims"] = dim_table_json(fam.dim_table());

    if (sc == "yoneda") {
        ProductTable<K> pt = yoneda_products(A.wt(), fam, cfg.hdeg, hyp);
        doc["pairs"] = pairs_json(pt);
        emit_report(doc, cfg.json, std::cout);
        return 0;
    }

    if (sc == "ainfty") {
        const std::uint32_t nmax = 4;
        AInfStructure<K> s = ainf_coproducts(A.wt(), fam, nmax, hyp);
        doc["coproducts"] = coproducts_json(s);
        doc["stasheff"] = stasheff_json(check_stasheff_coalgebra(s, nmax + 1));
        doc["stasheff_algebra"] = stasheff_json(check_stasheff_algebra(s, nmax));
        bool reduced = check_counit_axioms(s);
        for (std::uint32_t m = 3; m <= nmax; ++m)
            if (!check_reduced_identity(s, m).ok) reduced = false;
        doc["reduced_ok"] = reduced;
        auto right = build_complex(A, fam, ComplexKind::right);
        doc["twisted"] = twisted_json(twisted_complex_check(A, fam, s, right));
        doc["k2"] = k2_json(k2_check(A.wt(), fam, cfg.hdeg));
        emit_report(doc, cfg.json, std::cout);
        return 0;
    }

    throw InternalError("unhandled subcommand '" + sc + "'");
}

} // namespace

int main(int argc, char** argv) {
    mk::RunConfig cfg;
#ifdef MK_CORPUS_DIR
    const std::string default_corpus = MK_CORPUS_DIR;
#else
    const std::string default_corpus = "corpus";
#endif
    cfg.input = default_corpus;

    CLI::App app{"multi-Koszul analyzer for finitely presented graded algebras"};
    app.require_subcommand(1);
    std::vector<std::string> field_tokens;
    std::vector<std::uint32_t> oracle_bounds{4, 8};
    bool text_mode = false;

    auto add_common = [&](CLI::App* sub, bool file_input) {
        if (file_input)
            sub->add_option("input", cfg.input, "presentation file")->required();
        else
            sub->add_option("dir", cfg.input, "directory of presentation files");
        sub->add_option("--hdeg", cfg.hdeg, "homological degree bound H");
        sub->add_option("--adeg", cfg.adeg, "internal degree bound D");
        sub->add_option("--field", field_tokens, "coefficient field: Q or F <prime>")
            ->expected(1, 2);
        sub->add_flag("--debug-crosscheck", cfg.debug_crosscheck,
                      "run the redundant internal consistency passes");
        auto* jopt = sub->add_flag("--json", cfg.json, "machine-readable output");
        auto* topt = sub->add_flag("--text", text_mode, "human-readable output (default)");
        jopt->excludes(topt);
        topt->excludes(jopt);
        sub->add_flag("--basis-dump", cfg.basis_dump, "include explicit subspace bases");
        return sub;
    };

    add_common(app.add_subcommand("hilbert", "dimensions of the truncated algebra"), true);
    add_common(app.add_subcommand("jspaces", "the tower of distinguished subspaces"), true);
    add_common(app.add_subcommand("tor", "minimal-resolution Betti table"), true);
    auto* oracle = add_common(
        app.add_subcommand("oracle", "bar-resolution oracle against the minimal resolution"),
        true);
    oracle->add_option("--oracle-bounds", oracle_bounds, "bar oracle bounds: H D")->expected(2);
    auto* check = add_common(
        app.add_subcommand("check", "decide multi-Koszulity up to the bounds"), true);
    check->add_flag("--expect-koszul", cfg.expect_koszul,
                    "exit nonzero unless the verdict is multi-Koszul-up-to-bounds");
    add_common(app.add_subcommand("yoneda", "dual pair product tables"), true);
    add_common(app.add_subcommand("ainfty", "full structure maps and identity checks"), true);
    auto* corpus = add_common(
        app.add_subcommand("corpus", "property suite over a directory of presentations"), false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (cfg.subcommand == "corpus" && corpus->count("--adeg") == 0) cfg.adeg = 10;
    cfg.oracle_hdeg = oracle_bounds[0];
    cfg.oracle_adeg = oracle_bounds[1];
    if (!field_tokens.empty()) {
        std::string joined;
        for (const std::string& t : field_tokens) {
            if (!joined.empty()) joined += ' ';
            joined += t;
        }
        cfg.field_arg = joined;
    }

    try {
        if (cfg.hdeg < 1) throw mk::InputError("hdeg must be at least 1");
        if (cfg.adeg < 2) throw mk::InputError("adeg must be at least 2");
        if (cfg.oracle_hdeg < 1 || cfg.oracle_adeg < 2)
            throw mk::InputError("oracle bounds must satisfy H >= 1 and D >= 2");
        if (cfg.subcommand == "corpus") return run_corpus(cfg);
        mk::Presentation pres = mk::parse_presentation_file(cfg.input);
        if (!cfg.field_arg.empty()) pres.field = mk::parse_field_arg(cfg.field_arg);
        if (pres.field.rational) return run_sub<mk::Rat>(cfg, pres);
        mk::Fp::set_modulus(pres.field.p);
        return run_sub<mk::Fp>(cfg, pres);
    } catch (const mk::CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const mk::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
