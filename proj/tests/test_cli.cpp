#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

/* Every test drives the installed binary through its real argv surface and
 * inspects stdout plus the exit status, the same way a shell user would. */

namespace {

using Json = nlohmann::ordered_json;

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, bool merge_stderr = false) {
    std::string cmd = std::string(MK_CLI_PATH) + " " + args;
    cmd += merge_stderr ? " 2>&1" : " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    RunResult res;
    if (pipe == nullptr) return res;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    int st = pclose(pipe);
    if (WIFEXITED(st)) res.code = WEXITSTATUS(st);
    return res;
}

/* Same, but with an environment assignment prefixed to the command. */
RunResult run_cli_env(const std::string& env, const std::string& args) {
    std::string cmd = env + " " + std::string(MK_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    RunResult res;
    if (pipe == nullptr) return res;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    int st = pclose(pipe);
    if (WIFEXITED(st)) res.code = WEXITSTATUS(st);
    return res;
}

std::string corpus_file(const std::string& name) {
    return std::string(MK_CORPUS_DIR) + "/" + name;
}

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = "/tmp/" + name;
    std::ofstream out(path);
    out << text;
    return path;
}

} // namespace

TEST_CASE("reports are stable and carry the bounds") {
    const std::string args = "check " + corpus_file("trunc3.alg") + " --hdeg 6 --adeg 12 --json";
    RunResult r1 = run_cli(args);
    REQUIRE(r1.code == 0);
    Json doc = Json::parse(r1.out);
    CHECK(doc["schema"].get<int>() == 1);
    CHECK(doc["subcommand"].get<std::string>() == "check");
    CHECK(doc["field"].get<std::string>() == "Q");
    CHECK(doc["bounds"]["hdeg"].get<int>() == 6);
    CHECK(doc["bounds"]["adeg"].get<int>() == 12);
    CHECK(doc["verdict"].get<std::string>() == "multi-Koszul-up-to-bounds");
    CHECK(doc["witness"].is_null());
    CHECK(doc["euler_ok"].get<bool>() == true);
    CHECK(doc["hilbert"][2].get<int>() == 1);
    CHECK(doc["hilbert"][3].get<int>() == 0);
    CHECK(doc["jdims"]["2"]["3"].get<int>() == 1);
    CHECK(doc["jdims"]["4"]["6"].get<int>() == 1);
    CHECK(doc["tor"]["2"]["3"].get<int>() == 1);
    CHECK(doc["tor"]["6"]["9"].get<int>() == 1);

    /* byte-identical on a rerun, and the JSON round-trips through a parser */
    RunResult r2 = run_cli(args);
    CHECK(r1.out == r2.out);
    CHECK(Json::parse(r1.out).dump(2) + "\n" == r1.out);

    RunResult t1 = run_cli("check " + corpus_file("trunc3.alg") + " --hdeg 6 --adeg 12");
    RunResult t2 = run_cli("check " + corpus_file("trunc3.alg") + " --hdeg 6 --adeg 12");
    REQUIRE(t1.code == 0);
    CHECK(t1.out == t2.out);
    CHECK(t1.out.find("verdict: multi-Koszul-up-to-bounds (hdeg 6, adeg 12)") !=
          std::string::npos);
    CHECK(t1.out.find("J dimensions") != std::string::npos);
    /* structurally-zero cells are marked, plain zeros are printed */
    CHECK(t1.out.find("   .") != std::string::npos);
    CHECK(t1.out.find("   0") != std::string::npos);
}

TEST_CASE("the finite field screen matches the rational tables") {
    RunResult q = run_cli("jspaces " + corpus_file("trunc4.alg") +
                          " --hdeg 6 --adeg 12 --field Q --json");
    RunResult m = run_cli("jspaces " + corpus_file("trunc4.alg") +
                          " --hdeg 6 --adeg 12 --field F 32003 --json");
    REQUIRE(q.code == 0);
    REQUIRE(m.code == 0);
    Json dq = Json::parse(q.out);
    Json dm = Json::parse(m.out);
    CHECK(dq["field"].get<std::string>() == "Q");
    CHECK(dm["field"].get<std::string>() == "F 32003");
    CHECK(dq["jdims"] == dm["jdims"]);
    CHECK(dq["hilbert"] == dm["hilbert"]);

    RunResult sq = run_cli("check " + corpus_file("sym_1_2.alg") + " --hdeg 4 --adeg 12 --json");
    RunResult sm = run_cli("check " + corpus_file("sym_1_2.alg") +
                           " --hdeg 4 --adeg 12 --field F32003 --json");
    REQUIRE(sq.code == 0);
    REQUIRE(sm.code == 0);
    Json dsq = Json::parse(sq.out);
    Json dsm = Json::parse(sm.out);
    CHECK(dsq["jdims"] == dsm["jdims"]);
    CHECK(dsq["tor"] == dsm["tor"]);
    CHECK(dsq["verdict"] == dsm["verdict"]);
}

TEST_CASE("exit codes separate user errors from verdicts") {
    const std::string bad = write_temp("mkcli_bad.alg", "field Q\ngens x:1, y:2\nrel x*y + x\n");
    RunResult rb = run_cli("check " + bad, true);
    CHECK(rb.code == 2);
    CHECK(rb.out.find("error:") != std::string::npos);

    RunResult rm = run_cli("check /tmp/mkcli_no_such_file.alg", true);
    CHECK(rm.code == 2);

    RunResult rc = run_cli_env("MK_MAX_WORDS=10",
                               "check " + corpus_file("free2.alg") + " --adeg 10");
    CHECK(rc.code == 3);

    const std::string nk =
        write_temp("mkcli_nk.alg", "field Q\ngens x:1, y:1\nrel x*x*x\nrel x*y\n");
    RunResult re = run_cli("check " + nk + " --hdeg 6 --adeg 10 --expect-koszul");
    CHECK(re.code == 1);
    RunResult rn = run_cli("check " + nk + " --hdeg 6 --adeg 10 --json");
    REQUIRE(rn.code == 0);
    Json dn = Json::parse(rn.out);
    CHECK(dn["verdict"].get<std::string>() == "not-multi-Koszul");
    REQUIRE_FALSE(dn["witness"].is_null());
    CHECK(dn["witness"]["level"].get<int>() == 3);
    CHECK(dn["witness"]["degree"].get<int>() == 4);
    CHECK(dn["witness"]["jdim"].get<int>() == 1);
    CHECK(dn["witness"]["tordim"].get<int>() == 2);
    CHECK(dn["euler_ok"].get<bool>() == false);

    CHECK(run_cli("check " + corpus_file("trunc3.alg") + " --hdeg 0", true).code == 2);
    CHECK(run_cli("check " + corpus_file("trunc3.alg") + " --adeg 1", true).code == 2);
    CHECK(run_cli("bogus", true).code == 2);
    CHECK(run_cli("--help").code == 0);
}

TEST_CASE("product and structure tables expose the computed maps") {
    RunResult ry = run_cli("yoneda " + corpus_file("trunc3.alg") + " --hdeg 6 --adeg 12 --json");
    REQUIRE(ry.code == 0);
    Json dy = Json::parse(ry.out);
    CHECK_FALSE(dy.contains("warning"));
    CHECK(dy["pairs"]["1,2"]["4"]["matrix"] == Json::parse(R"([["1"]])"));
    CHECK(dy["pairs"]["1,2"]["4"]["cols"] == Json::parse("[[1,0,3,0]]"));
    CHECK(dy["pairs"]["2,1"]["4"]["matrix"] == Json::parse(R"([["1"]])"));
    CHECK(dy["pairs"]["2,2"]["6"]["matrix"] == Json::parse(R"([["1"]])"));
    CHECK(dy["pairs"]["1,1"]["3"]["cols"].empty());

    RunResult ra = run_cli("ainfty " + corpus_file("trunc3.alg") + " --hdeg 6 --adeg 12 --json");
    REQUIRE(ra.code == 0);
    Json da = Json::parse(ra.out);
    CHECK(da["stasheff"]["ok"].get<bool>() == true);
    CHECK(da["stasheff"]["probes"].get<int>() > 0);
    CHECK(da["stasheff_algebra"]["ok"].get<bool>() == true);
    CHECK(da["reduced_ok"].get<bool>() == true);
    CHECK(da["twisted"]["equal"].get<bool>() == true);
    CHECK(da["twisted"]["rows"].get<int>() > 0);
    CHECK(da["k2"]["ok"].get<bool>() == true);
    bool found_triple = false;
    for (const auto& io : da["coproducts"]["3"]) {
        if (io["targets"] != Json::parse("[1,1,1]")) continue;
        found_triple = true;
        CHECK(io["source"].get<int>() == 2);
        CHECK(io["maps"]["3"][0] ==
              Json::parse(R"([{"degs":[1,1,1],"rows":[0,0,0],"c":"1"}])"));
    }
    CHECK(found_triple);

    /* levels that vanish serialize as empty objects, not missing keys */
    RunResult rp = run_cli("jspaces " + corpus_file("poly2.alg") + " --hdeg 6 --adeg 10 --json");
    REQUIRE(rp.code == 0);
    Json dp = Json::parse(rp.out);
    REQUIRE(dp["jdims"].contains("4"));
    CHECK(dp["jdims"]["4"].is_object());
    CHECK(dp["jdims"]["4"].empty());

    RunResult rd = run_cli("jspaces " + corpus_file("trunc3.alg") +
                           " --hdeg 6 --adeg 12 --basis-dump --json");
    REQUIRE(rd.code == 0);
    Json dd = Json::parse(rd.out);
    CHECK(dd["bases"]["2"]["3"] == Json::parse(R"([[["x*x*x","1"]]])"));
    CHECK(dd["bases"]["1"]["1"] == Json::parse(R"([[["x","1"]]])"));

    const std::string nk =
        write_temp("mkcli_nk.alg", "field Q\ngens x:1, y:1\nrel x*x*x\nrel x*y\n");
    RunResult rw = run_cli("yoneda " + nk + " --hdeg 6 --adeg 10 --json");
    REQUIRE(rw.code == 0);
    Json dw = Json::parse(rw.out);
    CHECK(dw["warning"].get<std::string>() == "formal tables, no theorem applies");

    RunResult ro = run_cli("oracle " + corpus_file("poly2.alg") + " --oracle-bounds 4 8 --json");
    REQUIRE(ro.code == 0);
    Json dr = Json::parse(ro.out);
    CHECK(dr["agree"].get<bool>() == true);
    CHECK(dr["bar"] == dr["minres"]);
    CHECK(dr["oracle_bounds"]["hdeg"].get<int>() == 4);
}

TEST_CASE("the corpus suite passes end to end") {
    RunResult r = run_cli("corpus " + std::string(MK_CORPUS_DIR) + " --json");
    REQUIRE(r.code == 0);
    Json doc = Json::parse(r.out);
    CHECK(doc["ok"].get<bool>() == true);
    CHECK(doc["total"].get<int>() == 6);
    CHECK(doc["passed"].get<int>() == 6);
    REQUIRE(doc["results"].size() == 6);
    for (const auto& row : doc["results"]) {
        CHECK(row["pass"].get<bool>() == true);
        CHECK(row["fields_agree"].get<bool>() == true);
        CHECK(row["twisted_ok"].get<bool>() == true);
    }

    RunResult t = run_cli("corpus " + std::string(MK_CORPUS_DIR));
    REQUIRE(t.code == 0);
    CHECK(t.out.find("trunc3.alg PASS") != std::string::npos);
    CHECK(t.out.find("corpus: 6/6 pass") != std::string::npos);
    CHECK(t.out.find("FAIL") == std::string::npos);
}
