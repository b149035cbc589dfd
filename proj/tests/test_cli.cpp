#include "doctest.h"
#include "support.hpp"

#include "tessella/pipeline.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

using namespace tessella;
namespace fs = std::filesystem;

namespace {

#ifndef TESSELLA_BINARY
#define TESSELLA_BINARY "tessella"
#endif

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("tessella_test_" + name);
    fs::remove_all(p);
    return p;
}

PipelineConfig example_config(const std::string& out) {
    PipelineConfig c;
    c.tiling_path = fixture::data_path("genus2_tiling.json");
    c.automorphism_path = fixture::data_path("genus2_automorphism.json");
    c.script_path = fixture::data_path("orbit_script.json");
    c.out_dir = out;
    return c;
}

const StageOutcome* find_stage(const RunReport& r, const std::string& name) {
    for (const auto& s : r.stages)
        if (s.name == name) return &s;
    return nullptr;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(TESSELLA_BINARY) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("pipeline on the bundled example") {
    fs::path out = scratch("pipeline");
    RunReport r = run_pipeline(example_config(out.string()));
    CHECK(r.exit_code == kExitPass);
    for (const auto& s : r.stages) CHECK_MESSAGE(s.outcome == "pass", s.name << ": " << s.detail.dump());

    auto [qp, wp] = qpot_from_json(read_json_file((out / "transport.json").string()));
    CHECK(wp == parse_potential(qp, fixture::transported_potential_text()));

    Json counts = read_json_file((out / "counts.json").string());
    REQUIRE(counts.size() == 2);
    CHECK(counts[0]["q"] == 2);
    CHECK(counts[0]["total"] == 2);
    CHECK(counts[0]["f_inverse_0"] == 2);
    CHECK(counts[1]["total"] == 96);

    Json report = read_json_file((out / "report.json").string());
    CHECK(report["input_digests"].size() == 3);
    CHECK(report["input_digests"]["genus2_tiling.json"] ==
          sha256_hex(read_text_file(fixture::data_path("genus2_tiling.json"))));
}

TEST_CASE("pipeline reports are byte-stable") {
    fs::path a = scratch("stable_a"), b = scratch("stable_b");
    run_pipeline(example_config(a.string()));
    run_pipeline(example_config(b.string()));
    for (const char* name : {"report.json", "transport.json", "psi.json", "counts.json", "script.json", "quiver.json"})
        CHECK_MESSAGE(read_text_file((a / name).string()) == read_text_file((b / name).string()), name);
}

TEST_CASE("pipeline configuration errors") {
    SUBCASE("q not prime") {
        PipelineConfig c = example_config(scratch("q4").string());
        c.fields = {4};
        RunReport r = run_pipeline(c);
        CHECK(r.exit_code == kExitInput);
        CHECK(r.stages.front().outcome == "error");
    }
    SUBCASE("sampling without a seed") {
        PipelineConfig c = example_config(scratch("seed").string());
        c.sample = 10;
        CHECK_THROWS_AS(validate_config(c), Error);
    }
    SUBCASE("dehn mode without phi_star") {
        PipelineConfig c = example_config(scratch("dehn_missing").string());
        c.psi_mode = "dehn";
        RunReport r = run_pipeline(c);
        const StageOutcome* psi = find_stage(r, "psi");
        REQUIRE(psi);
        CHECK(psi->outcome == "error");
        CHECK(psi->detail["error"].get<std::string>().find("MissingPhiAction") != std::string::npos);
        CHECK(r.exit_code == kExitInput);
    }
    SUBCASE("dehn mode with the bundled config") {
        PipelineConfig c = example_config(scratch("dehn").string());
        c.psi_mode = "dehn";
        c.psi_config_path = fixture::data_path("orbit_surface.json");
        RunReport r = run_pipeline(c);
        CHECK(find_stage(r, "psi")->outcome == "pass");
        CHECK(r.exit_code == kExitPass);
    }
    SUBCASE("missing tiling") {
        PipelineConfig c = example_config(scratch("missing").string());
        c.tiling_path = "/nonexistent/tiling.json";
        CHECK(run_pipeline(c).exit_code == kExitInput);
    }
}

TEST_CASE("emitted files") {
    Quiver q = fixture::running_quiver();
    Potential w = parse_potential(q, fixture::running_potential_text());
    fs::path dir = scratch("emit");
    fs::create_directories(dir);
    emit_json(dir.string(), "one.json", qpot_to_json(q, w));
    emit_json(dir.string(), "two.json", qpot_to_json(q, w));
    std::string one = read_text_file((dir / "one.json").string());
    CHECK(one == read_text_file((dir / "two.json").string()));
    CHECK(one.back() == '\n');
    Json j = Json::parse(one);
    CHECK(j["vertices"] == Json{"1", "2"});
    CHECK(j["arrows"].size() == 10);
    CHECK(j["arrows"][2]["id"] == "c");
    CHECK(j["arrows"][2]["src"] == "1");
    CHECK(j["arrows"][2]["tgt"] == "2");

    fs::path file = dir / "plain";
    write_text_file(file.string(), "x");
    try {
        emit_json((file / "sub").string(), "x.json", Json::object());
        FAIL("expected an IO error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
    }
}

TEST_CASE("command line exit codes") {
    const std::string tiling = fixture::data_path("genus2_tiling.json");
    const std::string phi = fixture::data_path("genus2_automorphism.json");
    fs::path dir = scratch("cli");
    fs::create_directories(dir);

    CHECK(run_cli("dual " + tiling) == 0);
    CHECK(run_cli("dual /nonexistent.json") == 4);
    CHECK(run_cli("choose-xi --tiling " + tiling + " --phi " + phi + " --dimer f,g,h") == 0);
    CHECK(run_cli("choose-xi --tiling " + tiling + " --phi " + phi + " --dimer f,c,h") == 3);
    CHECK(run_cli("verify-eq31 --all --tiling " + tiling + " --phi " + phi + " --generators a,b,c,d,e --bases 2") == 0);
    CHECK(run_cli("psi-verify --tiling " + tiling + " --phi " + phi +
                  " --generators a,b,c,d,e --bases 2 --tree e --basepoint 1") == 0);
    CHECK(run_cli("psi-verify --psi-mode dehn --tiling " + tiling + " --phi " + phi +
                  " --generators a,b,c,d,e --bases 2") == 4);
    CHECK(run_cli("check-script " + fixture::data_path("orbit_script.json") + " --tiling " + tiling + " --phi " + phi +
                  " --generators a,b,c,d,e --bases 2") == 0);

    // B written as a qpot file: counting accepts it, the dga refuses localized arrows
    std::string qpot = (dir / "b.json").string();
    Quiver b = fixture::orbit_quiver(false);
    for (const char* name : {"a", "b", "c", "d", "e"}) b.set_localized(b.arrow_id(name), true);
    write_text_file(qpot, dump_json(qpot_to_json(b, parse_potential(b, fixture::transported_potential_text()))));
    CHECK(run_cli("gdga-check " + qpot) == 4); // localized arrows are refused by the dga
    CHECK(run_cli("count --qpot " + qpot + " -d 1 -q 3") == 0);
    CHECK(run_cli("count --qpot " + qpot + " -d 1 -q 4") == 4);
    CHECK(run_cli("count --qpot " + qpot + " -d 1 -q 3 --sample 10") == 4);
    CHECK(run_cli("probe --qpot " + qpot + " -q 3 --omega 'rere + erer'") == 0);
    CHECK(run_cli("probe --qpot " + qpot + " -q 2 --omega 'rere + erer'") == 4);
    CHECK(run_cli("derive " + qpot + " --arrow c") == 0);
    CHECK(run_cli("nonsense") == 4);
}
