#include "rpf/scenario.hpp"

#include <doctest.h>

#include <filesystem>

using namespace rpf;
namespace fs = std::filesystem;

TEST_CASE("scenario configuration round-trips through JSON") {
    json j = {{"name", "demo"},       {"experiment", "filter"}, {"preset", "degenerate"},
              {"cells", 32},          {"particles", 150},       {"seed", 99},
              {"checkpoints", {0.5, 1.0}}};
    Scenario sc = Scenario::from_json(j);
    CHECK(sc.name == "demo");
    CHECK(sc.preset == "degenerate");
    CHECK(sc.cells == 32);
    CHECK(sc.checkpoints == std::vector<double>{0.5, 1.0});
    Scenario back = Scenario::from_json(sc.to_json());
    CHECK(back.to_json() == sc.to_json());
    CHECK(back.hash() == sc.hash());
}

TEST_CASE("default checkpoints cover the horizon") {
    Scenario sc = Scenario::from_json({{"name", "d"}, {"experiment", "simulate"}, {"T", 2.0}});
    REQUIRE(sc.checkpoints.size() == 5);
    CHECK(sc.checkpoints.back() == doctest::Approx(2.0));
}

TEST_CASE("hash separates configurations but ignores the thread count") {
    Scenario a = Scenario::from_json({{"name", "x"}, {"experiment", "simulate"}});
    Scenario b = a;
    b.seed = a.seed + 1;
    CHECK(a.hash() != b.hash());
    Scenario c = a;
    c.threads = 8;
    CHECK(a.hash() == c.hash());
}

TEST_CASE("reports are byte-identical across thread counts") {
    json j = {{"name", "t"}, {"experiment", "filter"}, {"cells", 32}, {"particles", 120},
              {"seed", 12}};
    Scenario sc = Scenario::from_json(j);
    std::string dumps[3];
    int ts[3] = {1, 4, 8};
    for (int i = 0; i < 3; ++i) {
        Scenario s = sc;
        s.threads = ts[i];
        dumps[i] = run_scenario(s).report.dump();
    }
    CHECK(dumps[0] == dumps[1]);
    CHECK(dumps[0] == dumps[2]);
}

TEST_CASE("unknown experiment is rejected") {
    Scenario sc = Scenario::from_json({{"name", "u"}, {"experiment", "nope"}});
    CHECK_THROWS(run_scenario(sc));
}

TEST_CASE("artifact directory: collision guard and golden verification") {
    fs::path tmp = fs::temp_directory_path() / "rpf_scenario_test";
    fs::remove_all(tmp);
    fs::create_directories(tmp / "scenarios");
    fs::create_directories(tmp / "golden");

    json j = {{"name", "sim32"}, {"experiment", "simulate"}, {"cells", 32}, {"seed", 4}};
    write_file((tmp / "scenarios" / "sim32.json").string(), json(j).dump(2));
    Scenario sc = Scenario::from_json(j);

    int code = run_scenario_to_dir(sc, (tmp / "run").string(), false);
    CHECK(code == 0);
    CHECK(fs::exists(tmp / "run" / "report.json"));
    CHECK(fs::exists(tmp / "run" / "manifest.json"));
    CHECK_THROWS(run_scenario_to_dir(sc, (tmp / "run").string(), false));
    CHECK(run_scenario_to_dir(sc, (tmp / "run").string(), true) == 0);

    // no golden yet: reported as new
    auto entries = verify_goldens((tmp / "scenarios").string(), (tmp / "golden").string());
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].status == "new");

    // freeze the report as golden: match
    fs::copy_file(tmp / "run" / "report.json", tmp / "golden" / "sim32.report.json");
    entries = verify_goldens((tmp / "scenarios").string(), (tmp / "golden").string());
    CHECK(entries[0].status == "match");

    // tamper: diff
    json rep = json::parse(read_file((tmp / "golden" / "sim32.report.json").string()));
    rep["terminal_Y"] = 123.0;
    write_file((tmp / "golden" / "sim32.report.json").string(), rep.dump(2));
    entries = verify_goldens((tmp / "scenarios").string(), (tmp / "golden").string());
    CHECK(entries[0].status == "diff");
    fs::remove_all(tmp);
}
