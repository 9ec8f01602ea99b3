#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "common.hpp"

using namespace romembed;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    auto p = fs::temp_directory_path() / ("romembed_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("L1 error")
{
    Curve one{{0.0, 2.0}, {1.0, 1.0}};
    Curve shifted{{0.0, 0.5, 2.0}, {1.1, 1.1, 1.1}};
    CHECK(l1_error(one, one, 0.0, 2.0) == 0.0);
    CHECK(l1_error(shifted, one, 0.0, 2.0) == Approx(0.1).epsilon(1e-12));
    CHECK(linf_error(shifted, one, 0.0, 2.0) == Approx(0.1).epsilon(1e-12));
    // constant extrapolation past the reconstruction's ends
    Curve partial{{0.5, 1.0}, {1.0, 1.0}};
    CHECK(l1_error(partial, one, 0.0, 2.0) == 0.0);
    Curve elsewhere{{5.0, 6.0}, {1.0, 1.0}};
    CHECK_THROWS(l1_error(one, elsewhere, 0.0, 2.0));
    CHECK_THROWS(l1_error(one, one, 1.0, 1.0));
}

TEST_CASE("config parsing and validation")
{
    auto c = ExperimentConfig::from_json(io::json::parse(R"({"n": 7, "fit": {"w_max": 12}})"));
    CHECK(c.n == 7);
    CHECK(c.w_max == 12.0);
    CHECK(c.to_json()["fit"]["iterations"] == 10);
    CHECK_THROWS(ExperimentConfig::from_json(io::json::parse(R"({"stages": ["forward", "bogus"]})")));
    CHECK_THROWS(ExperimentConfig::from_json(io::json::parse(R"({"nn": 3})")));
    CHECK_THROWS(ExperimentConfig::from_json(io::json::parse(R"({"slowness_source": "magic"})")));
}

TEST_CASE("end-to-end bounded run writes every artifact")
{
    ExperimentConfig c;
    c.n = 12;
    c.fine_N = 1000;
    c.out = scratch("run").string();
    c.stages = {"forward", "spectrum", "rom", "embed-og", "embed-krein", "passivity"};
    auto m = run(c);
    CHECK(m.l1_velocity >= 0.0);
    CHECK(m.l1_velocity < 0.05);
    CHECK(m.l1_mass >= 0.0);
    CHECK(m.linf_velocity >= 0.0);
    for (auto f : {"impedance.csv", "spectrum.csv", "rom.csv", "weights.csv", "og.csv", "krein.csv",
                   "krein_velocity.csv", "passivity.json", "truth.csv", "meta.json", "metrics.json", "plot.gp"})
        CHECK(fs::exists(fs::path(c.out) / f));
    auto meta = io::read_json((fs::path(c.out) / "meta.json").string());
    CHECK(meta["n"] == 12);
    CHECK(meta["resolved"]["c0"] == MediumProfile::preset("smooth_bump", 2.0, MediumKind::bounded).speed(0.0));
    CHECK(slurp(fs::path(c.out) / "og.csv").rfind("node_type,x,c_estimate\n", 0) == 0);
}

TEST_CASE("runs are deterministic and resumable")
{
    ExperimentConfig c;
    c.n = 10;
    c.fine_N = 800;
    c.stages = {"spectrum", "rom", "embed-og", "embed-krein"};
    c.out = scratch("det_a").string();
    run(c);
    auto a = fs::path(c.out);
    c.out = scratch("det_b").string();
    run(c);
    auto b = fs::path(c.out);
    for (auto f : {"spectrum.csv", "rom.csv", "weights.csv", "og.csv", "krein.csv", "truth.csv"})
        CHECK(slurp(a / f) == slurp(b / f));

    // same chain in two invocations
    c.out = scratch("det_c").string();
    c.stages = {"spectrum", "rom"};
    run(c);
    c.stages = {"embed-og", "embed-krein"};
    run(c);
    auto cdir = fs::path(c.out);
    for (auto f : {"og.csv", "krein.csv", "krein_velocity.csv"}) CHECK(slurp(a / f) == slurp(cdir / f));
}

TEST_CASE("missing inputs halt the chain with the stage name")
{
    ExperimentConfig c;
    c.out = scratch("missing").string();
    c.stages = {"rom"};
    try {
        run(c);
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage == "rom");
    }
    c.stages = {"fit"};
    CHECK_THROWS_AS(run(c), StageError);
}

TEST_CASE("stage errors carry the stage")
{
    ExperimentConfig c;
    c.out = scratch("open_og").string();
    c.medium = io::json::parse(
        R"({"kind": "semi_infinite", "L": 1.0, "speed": {"type": "preset", "name": "constant"}})");
    c.stages = {"spectrum"};
    try {
        run(c);
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage == "spectrum");
    }
}

TEST_CASE("sweep")
{
    ExperimentConfig c;
    c.fine_N = 800;
    c.out = scratch("sweep").string();
    auto empty = sweep(c, {});
    CHECK(empty.empty());
    CHECK(slurp(fs::path(c.out) / "sweep.csv") == "n,l1_velocity,l1_mass,runtime_ms\n");

    auto rows = sweep(c, {6, 12});
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].l1_velocity < rows[0].l1_velocity);
    CHECK(rows[0].error.empty());

    // one entry equals a plain run
    ExperimentConfig single = c;
    single.n = 12;
    single.out = scratch("sweep_single").string();
    auto m = run(single);
    CHECK(m.l1_velocity == rows[1].l1_velocity);
    CHECK(m.l1_mass == rows[1].l1_mass);

    // failures are recorded, the sweep goes on
    auto bad = sweep(c, {0, 6});
    CHECK_FALSE(bad[0].error.empty());
    CHECK(bad[1].error.empty());
}
