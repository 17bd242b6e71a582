#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include <json.hpp>

#include "wmbo/cli.hpp"
#include "wmbo/io.hpp"

using namespace wmbo;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const auto p = fs::temp_directory_path() / "wmbo_cli_test" / name;
    fs::remove_all(p);
    return p;
}

int run(std::vector<std::string> args) { return run_cli(args); }

}  // namespace

TEST_CASE("usage errors exit with 2")
{
    const auto out = scratch("usage").string();
    CHECK(run({"evolve", "--n", "1000", "--out", out}) == 2);
    CHECK(run({"evolve", "--bogus", "1"}) == 2);
    CHECK(run({"evolve", "--shape", "square:1", "--out", out}) == 2);
    CHECK(run({"evolve", "--h", "abc", "--out", out}) == 2);
    CHECK(run({}) == 2);
    write_text(scratch("usage_cfg.txt"), "nonsense_key = 3\n");
    CHECK(run({"evolve", "--config", (fs::temp_directory_path() / "wmbo_cli_test" / "usage_cfg.txt").string(),
               "--out", out}) == 2);
}

TEST_CASE("regime failures exit with 1")
{
    const auto out = scratch("regime").string();
    CHECK(run({"converge-circle", "--n", "256", "--r0", "0.1", "--h", "4e-5", "--t-final", "8e-5", "--out", out}) == 1);
}

TEST_CASE("kernel table")
{
    const auto out = scratch("table");
    REQUIRE(run({"kernel-table", "--dim", "1", "--rmax", "1", "--step", "0.25", "--out", out.string()}) == 0);
    const auto csv = read_text(out / "kernel_table.csv");
    CHECK(csv.rfind("r,phi,psi\r\n0,", 0) == 0);
    int lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 6);
    const auto manifest = nlohmann::json::parse(read_text(out / "manifest.json"));
    CHECK(manifest["command"] == "kernel-table");
    CHECK(manifest["config"]["step"] == "0.25");
}

TEST_CASE("kernel-verify exit code follows its report")
{
    const auto out = scratch("verify");
    const int code = run({"kernel-verify", "--out", out.string()});
    const auto j = nlohmann::json::parse(read_text(out / "kernel_verify.json"));
    CHECK(code == (j["pass"].get<bool>() ? 0 : 1));
    CHECK(j["checks"].size() >= 12);
}

TEST_CASE("config precedence, manifest round trip and byte-identical reruns")
{
    const auto cfg = scratch("cfg.txt");
    write_text(cfg, "# small run\nshape = circle:0.2\nn = 64\nh = 1e-4\nsteps = 3\nsnapshot-every = 1\n");
    const auto a = scratch("a"), b = scratch("b"), c = scratch("c");
    REQUIRE(run({"evolve", "--config", cfg.string(), "--steps", "2", "--out", a.string()}) == 0);
    const auto m = nlohmann::json::parse(read_text(a / "manifest.json"));
    CHECK(m["config"]["steps"] == "2");
    CHECK(m["config"]["n"] == "64");
    CHECK(m["steps"] == 2);
    CHECK(m["statuses"].size() == 3);
    CHECK(fs::exists(a / "snapshot_00002.pgm"));
    CHECK(fs::exists(a / "snapshot_00000.svg"));

    REQUIRE(run({"evolve", "--config", cfg.string(), "--steps", "2", "--out", b.string()}) == 0);
    for (auto& e : fs::directory_iterator(a)) {
        if (e.path().filename() == "manifest.json") continue;
        CHECK(read_text(e.path()) == read_text(b / e.path().filename()));
    }

    REQUIRE(run({"evolve", "--config", (a / "manifest.json").string(), "--out", c.string()}) == 0);
    for (auto& e : fs::directory_iterator(a)) {
        if (e.path().filename() == "manifest.json") continue;
        CHECK(read_text(e.path()) == read_text(c / e.path().filename()));
    }
    auto mc = nlohmann::json::parse(read_text(c / "manifest.json"));
    mc["config"]["out"] = m["config"]["out"];
    CHECK(mc == m);
}

TEST_CASE("output directory from the environment")
{
    const auto dir = scratch("env");
    ::setenv("WMBO_OUT", dir.string().c_str(), 1);
    const int code = run({"shape-preview", "--shape", "rose", "--n", "256"});
    ::unsetenv("WMBO_OUT");
    CHECK(code == 0);
    CHECK(fs::exists(dir / "shape.pgm"));
    CHECK(fs::exists(dir / "shape.svg"));
    const auto pgm = read_pgm(dir / "shape.pgm", 5.0);
    CHECK(pgm.grid.n == 256);
}
