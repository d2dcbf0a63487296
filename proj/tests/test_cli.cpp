#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path dir = fs::temp_directory_path() / "disslab_cli_test";

int run(const std::string& args, const std::string& stdout_file = "")
{
    std::string cmd = std::string(DISSLAB_CLI_PATH) + " " + args;
    cmd += " > " + (stdout_file.empty() ? std::string("/dev/null") : (dir / stdout_file).string()) + " 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const std::string& name)
{
    std::ifstream in(dir / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> csv_rows(const std::string& name)
{
    std::ifstream in(dir / name);
    std::string line;
    std::vector<std::vector<double>> rows;
    int i = 0;
    while (std::getline(in, line)) {
        if (i++ < 2) continue; // version line, column names
        std::vector<double> r;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) r.push_back(std::stod(cell));
        rows.push_back(r);
    }
    return rows;
}

std::string p(const std::string& name) { return (dir / name).string(); }

struct Setup {
    Setup()
    {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
};
const Setup setup;

} // namespace

TEST_CASE("simulate writes the trajectory")
{
    REQUIRE(run("simulate --matrix 2,1,1,1 --nu 0.01 --steps 4 --initial mode:1,0 --out " + p("traj.csv")) == 0);
    const std::string text = slurp("traj.csv");
    CHECK(text.rfind("# disslab-csv v1\nn,energy,h1,e_nu\n", 0) == 0);
    auto rows = csv_rows("traj.csv");
    REQUIRE(rows.size() == 5);
    const double sums[] = {0, 5, 39, 272, 1869};
    for (int n = 0; n <= 4; ++n) CHECK(rows[n][1] == doctest::Approx(std::exp(-0.02 * sums[n])).epsilon(1e-13));
}

TEST_CASE("dissipation-time report")
{
    REQUIRE(run("dissipation-time --matrix 2,1,1,1 --nu-grid 1e-6:1e-2:9 --method exact --out " + p("report.json") +
                " --csv " + p("tau.csv")) == 0);
    auto j = nlohmann::json::parse(slurp("report.json"));
    CHECK(j["entries"].size() == 9);
    CHECK(j["fit"]["slope"].get<double>() > 0.8);
    for (auto& c : j["bound_checks"]) CHECK(c["satisfied"].get<bool>());
    auto rows = csv_rows("tau.csv");
    REQUIRE(rows.size() == 9);
    CHECK(rows.back()[1] == 6); // nu = 1e-2
    CHECK(rows.back()[2] == doctest::Approx(std::log(100.0)));
}

TEST_CASE("bounds at nu = 1e-3")
{
    REQUIRE(run("bounds --which H1 --rate power:1,1 --alpha 1 --beta 1 --nu-grid 1e-6:1e-2:9 --out " +
                p("bounds.csv")) == 0);
    auto rows = csv_rows("bounds.csv");
    REQUIRE(rows.size() == 9);
    CHECK(rows[6][0] == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(rows[6][1] == doctest::Approx(3.96850263).epsilon(1e-8));
    CHECK(rows[6][2] == doctest::Approx(34 / (1e-3 * rows[6][1])));
}

TEST_CASE("mixing-rate series")
{
    REQUIRE(run("mixing-rate --alpha 1 --beta 1 --n-max 5 --out " + p("strong.csv")) == 0);
    auto rows = csv_rows("strong.csv");
    REQUIRE(rows.size() == 6);
    CHECK(rows[1][1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-11));
    REQUIRE(run("mixing-rate --mode weak --n-max 100 --out " + p("weak.csv")) == 0);
    auto w = csv_rows("weak.csv");
    REQUIRE(w.size() == 100);
    CHECK(w[99][1] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("exit codes")
{
    CHECK(run("dissipation-time --matrix 2,1,1 --nu-grid 1e-3:1e-2:3") == 2);
    CHECK(run("dissipation-time --nu-grid 1e-2:1e-3:0") == 2);
    CHECK(run("no-such-command") == 2);
    CHECK(run("simulate --nu -1") == 2);
    CHECK(run("dissipation-time --nu-grid 1e-40:1e-40:1 --out " + p("x.json")) == 3);
    CHECK(run("--help") == 0);
}

TEST_CASE("determinism across runs and job counts")
{
    const std::string args = "sweep --nu-grid 1e-6:1e-2:7";
    REQUIRE(run(args + " --jobs 1 --out " + p("s1.csv")) == 0);
    REQUIRE(run(args + " --jobs 1 --out " + p("s2.csv")) == 0);
    REQUIRE(run(args + " --jobs 3 --out " + p("s3.csv")) == 0);
    CHECK(slurp("s1.csv") == slurp("s2.csv"));
    CHECK(slurp("s1.csv") == slurp("s3.csv"));
    auto rows = csv_rows("s1.csv");
    REQUIRE(rows.size() == 7);
    for (auto& r : rows) {
        CHECK(r[1] <= r[3]); // trivial bound
        CHECK(r[1] <= r[4]); // strong-mixing bound
    }
}

TEST_CASE("config file fills unset options, flags win")
{
    {
        std::ofstream cfg(dir / "run.json");
        cfg << R"({"subcommand": "simulate", "nu": 0.5, "steps": 2, "initial": "mode:1,0"})";
    }
    REQUIRE(run("--config " + p("run.json") + " --out " + p("c1.csv")) == 0);
    CHECK(csv_rows("c1.csv").size() == 3);
    REQUIRE(run("simulate --config " + p("run.json") + " --nu 0.01 --steps 4 --out " + p("c2.csv")) == 0);
    auto rows = csv_rows("c2.csv");
    REQUIRE(rows.size() == 5);
    CHECK(rows[1][1] == doctest::Approx(std::exp(-0.1)).epsilon(1e-13));
    {
        std::ofstream cfg(dir / "bad.json");
        cfg << R"({"subcommand": "simulate", "nu": 0.5, "bogus": 1})";
    }
    CHECK(run("--config " + p("bad.json")) == 2);
}

TEST_CASE("verify suites")
{
    CHECK(run("verify lemmas", "lemmas.txt") == 0);
    CHECK(slurp("lemmas.txt").find("FAIL") == std::string::npos);
    CHECK(run("verify identities", "ident.txt") == 0);

    // a corrupted report must fail and name the violated bound
    REQUIRE(run("dissipation-time --nu-grid 1e-6:1e-2:5 --out " + p("good.json")) == 0);
    auto j = nlohmann::json::parse(slurp("good.json"));
    CHECK(run("verify bounds --report " + p("good.json"), "ok.txt") == 0);
    j["entries"][2]["tau_d"] = 1e9;
    {
        std::ofstream out(dir / "bad_report.json");
        out << j.dump();
    }
    CHECK(run("verify bounds --report " + p("bad_report.json"), "bad.txt") != 0);
    const std::string out = slurp("bad.txt");
    CHECK(out.find("strong-mixing dissipation bound") != std::string::npos);
    CHECK(out.find("FAIL") != std::string::npos);
}

TEST_CASE("cts subcommand")
{
    REQUIRE(run("cts --nu-grid 1e-2:1e-2:1 --k1max 4 --ygrid 32 --out " + p("cts.csv")) == 0);
    auto rows = csv_rows("cts.csv");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][1] > 0.5);
    CHECK(rows[0][1] < 2.0);
}
