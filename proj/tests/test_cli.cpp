#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "harmlab/cli.hpp"

using namespace harmlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "harmlab");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "harmlab_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("budget strings") {
    const auto b = cli::parse_budgets("ball_cap=10,enum_budget=20,dense_cap=30");
    CHECK(b.ball_cap == 10);
    CHECK(b.enum_budget == 20);
    CHECK(b.dense_cap == 30);
    CHECK(cli::parse_budgets("77").ball_cap == 77);
    CHECK(cli::parse_budgets("enum_budget=5").ball_cap == cli::Budgets{}.ball_cap);
    CHECK_THROWS_AS(cli::parse_budgets("ball_cap=x"), Error);
    CHECK_THROWS_AS(cli::parse_budgets("bogus=1"), Error);
  }

  TEST_CASE("cell formatting") {
    CHECK(cli::format_cell(1.0 / 3.0) == "0.333333333333");
    CHECK(cli::format_cell(std::int64_t{42}) == "42");
    CHECK(cli::format_cell(true) == "true");
    CHECK(cli::format_cell(-0.0) == "0");
    CHECK(cli::format_cell(1e-20) == "1e-20");
    CHECK_THROWS_AS(cli::format_cell(std::nan("")), Error);
  }

  TEST_CASE("csv layout") {
    cli::Table t{{"a", "b"}, {}};
    CHECK(cli::to_csv(t, "c") == "# c\na,b\n");
    t.rows.push_back({std::string("x,y"), std::string("say \"hi\"")});
    t.rows.push_back({std::int64_t{1}, 2.5});
    CHECK(cli::to_csv(t, "c") == "# c\na,b\n\"x,y\",\"say \"\"hi\"\"\"\n1,2.5\n");
  }

  TEST_CASE("config hash is stable and key-order independent") {
    const auto a = nlohmann::json::parse(R"({"p": 2, "graph": "cycle:4"})");
    const auto b = nlohmann::json::parse(R"({"graph": "cycle:4", "p": 2})");
    CHECK(cli::config_hash(a) == cli::config_hash(b));
    CHECK(cli::config_hash(a).size() == 16);
    CHECK(cli::config_hash(a) != cli::config_hash(nlohmann::json::parse(R"({"p": 3})")));
  }

  TEST_CASE("exit codes") {
    CHECK(cli::exit_code(ErrorKind::InvalidConfig) == 2);
    CHECK(cli::exit_code(ErrorKind::InvalidArgument) == 2);
    CHECK(cli::exit_code(ErrorKind::BallTooLarge) == 3);
    CHECK(cli::exit_code(ErrorKind::EnumerationBudgetExceeded) == 3);
    CHECK(cli::exit_code(ErrorKind::DenseBudgetExceeded) == 3);
    CHECK(cli::exit_code(ErrorKind::GraphTooLargeForExact) == 3);
    CHECK(cli::exit_code(ErrorKind::NumericalFailure) == 4);
    CHECK(cli::exit_code(ErrorKind::NonConvergence) == 4);
    CHECK(cli::exit_code(ErrorKind::SingularSystem) == 4);
  }

  TEST_CASE("spectral on a 4-cycle") {
    const auto r = call({"spectral", "--graph", "cycle:4", "--p", "2"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["kappa1"]["value"].get<double>() == doctest::Approx(1.0));
    CHECK(doc["lambda2"]["value"].get<double>() == doctest::Approx(1.0));
    CHECK(doc["all_hold"].get<bool>());
  }

  TEST_CASE("usage and input errors") {
    CHECK(call({}).code == 2);
    CHECK(call({"nonsense"}).code == 2);
    CHECK(call({"spectral", "--graph", "cycle:4", "--p", "0.5"}).code == 2);
    CHECK(call({"spectral", "--graph", "/nonexistent/graph.json"}).code == 2);
    CHECK(call({"walk", "profile", "--group", "zd:1", "--radius", "5", "--config", "/nonexistent.json"}).code == 2);
  }

  TEST_CASE("cap exceeded writes nothing") {
    const auto path = scratch("probe.csv");
    fs::remove(path);
    setenv("HARMLAB_BUDGET", "100", 1);
    const auto r = call({"harmonic", "probe", "--group", "zd:2", "--radii", "1..30", "--out", path.string()});
    unsetenv("HARMLAB_BUDGET");
    CHECK(r.code == 3);
    CHECK(r.err.find("BallTooLarge") != std::string::npos);
    CHECK_FALSE(fs::exists(path));
  }

  TEST_CASE("dry run on every subcommand") {
    const std::vector<std::vector<std::string>> cmds{
        {"spectral", "--graph", "cycle:6"},
        {"walk", "profile", "--group", "zd:2", "--radius", "10"},
        {"walk", "exit", "--group", "zd:2", "--region", "ball:3"},
        {"transport", "chain", "--group", "zd:2"},
        {"iso", "profile", "--group", "zd:2", "--radius", "6"},
        {"iso", "radial", "--group", "zd:2", "--radius", "6", "--set", "[0]"},
        {"window", "stats", "--group", "zd:2", "--square", "4"},
        {"harmonic", "probe", "--group", "zd:2", "--radii", "1..3"},
        {"harmonic", "divergence", "--group", "zd:2"},
        {"harmonic", "witness", "--group", "zd:2", "--kind", "c0"},
    };
    for (auto c : cmds) {
      c.push_back("--dry-run");
      const auto r = call(c);
      CHECK(r.code == 0);
      const auto doc = nlohmann::json::parse(r.out);
      CHECK(doc.contains("command"));
    }
  }

  TEST_CASE("config file merges and command line wins") {
    const auto cfg = scratch("cfg.json");
    std::ofstream(cfg) << R"({"group": "zd:1", "radius": 9, "steps": 3})";
    const auto a = call({"walk", "profile", "--config", cfg.string(), "--dry-run"});
    REQUIRE(a.code == 0);
    CHECK(nlohmann::json::parse(a.out)["radius"] == "9");
    const auto b = call({"walk", "profile", "--config", cfg.string(), "--radius", "12", "--dry-run"});
    CHECK(nlohmann::json::parse(b.out)["radius"] == "12");
  }

  TEST_CASE("reruns are byte-identical") {
    const auto p1 = scratch("walk1.csv"), p2 = scratch("walk2.csv");
    const std::vector<std::string> base{"walk", "profile", "--group", "zd:2", "--radius", "20", "--steps", "8", "--out"};
    auto a = base, b = base;
    a.push_back(p1.string());
    b.push_back(p2.string());
    REQUIRE(call(a).code == 0);
    REQUIRE(call(b).code == 0);
    const auto s1 = slurp(p1);
    CHECK(s1 == slurp(p2));
    CHECK(s1.rfind("# harmlab 0.1.0 config=", 0) == 0);
    CHECK(call({"spectral", "--graph", "torus:4,4"}).out == call({"spectral", "--graph", "torus:4,4"}).out);
  }
}
