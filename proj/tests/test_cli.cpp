#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "infoineq/cli.hpp"
#include "infoineq/report_io.hpp"

using namespace infoineq;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("bound command examples") {
  const auto a = run({"bound", "--model", "uniform-max", "--hyper", "n=5", "--method", "naudts", "--theta", "2", "--output",
                      "json"});
  REQUIRE(a.code == 0);
  const auto j = Json::parse(a.out);
  CHECK(j["bound"].get<double>() == doctest::Approx(0.114286).epsilon(1e-5));
  CHECK(j["attained"].get<bool>());
  CHECK(j["versions"]["spec"] == kSchemaVersion);
  CHECK(j["model"] == "uniform-max");

  const auto h = run({"bound", "--model", "uniform-max", "--hyper", "n=1", "--method", "hcr", "--theta", "1"});
  REQUIRE(h.code == 0);
  const auto hj = Json::parse(h.out);
  CHECK(hj["bound"].get<double>() < 0.3333);
  CHECK_FALSE(hj["attained"].get<bool>());

  const auto p = run({"bound", "--model", "normal-x4", "--theta", "1", "--output", "pretty"});
  CHECK(p.code == 0);
  CHECK(p.out.find("attained  yes") != std::string::npos);
}

TEST_CASE("list-models") {
  const auto a = run({"list-models"});
  REQUIRE(a.code == 0);
  std::istringstream in(a.out);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 7);
  const auto j = Json::parse(run({"list-models", "--output", "json"}).out);
  REQUIRE(j.size() == 7);
  CHECK(j[0]["name"] == "uniform-max");
  CHECK(j[3]["signature"] == "alpha k");
}

TEST_CASE("sweep command") {
  const auto a = run({"sweep", "--model", "uniform-max", "--hyper", "n=5", "--theta", "1,2,3,4,5"});
  REQUIRE(a.code == 0);
  const auto rows = csv_rows(a.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0][0] == "theta0");
  CHECK(rows[0][1] == "bound");
  CHECK(rows[0][4] == "attained");
  CHECK(rows[0][5] == "argmax_nodes");
  CHECK(rows[0].back() == "error");
  for (int i = 1; i <= 5; ++i) {
    CHECK(std::stod(rows[i][1]) == doctest::Approx(i * i / 35.0).epsilon(1e-9));
    CHECK(rows[i][4] == "true");
  }

  const auto empty = run({"sweep", "--model", "uniform-max", "--hyper", "n=5", "--grid", "1,2,0"});
  CHECK(empty.code == 0);
  CHECK(csv_rows(empty.out).size() == 1);

  const auto n = run({"sweep", "--model", "normal-x4", "--method", "bhatt", "--self", "--order", "2", "--theta", "1,2"});
  REQUIRE(n.code == 0);
  const auto nr = csv_rows(n.out);
  CHECK(std::stod(nr[1][1]) == doctest::Approx(32.0 / 3.0).epsilon(1e-6));
  CHECK(std::stod(nr[2][1]) == doctest::Approx(32.0 * 256.0 / 3.0).epsilon(1e-6));

  const auto bad = run({"sweep", "--model", "uniform-max", "--hyper", "n=1", "--self", "--method", "bhatt-dd", "--nodes",
                        "1.5", "--theta", "1,2"});
  CHECK(bad.code == 1);
  const auto br = csv_rows(bad.out);
  REQUIRE(br.size() == 3);
  CHECK_FALSE(br[1].back().empty());
  CHECK(br[2].back().empty());
}

TEST_CASE("configuration errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"bound", "--model", "uniform-max", "--theta", "1", "--bogus"}).code == 2);
  CHECK(run({"bound", "--model", "nope", "--theta", "1"}).code == 2);
  CHECK(run({"bound", "--model", "uniform-max", "--hyper", "n=5"}).code == 2);
  CHECK(run({"bound", "--model", "uniform-max", "--hyper", "n=5", "--theta", "-1"}).code == 2);
  CHECK(run({"bound", "--model", "uniform-max", "--hyper", "n=x", "--theta", "1"}).code == 2);
  CHECK(run({"bound", "--model", "uniform-max", "--hyper", "m=2", "--theta", "1"}).code == 2);
  CHECK(run({"bound", "--model", "uniform-max", "--theta", "1", "--nodes", "1.1"}).code == 2);
  CHECK(run({"bound", "--model", "uniform-max", "--theta", "1", "--method", "bhatt-dd"}).code == 2);
  CHECK(run({"bound", "--model", "uniform-max", "--theta", "1", "--method", "magic"}).code == 2);
  const auto e = run({"verify", "--suite", "attainment"});
  CHECK(e.code == 2);
  CHECK(e.err.find("error:") == 0);
}

TEST_CASE("computation failures exit with 1") {
  const auto a = run({"bound", "--model", "uniform-max", "--hyper", "n=1", "--self", "--method", "bhatt-dd", "--nodes",
                      "1.5", "--theta", "1"});
  CHECK(a.code == 1);
  CHECK(a.err.find("error:") == 0);
  CHECK(run({"synth", "--model", "poisson-pair", "--hyper", "n=2"}).code == 2);
}

TEST_CASE("JSON reports round-trip and output is deterministic") {
  const std::vector<std::string> args = {"bound", "--model", "uniform-max", "--hyper", "n=1", "--method", "hcr", "--theta",
                                         "1"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.out == b.out);
  const auto j = Json::parse(a.out);
  const auto back = report_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back.diagnostics.argmax_nodes.size() == 1);
  CHECK(back.attained.has_value());
}

TEST_CASE("synth, verify and reduce commands") {
  const auto s = run({"synth", "--model", "expmin", "--hyper", "n=3", "--output", "json"});
  REQUIRE(s.code == 0);
  const auto j = Json::parse(s.out);
  CHECK(j["family_rule"] == "location-shift");
  CHECK(j["sup_error_vs_catalog_escort"].get<double>() <= 1e-6);
  CHECK(j["naudts"]["attained"].get<bool>());

  const auto g = run({"synth", "--model", "gamma-scale", "--hyper", "alpha=3,k=-1", "--output", "json"});
  REQUIRE(g.code == 0);
  CHECK(Json::parse(g.out)["sup_error_vs_catalog_escort"].get<double>() <= 1e-6);

  const auto csv = run({"synth", "--model", "normal-x4"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("x,kernel,g\n", 0) == 0);

  const auto r = run({"reduce"});
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["passed"].get<bool>());

  const auto v = run({"verify", "--suite", "attainment", "--model", "uniform-max", "--hyper", "n=5", "--theta", "1,2"});
  CHECK(v.code == 0);
  CHECK(Json::parse(v.out)["checks"].size() == 4);

  const auto m = run({"verify", "--suite", "mc", "--samples", "20000", "--seed", "7"});
  CHECK(m.code == 0);
  const auto mj = Json::parse(m.out);
  CHECK(mj["seed"] == 7);
  CHECK(run({"verify", "--suite", "mc", "--samples", "20000", "--seed", "7"}).out == m.out);
  CHECK(run({"verify", "--suite", "mc", "--samples", "10"}).code == 2);
}

TEST_CASE("--out writes to a file") {
  const auto path = std::filesystem::temp_directory_path() / "infoineq_cli_out.json";
  std::filesystem::remove(path);
  const auto a = run({"bound", "--model", "expmin", "--hyper", "n=3", "--theta", "0.5", "--out", path.string()});
  CHECK(a.code == 0);
  CHECK(a.out.empty());
  std::ifstream in(path);
  const auto j = Json::parse(in);
  CHECK(j["bound"].get<double>() == doctest::Approx(1.0 / 9.0).epsilon(1e-9));
  std::filesystem::remove(path);
}
