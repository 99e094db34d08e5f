#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// run the binary named by MZV_BIN with the given arguments
RunResult run(const std::string& args) {
  const char* bin = std::getenv("MZV_BIN");
  REQUIRE(bin != nullptr);
  std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("lyndon listing") {
  auto r = run("lyndon --alphabet Y --max-weight 3 --format markdown");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "y1\ny2\ny3\ny2y1\n");

  auto j = nlohmann::json::parse(run("lyndon --alphabet X --max-weight 2").out);
  CHECK(j["count"] == 3);
  CHECK(j["words"] == nlohmann::json({"x0", "x1", "x0x1"}));
}

TEST_CASE("products from the command line") {
  auto r = run("product --kind stuffle y2 y3 --format markdown");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "y2 stuffle y3 = y5 + y3y2 + y2y3\n");

  auto j = nlohmann::json::parse(run("product --kind shuffle x0 x1").out);
  CHECK(j["product"] == "x0x1 + x1x0");
}

TEST_CASE("regularized values from the command line") {
  auto r = run("reg --kind gamma y1y2 --format markdown");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "reg_gamma(y1y2) = -z(2,1) - z(3) + z(2)·gamma\n");

  auto j = nlohmann::json::parse(run("reg --kind shuffle x1x0").out);
  CHECK(j["value"] == "-z(2)");
  j = nlohmann::json::parse(run("reg --kind stuffle y1y1").out);
  CHECK(j["value"] == "-1/2·z(2)");
}

TEST_CASE("relation table emission") {
  auto r = run("relations --max-weight 3 --format markdown");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("| z(2,1) | z(3) |") != std::string::npos);

  auto j = nlohmann::json::parse(run("relations --max-weight 4").out);
  CHECK(j["max_weight"] == 4);
  REQUIRE(j["weights"].size() == 3);
  CHECK(j["weights"][1]["rewrites"][0]["head"] == "z(2,1)");
  CHECK(j["weights"][1]["rewrites"][0]["rhs"] == "z(3)");
  CHECK(j["weights"][2]["irreducibles"].empty());

  auto csv = run("relations --max-weight 3 --format csv").out;
  CHECK(csv.find("weight,kind,head,value,provenance") == 0);
  CHECK(csv.find("3,rewrite,\"z(2,1)\",\"z(3)\",\"double_shuffle(y1y2)\"") != std::string::npos);
}

TEST_CASE("identical invocations are byte-identical") {
  auto a = run("relations --max-weight 5 --duality --hexagon");
  auto b = run("relations --max-weight 5 --duality --hexagon");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("output file and cache directory") {
  auto dir = std::filesystem::temp_directory_path() / "mzv_cli_test";
  std::filesystem::remove_all(dir);
  auto out_file = dir / "table.json";
  std::filesystem::create_directories(dir);

  auto direct = run("relations --max-weight 4");
  auto r = run("relations --max-weight 4 --out " + out_file.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(out_file) == direct.out);

  auto cache = dir / "cache";
  auto miss = run("relations --max-weight 4 --cache " + cache.string());
  CHECK(std::filesystem::exists(cache / "relations-w4.json"));
  auto hit = run("relations --max-weight 4 --cache " + cache.string());
  CHECK(miss.out == direct.out);
  CHECK(hit.out == direct.out);
  std::filesystem::remove_all(dir);
}

TEST_CASE("numeric evaluation agrees across routes") {
  auto a = nlohmann::json::parse(run("zeta 2,1 --prec 40").out);
  auto b = nlohmann::json::parse(run("zeta 3 --prec 40").out);
  std::string va = a["value"], vb = b["value"];
  CHECK(va.substr(0, 36) == vb.substr(0, 36));
  CHECK(va.substr(0, 8) == "1.202056");

  auto g = nlohmann::json::parse(run("gamma-const y1y1 --prec 40 --check 100000").out);
  CHECK(g["symbolic"] == "-1/2·z(2) + 1/2·gamma^2");
  double diff = std::stod(g["difference"].get<std::string>());
  CHECK(diff < 1e-4);
}

TEST_CASE("verification reports and exit codes") {
  auto r = run("verify --max-weight 4");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["verified"] == true);
  CHECK(j["failures"].empty());
  CHECK(j["families"]["double_shuffle"] == 5);
  CHECK(j["families"]["duality"] == 2);

  CHECK(run("zeta 1,2").exit_code == 2);        // divergent composition
  CHECK(run("zeta 2 --prec 10").exit_code == 2);  // below the precision floor
  CHECK(run("lyndon --alphabet Z --max-weight 2").exit_code == 2);
  CHECK(run("nonsense").exit_code == 2);
  CHECK(run("reg --kind stuffle x0x1x0").exit_code == 2);  // no Y transcription
  CHECK(run("--help").exit_code == 0);
}
