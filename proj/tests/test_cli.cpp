#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kpz/cli.hpp"

using namespace kpz;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "kpzlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> rows(const std::string& csv) {
  std::vector<std::vector<double>> table;
  std::istringstream in(csv);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    table.push_back(row);
  }
  return table;
}

std::string column_header(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') return line;
  }
  return {};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("tw-table is monotone and reaches one") {
  const auto r = invoke({"tw-table", "--ds", "0.25"});
  REQUIRE(r.code == cli::kOk);
  CHECK(column_header(r.out) == "s,F1,F2");
  const auto t = rows(r.out);
  REQUIRE(t.size() == 57);
  for (std::size_t k = 1; k < t.size(); ++k) CHECK(t[k][2] >= t[k - 1][2]);
  CHECK(t.back()[2] >= 1.0 - 1e-6);
}

TEST_CASE("header records the configuration") {
  const auto r = invoke({"tasep-shape", "--t", "50", "--runs", "3", "--seed", "99", "--bin", "0.25"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.rfind("# kpzlab " KPZ_VERSION "\n", 0) == 0);
  CHECK(r.out.find("# seed=99\n") != std::string::npos);
  CHECK(r.out.find("t=50 runs=3") != std::string::npos);
  CHECK(r.out.find("bin=0.25") != std::string::npos);
  CHECK(column_header(r.out) == "xi,density,theory");
}

TEST_CASE("identical seeds give identical files") {
  const auto dir = std::filesystem::temp_directory_path() / "kpzlab_cli_test";
  std::filesystem::create_directories(dir);
  const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  const std::vector<std::string> common{"tasep-onepoint", "--ic", "flat", "--t", "40", "--runs", "50", "--seed", "5"};
  auto args_a = common, args_b = common;
  args_a.insert(args_a.end(), {"--out", a});
  args_b.insert(args_b.end(), {"--out", b});
  REQUIRE(invoke(args_a).code == cli::kOk);
  REQUIRE(invoke(args_b).code == cli::kOk);
  CHECK(slurp(a) == slurp(b));
  auto args_c = common;
  args_c[8] = "6";
  CHECK(invoke(args_c).out != slurp(a));
  std::filesystem::remove_all(dir);
}

TEST_CASE("onepoint output columns") {
  const auto r = invoke({"tasep-onepoint", "--ic", "stat", "--t", "30", "--runs", "20"});
  REQUIRE(r.code == cli::kOk);
  CHECK(column_header(r.out) == "s,ecdf,theory");
  CHECK(r.out.find("ic=stat") != std::string::npos);
}

TEST_CASE("dbm-cov columns and the GOE excess over Airy_1 at u = 2") {
  const auto r = invoke({"dbm-cov", "--ensemble", "goe", "--N", "50", "--runs", "20000", "--u-max", "2", "--du", "1"});
  REQUIRE(r.code == cli::kOk);
  CHECK(column_header(r.out) == "u,f_hat,stderr,theory");
  const auto t = rows(r.out);
  REQUIRE(t.size() == 3);
  CHECK(t[2][0] == 2.0);
  MESSAGE("f_hat " << t[2][1] << " stderr " << t[2][2] << " g1 " << t[2][3]);
  CHECK(t[2][1] - t[2][3] > 5 * t[2][2]);
}

TEST_CASE("config file values apply unless overridden by flags") {
  const auto path = std::filesystem::temp_directory_path() / "kpzlab_cli_test.cfg";
  {
    std::ofstream cfg(path);
    cfg << "seed=42\nds=2\ns_min=-4\n";
  }
  const auto r = invoke({"tw-table", "--config", path.string(), "--ds", "1"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.find("# seed=42\n") != std::string::npos);
  CHECK(rows(r.out).size() == 11);
  {
    std::ofstream cfg(path);
    cfg << "no_such_key=1\n";
  }
  CHECK(invoke({"tw-table", "--config", path.string()}).code == cli::kInvalidValue);
  std::filesystem::remove(path);
  CHECK(invoke({"tw-table", "--config", path.string()}).code == cli::kInvalidValue);
}

TEST_CASE("error exit codes are distinct") {
  auto unknown = invoke({"frobnicate"});
  CHECK(unknown.code == cli::kUsage);
  CHECK_FALSE(unknown.err.empty());
  CHECK(invoke({}).code == cli::kUsage);
  CHECK(invoke({"tw-table", "--no-such-flag"}).code == cli::kUsage);
  CHECK(invoke({"tw-table", "--t", "soon"}).code == cli::kInvalidValue);
  CHECK(invoke({"tasep-onepoint", "--ic", "curved"}).code == cli::kInvalidValue);
  CHECK(invoke({"airy-cov", "--du", "0"}).code == cli::kInvalidValue);
  CHECK(invoke({"airy-cov", "--du", "1", "--u-max", "0.5"}).code == cli::kInvalidValue);
  CHECK(invoke({"tasep-shape", "--runs", "0"}).code == cli::kInvalidValue);
  CHECK(invoke({"tw-table", "--n-quad", "8"}).code == cli::kInvalidValue);
  const auto bad = invoke({"tw-table", "--out", "/nonexistent-dir/x.csv"});
  CHECK(bad.code == cli::kUnwritable);
  CHECK(bad.err.find("/nonexistent-dir/x.csv") != std::string::npos);
}

TEST_CASE("the installed binary behaves like the library entry point") {
  const char* exe = std::getenv("KPZLAB");
  if (!exe) return;
  const std::string cmd = std::string(exe) + " frobnicate 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == cli::kUsage);
}
