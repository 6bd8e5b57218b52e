#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "zsk/cli.hpp"
#include "zsk/error.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = zsk::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("zsk_cli_test_" + name); }

}  // namespace

TEST_CASE("list parsing") {
  CHECK(zsk::cli::parse_real_list("0, 0.25,0.5") == std::vector<double>{0.0, 0.25, 0.5});
  CHECK(zsk::cli::parse_real_list("0:1:0.25") == std::vector<double>{0.0, 0.25, 0.5, 0.75});
  CHECK(zsk::cli::parse_real_list("0:1:0.1").size() == 10);
  CHECK(zsk::cli::parse_int_list("0,1,2") == std::vector<int>{0, 1, 2});
  CHECK(zsk::cli::parse_count("1e6") == 1000000);
  CHECK_THROWS_AS((void)zsk::cli::parse_real_list(""), zsk::parse_error);
  CHECK_THROWS_AS((void)zsk::cli::parse_real_list("1,,2"), zsk::parse_error);
  CHECK_THROWS_AS((void)zsk::cli::parse_real_list("1:0:0.1"), zsk::parse_error);
  CHECK_THROWS_AS((void)zsk::cli::parse_int_list("1.5"), zsk::parse_error);
  CHECK_THROWS_AS((void)zsk::cli::parse_count("0"), zsk::parse_error);
  CHECK_THROWS_AS((void)zsk::cli::parse_count("2.5"), zsk::parse_error);
}

TEST_CASE("verify closed-form gives 16 passing rows") {
  const Run r = run({"verify", "closed-form", "--z", "0,0.25,0.5,0.75"});
  REQUIRE(r.code == 0);
  const json report = json::parse(r.out);
  CHECK(report["schema"] == 1);
  CHECK(report["pass"] == true);
  REQUIRE(report["rows"].size() == 16);
  for (const json& row : report["rows"]) CHECK(row["error"].get<double>() <= 1e-10);
}

TEST_CASE("verify abstract-J and lattice targets") {
  const Run a = run({"verify", "abstract-J", "--M", "3", "--N", "2", "--J", "0,1,2", "--w", "0"});
  REQUIRE(a.code == 0);
  const json rows = json::parse(a.out)["rows"];
  REQUIRE(rows.size() == 3);
  const double targets[] = {1.0, 1.0, 2.0};
  for (std::size_t i = 0; i < 3; ++i) CHECK(rows[i]["target"].get<double>() == doctest::Approx(targets[i]).epsilon(1e-14));

  const Run l = run({"verify", "lattice", "--a", "2", "--b", "0", "--M", "2", "--J", "0"});
  REQUIRE(l.code == 0);
  const json row = json::parse(l.out)["rows"][0];
  CHECK(row["target"].get<double>() == doctest::Approx(std::sqrt(std::numbers::pi) / 2).epsilon(1e-14));
  CHECK(row["error"].get<double>() <= 1e-8);

  const Run gz = run({"verify", "gzeta"});
  REQUIRE(gz.code == 0);
  for (const json& g : json::parse(gz.out)["rows"]) CHECK(g["value"].get<double>() == doctest::Approx(1.0 / 6.0).epsilon(1e-2));
}

TEST_CASE("integrate examples") {
  const Run s = run({"integrate", "sin(2*pi*x)^2", "--scheme", "plain", "--M", "2", "--groups", "1000000"});
  REQUIRE(s.code == 0);
  const json report = json::parse(s.out);
  CHECK(std::fabs(report["value"].get<double>() - 0.5) <= 1e-4);
  CHECK(report["groups"] == 1000000);
  CHECK(report["tail_kind"] == "heuristic");
  CHECK(report["modulus"] == "smooth");
  CHECK(report.contains("seconds"));

  const Run one = run({"integrate", "1", "--scheme", "rational", "--M", "3", "--N", "2"});
  REQUIRE(one.code == 0);
  CHECK(std::fabs(json::parse(one.out)["value"].get<double>() - 1.0) <= 1e-5);

  const Run lip = run({"integrate", "abs(sin(pi*x))", "--groups", "1e6", "--lipschitz", "1,3.2"});
  REQUIRE(lip.code == 0);
  const json lr = json::parse(lip.out);
  CHECK(std::fabs(lr["value"].get<double>() - 2.0 / std::numbers::pi) <= 1e-3);
  CHECK(lr["tail_kind"] == "bound");

  const Run conv = run({"integrate", "cos(2*pi*x)", "--groups", "1e5", "--convergence", "--format", "csv"});
  REQUIRE(conv.code == 0);
  const auto rows = lines(conv.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "groups,value,tail_estimate,tail_kind");
  CHECK(fields(rows[1])[0] == "1000");
  CHECK(fields(rows[3])[0] == "100000");

  const Run tr = run({"integrate", "1", "--scheme", "transformed", "--phi", "x + sin(2*pi*x)/(4*pi)", "--dphi",
                      "1 + cos(2*pi*x)/2", "--groups", "1e5"});
  REQUIRE(tr.code == 0);
  CHECK(std::fabs(json::parse(tr.out)["value"].get<double>() - 1.0) <= 1e-3);
}

TEST_CASE("nodes dump") {
  const Run r = run({"nodes", "--scheme", "plain", "--M", "2", "--count", "4"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "group,k,node,weight");
  CHECK(fields(rows[1])[2] == "0");
  CHECK(fields(rows[2])[2] == "0");
  CHECK(std::stod(fields(rows[3])[2]) == doctest::Approx(std::log2(3.0) - 1.0).epsilon(1e-15));
  CHECK(fields(rows[4])[2] == "0");
  CHECK(r.out.find("\r\n") != std::string::npos);

  const Run cf = run({"nodes", "--scheme", "cf", "--count", "3"});
  REQUIRE(cf.code == 0);
  CHECK(lines(cf.out)[0] == "group,k,node,weight,G");

  const Run js = run({"nodes", "--scheme", "rational", "--count", "6", "--format", "json"});
  REQUIRE(js.code == 0);
  CHECK(json::parse(js.out)["rows"].size() == 6);
}

TEST_CASE("sweep grids") {
  const Run g = run({"sweep", "--groups", "1e3,1e4,1e5,1e6"});
  REQUIRE(g.code == 0);
  const auto rows = lines(g.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "M,groups,value,error,tail_estimate");
  CHECK(std::stod(fields(rows[4])[3]) < std::stod(fields(rows[3])[3]));
  CHECK(std::stod(fields(rows[4])[3]) < std::stod(fields(rows[1])[3]));
  CHECK(g.err.rfind("trend: ", 0) == 0);

  const Run z = run({"sweep", "--target", "closed-form", "--identity", "1", "--z", "0:1:0.1"});
  REQUIRE(z.code == 0);
  const auto zr = lines(z.out);
  REQUIRE(zr.size() == 11);
  for (std::size_t i = 1; i < zr.size(); ++i) CHECK(std::fabs(std::stod(fields(zr[i])[2]) - 1.0) <= 1e-10);
  CHECK(z.err == "trend: value constant within 1e-10\n");

  const Run product = run({"sweep", "--M", "2,3", "--groups", "1e3,1e4", "--format", "json"});
  REQUIRE(product.code == 0);
  CHECK(json::parse(product.out)["rows"].size() == 4);

  CHECK(run({"sweep", "--groups", ""}).code == 1);
  CHECK(run({"sweep", "--target", "closed-form", "--z", ","}).code == 1);
}

TEST_CASE("exit code contract") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"verify", "nonsense"}).code == 1);
  CHECK(run({"integrate", "sin("}).code == 1);
  CHECK(run({"integrate", "n1 + x"}).code == 1);
  CHECK(run({"integrate", "1", "--scheme", "rational", "--M", "2", "--N", "2"}).code == 1);
  CHECK(run({"integrate", "1", "--scheme", "plain", "--M", "1"}).code == 1);
  CHECK(run({"integrate", "1", "--groups", "0"}).code == 1);
  CHECK(run({"integrate", "1", "--threads", "0"}).code == 1);
  CHECK(run({"integrate", "1", "--scheme", "transformed"}).code == 1);
  CHECK(run({"verify", "gzeta", "--summand", "(n1 + 1)^-s"}).code == 1);
  CHECK(run({"integrate", "log(x - 0.5)", "--groups", "10"}).code == 3);
  CHECK(run({"integrate", "1/frac(x)", "--groups", "10"}).code == 3);
  CHECK(run({"integrate", "1", "--groups", "10", "--expect", "2"}).code == 2);
  CHECK(run({"integrate", "1", "--groups", "1e5", "--expect", "1", "--tol", "1e-4"}).code == 0);
  CHECK(run({"verify", "lattice", "--n-min", "-3"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("config file, environment and output file") {
  const fs::path config = temp_file("config.conf");
  {
    std::ofstream f(config);
    f << "format=csv\n[verify]\nz=0.1,0.2\n";
  }
  const Run c = run({"--config", config.string(), "verify", "closed-form"});
  REQUIRE(c.code == 0);
  CHECK(lines(c.out).size() == 9);
  CHECK(run({"--config", temp_file("missing.conf").string(), "verify", "closed-form"}).code == 1);

  ::setenv("ZSK_THREADS", "3", 1);
  const Run env = run({"verify", "closed-form", "--z", "0"});
  ::unsetenv("ZSK_THREADS");
  CHECK(json::parse(env.out)["threads"] == 3);
  CHECK(json::parse(run({"verify", "closed-form", "--z", "0", "--threads", "2"}).out)["threads"] == 2);

  const fs::path output = temp_file("report.json");
  const Run o = run({"verify", "closed-form", "--output", output.string()});
  REQUIRE(o.code == 0);
  CHECK(o.out.empty());
  std::ifstream in(output);
  CHECK(json::parse(in)["rows"].size() == 16);
  CHECK(run({"verify", "closed-form", "--output", "/nonexistent/dir/report.json"}).code == 1);
  fs::remove(config);
  fs::remove(output);
}

TEST_CASE("reports are deterministic") {
  const std::vector<std::string> verify = {"verify", "all", "--no-timing", "--threads", "3", "--chunk", "7"};
  const Run a = run(verify), b = run(verify);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out)["seconds"] == 0.0);

  const std::vector<std::string> integ = {"integrate", "abs(sin(pi*x))", "--groups", "54321", "--threads", "4",
                                          "--chunk", "1000", "--no-timing"};
  CHECK(run(integ).out == run(integ).out);

  // The reduction layout is fixed by the chunk size alone.
  const json one = json::parse(run({"integrate", "exp(sin(2*pi*x))", "--groups", "54321", "--chunk", "1000"}).out);
  const json four = json::parse(
      run({"integrate", "exp(sin(2*pi*x))", "--groups", "54321", "--chunk", "1000", "--threads", "4"}).out);
  CHECK(one["value"] == four["value"]);
  CHECK(one["tail_estimate"] == four["tail_estimate"]);
}
