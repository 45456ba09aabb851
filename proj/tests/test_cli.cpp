#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "exactrank/cli.hpp"

using namespace exactrank;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "exactrank");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / ("exactrank_cli_" + name);
  std::ofstream(p) << content;
  return p;
}

bool has_line(const std::string& text, const std::string& line) {
  return ("\n" + text).find("\n" + line + "\n") != std::string::npos;
}

}  // namespace

TEST_CASE("pmf for untied and tied ranks") {
  const Run untied = cli({"pmf", "--n1", "2", "--n2", "3"});
  CHECK(untied.code == kExitOk);
  CHECK(has_line(untied.out, "w,count,probability,probability_float,cdf,cdf_float"));
  CHECK(has_line(untied.out, "5,2,1/5,0.2,2/5,0.4"));
  CHECK(has_line(untied.out, "9,1,1/10,0.1,1,1"));

  const Run tied = cli({"pmf", "--n1", "2", "--pattern", "1011"});
  CHECK(tied.code == kExitOk);
  CHECK(has_line(tied.out, "3.5,2,1/5,0.2,1/5,0.2"));
  CHECK(has_line(tied.out, "6.5,2,1/5,0.2,7/10,0.7"));

  const Run by_ranks = cli({"pmf", "--n1", "2", "--ranks", "1,2.5,2.5,4,5"});
  CHECK(by_ranks.out == tied.out);

  const Run normal = cli({"pmf", "--n1", "2", "--n2", "3", "--normal"});
  CHECK(normal.out.rfind("w,count,probability,probability_float,cdf,cdf_float,normal_p_less\n", 0) == 0);

  const auto j = nlohmann::json::parse(cli({"pmf", "--n1", "2", "--pattern", "1011", "--json"}).out);
  CHECK(j["denominator"] == "10");
  CHECK(j["mean"]["rational"] == "6");
  CHECK(j["variance"]["rational"] == "57/20");
  CHECK(j["rows"].size() == 6);
}

TEST_CASE("pmf rejects bad input") {
  CHECK(cli({"pmf", "--n1", "2"}).code == kExitInputError);
  CHECK(cli({"pmf", "--n1", "2", "--n2", "3", "--pattern", "1011"}).code == kExitInputError);
  CHECK(cli({"pmf", "--n1", "0", "--n2", "3"}).code == kExitInputError);
  CHECK(cli({"pmf", "--n1", "5", "--pattern", "1011"}).code == kExitInputError);
  CHECK(cli({"pmf", "--n1", "2", "--ranks", "1,2,2,4,5"}).code == kExitInputError);
  CHECK(cli({"pmf", "--n1", "2", "--pattern", "10x1"}).code == kExitInputError);
  const Run capped = cli({"pmf", "--n1", "2", "--n2", "3", "--max-n", "4"});
  CHECK(capped.code == kExitCapExceeded);
  CHECK(capped.err.find("error:") == 0);
  CHECK(cli({"pmf", "--n1", "2", "--n2", "3", "--max-n", "4", "--force"}).code == kExitOk);
  CHECK(cli({"bogus"}).code == kExitInputError);
  CHECK(cli({}).code == kExitInputError);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("pmf through a table cache directory") {
  const fs::path dir = fs::temp_directory_path() / "exactrank_cli_cache";
  fs::remove_all(dir);
  const Run first = cli({"pmf", "--n1", "2", "--pattern", "1011", "--cache", dir.string()});
  const Run second = cli({"pmf", "--n1", "2", "--pattern", "1011", "--cache", dir.string()});
  CHECK(first.code == kExitOk);
  CHECK(first.out == second.out);
  CHECK(first.out == cli({"pmf", "--n1", "2", "--pattern", "1011"}).out);
  CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == 1);
  fs::remove_all(dir);
}

TEST_CASE("mixture output") {
  const Run uniform = cli({"mixture", "--N", "5", "--n1", "2"});
  CHECK(uniform.code == kExitOk);
  CHECK(has_line(uniform.out, "3,1/20,0.05"));
  CHECK(has_line(uniform.out, "6,7/40,0.175"));
  CHECK(has_line(uniform.out, "9,1/20,0.05"));

  const Run onehot = cli({"mixture", "--N", "5", "--n1", "2", "--weights", "one-hot(15)"});
  CHECK(onehot.out == "w,probability,probability_float\n3,1/10,0.1\n4,1/10,0.1\n5,1/5,0.2\n"
                      "6,1/5,0.2\n7,1/5,0.2\n8,1/10,0.1\n9,1/10,0.1\n");
  CHECK(cli({"mixture", "--N", "5", "--n1", "2", "--weights", "onehot:15"}).out == onehot.out);

  std::string weights = "[";
  for (int k = 0; k < 16; ++k) weights += std::string(k ? "," : "") + (k == 11 ? "\"1\"" : "0");
  const fs::path file = write_temp("weights.json", weights + "]");
  const Run from_file = cli({"mixture", "--N", "5", "--n1", "2", "--weights", file.string()});
  CHECK(from_file.out == cli({"mixture", "--N", "5", "--n1", "2", "--weights", "onehot:11"}).out);
  fs::remove(file);

  const Run threads = cli({"mixture", "--N", "5", "--n1", "2", "--threads", "3"});
  CHECK(threads.out == uniform.out);
}

TEST_CASE("symbolic mixture output") {
  const Run sym = cli({"mixture", "--N", "5", "--n1", "2", "--symbolic"});
  CHECK(sym.code == kExitOk);
  CHECK(has_line(sym.out, "9,\"1/10*(p2 + p3 + p6 + p7 + p10 + p11 + p14 + p15)\""));
  CHECK(has_line(sym.out, "4,\"3/10*(p2 + p3 + p9) + 1/10*(p14 + p15)\""));
  const auto j = nlohmann::json::parse(cli({"mixture", "--N", "5", "--n1", "2", "--symbolic", "--json"}).out);
  CHECK(j["rows"].size() == 13);
  CHECK(j["rows"][0]["w"] == "3");
}

TEST_CASE("mixture guards") {
  CHECK(cli({"mixture", "--N", "30", "--n1", "2"}).code == kExitCapExceeded);
  CHECK(cli({"mixture", "--N", "5", "--n1", "0"}).code == kExitInputError);
  CHECK(cli({"mixture", "--N", "5", "--n1", "2", "--weights", "onehot:16"}).code == kExitInputError);
  CHECK(cli({"mixture", "--N", "5", "--n1", "2", "--weights", "onehot:x"}).code == kExitInputError);
  const fs::path bad = write_temp("bad.json", "[0.5, 0.5]");
  CHECK(cli({"mixture", "--N", "2", "--n1", "1", "--weights", bad.string()}).code == kExitInputError);
  fs::remove(bad);
  CHECK(cli({"mixture", "--N", "5", "--n1", "2", "--weights", "/nonexistent/w.json"}).code ==
        kExitInputError);
}

TEST_CASE("test subcommand") {
  const fs::path data = write_temp("data.csv", "group,value\nA,10\nA,12\nB,12\nB,15\nB,20\n");
  const Run text = cli({"test", "--input", data.string()});
  CHECK(text.code == kExitOk);
  CHECK(text.out.find("2/5") != std::string::npos);

  const auto j = nlohmann::json::parse(
      cli({"test", "--input", data.string(), "--alternative", "less", "--json"}).out);
  CHECK(j["p_value"]["rational"] == "1/5");
  CHECK(j["u_obs"] == "8.5");

  const auto flipped = nlohmann::json::parse(
      cli({"test", "--input", data.string(), "--group1", "B", "--alternative", "greater", "--json"}).out);
  CHECK(flipped["p_value"]["rational"] == "1/5");

  CHECK(cli({"test", "--input", data.string(), "--alternative", "sideways"}).code == kExitInputError);
  CHECK(cli({"test", "--input", data.string(), "--max-n", "4"}).code == kExitCapExceeded);
  CHECK(cli({"test", "--input", data.string(), "--value-col", "nope"}).code == kExitInputError);
  CHECK(cli({"test", "--input", "/nonexistent.csv"}).code == kExitInputError);
  const auto normal = nlohmann::json::parse(
      cli({"test", "--input", data.string(), "--method", "normal", "--json"}).out);
  CHECK(normal["method"] == "normal");
  CHECK(normal["p_value"]["rational"].is_null());
  fs::remove(data);
}
