#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "erlangtail/fuzz.hpp"
#include "erlangtail/io.hpp"
#include "fixtures.hpp"

using namespace erlangtail;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "erlangtail_test_cli";
  std::filesystem::create_directories(dir);
  return dir / name;
}

Json analyze_json(const std::string& file) {
  const auto r = run({"analyze", fixtures::data_file(file)});
  REQUIRE(r.code == 0);
  return Json::parse(r.out)["result"];
}

}  // namespace

TEST_CASE("validate exit codes") {
  const auto ok = run({"validate", fixtures::data_file("reed.json")});
  CHECK(ok.code == cli::exit_ok);
  CHECK(ok.out.find("valid") != std::string::npos);

  const auto bad = run({"validate", fixtures::data_file("discrete_upsilon_ones.json")});
  CHECK(bad.code == cli::exit_domain);
  CHECK(bad.out.find("FAIL (v)") != std::string::npos);

  const auto path = scratch("broken.json");
  write_text_file(path, "{\"model\": \"continuous\",,}");
  const auto broken = run({"validate", path.string()});
  CHECK(broken.code == cli::exit_input);
  CHECK(broken.err.find("line 1") != std::string::npos);

  CHECK(run({"validate", fixtures::data_file("no_such_file.json")}).code == cli::exit_input);
  CHECK(run({"validate"}).code == cli::exit_input);
  CHECK(run({"nonsense"}).code == cli::exit_input);
  CHECK(run({"--help"}).code == cli::exit_ok);
}

TEST_CASE("analyze reports") {
  const auto chain = analyze_json("equal_rate_chain.json");
  CHECK(chain["upper"]["alpha"].get<double>() == doctest::Approx(1.0));
  CHECK(chain["upper"]["d_alpha"] == 2);
  CHECK(chain["lower"]["d_beta"] == 2);

  const auto reed = analyze_json("reed.json");
  CHECK(reed["upper"]["alpha"].get<double>() == doctest::Approx(1.0));
  CHECK(reed["lower"]["beta"].get<double>() == doctest::Approx(1.0));
  CHECK(reed["upper"]["d_alpha"] == 1);

  const auto baseline = analyze_json("pencil_baseline.json");
  CHECK(baseline["d"] == 3);
  CHECK(baseline["status"] == "ok");

  const auto top = analyze_json("pencil_top_left.json");
  CHECK(top["status"] == "condition_vi_violated");
  CHECK(top["numeric"]["order"] == 4);

  const auto geo = analyze_json("discrete_geometric.json");
  CHECK(geo["upper"]["alpha"].get<double>() == doctest::Approx(std::log(1.0 / 0.7)));
  CHECK(geo["lower"]["exists"] == false);

  CHECK(run({"analyze", fixtures::data_file("discrete_upsilon_ones.json")}).code == cli::exit_domain);
}

TEST_CASE("analyze writes the report file") {
  const auto path = scratch("report.json");
  std::filesystem::remove(path);
  CHECK(run({"analyze", fixtures::data_file("reed.json"), "--out", path.string()}).code == 0);
  const auto doc = Json::parse(read_text_file(path));
  CHECK(doc["tool"] == kToolName);
  CHECK(doc["command"] == "analyze");
  CHECK(doc["input_digest"] == hex_digest(model_digest(read_spec_file(fixtures::data_file("reed.json")))));
}

TEST_CASE("the ten-state example") {
  const auto r = run({"classes", fixtures::data_file("example10.txt")});
  REQUIRE(r.code == 0);
  const auto doc = Json::parse(r.out)["result"];
  CHECK(doc["classes"].size() == 5);
  CHECK(doc["longest_chain_length"] == 2);
  CHECK(doc["eigenvalue_index"] == 2);
  CHECK(doc["abscissa"].get<double>() == doctest::Approx(3.0));

  const auto pencil = analyze_json("example10_pencil.json");
  CHECK(pencil["d"] == 2);
  CHECK(pencil["numeric"]["order"] == 2);
  // Basic classes hold vertices {1,4}, {2,10} and {9}.
  std::set<std::set<int>> basic;
  for (const auto& k : pencil["basic_classes"]) {
    const auto members = pencil["class_summary"]["classes"][k.get<int>() - 1].get<std::set<int>>();
    basic.insert(members);
  }
  CHECK(basic == std::set<std::set<int>>{{1, 4}, {2, 10}, {9}});
}

TEST_CASE("simulate output does not depend on the worker count") {
  auto files = [](const std::string& prefix) {
    std::vector<std::string> out;
    for (const char* ext : {".bin", ".json", ".survival.csv", ".summary.json"}) {
      out.push_back(read_text_file(scratch(prefix).string() + ext));
    }
    return out;
  };
  for (const char* spec : {"equal_rate_chain.json", "discrete_two_state.json"}) {
    for (const char* workers : {"1", "8"}) {
      const auto r = run({"simulate", fixtures::data_file(spec), "--paths", "20000", "--seed", "5", "--workers", workers,
                          "--min-tail", "100", "--out", scratch(std::string("sim_w") + workers).string()});
      CHECK_MESSAGE(r.code == 0, r.err);
    }
    CHECK(files("sim_w1") == files("sim_w8"));
  }
  const auto summary = Json::parse(read_text_file(scratch("sim_w1.summary.json")));
  CHECK(summary["result"].contains("laplace"));
  CHECK(summary["result"].contains("tail_fit"));
}

TEST_CASE("simulate rejects invalid models") {
  CHECK(run({"simulate", fixtures::data_file("discrete_upsilon_ones.json"), "--paths", "10", "--out",
             scratch("never").string()})
            .code == cli::exit_domain);
  CHECK(run({"simulate", fixtures::data_file("reed.json"), "--paths", "0", "--out", scratch("zero").string()}).code ==
        cli::exit_input);
}

TEST_CASE("Rothblum fuzzer") {
  const auto csv = scratch("fuzz.csv");
  const auto ok = run({"rothblum-fuzz", "--instances", "500", "--seed", "1", "--out", csv.string()});
  CHECK(ok.code == 0);
  const auto text = read_text_file(csv);
  CHECK(text.rfind("instance,seed,N,classes,index,chain_length,agree\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 501);
  CHECK(text.find(",false") == std::string::npos);

  // An instance with a single planted class is irreducible: index 1, chain 1.
  std::uint64_t seed = 1;
  while (random_reducible_metzler(seed).planted_classes.size() != 1) ++seed;
  const auto one = scratch("fuzz_one.csv");
  REQUIRE(run({"rothblum-fuzz", "--instances", "1", "--seed", std::to_string(seed), "--out", one.string()}).code == 0);
  const auto row = read_text_file(one);
  CHECK(row.find(",1,1,1,true\n") != std::string::npos);

  const auto failures = scratch("loose").string();
  const auto loose = run({"rothblum-fuzz", "--instances", "50", "--seed", "1", "--tol-rank", "1e-1", "--out",
                          scratch("loose.csv").string(), "--failures", failures});
  CHECK(loose.code == cli::exit_domain);
}
