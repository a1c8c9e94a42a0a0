#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rieszlab/cli.hpp"
#include "rieszlab/io.hpp"

using namespace rieszlab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rieszlab");
  std::vector<char*> argv;
  argv.reserve(args.size());
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / "rieszlab_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

long line_count(const std::string& text) {
  long n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

// Manifest fields that legitimately differ between replays.
json manifest_stable(const fs::path& p) {
  json j = load_json(p);
  j.erase("started");
  j.erase("finished");
  j.erase("argv");
  return j;
}

}  // namespace

TEST_CASE("generate writes a batch plus manifest and replays bit for bit") {
  fs::path a = fresh_dir("gen_a");
  REQUIRE(cli({"generate", "poisson", "--window", "-10,10", "--samples", "10",
               "--seed", "4", "--out", a.string()}) == 0);
  std::string batch_a = slurp(a / "configs.jsonl");
  CHECK(line_count(batch_a) == 10);
  json man = load_json(a / "manifest.json");
  CHECK(man["command"] == "generate");
  CHECK(man["seed"] == 4);
  CHECK(!man["version"].get<std::string>().empty());
  bool lists_batch = false;
  for (const auto& f : man["outputs"])
    if (f == "configs.jsonl") lists_batch = true;
  CHECK(lists_batch);

  fs::path b = fresh_dir("gen_b");
  REQUIRE(cli({"generate", "poisson", "--window", "-10,10", "--samples", "10",
               "--seed", "4", "--out", b.string()}) == 0);
  CHECK(slurp(b / "configs.jsonl") == batch_a);
  CHECK(manifest_stable(a / "manifest.json") == manifest_stable(b / "manifest.json"));

  fs::path c = fresh_dir("gen_c");
  REQUIRE(cli({"generate", "poisson", "--window", "-10,10", "--samples", "10",
               "--seed", "5", "--out", c.string()}) == 0);
  CHECK(slurp(c / "configs.jsonl") != batch_a);
}

TEST_CASE("generate counterexample yields heavy atoms") {
  fs::path dir = fresh_dir("gen_counter");
  REQUIRE(cli({"generate", "counterexample", "--window", "-50,50", "--samples",
               "30", "--nmax", "50", "--seed", "9", "--out", dir.string()}) == 0);
  auto cfgs = read_configs_jsonl(dir / "configs.jsonl");
  REQUIRE(cfgs.size() == 30);
  bool heavy = false;
  for (const auto& cfg : cfgs) heavy = heavy || cfg.has_multiplicity();
  CHECK(heavy);
}

TEST_CASE("exact sampling is refused away from the coulomb point") {
  fs::path dir = fresh_dir("exact_refused");
  CHECK(cli({"sample-riesz", "--s", "-0.5", "--beta", "1", "--n", "4", "--method",
             "exact", "--out", dir.string()}) != 0);
}

TEST_CASE("exact sampling works at the coulomb point") {
  fs::path dir = fresh_dir("exact_ok");
  REQUIRE(cli({"sample-riesz", "--s", "-1", "--beta", "1", "--n", "8", "--method",
               "exact", "--samples", "50", "--seed", "21", "--out",
               dir.string()}) == 0);
  CHECK(line_count(slurp(dir / "batch.jsonl")) == 50);
  CHECK(line_count(slurp(dir / "energies.csv")) == 51);
  json rep = load_json(dir / "report.json");
  CHECK(rep["method"] == "exact");
  CHECK(rep["attempts"].get<long>() >= 50);
  CHECK(rep["acceptance_rate"].get<double>() > 0.0);
  CHECK(rep["acceptance_rate"].get<double>() <= 1.0);
}

TEST_CASE("mcmc sampling reports chain statistics") {
  fs::path dir = fresh_dir("mcmc_basic");
  REQUIRE(cli({"sample-riesz", "--s", "-1.5", "--beta", "2", "--n", "6",
               "--samples", "100", "--thin", "20", "--burn", "2000", "--seed",
               "22", "--out", dir.string()}) == 0);
  CHECK(line_count(slurp(dir / "batch.jsonl")) == 100);
  json rep = load_json(dir / "report.json");
  CHECK(rep["method"] == "mcmc");
  CHECK(rep["acceptance_rate"].get<double>() > 0.0);
  CHECK(rep["acceptance_rate"].get<double>() < 1.0);
  CHECK(rep["ess"].get<double>() > 0.0);
}

TEST_CASE("energy command agrees across evaluators and audits") {
  fs::path gibbs = fresh_dir("energy_in");
  REQUIRE(cli({"sample-riesz", "--s", "-1", "--beta", "1", "--n", "8", "--method",
               "mcmc", "--samples", "10", "--thin", "50", "--burn", "2000",
               "--seed", "23", "--out", gibbs.string()}) == 0);
  fs::path dir = fresh_dir("energy_out");
  REQUIRE(cli({"energy", "--in", (gibbs / "batch.jsonl").string(), "--s", "-1",
               "--evaluator", "all", "--audit", "--out", dir.string()}) == 0);
  // Header plus three evaluator rows per configuration.
  CHECK(line_count(slurp(dir / "energy.csv")) == 1 + 30);
  json summary = load_json(dir / "energy.json");
  std::map<long, std::map<std::string, double>> by_index;
  for (const auto& row : summary["evaluations"])
    by_index[row["index"].get<long>()][row["evaluator"].get<std::string>()] =
        row["value"].get<double>();
  REQUIRE(by_index.size() == 10);
  for (const auto& [idx, vals] : by_index) {
    REQUIRE(vals.count("pairwise"));
    REQUIRE(vals.count("baxter"));
    REQUIRE(vals.count("fourier"));
    CHECK(std::fabs(vals.at("pairwise") - vals.at("baxter")) < 1e-8);
    CHECK(std::fabs(vals.at("fourier") - vals.at("baxter")) < 1e-5);
  }
  CHECK(summary["audit"]["all_hold"] == true);
  CHECK(fs::exists(dir / "audit.csv"));

  fs::path bad = fresh_dir("energy_bad");
  CHECK(cli({"energy", "--in", (gibbs / "batch.jsonl").string(), "--s", "-0.5",
             "--evaluator", "baxter", "--out", bad.string()}) != 0);
}

TEST_CASE("transport command tabulates windowed costs") {
  fs::path gibbs = fresh_dir("transport_in");
  REQUIRE(cli({"sample-riesz", "--s", "-1", "--beta", "1", "--n", "8", "--method",
               "exact", "--samples", "40", "--seed", "24", "--out",
               gibbs.string()}) == 0);
  fs::path dir = fresh_dir("transport_out");
  REQUIRE(cli({"transport", "--in", (gibbs / "batch.jsonl").string(), "--p", "2",
               "--target", "lebesgue", "--out", dir.string()}) == 0);
  CHECK(line_count(slurp(dir / "transport.csv")) == 41);
  json summary = load_json(dir / "transport.json");
  CHECK(summary["samples"].get<long>() == 40);
  CHECK(summary["mean_cost_per_length"].get<double>() > 0.0);
}

TEST_CASE("diagnose flags the poisson variance growth") {
  fs::path batch = fresh_dir("diag_poisson_in");
  REQUIRE(cli({"generate", "poisson", "--window", "-40,40", "--samples", "60",
               "--seed", "11", "--out", batch.string()}) == 0);
  fs::path dir = fresh_dir("diag_poisson_out");
  REQUIRE(cli({"diagnose", "--in", (batch / "configs.jsonl").string(), "--checks",
               "variance", "--out", dir.string()}) == 0);
  json summary = load_json(dir / "summary.json");
  CHECK(summary["variance"]["verdict"] == "not hyperuniform");
  CHECK(fs::exists(dir / "variance.csv"));
  CHECK(fs::exists(dir / "variance.svg"));
}

TEST_CASE("diagnose confirms lattice phase uniformity and rigidity") {
  fs::path batch = fresh_dir("diag_lattice_in");
  REQUIRE(cli({"generate", "lattice", "--window", "-40,40", "--samples", "100",
               "--seed", "12", "--out", batch.string()}) == 0);
  fs::path dir = fresh_dir("diag_lattice_out");
  REQUIRE(cli({"diagnose", "--in", (batch / "configs.jsonl").string(), "--checks",
               "shift,rigidity", "--out", dir.string()}) == 0);
  json summary = load_json(dir / "summary.json");
  CHECK(summary["shift"]["uniform"] == true);
  CHECK(summary["rigidity"]["agreement_rate"].get<double>() == 1.0);
  CHECK(summary["rigidity"]["pass"] == true);
}

TEST_CASE("sampling replays bit for bit") {
  std::vector<std::string> args = {"sample-riesz", "--s",    "-1",   "--beta",
                                   "1",            "--n",    "6",    "--samples",
                                   "50",           "--thin", "10",   "--burn",
                                   "500",          "--seed", "99"};
  fs::path a = fresh_dir("replay_a");
  {
    auto run = args;
    run.insert(run.end(), {"--out", a.string()});
    REQUIRE(cli(run) == 0);
  }
  fs::path b = fresh_dir("replay_b");
  {
    auto run = args;
    run.insert(run.end(), {"--out", b.string()});
    REQUIRE(cli(run) == 0);
  }
  CHECK(slurp(a / "batch.jsonl") == slurp(b / "batch.jsonl"));
  CHECK(slurp(a / "energies.csv") == slurp(b / "energies.csv"));
  CHECK(load_json(a / "report.json") == load_json(b / "report.json"));
  CHECK(manifest_stable(a / "manifest.json") == manifest_stable(b / "manifest.json"));
}

TEST_CASE("energy replays up to wall time") {
  fs::path gibbs = fresh_dir("energy_replay_in");
  REQUIRE(cli({"sample-riesz", "--s", "-1", "--beta", "1", "--n", "6", "--method",
               "exact", "--samples", "8", "--seed", "25", "--out",
               gibbs.string()}) == 0);
  auto once = [&](const std::string& name) {
    fs::path dir = fresh_dir(name);
    REQUIRE(cli({"energy", "--in", (gibbs / "batch.jsonl").string(), "--s", "-1",
                 "--out", dir.string()}) == 0);
    return dir;
  };
  fs::path a = once("energy_replay_a");
  fs::path b = once("energy_replay_b");
  CHECK(slurp(a / "energy.csv") == slurp(b / "energy.csv"));
  json ja = load_json(a / "energy.json");
  json jb = load_json(b / "energy.json");
  for (auto* j : {&ja, &jb})
    for (auto& row : (*j)["evaluations"]) row.erase("elapsed_s");
  CHECK(ja == jb);
}

TEST_CASE("fast selftest passes through the cli") {
  fs::path dir = fresh_dir("selftest_fast");
  REQUIRE(cli({"selftest", "--level", "fast", "--seed", "5", "--out",
               dir.string()}) == 0);
  json rep = load_json(dir / "report.json");
  CHECK(rep["pass"] == true);
  CHECK(rep["checks"].size() == 3);
}
