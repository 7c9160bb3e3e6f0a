#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(MISODOF_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

json run_json(const std::string& args) {
  const RunResult r = run_cli(args);
  REQUIRE(r.exit_code == 0);
  return json::parse(r.out);
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/misodof_cli_" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("bound: symmetric profile advertises the count formula") {
  const json doc = run_json("bound --k 3 --lp 2/3 --ld 1/6 --symmetric");
  CHECK(doc["results"]["count"] == 19);
  CHECK(doc["results"]["count_formula"] == 19);
  CHECK(doc["results"]["inequalities"].size() == 19);
  // exact strings plus decimal annotations
  const auto& first = doc["results"]["inequalities"][0];
  CHECK(first["rhs"].contains("exact"));
  CHECK(first["rhs"].contains("approx"));
}

TEST_CASE("bound: trivial single-user box") {
  const json doc = run_json("bound --k 1 --lp 1 --ld 0");
  CHECK(doc["results"]["count"] == 1);
  CHECK(doc["results"]["inequalities"][0]["rhs"]["exact"] == "1");
}

TEST_CASE("bound: irredundant subsystem of the staggered pattern") {
  const auto file = write_temp("staggered.txt", "PNN\nNPN\nNNP\n");
  const json doc = run_json("bound --pattern " + file + " --irredundant");
  CHECK(doc["results"]["count"] == 7);
}

TEST_CASE("maxsum: worked sum-DoF values") {
  CHECK(run_json("maxsum --k 3 --lp 2/3 --ld 1/6 --symmetric")["results"]["value"]
            ["exact"] == "28/11");

  const auto file = write_temp("staggered2.txt", "PNN\nNPN\nNNP\n");
  const json doc =
      run_json("maxsum --pattern " + file + " --tightened --weights 2,2,1");
  CHECK(doc["results"]["value"]["exact"] == "8/3");

  CHECK(run_json("maxsum --k 3 --lp 2/3 --ld 1/6 --weights 1,0,0")["results"]["value"]
            ["exact"] == "1");

  const json asym = run_json("maxsum --marginals \"1/4,0,3/4;1/2,0,1/2;1,0,0\"");
  CHECK(asym["results"]["value"]["exact"] == "7/4");
}

TEST_CASE("vertices: single user") {
  const json doc = run_json("vertices --k 1 --lp 1/2 --ld 0");
  CHECK(doc["results"]["count"] == 2);
  CHECK(doc["results"]["vertices"][0]["point"][0]["exact"] == "0");
  CHECK(doc["results"]["vertices"][1]["point"][0]["exact"] == "1");
}

TEST_CASE("simulate: fig5 end to end") {
  const json doc = run_json("simulate --scheme fig5 --trials 100 --seed 7");
  const auto& r = doc["results"];
  CHECK(r["per_user"][0]["dof"]["exact"] == "2/3");
  CHECK(r["per_user"][1]["dof"]["exact"] == "2/3");
  CHECK(r["per_user"][2]["dof"]["exact"] == "1/3");
  CHECK(r["sum_dof"]["exact"] == "5/3");
  CHECK(r["all_decodable"] == true);
  CHECK(r["failed_trials"] == 0);
  CHECK(doc["seed"] == 7);
}

TEST_CASE("simulate: mat census fields") {
  const json doc = run_json("simulate --scheme mat --k 3 --trials 5");
  const auto& r = doc["results"];
  CHECK(r["sum_dof"]["exact"] == "18/11");
  CHECK(r["min_delay"]["exact"] == "5/11");
  CHECK(r["delayed_census"]["exact"] == "5/11");
  CHECK(r["slots"] == 33);
}

TEST_CASE("simulate: schedule emission round-trips the pattern") {
  const json doc = run_json("simulate --scheme fig5 --trials 2 --emit-schedule");
  const auto& sched = doc["results"]["schedule"];
  CHECK(sched["pattern"][0] == "PNN");
  CHECK(sched["pattern"][2] == "DNN");
  CHECK(sched["slots"].size() == 3);
}

TEST_CASE("compare: staggered inside burst with the claimed separator") {
  const auto a = write_temp("burst.txt", "PNN\nPNN\nPNN\n");
  const auto b = write_temp("staggered3.txt", "PNN\nNPN\nNNP\n");
  const json doc = run_json("compare " + a + " " + b);
  CHECK(doc["inputs"]["same_marginals"] == true);
  CHECK(doc["results"]["relation"] == "second-inside-first");
  const auto& sep = doc["results"]["separator"];
  CHECK(sep[0]["exact"] == "1");
  CHECK(sep[1]["exact"] == "1/3");
  CHECK(sep[2]["exact"] == "1/3");
}

TEST_CASE("plotdata: vertex CSV") {
  const auto file = write_temp("plot.txt", "PNN\nNPN\nNNP\n");
  const std::string csv = "/tmp/misodof_cli_verts.csv";
  const json doc =
      run_json("plotdata vertices --pattern " + file + " --tightened --csv " + csv);
  CHECK(doc["results"]["rows"].get<long>() > 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "d1,d2,d3,pareto_maximal");
}

TEST_CASE("plotdata: rate CSV") {
  const std::string csv = "/tmp/misodof_cli_rates.csv";
  const json doc =
      run_json("plotdata rates --scheme fig5 --snr 20,40,60 --trials 5 --csv " + csv);
  CHECK(doc["results"]["rows"] == 3);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "snr_db,rate_user1,rate_user2,rate_user3");
}

TEST_CASE("exit codes distinguish the failure classes") {
  const auto bad = write_temp("bad.txt", "PX\n");
  CHECK(run_cli("bound --pattern " + bad).exit_code == 2);
  CHECK(run_cli("bound").exit_code == 2);  // no source
  CHECK(run_cli("simulate --scheme hybrid --k 3 --lp 1/3 --ld 0 --subset 1,2 --trials 2")
            .exit_code == 3);
  CHECK(run_cli("vertices --k 5 --lp 1/3 --ld 0").exit_code == 4);
  CHECK(run_cli("definitely-not-a-subcommand").exit_code == 2);
}

TEST_CASE("pattern wins over direct marginals") {
  const auto file = write_temp("wins.txt", "PNN\nNPN\nNNP\n");
  const json doc = run_json("maxsum --pattern " + file + " --k 3 --lp 1 --ld 0");
  // marginals from the pattern, not the flags: bound is 5/3, not 3
  CHECK(doc["results"]["value"]["exact"] == "5/3");
}

TEST_CASE("determinism: identical flags give identical documents") {
  const std::string args = "simulate --scheme alt24-17 --trials 10 --seed 123";
  CHECK(run_json(args) == run_json(args));
}
