#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" PPIM_CLI_PATH "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string field(const std::string& line, const std::string& key) {
  const auto at = line.find(" " + key + "=");
  if (at == std::string::npos) return {};
  const auto start = at + key.size() + 2;
  return line.substr(start, line.find_first_of(" \n", start) - start);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  std::filesystem::path path = std::filesystem::temp_directory_path() / "ppim_cli_test";
  TempDir() { std::filesystem::create_directories(path); }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name, const std::string& text = "") const {
    const auto p = path / name;
    if (!text.empty()) std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
};

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help").code == 0);
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("simulate --stream SB").code == 2);
  CHECK(run("simulate --stream 'S^' --policy median").code == 2);
  CHECK(run("simulate --stream SB --policy median --seller-dist gauss:0").code == 2);
  CHECK(run("simulate --stream SB --policy median --trials abc").code == 2);
  CHECK(run("verify nonsense").code == 2);
  CHECK(run("experiment nonsense").code == 2);
  CHECK(run("experiment balanced --n-values 20,10").code == 2);
  CHECK(run("simulate --stream SB --policy median --buyer-dist pareto-eps:0.5").code == 2);
}

TEST_CASE("simulate prints one record") {
  const Result r = run("simulate --stream 'S B' --policy fixed:0.5,0.5 --trials 20000 --seed 3");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("simulate ", 0) == 0);
  CHECK(field(r.out, "trials") == "20000");
  CHECK(field(r.out, "seed") == "3");
  const double mean = std::stod(field(r.out, "mean"));
  const double se = std::stod(field(r.out, "std_err"));
  CHECK(std::abs(mean + 0.125) <= 4.0 * se);
  CHECK(run("simulate --stream 'S B' --policy fixed:0.5,0.5 --trials 20000 --seed 3 --workers 2").out == r.out);
}

TEST_CASE("seed comes from the environment unless given") {
  const std::string args = "simulate --stream '(S B)^4' --policy median --trials 100";
  const Result env = run(args, "PPIM_SEED=77");
  REQUIRE(env.code == 0);
  CHECK(field(env.out, "seed") == "77");
  CHECK(field(run(args + " --seed 5", "PPIM_SEED=77").out, "seed") == "5");
  CHECK(field(run(args, "PPIM_SEED=77").out, "mean") == field(run(args + " --seed 77").out, "mean"));
}

TEST_CASE("config file values override flags") {
  TempDir dir;
  const std::string cfg = dir.file("run.cfg", "# run\ntrials = 300\nseed = 9\n");
  const Result r = run("--config " + cfg + " simulate --stream 'S B' --policy median --trials 100 --seed 1");
  REQUIRE(r.code == 0);
  CHECK(field(r.out, "trials") == "300");
  CHECK(field(r.out, "seed") == "9");

  const std::string bad = dir.file("bad.cfg", "trails = 300\n");
  CHECK(run("--config " + bad + " simulate --stream SB --policy median").code == 2);
  const std::string dup = dir.file("dup.cfg", "seed = 1\nseed = 2\n");
  CHECK(run("--config " + dup + " simulate --stream SB --policy median").code == 2);
  CHECK(run("--config " + (dir.path / "absent.cfg").string() + " simulate --stream SB --policy median").code == 2);
}

TEST_CASE("trace csv") {
  TempDir dir;
  const std::string trace = dir.file("trace.csv");
  REQUIRE(run("simulate --stream 'S B^2' --policy stock:1 --trials 10 --trace " + trace).code == 0);
  const std::string text = slurp(trace);
  CHECK(text.rfind("t,role,price,value,traded,stock\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(text.find("\n0,S,") != std::string::npos);
}

TEST_CASE("solve-fractional") {
  const Result r = run("solve-fractional --alpha 1");
  REQUIRE(r.code == 0);
  CHECK(std::abs(std::stod(field(r.out, "p")) - 0.75) <= 1e-6);
  CHECK(std::abs(std::stod(field(r.out, "q")) - 0.25) <= 1e-6);
  CHECK(std::abs(std::stod(field(r.out, "per_buyer_value")) - 0.125) <= 1e-6);
  CHECK(run("solve-fractional --alpha 1 --seller-dist uniform:2,3").code == 1);
  CHECK(run("solve-fractional --alpha 0").code == 2);
}

TEST_CASE("experiment output is deterministic") {
  TempDir dir;
  const std::string a = dir.file("a.csv"), b = dir.file("b.csv");
  const std::string args = "experiment balanced --n-values 10,20 --trials 200 --seed 4 --output ";
  REQUIRE(run(args + a).code == 0);
  REQUIRE(run(args + b + " --workers 3").code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).rfind("n,online_mean,", 0) == 0);
  const Result stdout_run = run("experiment balanced --n-values 10,20 --trials 200 --seed 4");
  CHECK(stdout_run.out == slurp(a));
  CHECK(run(args + (dir.path / "missing" / "x.csv").string()).code == 1);
}

TEST_CASE("verify") {
  const Result pos = run("verify matching");
  CHECK(pos.code == 0);
  CHECK(pos.out.find("verify matching: 104/104 passed") != std::string::npos);
  CHECK(run("verify --suite adaptive").code == 0);
  CHECK(run("verify").code == 2);
}
