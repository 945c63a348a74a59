#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "dmdgp/instance_io.hpp"
#include "dmdgp/result_io.hpp"
#include "dmdgp/text_format.hpp"

namespace fs = std::filesystem;
using namespace dmdgp;

namespace {

class Scratch {
 public:
  explicit Scratch(const std::string& tag)
      : dir_(fs::temp_directory_path() / ("dmdgp_cli_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  std::string operator()(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

int run(std::vector<std::string> args) {
  std::ostringstream log;
  const int code = cli::run(args, log);
  MESSAGE(log.str());
  return code;
}

std::vector<std::pair<std::string, std::vector<std::string>>> fixture_list() {
  std::ifstream in(std::string(DMDGP_FIXTURE_DIR) + "/fixtures.list");
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string name;
    ss >> name;
    std::vector<std::string> args;
    for (std::string a; ss >> a;) args.push_back(a);
    out.emplace_back(name, args);
  }
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("generate, solve, analyze and verify a counterexample") {
    Scratch tmp("ce");
    CHECK(run({"generate", "--counterexample", "--k", "2", "--out", tmp("ce.inst")}) == cli::kOk);
    const auto inst = load_instance(tmp("ce.inst"));
    CHECK(inst.size() == 5);
    CHECK(inst.edges().size() == 8);

    CHECK(run({"validate", tmp("ce.inst")}) == cli::kOk);
    CHECK(run({"solve", tmp("ce.inst"), "--keep-tree", "--out", tmp("ce.res")}) == cli::kOk);
    CHECK(load_result(tmp("ce.res")).solutions.size() == 6);
    CHECK(run({"analyze", tmp("ce.res"), "--out", tmp("ce.rep")}) == cli::kDegenerate);
    CHECK(read_file(tmp("ce.rep")).find("power_of_two: false") != std::string::npos);
    CHECK(run({"verify", tmp("ce.inst"), tmp("ce.res")}) == cli::kOk);
    CHECK(run({"verify", tmp("ce.inst"), tmp("ce.res"), "--oracle"}) == cli::kOk);
  }

  TEST_CASE("generic pipeline succeeds without a retained tree") {
    Scratch tmp("gen");
    CHECK(run({"generate", "--random", "--k", "2", "--n", "9", "--prune", "0.4", "--seed", "11",
               "--out", tmp("r.inst")}) == cli::kOk);
    CHECK(fs::exists(tmp("r.inst.witness")));
    CHECK(run({"solve", tmp("r.inst"), "--out", tmp("r.res"), "--plot", tmp("r.plot")}) ==
          cli::kOk);
    CHECK(read_file(tmp("r.plot")).starts_with("# solution chi rank x1 x2\n"));
    CHECK(run({"analyze", tmp("r.res"), "--out", tmp("r.rep")}) == cli::kOk);
    CHECK(run({"verify", tmp("r.inst"), tmp("r.res"), "--oracle"}) == cli::kOk);
  }

  TEST_CASE("chain analysis reports the full group and a spectrum") {
    Scratch tmp("chain");
    CHECK(run({"generate", "--random", "--k", "2", "--n", "5", "--prune", "0", "--seed", "1",
               "--out", tmp("c.inst")}) == cli::kOk);
    CHECK(run({"solve", tmp("c.inst"), "--keep-tree", "--out", tmp("c.res")}) == cli::kOk);
    CHECK(run({"analyze", tmp("c.res"), "--spectrum", "1", "4", "--out", tmp("c.rep")}) ==
          cli::kOk);
    const auto rep = read_file(tmp("c.rep"));
    CHECK(rep.find("group_order: 8\n") != std::string::npos);
    CHECK(rep.find("orbit_verified: true\n") != std::string::npos);
    CHECK(rep.find("spectrum.values: 2\n") != std::string::npos);
  }

  TEST_CASE("exit codes for infeasible, tampered, invalid and over-budget inputs") {
    Scratch tmp("codes");
    CHECK(run({"generate", "--random", "--k", "2", "--n", "7", "--prune", "0", "--seed", "21",
               "--out", tmp("g.inst")}) == cli::kOk);
    const auto witness = parse_embedding(read_file(tmp("g.inst.witness")));
    const auto inst = load_instance(tmp("g.inst"));
    const auto far = inst.with_edge(1, 7, (witness[0] - witness[6]).norm() + 1.0);
    write_file(tmp("far.inst"), serialize_instance(far));
    CHECK(run({"solve", tmp("far.inst"), "--out", tmp("far.res")}) == cli::kInfeasible);
    CHECK(run({"analyze", tmp("far.res")}) == cli::kInvalid);

    CHECK(run({"solve", tmp("g.inst"), "--out", tmp("g.res")}) == cli::kOk);
    auto result = load_result(tmp("g.res"));
    result.solutions[0][4][0] += 0.1;
    write_file(tmp("bad.res"), serialize_result(result));
    CHECK(run({"verify", tmp("g.inst"), tmp("bad.res")}) == cli::kFailed);

    write_file(tmp("broken.inst"), serialize_instance(inst.without_edge(2, 3)));
    CHECK(run({"solve", tmp("broken.inst")}) == cli::kInvalid);
    CHECK(run({"validate", tmp("broken.inst")}) == cli::kInvalid);
    write_file(tmp("garbage.inst"), "dimension: two\n");
    CHECK(run({"solve", tmp("garbage.inst")}) == cli::kInvalid);
    CHECK(run({"solve", tmp("missing.inst")}) == cli::kInvalid);

    CHECK(run({"solve", tmp("g.inst"), "--max-nodes", "10", "--out", tmp("b.res")}) ==
          cli::kBudget);
    CHECK(run({"generate", "--random", "--k", "0", "--n", "5", "--out", tmp("x.inst")}) ==
          cli::kInvalid);
    CHECK(run({"frobnicate"}) == cli::kInvalid);
    CHECK(run({"--help"}) == cli::kOk);
  }

  TEST_CASE("outputs are byte-identical across runs and worker counts") {
    Scratch tmp("det");
    const std::string inst = std::string(DMDGP_FIXTURE_DIR) + "/random_k3_n12_s10.inst";
    CHECK(run({"solve", inst, "--keep-tree", "--out", tmp("a.res")}) == cli::kOk);
    CHECK(run({"solve", inst, "--keep-tree", "--threads", "4", "--out", tmp("b.res")}) == cli::kOk);
    CHECK(strip_volatile(read_file(tmp("a.res"))) == strip_volatile(read_file(tmp("b.res"))));
    CHECK(run({"analyze", tmp("a.res"), "--out", tmp("a.rep")}) == cli::kOk);
    CHECK(run({"analyze", tmp("a.res"), "--out", tmp("b.rep")}) == cli::kOk);
    CHECK(read_file(tmp("a.rep")) == read_file(tmp("b.rep")));
  }

  TEST_CASE("committed fixtures regenerate byte for byte") {
    Scratch tmp("fix");
    const auto list = fixture_list();
    CHECK(list.size() == 15);
    for (const auto& [name, args] : list) {
      std::vector<std::string> cmd{"generate"};
      cmd.insert(cmd.end(), args.begin(), args.end());
      cmd.insert(cmd.end(), {"--out", tmp(name + ".inst"), "--witness", tmp(name + ".witness")});
      REQUIRE(run(cmd) == cli::kOk);
      const std::string base = std::string(DMDGP_FIXTURE_DIR) + "/" + name;
      CHECK(read_file(tmp(name + ".inst")) == read_file(base + ".inst"));
      if (fs::exists(base + ".witness")) {
        CHECK(read_file(tmp(name + ".witness")) == read_file(base + ".witness"));
      }
    }
  }

  TEST_CASE("every fixture passes the full pipeline") {
    Scratch tmp("pipe");
    for (const auto& [name, args] : fixture_list()) {
      const std::string inst = std::string(DMDGP_FIXTURE_DIR) + "/" + name + ".inst";
      const bool degenerate = name.starts_with("counterexample");
      CHECK(run({"solve", inst, "--keep-tree", "--out", tmp(name + ".res")}) == cli::kOk);
      CHECK(run({"analyze", tmp(name + ".res"), "--out", tmp(name + ".rep")}) ==
            (degenerate ? cli::kDegenerate : cli::kOk));
      CHECK(run({"verify", inst, tmp(name + ".res"), "--oracle"}) == cli::kOk);
    }
  }
}
