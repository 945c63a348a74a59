#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "dmdgp/error.hpp"
#include "dmdgp/instance_io.hpp"
#include "dmdgp/report_io.hpp"
#include "dmdgp/result_io.hpp"
#include "dmdgp/symmetry.hpp"
#include "dmdgp/version.hpp"

namespace dmdgp::cli {
namespace {

struct GenerateArgs {
  bool counterexample = false;
  bool random = false;
  int k = 0;
  int n = 0;
  double prune = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string witness;
};

struct SolveArgs {
  std::string instance;
  std::string out;
  std::string plot;
  SolverOptions options;
};

struct AnalyzeArgs {
  std::string result;
  std::string out;
  std::uint64_t seed = OrbitOptions{}.seed;
  double tolerance = OrbitOptions{}.match_tolerance;
  std::vector<int> spectrum;
};

struct VerifyArgs {
  std::string instance;
  std::string result;
  bool oracle = false;
  double atol = 1e-9;
  double rtol = 1e-9;
};

// Stable across platforms, unlike std::hash.
std::string fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

Manifest base_manifest(std::string_view command) {
  return {{"tool", "dmdgp"}, {"version", kVersion}, {"command", std::string(command)}};
}

int cmd_generate(const GenerateArgs& a, std::ostream& log) {
  if (a.counterexample == a.random) {
    fmt::print(log, "generate: pass exactly one of --counterexample or --random\n");
    return kInvalid;
  }
  Manifest manifest = base_manifest("generate");
  if (a.counterexample) {
    const Instance inst = counterexample(a.k);
    manifest.emplace_back("family", "counterexample");
    manifest.emplace_back("k", std::to_string(a.k));
    write_file(a.out, serialize_instance(inst, manifest));
    fmt::print(log, "counterexample K={}: {} vertices, {} edges -> {}\n", a.k, inst.size(),
               inst.edges().size(), a.out);
    return kOk;
  }
  const auto gen = random_instance(a.k, a.n, a.prune, a.seed);
  manifest.emplace_back("family", "random");
  manifest.emplace_back("k", std::to_string(a.k));
  manifest.emplace_back("n", std::to_string(a.n));
  manifest.emplace_back("prune", format_double(a.prune));
  manifest.emplace_back("seed", std::to_string(a.seed));
  const std::string witness = a.witness.empty() ? a.out + ".witness" : a.witness;
  write_file(a.out, serialize_instance(gen.instance, manifest));
  write_file(witness, serialize_embedding(gen.witness, manifest));
  fmt::print(log, "random K={} n={} p={} seed={}: {} edges -> {} (witness {})\n", a.k, a.n,
             a.prune, a.seed, gen.instance.edges().size(), a.out, witness);
  return kOk;
}

int cmd_validate(const std::string& path, std::ostream& log) {
  const Instance inst = load_instance(path);
  const auto report = validate(inst);
  if (report.ok()) {
    fmt::print(log, "{}: valid (K={}, n={}, {} edges)\n", path, inst.dimension(), inst.size(),
               inst.edges().size());
    return kOk;
  }
  fmt::print(log, "{}: {} violation(s)\n{}", path, report.violations.size(), report.summary());
  return kInvalid;
}

std::string plot_table(const SolveResult& result) {
  std::string out = "# solution chi rank";
  for (int c = 1; c <= result.dimension; ++c) out += fmt::format(" x{}", c);
  out += '\n';
  for (std::size_t s = 0; s < result.solutions.size(); ++s) {
    const auto chi = result.chi_sequences[s].to_string();
    for (std::size_t r = 0; r < result.solutions[s].size(); ++r) {
      out += fmt::format("{} {} {}", s, chi, r + 1);
      for (int c = 0; c < result.dimension; ++c) {
        out += ' ';
        out += format_double(result.solutions[s][r][c]);
      }
      out += '\n';
    }
  }
  return out;
}

int cmd_solve(const SolveArgs& a, std::ostream& log) {
  const std::string text = read_file(a.instance);
  const Instance inst = parse_instance(text);
  if (const auto report = validate(inst); !report.ok()) {
    fmt::print(log, "{}: invalid instance\n{}", a.instance, report.summary());
    return kInvalid;
  }
  const SolveResult result = solve(inst, a.options);

  Manifest manifest = base_manifest("solve");
  manifest.emplace_back("instance", a.instance);
  manifest.emplace_back("instance_fnv1a", fnv1a(text));
  manifest.emplace_back("atol", format_double(a.options.atol));
  manifest.emplace_back("rtol", format_double(a.options.rtol));
  manifest.emplace_back("keep_tree", a.options.keep_tree ? "true" : "false");
  manifest.emplace_back("max_nodes", std::to_string(a.options.max_nodes));
  const std::string out = a.out.empty() ? a.instance + ".result" : a.out;
  write_file(out, serialize_result(result, manifest));
  if (!a.plot.empty()) write_file(a.plot, plot_table(result));

  fmt::print(log, "{}: {} solution(s), {} nodes, {} pruned, {} tangent, {:.1f} ms -> {}\n",
             a.instance, result.solutions.size(), result.stats.nodes,
             result.stats.pruned_candidates, result.stats.tangent_events,
             result.stats.wall_time_ms, out);
  if (result.status == SolveStatus::BudgetExceeded) {
    fmt::print(log, "node budget of {} exhausted; result is partial\n", a.options.max_nodes);
    return kBudget;
  }
  return result.solutions.empty() ? kInfeasible : kOk;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& log) {
  const SolveResult result = load_result(a.result);
  if (result.solutions.empty()) {
    fmt::print(log, "{}: no solutions to analyze\n", a.result);
    return kInvalid;
  }
  OrbitOptions options;
  options.seed = a.seed;
  options.match_tolerance = a.tolerance;
  const SymmetryReport report = verify_orbit(result, options);

  Manifest manifest = base_manifest("analyze");
  manifest.emplace_back("result", a.result);
  manifest.emplace_back("seed", std::to_string(a.seed));
  manifest.emplace_back("match_tolerance", format_double(a.tolerance));
  std::string text = serialize_report(report, manifest);

  if (!a.spectrum.empty()) {
    const auto sp = distance_spectrum(result, a.spectrum[0], a.spectrum[1]);
    text += fmt::format("spectrum.u: {}\nspectrum.v: {}\nspectrum.leaves: {}\n", a.spectrum[0],
                        a.spectrum[1], sp.leaf_count);
    text += fmt::format("spectrum.ambiguous: {}\nspectrum.values: {}\n", sp.ambiguous,
                        sp.values.size());
    for (double v : sp.values) text += fmt::format("  {}\n", format_double(v));
    fmt::print(log, "spectrum {}..{}: {} cluster(s){}\n", a.spectrum[0], a.spectrum[1],
               sp.values.size(), sp.ambiguous ? " (ambiguous)" : "");
  }
  const std::string out = a.out.empty() ? a.result + ".report" : a.out;
  write_file(out, text);

  fmt::print(log, "I = {}, |X| = {}, group order {}, orbit {}, power of two {}\n",
             format_levels(report.branch.levels), report.solution_count, report.group_order,
             report.orbit_verified ? "verified" : "NOT verified",
             report.power_of_two ? "yes" : "no");
  if (report.degenerate()) {
    fmt::print(log, "degenerate instance: I-readings {} vs {}, mixed levels {}, {} tangent event(s)\n",
               format_levels(report.branch.levels), format_levels(report.branch.any_levels),
               format_levels(report.branch.mixed_levels), report.tangent_events);
    return kDegenerate;
  }
  if (report.orbit_verified && report.power_of_two && report.reflections_ok()) return kOk;
  if (!report.reflections_ok()) fmt::print(log, "partial reflection check failed\n");
  return kFailed;
}

int cmd_verify(const VerifyArgs& a, std::ostream& log) {
  const Instance inst = load_instance(a.instance);
  const SolveResult result = load_result(a.result);
  int failures = 0;
  auto fail = [&](const std::string& msg) {
    ++failures;
    fmt::print(log, "FAIL: {}\n", msg);
  };

  if (result.dimension != inst.dimension() || result.n != inst.size()) {
    fail(fmt::format("result is K={} n={}, instance is K={} n={}", result.dimension, result.n,
                     inst.dimension(), inst.size()));
    return kFailed;
  }
  for (std::size_t s = 0; s < result.solutions.size(); ++s) {
    if (!satisfies_all_edges(inst, result.solutions[s], a.atol, a.rtol)) {
      fail(fmt::format("solution {} violates an edge (max relative residual {:.3e})", s,
                       max_edge_residual(inst, result.solutions[s])));
    }
  }
  const std::set<BitVector> distinct(result.chi_sequences.begin(), result.chi_sequences.end());
  if (distinct.size() != result.chi_sequences.size()) fail("duplicate label sequences");

  if (a.oracle) {
    const auto oracle = brute_force(inst);
    if (oracle.size() != result.solutions.size()) {
      fail(fmt::format("oracle finds {} solutions, result has {}", oracle.size(),
                       result.solutions.size()));
    } else {
      for (std::size_t s = 0; s < oracle.size(); ++s) {
        if (oracle[s].chi != result.chi_sequences[s]) {
          fail(fmt::format("solution {}: oracle labels {} vs {}", s, oracle[s].chi.to_string(),
                           result.chi_sequences[s].to_string()));
        } else if (max_pointwise_distance(oracle[s].embedding, result.solutions[s]) > 1e-9) {
          fail(fmt::format("solution {} differs from the oracle embedding", s));
        }
      }
    }
  }
  if (failures > 0) return kFailed;
  fmt::print(log, "{}: {} solution(s) verified{}\n", a.result, result.solutions.size(),
             a.oracle ? " against the exhaustive oracle" : "");
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& log) {
  CLI::App app{"Branch-and-Prune solver and symmetry analysis for discretizable distance geometry"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "write a counterexample or random instance");
  generate->add_flag("--counterexample", gen.counterexample, "degenerate family with |X| = 6");
  generate->add_flag("--random", gen.random, "random generic instance with a witness");
  generate->add_option("--k", gen.k, "dimension")->required();
  generate->add_option("--n", gen.n, "number of vertices (random only)");
  generate->add_option("--prune", gen.prune, "probability of each pruning edge (random only)");
  generate->add_option("--seed", gen.seed, "random seed");
  generate->add_option("--out", gen.out, "instance file")->required();
  generate->add_option("--witness", gen.witness, "witness file (default <out>.witness)");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "check an instance file");
  validate_cmd->add_option("instance", validate_path)->required();

  SolveArgs sol;
  auto* solve_cmd = app.add_subcommand("solve", "enumerate every valid embedding");
  solve_cmd->add_option("instance", sol.instance)->required();
  solve_cmd->add_option("--out", sol.out, "result file (default <instance>.result)");
  solve_cmd->add_option("--atol", sol.options.atol, "absolute pruning tolerance");
  solve_cmd->add_option("--rtol", sol.options.rtol, "relative pruning tolerance");
  solve_cmd->add_option("--threads", sol.options.threads, "worker threads")
      ->check(CLI::Range(1U, 256U));
  solve_cmd->add_flag("--keep-tree", sol.options.keep_tree, "store the search tree in the result");
  solve_cmd->add_option("--max-nodes", sol.options.max_nodes, "node budget");
  solve_cmd->add_option("--plot", sol.plot, "also write a coordinate table for plotting");

  AnalyzeArgs ana;
  auto* analyze = app.add_subcommand("analyze", "verify the symmetry structure of a result");
  analyze->add_option("result", ana.result)->required();
  analyze->add_option("--out", ana.out, "report file (default <result>.report)");
  analyze->add_option("--seed", ana.seed, "seed for sampled orbit checks");
  analyze->add_option("--atol", ana.tolerance, "pointwise match tolerance");
  analyze->add_option("--spectrum", ana.spectrum, "ranks U V for a distance spectrum")
      ->expected(2);

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "recheck a result against its instance");
  verify->add_option("instance", ver.instance)->required();
  verify->add_option("result", ver.result)->required();
  verify->add_flag("--oracle", ver.oracle, "compare with exhaustive enumeration");
  verify->add_option("--atol", ver.atol, "absolute edge tolerance");
  verify->add_option("--rtol", ver.rtol, "relative edge tolerance");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, log, log) == 0 ? kOk : kInvalid;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, log);
    if (validate_cmd->parsed()) return cmd_validate(validate_path, log);
    if (solve_cmd->parsed()) return cmd_solve(sol, log);
    if (analyze->parsed()) return cmd_analyze(ana, log);
    if (verify->parsed()) return cmd_verify(ver, log);
  } catch (const ParseError& e) {
    fmt::print(log, "parse error: {}\n", e.what());
    return kInvalid;
  } catch (const Error& e) {
    fmt::print(log, "error ({}): {}\n", to_string(e.code()), e.what());
    switch (e.code()) {
      case ErrorCode::InvalidArgument:
      case ErrorCode::InvalidInstance:
      case ErrorCode::ParseError:
      case ErrorCode::GenericityFailure:
        return kInvalid;
      case ErrorCode::BudgetExceeded:
        return kBudget;
      default:
        return kFailed;
    }
  }
  return kInvalid;
}

}  // namespace dmdgp::cli
