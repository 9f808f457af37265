// Copyright 2026 The lowdim Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// lowdim command-line front end: solve, verify and bench.
//
// Exit codes: 0 success, 1 verify mismatch, 2 invalid instance (parse or validation),
// 3 engine precondition failure, 4 other errors.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lowdim/io.hpp"
#include "lowdim/lowdim.hpp"

namespace {

using namespace lowdim;

constexpr int kExitMismatch = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitOther = 4;

struct EngineFlags {
  std::string engine = "auto";
  std::optional<std::int64_t> radius_cap;
  std::string deepening = "on";
  unsigned jobs = 1;
  std::optional<std::int64_t> cap_infinite;
  bool inject_fault = false;
};

void add_engine_flags(CLI::App* cmd, EngineFlags& f) {
  cmd->add_option("--engine", f.engine, "auto | nonneg | bounded | unknown-w")
      ->check(CLI::IsMember({"auto", "nonneg", "bounded", "unknown-w"}));
  cmd->add_option("--radius-cap", f.radius_cap, "largest target-ball radius explored")->check(CLI::NonNegativeNumber);
  cmd->add_option("--deepening", f.deepening, "graded target order (on|off)")->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--cap-infinite", f.cap_infinite, "replace infinite bounds by -/+ this value")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--inject-fault", f.inject_fault, "testing aid: corrupt the engine result")->group("");
}

Instance cap_bounds(Instance inst, std::optional<std::int64_t> cap) {
  if (!cap) return inst;
  for (auto& b : inst.lower) {
    if (!b) b = -*cap;
  }
  for (auto& b : inst.upper) {
    if (!b) b = *cap;
  }
  return inst;
}

struct RunOutput {
  Solution solution;
  SolveStats stats;
};

RunOutput run_engine(const ParsedInput& input, const EngineFlags& f) {
  Instance inst = cap_bounds(input.instance, f.cap_infinite);
  require_valid(inst);
  SolveOptions opts;
  opts.radius_cap = f.radius_cap;
  opts.deepening = f.deepening == "on";
  opts.jobs = f.jobs;

  std::string engine = f.engine;
  if (engine == "auto") engine = inst.all_bounds_finite() ? "bounded" : "nonneg";
  RunOutput out;
  if (engine == "unknown-w") {
    if (!input.z) throw PreconditionError("unknown-w engine needs a relaxation optimum \"z\" in the instance file");
    auto oracle = make_gradient_oracle(inst);
    std::int64_t budget = input.budget.value_or(static_cast<std::int64_t>(inst.n()));
    auto r = solve_unknown_w(oracle, *input.z, budget);
    out.solution = r.solution;
    out.stats.guesses_explored = r.passes;
    out.stats.oracle_calls = r.evaluations;
    out.stats.radius_used = budget;
  } else {
    EngineResult r = engine == "bounded" ? solve_bounded(inst, opts) : solve_nonneg(inst, opts);
    out.solution = r.solution;
    out.stats = r.stats;
  }
  if (f.inject_fault) {
    out.solution.value = out.solution.value.is_finite() ? ExtRat(Rat(out.solution.value.value() + 1)) : ExtRat(Rat(0));
  }
  return out;
}

std::string describe(const Solution& s) {
  std::ostringstream os;
  os << to_string(s.status) << " value=" << to_string(s.value) << " x=[";
  for (std::size_t i = 0; i < s.x.size(); ++i) os << (i ? "," : "") << s.x[i];
  os << "]";
  return os.str();
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations) std::cerr << "violation: " << to_string(v) << "\n";
    return kExitInvalid;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const UnboundedDomain& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const VolumeLimitExceeded& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const ContractViolation& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver for min c^T x + g(W x) over integer boxes"};
  app.require_subcommand(1);

  // solve
  std::string solve_path;
  EngineFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "solve an instance file and print the JSON result");
  solve->add_option("instance", solve_path, "instance JSON")->required();
  add_engine_flags(solve, solve_flags);

  // verify
  std::string verify_path;
  EngineFlags verify_flags;
  std::optional<std::uint64_t> verify_seed;
  std::uint64_t verify_count = 1;
  Profile verify_profile;
  std::string verify_family = "mixed";
  auto* verify = app.add_subcommand("verify", "compare an engine against brute force");
  verify->add_option("instance", verify_path, "instance JSON (omit to use --seed)");
  verify->add_option("--seed", verify_seed, "first seed of a generated batch");
  verify->add_option("--count", verify_count, "number of generated instances");
  verify->add_option("--n", verify_profile.n, "variables")->check(CLI::PositiveNumber);
  verify->add_option("--m", verify_profile.m, "rows of W")->check(CLI::PositiveNumber);
  verify->add_option("--delta", verify_profile.delta, "max |W entry|")->check(CLI::NonNegativeNumber);
  verify->add_option("--box-lo", verify_profile.box_lo, "smallest bound drawn");
  verify->add_option("--box-hi", verify_profile.box_hi, "largest bound drawn");
  verify->add_flag("--nonneg", verify_profile.nonneg, "lower bounds 0");
  verify->add_option("--family", verify_family, "objective family or 'mixed'");
  add_engine_flags(verify, verify_flags);

  // bench
  std::string bench_n = "4,8";
  std::string bench_m = "1,2";
  std::string bench_delta = "0,1,2";
  std::string bench_engine = "bounded";
  std::uint64_t bench_reps = 3;
  std::uint64_t bench_seed = 1;
  auto* bench = app.add_subcommand("bench", "timing and counter table as CSV");
  bench->add_option("--n-list", bench_n, "comma-separated n values");
  bench->add_option("--m-list", bench_m, "comma-separated m values");
  bench->add_option("--delta-list", bench_delta, "comma-separated delta values");
  bench->add_option("--engine", bench_engine, "bounded | nonneg")->check(CLI::IsMember({"bounded", "nonneg"}));
  bench->add_option("--reps", bench_reps, "instances per grid point")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed, "base seed");

  CLI11_PARSE(app, argc, argv);

  if (*solve) {
    return guarded([&] {
      ParsedInput input = read_input_file(solve_path);
      RunOutput out = run_engine(input, solve_flags);
      std::cout << result_to_json(out.solution, out.stats).dump() << "\n";
      return 0;
    });
  }

  if (*verify) {
    return guarded([&] {
      if (!verify_path.empty()) {
        ParsedInput input = read_input_file(verify_path);
        RunOutput out = run_engine(input, verify_flags);
        Solution brute = brute_force_solve(input.instance, verify_flags.cap_infinite);
        bool match = out.solution.value == brute.value;
        std::cout << (match ? "MATCH" : "MISMATCH") << "\n";
        std::cout << "engine: " << describe(out.solution) << "\n";
        std::cout << "brute:  " << describe(brute) << "\n";
        return match ? 0 : kExitMismatch;
      }
      if (!verify_seed) throw FormatError("verify needs an instance file or --seed");
      verify_profile.family = parse_family(verify_family);
      std::uint64_t mismatches = 0;
      std::cout << "seed,n,m,delta,engine_value,brute_value,verdict\n";
      for (std::uint64_t k = 0; k < verify_count; ++k) {
        const std::uint64_t seed = *verify_seed + k;
        ParsedInput input;
        input.instance = random_instance(seed, verify_profile);
        RunOutput out = run_engine(input, verify_flags);
        Solution brute = brute_force_solve(input.instance, verify_flags.cap_infinite);
        bool match = out.solution.value == brute.value;
        mismatches += match ? 0 : 1;
        std::cout << seed << "," << verify_profile.n << "," << verify_profile.m << "," << verify_profile.delta << ","
                  << to_string(out.solution.value) << "," << to_string(brute.value) << ","
                  << (match ? "MATCH" : "MISMATCH") << "\n";
      }
      std::cout << "summary: " << (verify_count - mismatches) << "/" << verify_count << " MATCH\n";
      return mismatches == 0 ? 0 : kExitMismatch;
    });
  }

  if (*bench) {
    return guarded([&] {
      std::cout << "n,m,delta,engine,reps,mean_ms,guesses,dp_tables,dp_states,targets,oracle_calls\n";
      for (const auto& ms : split_csv(bench_m)) {
        for (const auto& ds : split_csv(bench_delta)) {
          for (const auto& ns : split_csv(bench_n)) {
            Profile p;
            p.n = std::stoul(ns);
            p.m = std::stoul(ms);
            p.delta = std::stoll(ds);
            p.nonneg = bench_engine == "nonneg";
            SolveStats total;
            double ms_total = 0;
            for (std::uint64_t r = 0; r < bench_reps; ++r) {
              Instance inst = random_instance(bench_seed + r, p);
              auto t0 = std::chrono::steady_clock::now();
              EngineResult res = p.nonneg ? solve_nonneg(inst) : solve_bounded(inst);
              ms_total += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
              total.absorb(res.stats);
            }
            std::cout << p.n << "," << p.m << "," << p.delta << "," << bench_engine << "," << bench_reps << ","
                      << ms_total / static_cast<double>(bench_reps) << "," << total.guesses_explored << ","
                      << total.dp_tables << "," << total.dp_states << "," << total.targets << ","
                      << total.oracle_calls << "\n";
          }
        }
      }
      return 0;
    });
  }
  return 0;
}
