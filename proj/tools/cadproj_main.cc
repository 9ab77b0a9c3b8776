// Copyright 2026 The cadproj Authors.
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

// cadproj: generate instances, project points, run the self-checks and
// descend through the projection layer.
//
//   cadproj gen --family lp --n 10 --m 8 --seed 7 --count 5 --out data/
//   cadproj project --family lp --n 200 --alg cad --eps 1e-6 --csv runs.csv
//   cadproj verify --suite all --trials 100
//   cadproj descend --grad both --family lp --n 8 --m 6 --steps 200
//
// Relative output paths are resolved against $CADPROJ_OUTPUT_DIR when set.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cadproj/bench.h"
#include "cadproj/descent.h"
#include "cadproj/format.h"
#include "cadproj/instance_io.h"
#include "cadproj/parallel.h"
#include "cadproj/probgen.h"
#include "cadproj/projection.h"
#include "cadproj/verify.h"

namespace fs = std::filesystem;

namespace {

fs::path OutputPath(const std::string& name) {
  fs::path path(name);
  if (path.is_absolute()) return path;
  if (const char* dir = std::getenv("CADPROJ_OUTPUT_DIR"); dir && *dir) {
    return fs::path(dir) / path;
  }
  return path;
}

std::ofstream OpenOutput(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

// Flags shared by every subcommand that can generate its own instances.
struct GenerationFlags {
  std::string family = "lp";
  int n = 0;
  int m = 0;  // 0 selects round(0.75 n)
  int d = 3;
  double delta = 1.0;
  std::uint64_t seed = 0;
  int count = 1;
  bool no_offset = false;

  void Register(CLI::App* app, bool require_n) {
    app->add_option("--family", family, "lp|quad-er|quad-ba|power|constraints-only")
        ->check(CLI::IsMember({"lp", "quad-er", "quad-ba", "power",
                               "constraints-only"}));
    auto* n_option = app->add_option("--n", n, "Number of variables")
                         ->check(CLI::PositiveNumber);
    if (require_n) n_option->required();
    app->add_option("--m", m, "Number of constraints (default 0.75 n)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--d", d, "Average nonzeros per row")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Seed of the first instance");
    app->add_option("--count", count, "Instances, seeds seed..seed+count-1")
        ->check(CLI::PositiveNumber);
    app->add_flag("--no-offset", no_offset,
                  "b = max(As, 0.1) instead of u + As");
  }

  std::vector<cadproj::ProblemInstance> Generate() const {
    std::vector<cadproj::ProblemInstance> out;
    for (int k = 0; k < count; ++k) {
      cadproj::GeneratorConfig config;
      config.n = n;
      config.m = m > 0 ? m : std::max(1, static_cast<int>(std::lround(0.75 * n)));
      config.degree = d;
      config.delta = delta;
      config.offset = !no_offset;
      config.seed = seed + static_cast<std::uint64_t>(k);
      out.push_back(cadproj::GenerateFamily(family, config));
    }
    return out;
  }
};

int RunGen(const GenerationFlags& flags, const std::string& out_dir) {
  const fs::path dir = OutputPath(out_dir);
  fs::create_directories(dir);
  for (const cadproj::ProblemInstance& instance : flags.Generate()) {
    const fs::path path = dir / (instance.id() + ".json");
    cadproj::WriteInstance(instance, path);
    std::cout << path.string() << '\n';
  }
  return 0;
}

struct ProjectFlags {
  std::vector<std::string> instance_files;
  std::string algorithm = "cad";
  double epsilon = 1e-6;
  double delta = 1.0;
  int repeats = 1;
  int jobs = 1;
  int max_iterations = 100000;
  std::uint64_t point_seed = 0;
  std::string csv;
  std::string points;
  bool verify = false;
  bool no_runtime = false;
  int tamper = 0;
};

int RunProject(const GenerationFlags& generation, const ProjectFlags& flags) {
  std::vector<cadproj::ProblemInstance> instances;
  if (!flags.instance_files.empty()) {
    for (const std::string& file : flags.instance_files) {
      instances.push_back(cadproj::ReadInstance(file));
    }
  } else if (generation.n > 0) {
    instances = generation.Generate();
  } else {
    throw CLI::ValidationError("project", "give --instance files or --n");
  }

  cadproj::ProjectBenchConfig config;
  config.solver.algorithm = cadproj::ParseAlgorithm(flags.algorithm);
  config.solver.epsilon = flags.epsilon;
  config.solver.max_iterations = flags.max_iterations;
  config.solver.l_offset_for_testing = flags.tamper;
  config.delta = flags.delta;
  config.repeats = flags.repeats;
  config.jobs = flags.jobs;
  config.seed = flags.point_seed;
  config.verify = flags.verify;
  const std::vector<cadproj::ProjectRun> runs =
      cadproj::RunProjectBenchmark(instances, config);

  std::vector<cadproj::BenchRecord> records;
  for (const cadproj::ProjectRun& run : runs) records.push_back(run.record);
  if (flags.csv.empty()) {
    cadproj::WriteBenchCsv(records, std::cout, !flags.no_runtime);
  } else {
    std::ofstream out = OpenOutput(OutputPath(flags.csv));
    cadproj::WriteBenchCsv(records, out, !flags.no_runtime);
  }
  if (!flags.points.empty()) {
    std::ofstream out = OpenOutput(OutputPath(flags.points));
    for (const cadproj::ProjectRun& run : runs) {
      out << run.record.instance_id << ',' << run.repeat;
      for (double v : run.point) out << ',' << cadproj::FormatDouble(v);
      out << '\n';
    }
  }

  int unconverged = 0;
  double worst_error = 0.0;
  for (const cadproj::ProjectRun& run : runs) {
    if (!run.record.converged) ++unconverged;
    if (run.oracle_error) worst_error = std::max(worst_error, *run.oracle_error);
  }
  std::cerr << runs.size() << " runs, " << unconverged << " unconverged\n";
  if (flags.verify) {
    const bool ok = worst_error <= 1e-4;
    std::cerr << "max ||x - oracle||_inf = " << worst_error
              << (ok ? " (pass)" : " (FAIL, limit 1e-4)") << '\n';
    if (!ok) return 1;
  }
  return 0;
}

int RunVerify(const std::string& suite, const cadproj::VerifyConfig& config) {
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = {"theorem1", "dykstra", "prop1", "svc"};
  } else {
    suites = {suite};
  }
  bool all_passed = true;
  for (const std::string& name : suites) {
    const cadproj::VerifyReport report = cadproj::RunVerifySuite(name, config);
    std::cout << (report.passed() ? "PASS " : "FAIL ") << name << ": "
              << report.trials << " trials, " << report.checks << " checks, "
              << report.failures.size() << " failures\n";
    for (const auto& [counter, value] : report.counters) {
      std::cout << "  " << counter << ": " << value << '\n';
    }
    for (const cadproj::VerifyFailure& f : report.failures) {
      std::cout << "  failed " << f.check << " (trial " << f.trial << ", seed "
                << f.seed << "): " << f.detail << '\n';
    }
    all_passed &= report.passed();
  }
  return all_passed ? 0 : 1;
}

struct DescendFlags {
  std::string grad = "surrogate";
  double penalty = 0.0;
  double eta = 0.05;
  int steps = 100;
  int svc_steps = 0;
  bool decay = false;
  double epsilon = 1e-6;
  int jobs = 1;
  std::string instance_file;
  std::string out_dir = "traces";
};

int RunDescend(GenerationFlags generation, const DescendFlags& flags) {
  std::vector<cadproj::ProblemInstance> instances;
  if (!flags.instance_file.empty()) {
    instances.push_back(cadproj::ReadInstance(flags.instance_file));
  } else {
    if (generation.n == 0) generation.n = 8;
    if (generation.m == 0) generation.m = 6;
    instances = generation.Generate();
  }
  std::vector<cadproj::JacobianKind> kinds;
  if (flags.grad == "surrogate" || flags.grad == "both") {
    kinds.push_back(cadproj::JacobianKind::kSurrogate);
  }
  if (flags.grad == "exact" || flags.grad == "both") {
    kinds.push_back(cadproj::JacobianKind::kExact);
  }

  // Paired mode: both gradient kinds start from the same w for a given
  // instance, seeded by the instance seed.
  const int runs = static_cast<int>(instances.size() * kinds.size());
  std::vector<cadproj::Trace> traces(runs);
  cadproj::ParallelFor(runs, flags.jobs, [&](int k) {
    const cadproj::ProblemInstance& instance = instances[k / kinds.size()];
    cadproj::DescentConfig config;
    config.gradient_kind = kinds[k % kinds.size()];
    config.eta = flags.eta;
    config.iterations = flags.steps;
    config.penalty = flags.penalty;
    config.svc_steps = flags.svc_steps;
    config.decay = flags.decay;
    config.epsilon = flags.epsilon;
    config.seed = instance.meta.seed;
    traces[k] = cadproj::Descend(instance, config);
  });

  const fs::path dir = OutputPath(flags.out_dir);
  fs::create_directories(dir);
  std::cout << "instance_id,grad,steps,final_objective,best_objective,"
               "median_cad_iters,truncated,trace\n";
  for (int k = 0; k < runs; ++k) {
    const cadproj::ProblemInstance& instance = instances[k / kinds.size()];
    const cadproj::Trace& trace = traces[k];
    const std::string grad =
        kinds[k % kinds.size()] == cadproj::JacobianKind::kSurrogate ? "surrogate"
                                                                     : "exact";
    const fs::path path = dir / (instance.id() + "-" + grad + ".csv");
    std::ofstream out = OpenOutput(path);
    cadproj::WriteTraceCsv(trace, out);
    std::cout << instance.id() << ',' << grad << ',' << trace.rows.size() << ',';
    if (trace.rows.empty()) {
      std::cout << ",,";
    } else {
      std::cout << cadproj::FormatDouble(trace.FinalObjective()) << ','
                << cadproj::FormatDouble(trace.BestObjective()) << ','
                << cadproj::FormatDouble(trace.MedianCadIterations());
    }
    std::cout << ',' << (trace.truncated ? "true" : "false") << ','
              << path.string() << '\n';
    if (trace.truncated) {
      std::cerr << instance.id() << " (" << grad
                << "): " << trace.truncation_reason << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projection onto sparse polytopes with component-averaged Dykstra"};
  app.require_subcommand(1);

  GenerationFlags gen_flags;
  std::string gen_out = ".";
  CLI::App* gen = app.add_subcommand("gen", "Write random instances as JSON");
  gen_flags.Register(gen, /*require_n=*/true);
  gen->add_option("--delta", gen_flags.delta, "Recorded initial-point radius")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--out", gen_out, "Output directory");

  GenerationFlags project_gen;
  ProjectFlags project_flags;
  CLI::App* project = app.add_subcommand("project", "Benchmark projections");
  project_gen.Register(project, /*require_n=*/false);
  project->add_option("--instance", project_flags.instance_files,
                      "Instance JSON files (instead of generating)");
  project->add_option("--alg", project_flags.algorithm, "cad|cad-raw|simul|two-set")
      ->check(CLI::IsMember({"cad", "cad-raw", "simul", "two-set"}));
  project->add_option("--eps", project_flags.epsilon, "Stopping tolerance")
      ->check(CLI::PositiveNumber);
  project->add_option("--delta", project_flags.delta, "x ~ U(-delta, delta)")
      ->check(CLI::NonNegativeNumber);
  project->add_option("--repeats", project_flags.repeats, "Initial points per instance")
      ->check(CLI::PositiveNumber);
  project->add_option("--jobs", project_flags.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  project->add_option("--max-iter", project_flags.max_iterations, "Iteration cap")
      ->check(CLI::PositiveNumber);
  project->add_option("--point-seed", project_flags.point_seed,
                      "Base seed of the initial points");
  project->add_option("--csv", project_flags.csv, "CSV output (default stdout)");
  project->add_option("--points", project_flags.points,
                      "Write projected points, one run per line");
  project->add_flag("--verify", project_flags.verify,
                    "Compare with the brute-force oracle (n, m <= 12)");
  project->add_flag("--no-runtime", project_flags.no_runtime,
                    "Write 0 in the runtime column");
  project->add_option("--tamper-l-offset", project_flags.tamper,
                      "Test hook: corrupt the sqrt(l) scaling")
      ->group("");

  std::string suite = "all";
  cadproj::VerifyConfig verify_config;
  CLI::App* verify = app.add_subcommand("verify", "Run the randomised self-checks");
  verify->add_option("--suite", suite, "theorem1|dykstra|prop1|svc|all")
      ->check(CLI::IsMember({"theorem1", "dykstra", "prop1", "svc", "all"}));
  verify->add_option("--trials", verify_config.trials, "Trials per suite")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_config.seed, "Base seed");
  verify->add_option("--tamper-l-offset", verify_config.l_offset_for_testing,
                     "Test hook: corrupt the sqrt(l) scaling")
      ->group("");

  GenerationFlags descend_gen;
  DescendFlags descend_flags;
  CLI::App* descend = app.add_subcommand("descend", "Gradient ascent through P_C");
  descend_gen.Register(descend, /*require_n=*/false);
  descend->add_option("--instance", descend_flags.instance_file, "Instance JSON file");
  descend->add_option("--grad", descend_flags.grad,
                      "surrogate|exact|both (both = paired runs)")
      ->check(CLI::IsMember({"surrogate", "exact", "both"}));
  descend->add_option("--ch", descend_flags.penalty, "Penalty coefficient c_h")
      ->check(CLI::NonNegativeNumber);
  descend->add_option("--eta", descend_flags.eta, "Step size")
      ->check(CLI::PositiveNumber);
  descend->add_option("--steps", descend_flags.steps, "Iterations")
      ->check(CLI::PositiveNumber);
  descend->add_option("--svc-steps", descend_flags.svc_steps,
                      "Clipping refinements per step")
      ->check(CLI::NonNegativeNumber);
  descend->add_flag("--decay", descend_flags.decay, "eta / sqrt(t) step sizes");
  descend->add_option("--eps", descend_flags.epsilon, "CAD tolerance")
      ->check(CLI::PositiveNumber);
  descend->add_option("--jobs", descend_flags.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  descend->add_option("--out", descend_flags.out_dir, "Trace directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return RunGen(gen_flags, gen_out);
    if (project->parsed()) return RunProject(project_gen, project_flags);
    if (verify->parsed()) return RunVerify(suite, verify_config);
    if (descend->parsed()) return RunDescend(descend_gen, descend_flags);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
