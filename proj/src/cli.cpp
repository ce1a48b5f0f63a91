// Copyright 2026 The unravel Authors
//
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

#include "unravel/cli.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "unravel/models.hpp"

namespace unravel::cli {
namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw InvalidArgument("cannot write '" + path.string() + "'");
  os << std::setprecision(17);
  return os;
}

std::string format_state(const PureState& psi) {
  std::ostringstream os;
  os << std::setprecision(12) << "[";
  for (int i = 0; i < psi.dim(); ++i) {
    if (i) os << ", ";
    os << "[" << psi[i].real() << ", " << psi[i].imag() << "]";
  }
  os << "]";
  return os.str();
}

void write_config_copy(const RunConfig& config, const std::filesystem::path& dir) {
  auto os = open_output(dir / "config.json");
  os << run_config_to_json(config).dump(2) << "\n";
}

void dump_witness(const NotPositiveAtState& e, const std::filesystem::path& dir, std::ostream& err) {
  err << "error: " << e.what() << "\nwitness: " << format_state(e.witness()) << "\n";
  std::ofstream os(dir / "witness.txt");
  if (os) {
    os << std::setprecision(17) << "time: " << e.time() << "\nmin_eigenvalue: " << e.min_eigenvalue()
       << "\nwitness: " << format_state(e.witness()) << "\n";
  }
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record) {
  const int n = record.states.front().dim();
  os << "t";
  for (int i = 0; i < n; ++i) os << ",re_psi_" << i << ",im_psi_" << i;
  os << ",norm\n";
  for (std::size_t k = 0; k < record.times.size(); ++k) {
    const CVector& v = record.states[k].vector();
    os << record.times[k];
    for (int i = 0; i < n; ++i) os << "," << v(i).real() << "," << v(i).imag();
    os << "," << v.norm() << "\n";
  }
}

struct RunOutputs {
  TrajectoryConfig trajectory;
  EnsembleResult ensemble;
};

RunOutputs run_and_write(const RunConfig& config, const std::filesystem::path& out_dir, int workers,
                         std::ostream& err) {
  std::filesystem::create_directories(out_dir);
  write_config_copy(config, out_dir);
  RunOutputs r{make_trajectory_config(config, make_generator(config)), {}};
  for (const auto& w : r.trajectory.validate()) err << "warning: " << w << "\n";

  if (config.trajectories == 1) {
    const TrajectoryRecord record = run_trajectory(r.trajectory);
    auto os = open_output(out_dir / "trajectory.csv");
    write_trajectory_csv(os, record);
  }
  r.ensemble = run_ensemble(r.trajectory, {config.trajectories, workers});
  {
    auto os = open_output(out_dir / "ensemble.csv");
    write_ensemble_csv(os, r.ensemble.mean);
  }
  if (r.trajectory.unraveling.kind == UnravelingKind::jump) {
    auto os = open_output(out_dir / "jumps.csv");
    os << "trajectory,jumps,first_jump_time\n";
    for (std::size_t i = 0; i < r.ensemble.jump_counts.size(); ++i) {
      os << i << "," << r.ensemble.jump_counts[i] << ",";
      if (r.ensemble.jump_counts[i] > 0) os << r.ensemble.first_jump_times[i];
      os << "\n";
    }
  }
  return r;
}

template <typename F>
int guarded(F&& body, const std::filesystem::path& out_dir, std::ostream& err) {
  try {
    return body();
  } catch (const NotPositiveAtState& e) {
    dump_witness(e, out_dir, err);
    return kExitScientific;
  } catch (const EnsembleFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitScientific;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace

std::string ensemble_csv_header(int dim) {
  std::ostringstream os;
  os << "t";
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) os << ",re_rho_" << i << "_" << j << ",im_rho_" << i << "_" << j;
  }
  if (dim == 2) os << ",bloch_x,bloch_y,bloch_z";
  return os.str();
}

void write_ensemble_csv(std::ostream& os, const DensitySeries& series) {
  const int n = static_cast<int>(series.matrices.front().rows());
  os << ensemble_csv_header(n) << "\n";
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    const CMatrix& rho = series.matrices[k];
    os << series.times[k];
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) os << "," << rho(i, j).real() << "," << rho(i, j).imag();
    }
    if (n == 2) {
      const Eigen::Vector3d b = bloch_vector(rho);
      os << "," << b.x() << "," << b.y() << "," << b.z();
    }
    os << "\n";
  }
}

int cmd_list_models(std::ostream& out) {
  for (const auto& m : models::catalog()) {
    out << m.name << "  (";
    bool first = true;
    for (const auto& [key, value] : m.parameters) {
      out << (first ? "" : ", ") << key << "=" << value;
      first = false;
    }
    out << ")  expected: " << m.expected_class << "  -- " << m.notes << "\n";
  }
  return kExitOk;
}

int cmd_classify(const RunConfig& config, std::ostream& out) {
  const auto generator = make_generator(config);
  const GeneratorClass result =
      check_positivity(*generator, config.classify_samples, config.classify_refine, config.seed);
  out << std::setprecision(10);
  out << "class: " << to_string(result.tag) << "\n";
  out << "min_eigenvalue: " << result.min_eigenvalue << "\n";
  out << "states_examined: " << result.states_examined << "\n";
  out << "choi: " << (result.choi_cp ? "CP" : "not CP") << "\n";
  if (result.tag == GeneratorTag::not_positive && result.witness) {
    out << "witness: " << format_state(*result.witness) << "\n";
  }
  return result.tag == GeneratorTag::not_positive ? kExitScientific : kExitOk;
}

int cmd_simulate(const RunConfig& config, const std::filesystem::path& out_dir, int workers,
                 std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const RunOutputs r = run_and_write(config, out_dir, workers, err);
        out << "simulated " << r.ensemble.n_trajectories << " trajectories ("
            << to_string(r.trajectory.unraveling) << ") -> " << out_dir.string() << "\n";
        return kExitOk;
      },
      out_dir, err);
}

int cmd_validate(const RunConfig& config, const std::filesystem::path& out_dir, int workers,
                 std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        if (config.trajectories < 100) {
          throw InvalidArgument("validate needs at least 100 trajectories");
        }
        const RunOutputs r = run_and_write(config, out_dir, workers, err);
        const ValidationReport report =
            compare_with_master_equation(r.trajectory, r.ensemble, config.tolerance);
        {
          auto os = open_output(out_dir / "validation.csv");
          os << "t,trace_distance,mc_error\n";
          for (std::size_t k = 0; k < report.times.size(); ++k) {
            os << report.times[k] << "," << report.distances[k] << "," << report.mc_errors[k] << "\n";
          }
        }
        std::ostringstream summary;
        summary << std::setprecision(10);
        summary << "unraveling: " << to_string(r.trajectory.unraveling) << "\n"
                << "n_trajectories: " << report.n_trajectories << "\n"
                << "max_trace_distance: " << report.max_trace_distance << "\n"
                << "mc_error_estimate: " << report.mc_error_estimate << "\n"
                << "tolerance: " << report.tolerance << "\n"
                << "pass: " << (report.pass ? "true" : "false") << "\n";
        auto os = open_output(out_dir / "report.txt");
        os << summary.str();
        out << summary.str();
        return report.pass ? kExitOk : kExitScientific;
      },
      out_dir, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum trajectory unraveling of positive Markovian generators"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out_dir = "out";
  std::string model;
  std::vector<std::string> params;
  int samples = 0;
  bool no_refine = false;

  app.add_subcommand("list-models", "List catalog generators");
  auto* classify = app.add_subcommand("classify", "Classify a generator (CP / positive / not positive)");
  auto* simulate = app.add_subcommand("simulate", "Run an ensemble and write CSV output");
  auto* validate = app.add_subcommand("validate", "Compare an ensemble with the master equation");

  for (auto* sub : {classify, simulate, validate}) {
    sub->add_option("--config", config_path, "Run configuration (JSON)");
    sub->add_option("--seed", seed, "Master seed (overrides the config)");
  }
  classify->add_option("--model", model, "Catalog model name (instead of --config)");
  classify->add_option("--param", params, "Model parameter key=value")->allow_extra_args(false);
  classify->add_option("--samples", samples, "Number of Haar-random states");
  classify->add_flag("--no-refine", no_refine, "Skip local minimization");
  for (auto* sub : {simulate, validate}) {
    sub->add_option("--workers", workers, "Worker threads (0 = all cores)");
    sub->add_option("--out", out_dir, "Output directory");
  }

  std::vector<std::string> argv_storage{"unravel"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  const auto sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "list-models") return cmd_list_models(out);

  RunConfig config;
  try {
    if (!config_path.empty()) {
      config = load_run_config(config_path);
    } else if (name == "classify" && !model.empty()) {
      config.model = model;
      for (const auto& p : params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw InvalidArgument("--param expects key=value");
        config.parameters[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
      }
    } else {
      throw InvalidArgument(name + " needs --config" + (name == "classify" ? " or --model" : ""));
    }
    if (sub->count("--seed") > 0) config.seed = seed;
    if (samples > 0) config.classify_samples = samples;
    if (no_refine) config.classify_refine = false;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (name == "classify") {
    try {
      return cmd_classify(config, out);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  try {
    if (name == "simulate") return cmd_simulate(config, out_dir, workers, out, err);
    return cmd_validate(config, out_dir, workers, out, err);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace unravel::cli
