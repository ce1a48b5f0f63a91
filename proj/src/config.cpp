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

#include "unravel/config.hpp"

#include <cmath>
#include <fstream>

#include "unravel/models.hpp"

namespace unravel {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidArgument(std::string(where) + ": missing field '" + key + "'");
  }
  return j.at(key);
}

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

}  // namespace

CMatrix matrix_from_json(const json& pairs, Eigen::Index rows, Eigen::Index cols) {
  if (!pairs.is_array() || static_cast<Eigen::Index>(pairs.size()) != rows * cols) {
    throw InvalidArgument("matrix: expected " + std::to_string(rows * cols) + " [re, im] pairs");
  }
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const json& z = pairs[static_cast<std::size_t>(i * cols + j)];
      if (z.is_number()) {
        m(i, j) = z.get<double>();
      } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
        m(i, j) = Complex(z[0].get<double>(), z[1].get<double>());
      } else {
        throw InvalidArgument("matrix: entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

json matrix_to_json(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return out;
}

Liouvillian generator_from_json(const json& d) {
  const json& dim_field = require(d, "dimension", "generator description");
  if (!dim_field.is_number_integer()) throw InvalidArgument("generator description: bad dimension");
  const int n = dim_field.get<int>();
  if (n < 1 || n > kMaxDimension) throw InvalidArgument("generator description: dimension out of range");

  if (d.contains("superoperator")) {
    return Liouvillian::from_matrix(matrix_from_json(d.at("superoperator"), n * n, n * n));
  }
  const CMatrix h = d.contains("hamiltonian") ? matrix_from_json(d.at("hamiltonian"), n, n)
                                              : CMatrix::Zero(n, n);
  if (d.contains("lindblad_operators")) {
    std::vector<CMatrix> ops;
    for (const auto& op : d.at("lindblad_operators")) ops.push_back(matrix_from_json(op, n, n));
    return build_lindblad(h, ops);
  }
  if (d.contains("basis")) {
    std::vector<CMatrix> basis;
    for (const auto& g : d.at("basis")) basis.push_back(matrix_from_json(g, n, n));
    const auto k = static_cast<Eigen::Index>(basis.size());
    const CMatrix coefficients =
        matrix_from_json(require(d, "kossakowski", "generator description"), k, k);
    return build_kossakowski(h, basis, coefficients);
  }
  return build_lindblad(h, {});
}

json generator_to_json(const Liouvillian& generator) {
  const int n = generator.dim();
  json out;
  out["dimension"] = n;
  if (const auto* l = std::get_if<LindbladData>(&generator.provenance())) {
    out["hamiltonian"] = matrix_to_json(l->hamiltonian);
    out["lindblad_operators"] = json::array();
    for (const auto& f : l->operators) out["lindblad_operators"].push_back(matrix_to_json(f));
  } else if (const auto* k = std::get_if<KossakowskiData>(&generator.provenance())) {
    out["hamiltonian"] = matrix_to_json(k->hamiltonian);
    out["basis"] = json::array();
    for (const auto& g : k->basis) out["basis"].push_back(matrix_to_json(g));
    out["kossakowski"] = matrix_to_json(k->coefficients);
  } else {
    out["superoperator"] = matrix_to_json(generator.matrix());
  }
  return out;
}

RunConfig run_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw InvalidArgument("run config: expected a JSON object");
  RunConfig c;
  try {
    const json& g = require(j, "generator", "run config");
    if (g.contains("model")) {
      c.model = g.at("model").get<std::string>();
      if (g.contains("parameters")) {
        for (const auto& [key, value] : g.at("parameters").items()) {
          c.parameters[key] = value.get<double>();
        }
      }
    } else if (g.contains("file")) {
      std::filesystem::path p = g.at("file").get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      c.description = parse_file(p);
    } else if (g.contains("description")) {
      c.description = g.at("description");
    } else {
      throw InvalidArgument("run config: generator needs 'model', 'file' or 'description'");
    }

    if (j.contains("initial_state")) {
      const json& s = j.at("initial_state");
      if (s.contains("basis")) {
        c.initial_basis = s.at("basis").get<int>();
      } else if (s.contains("amplitudes")) {
        const json& a = s.at("amplitudes");
        c.initial_state = matrix_from_json(a, static_cast<Eigen::Index>(a.size()), 1);
      } else {
        throw InvalidArgument("run config: initial_state needs 'basis' or 'amplitudes'");
      }
    }

    if (j.contains("unraveling")) {
      const json& u = j.at("unraveling");
      c.unraveling = u.is_string() ? u.get<std::string>() : require(u, "type", "unraveling").get<std::string>();
      if (c.unraveling != "qsd" && c.unraveling != "diffusive" && c.unraveling != "jump" &&
          c.unraveling != "cp_qsd") {
        throw InvalidArgument("run config: unknown unraveling '" + c.unraveling + "'");
      }
      if (u.is_object() && u.contains("s")) {
        const json& s = u.at("s");
        if (s.is_string()) {
          c.s_policy = s.get<std::string>();
          if (c.s_policy != "zero" && c.s_policy != "identity") {
            throw InvalidArgument("run config: s policy must be 'zero' or 'identity'");
          }
        } else {
          const auto k = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(s.size()))));
          c.s_matrix = matrix_from_json(s, k, k);
        }
      }
      if (u.is_object() && u.contains("S")) {
        const json& s = u.at("S");
        const auto k = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(s.size()))));
        c.S_matrix = matrix_from_json(s, k, k);
      }
    }

    c.dt = j.value("dt", c.dt);
    c.t_final = j.value("t_final", c.t_final);
    c.trajectories = j.value("trajectories", c.trajectories);
    c.seed = j.value("seed", c.seed);
    c.record_stride = j.value("record_stride", c.record_stride);
    c.tolerance = j.value("tolerance", c.tolerance);
    if (j.contains("classify")) {
      c.classify_samples = j.at("classify").value("samples", c.classify_samples);
      c.classify_refine = j.at("classify").value("refine", c.classify_refine);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("run config: ") + e.what());
  }
  if (c.trajectories < 1) throw InvalidArgument("run config: trajectories must be >= 1");
  if (c.classify_samples < 1) throw InvalidArgument("run config: classify.samples must be >= 1");
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from_json(parse_file(path), path.parent_path());
}

json run_config_to_json(const RunConfig& c) {
  json j;
  if (c.description) {
    j["generator"] = {{"description", *c.description}};
  } else {
    j["generator"] = {{"model", c.model}, {"parameters", c.parameters}};
  }
  if (c.initial_state) {
    j["initial_state"] = {{"amplitudes", matrix_to_json(*c.initial_state)}};
  } else if (c.initial_basis) {
    j["initial_state"] = {{"basis", *c.initial_basis}};
  }
  json u = {{"type", c.unraveling}};
  if (!c.s_policy.empty()) u["s"] = c.s_policy;
  if (c.s_matrix) u["s"] = matrix_to_json(*c.s_matrix);
  if (c.S_matrix) u["S"] = matrix_to_json(*c.S_matrix);
  j["unraveling"] = u;
  j["dt"] = c.dt;
  j["t_final"] = c.t_final;
  j["trajectories"] = c.trajectories;
  j["seed"] = c.seed;
  j["record_stride"] = c.record_stride;
  j["tolerance"] = c.tolerance;
  j["classify"] = {{"samples", c.classify_samples}, {"refine", c.classify_refine}};
  return j;
}

std::shared_ptr<const Liouvillian> make_generator(const RunConfig& config) {
  if (config.description) return std::make_shared<const Liouvillian>(generator_from_json(*config.description));
  return std::make_shared<const Liouvillian>(models::build(config.model, config.parameters));
}

TrajectoryConfig make_trajectory_config(const RunConfig& c,
                                        std::shared_ptr<const Liouvillian> generator) {
  const int n = generator->dim();
  TrajectoryConfig t;
  t.generator = std::move(generator);
  if (c.initial_state) {
    if (c.initial_state->size() != n) throw DimensionMismatch("run config: initial state dimension");
    t.initial_state = PureState::normalize(*c.initial_state);
  } else {
    t.initial_state = PureState::basis(n, c.initial_basis.value_or(n - 1));
  }
  t.dt = c.dt;
  t.t_final = c.t_final;
  t.seed = c.seed;
  t.record_stride = c.record_stride;

  if (c.unraveling == "jump") {
    t.unraveling = Unraveling::jump();
  } else if (c.unraveling == "cp_qsd") {
    t.unraveling = Unraveling::cp_qsd();
  } else if (c.S_matrix) {
    t.unraveling = Unraveling::diffusive(NoisePolicy::explicit_matrix(*c.S_matrix));
  } else if (c.s_matrix) {
    t.unraveling = Unraveling::diffusive(NoisePolicy::frame(*c.s_matrix));
  } else if (c.s_policy == "identity") {
    t.unraveling = Unraveling::diffusive(NoisePolicy::frame(CMatrix::Identity(n - 1, n - 1)));
  } else if (c.s_policy == "zero") {
    t.unraveling = Unraveling::diffusive(NoisePolicy::frame(CMatrix::Zero(n - 1, n - 1)));
  } else {
    t.unraveling = Unraveling::diffusive(NoisePolicy::qsd());
  }
  return t;
}

}  // namespace unravel
