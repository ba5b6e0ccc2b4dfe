#include "bosonq/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "bosonq/matrix.hpp"
#include "bosonq/measure.hpp"
#include "bosonq/transpile.hpp"

namespace bosonq {

namespace {

constexpr std::size_t kStatevectorCap = 20;
constexpr std::size_t kDensityCap = 10;

struct KindParts {
  BosonRegister reg;
  PauliSum h;
  std::vector<std::size_t> prep;
  double angle_factor;  // circuit angle = angle_factor * epsilon
};

KindParts kind_parts(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SmSqueeze2: {
      const BosonRegister reg(1, 2);
      return {reg, single_mode_squeeze_h(reg).full(), {0}, std::numbers::sqrt2};
    }
    case ExperimentKind::SmSqueeze4: {
      const BosonRegister reg(1, 4);
      // Only the two-qubit strings drive the dynamics inside the encoding;
      // the four-qubit remainder is studied as its own kind (tm-squeeze).
      return {reg, single_mode_squeeze_h(reg).weight2, {0}, std::numbers::sqrt2};
    }
    case ExperimentKind::BeamSplitter: {
      const BosonRegister reg(2, 1);
      return {reg, beam_splitter_h(reg), {1, 0}, 1.0};
    }
    case ExperimentKind::TmSqueeze: {
      const BosonRegister reg(2, 1);
      return {reg, two_mode_squeeze_h(reg), {0, 0}, 1.0};
    }
  }
  throw ConfigError("unknown experiment kind");
}

bool gate_noiseless(const NoiseModel& nm) {
  return nm.p1 == 0.0 && nm.p2 == 0.0 && nm.barrier_p == 0.0;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::string normalized = value;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream in(normalized);
  std::vector<std::string> out;
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number '" + value + "' for " + key);
  }
}

std::uint64_t parse_unsigned(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad count '" + value + "' for " + key);
  }
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("bad flag '" + value + "' for " + key + " (use true/false)");
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    quoted += c;
    if (c == '"') quoted += '"';
  }
  quoted += '"';
  return quoted;
}

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::map<std::string, double> counts_as_weights(const Counts& c) {
  std::map<std::string, double> w;
  for (const auto& [bits, n] : c.histogram) w[bits] = static_cast<double>(n);
  return w;
}

ResultRow run_row(const ExperimentConfig& cfg, double epsilon, std::size_t steps,
                  std::uint64_t row_seed) {
  const KindParts parts = kind_parts(cfg.kind);
  const std::size_t n = parts.reg.n_qubits();
  const bool pure = gate_noiseless(cfg.noise);
  if (n > (pure ? kStatevectorCap : kDensityCap)) {
    throw BackendCapError("register of " + std::to_string(n) +
                          " qubits exceeds the simulator cap");
  }

  EvolutionOptions opts;
  opts.scheme = cfg.scheme;
  opts.steps = steps;
  Circuit evolution;
  try {
    evolution = compile_evolution(parts.h, parts.angle_factor * epsilon, opts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("cannot compile this kind/scheme combination: ") + e.what());
  }
  const Circuit optimized = optimize(evolution, cfg.opt_level);
  Circuit run = prepare_fock(parts.reg, parts.prep);
  run.append(optimized);

  ResultRow row;
  row.kind = to_string(cfg.kind);
  row.epsilon = epsilon;
  row.steps = steps;
  row.scheme = to_string(cfg.scheme);
  row.noise = cfg.noise_label;
  row.shots = cfg.shots;
  row.seed = row_seed;
  row.fidelity_method = to_string(cfg.fidelity);
  row.cnot_count = cnot_count(optimized);
  row.single_qubit_count = single_qubit_gate_count(optimized);

  const auto sample_run = [&](const Circuit& c, std::uint64_t seed,
                              const std::string& basis) -> Counts {
    if (pure) return sample_counts(statevector(c), cfg.shots, cfg.noise, seed, basis);
    return sample_counts(density_matrix(c, cfg.noise), cfg.shots, cfg.noise, seed, basis);
  };

  double fidelity = 0.0;
  double retained = 1.0;
  switch (cfg.fidelity) {
    case FidelityMethod::Analytic: {
      const Vector ref = reference_state(cfg.kind, epsilon);
      if (pure) {
        const Vector psi = statevector(run);
        fidelity = std::norm((ref.adjoint() * psi).value());
      } else {
        fidelity = fidelity_pure(ref, density_matrix(run, cfg.noise));
      }
      break;
    }
    case FidelityMethod::P0: {
      const Counts counts = sample_run(run, row_seed, "");
      std::map<std::string, double> weights =
          cfg.mitigate ? mitigate(counts, calibration_confusion(cfg.noise, n))
                       : counts_as_weights(counts);
      if (cfg.post_select) {
        PostSelectedWeights ps = post_select(weights, codeword_set(parts.reg));
        retained = ps.retained_fraction;
        weights = std::move(ps.weights);
      }
      fidelity = fidelity_p0(weights, parts.reg);
      break;
    }
    case FidelityMethod::Tomography: {
      const bool qubit_level = cfg.kind == ExperimentKind::SmSqueeze2;
      const std::vector<std::string> bases =
          qubit_level ? sm_fidelity_bases() : bs_fidelity_bases();
      TomogramSet t;
      std::uint64_t basis_seed = row_seed * 8;
      for (const auto& basis : bases) {
        Circuit c = run;
        if (qubit_level) {
          std::vector<Axis> axes;
          for (char ch : basis) axes.push_back(axis_from_char(ch));
          append_basis_rotation(c, axes);
        } else {
          for (std::size_t m = 0; m < basis.size(); ++m) {
            append_mode_basis_rotation(c, parts.reg, m, axis_from_char(basis[m]));
          }
        }
        t.insert(basis, sample_run(c, basis_seed++, basis));
      }
      WeightedTomograms wt =
          cfg.mitigate ? mitigate(t, calibration_confusion(cfg.noise, n)) : weights_of(t);
      const std::string z_basis(qubit_level ? n : n / 2, 'Z');
      if (cfg.post_select) {
        PostSelectedWeights ps = post_select(wt.bases.at(z_basis), codeword_set(parts.reg));
        retained = ps.retained_fraction;
        if (qubit_level) wt.bases[z_basis] = std::move(ps.weights);
        // Mode-level estimators already discard leakage shot by shot, so the
        // Z tomogram is left intact and only the fraction is reported.
      }
      fidelity = qubit_level
                     ? fidelity_sm_tomographic(wt, parts.angle_factor * epsilon)
                     : fidelity_bs_tomographic(wt, epsilon);
      break;
    }
  }
  row.fidelity = std::clamp(fidelity, 0.0, 1.0);
  row.retained_fraction = retained;
  return row;
}

}  // namespace

ExperimentKind kind_from_string(const std::string& name) {
  if (name == "sm-squeeze-2exc") return ExperimentKind::SmSqueeze2;
  if (name == "sm-squeeze-4exc") return ExperimentKind::SmSqueeze4;
  if (name == "beam-splitter") return ExperimentKind::BeamSplitter;
  if (name == "tm-squeeze") return ExperimentKind::TmSqueeze;
  throw ConfigError("unknown kind '" + name + "'");
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SmSqueeze2: return "sm-squeeze-2exc";
    case ExperimentKind::SmSqueeze4: return "sm-squeeze-4exc";
    case ExperimentKind::BeamSplitter: return "beam-splitter";
    case ExperimentKind::TmSqueeze: return "tm-squeeze";
  }
  return "?";
}

FidelityMethod fidelity_from_string(const std::string& name) {
  if (name == "p0") return FidelityMethod::P0;
  if (name == "tomography") return FidelityMethod::Tomography;
  if (name == "analytic") return FidelityMethod::Analytic;
  throw ConfigError("unknown fidelity method '" + name + "'");
}

std::string to_string(FidelityMethod m) {
  switch (m) {
    case FidelityMethod::P0: return "p0";
    case FidelityMethod::Tomography: return "tomography";
    case FidelityMethod::Analytic: return "analytic";
  }
  return "?";
}

TrotterScheme scheme_from_string(const std::string& name) {
  if (name == "exact") return TrotterScheme::Exact;
  if (name == "first-order") return TrotterScheme::FirstOrder;
  if (name == "symmetric") return TrotterScheme::Symmetric;
  throw ConfigError("unknown scheme '" + name + "'");
}

std::string to_string(TrotterScheme s) {
  switch (s) {
    case TrotterScheme::Exact: return "exact";
    case TrotterScheme::FirstOrder: return "first-order";
    case TrotterScheme::Symmetric: return "symmetric";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (epsilon.empty()) throw ConfigError("epsilon sweep is empty");
  if (steps.empty()) throw ConfigError("steps sweep is empty");
  for (std::size_t s : steps) {
    if (s < 1) throw ConfigError("steps values must be >= 1");
  }
  if (shots < 1) throw ConfigError("shots must be >= 1");
  if (opt_level < 0 || opt_level > 2) throw ConfigError("opt-level must be 0, 1 or 2");
  if (fidelity == FidelityMethod::Tomography && kind != ExperimentKind::SmSqueeze2 &&
      kind != ExperimentKind::BeamSplitter) {
    throw ConfigError("tomography is only supported for sm-squeeze-2exc and beam-splitter");
  }
  try {
    noise.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad noise model: ") + e.what());
  }
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ResultRow> rows;
  rows.reserve(cfg.epsilon.size() * cfg.steps.size());
  std::uint64_t row_index = 0;
  for (const double eps : cfg.epsilon) {
    for (const std::size_t steps : cfg.steps) {
      rows.push_back(run_row(cfg, eps, steps, cfg.seed + row_index));
      ++row_index;
    }
  }
  return rows;
}

std::string emit_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "kind,epsilon,steps,scheme,noise,shots,seed,fidelity,fidelity_method,"
         "retained_fraction,cnot_count,single_qubit_count\n";
  for (const ResultRow& r : rows) {
    out << csv_field(r.kind) << ',' << format("%.10g", r.epsilon) << ',' << r.steps << ','
        << csv_field(r.scheme) << ',' << csv_field(r.noise) << ',' << r.shots << ',' << r.seed
        << ',' << format("%.6f", r.fidelity) << ',' << csv_field(r.fidelity_method) << ','
        << format("%.6f", r.retained_fraction) << ',' << r.cnot_count << ','
        << r.single_qubit_count << '\n';
  }
  return out.str();
}

std::string emit_dat(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "# epsilon steps fidelity retained_fraction cnot_count single_qubit_count\n";
  for (const ResultRow& r : rows) {
    out << format("%.10g", r.epsilon) << ' ' << r.steps << ' ' << format("%.6f", r.fidelity)
        << ' ' << format("%.6f", r.retained_fraction) << ' ' << r.cnot_count << ' '
        << r.single_qubit_count << '\n';
  }
  return out.str();
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + line + "'");
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }

  bool custom_noise = false;
  // Preset selection first so inline overrides always win regardless of order.
  for (const auto& [key, value] : entries) {
    if (key == "noise") {
      try {
        cfg.noise = noise_preset(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      cfg.noise_label = value;
    }
  }
  for (const auto& [key, value] : entries) {
    if (key == "noise") {
      continue;
    } else if (key == "kind") {
      cfg.kind = kind_from_string(value);
    } else if (key == "epsilon") {
      cfg.epsilon.clear();
      for (const auto& tok : split_list(value)) cfg.epsilon.push_back(parse_double(tok, key));
    } else if (key == "steps") {
      cfg.steps.clear();
      for (const auto& tok : split_list(value)) {
        cfg.steps.push_back(static_cast<std::size_t>(parse_unsigned(tok, key)));
      }
    } else if (key == "scheme") {
      cfg.scheme = scheme_from_string(value);
    } else if (key == "shots") {
      cfg.shots = static_cast<std::size_t>(parse_unsigned(value, key));
    } else if (key == "seed") {
      cfg.seed = parse_unsigned(value, key);
    } else if (key == "fidelity") {
      cfg.fidelity = fidelity_from_string(value);
    } else if (key == "post-select") {
      cfg.post_select = parse_bool(value, key);
    } else if (key == "mitigate") {
      cfg.mitigate = parse_bool(value, key);
    } else if (key == "opt-level") {
      cfg.opt_level = static_cast<int>(parse_unsigned(value, key));
    } else if (key == "noise.p1") {
      cfg.noise.p1 = parse_double(value, key);
      custom_noise = true;
    } else if (key == "noise.p2") {
      cfg.noise.p2 = parse_double(value, key);
      custom_noise = true;
    } else if (key == "noise.barrier-p") {
      cfg.noise.barrier_p = parse_double(value, key);
      custom_noise = true;
    } else if (key == "noise.readout") {
      cfg.noise.readout.clear();
      for (const auto& tok : split_list(value)) {
        const auto colon = tok.find(':');
        ReadoutError r;
        if (colon == std::string::npos) {
          r.p01 = r.p10 = parse_double(tok, key);
        } else {
          r.p01 = parse_double(tok.substr(0, colon), key);
          r.p10 = parse_double(tok.substr(colon + 1), key);
        }
        cfg.noise.readout.push_back(r);
      }
      custom_noise = true;
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  if (custom_noise) cfg.noise_label = "custom";
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

Circuit row_circuit(const ExperimentConfig& cfg, double epsilon, std::size_t steps) {
  const KindParts parts = kind_parts(cfg.kind);
  EvolutionOptions opts;
  opts.scheme = cfg.scheme;
  opts.steps = steps;
  Circuit evolution;
  try {
    evolution = compile_evolution(parts.h, parts.angle_factor * epsilon, opts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("cannot compile this kind/scheme combination: ") + e.what());
  }
  Circuit run = prepare_fock(parts.reg, parts.prep);
  run.append(optimize(evolution, cfg.opt_level));
  return run;
}

BosonRegister kind_register(ExperimentKind k) { return kind_parts(k).reg; }

Vector reference_state(ExperimentKind k, double epsilon) {
  const KindParts parts = kind_parts(k);
  const std::size_t n = parts.reg.n_qubits();
  Vector start = Vector::Zero(Eigen::Index{1} << n);
  start(static_cast<Eigen::Index>(
      bitstring_index(fock_to_bitstring(parts.reg, parts.prep)))) = 1.0;
  return expi_hermitian(parts.h.to_matrix(), parts.angle_factor * epsilon) * start;
}

}  // namespace bosonq
