#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bosonq/bosons.hpp"
#include "bosonq/circuit.hpp"
#include "bosonq/sim.hpp"

namespace bosonq {

/// The four supported evolutions. The squeeze kinds read `epsilon` as the
/// hatted parameter (the circuit angle is sqrt(2) * epsilon); the two-mode
/// kinds use it directly.
enum class ExperimentKind { SmSqueeze2, SmSqueeze4, BeamSplitter, TmSqueeze };

enum class FidelityMethod { P0, Tomography, Analytic };

ExperimentKind kind_from_string(const std::string& name);
std::string to_string(ExperimentKind k);
FidelityMethod fidelity_from_string(const std::string& name);
std::string to_string(FidelityMethod m);
TrotterScheme scheme_from_string(const std::string& name);
std::string to_string(TrotterScheme s);

/// A batch description: the cartesian product of epsilon and steps values is
/// executed row by row with per-row seeds seed + row index.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::SmSqueeze2;
  std::vector<double> epsilon{0.05};
  TrotterScheme scheme = TrotterScheme::Exact;
  std::vector<std::size_t> steps{1};
  std::string noise_label = "ideal";
  NoiseModel noise;  // resolved preset plus any inline overrides
  std::size_t shots = 8192;
  std::uint64_t seed = 1234;
  FidelityMethod fidelity = FidelityMethod::P0;
  bool post_select = true;
  bool mitigate = true;
  int opt_level = 2;

  /// Throws ConfigError on invalid values or an unsupported kind/fidelity
  /// combination (tomography is limited to the three-qubit squeeze and the
  /// beam splitter).
  void validate() const;
};

/// Raised for malformed configuration input (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Raised when a register exceeds what the simulators accept (CLI exit 3).
struct BackendCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResultRow {
  std::string kind;
  double epsilon = 0.0;
  std::size_t steps = 1;
  std::string scheme;
  std::string noise;
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  double fidelity = 0.0;  // clamped to [0, 1]
  std::string fidelity_method;
  double retained_fraction = 1.0;
  std::size_t cnot_count = 0;          // optimized evolution stage
  std::size_t single_qubit_count = 0;  // optimized evolution stage
};

/// Runs every (epsilon, steps) combination and returns one row each, ordered
/// by (epsilon, steps). Deterministic for a fixed config.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

/// CSV with a 12-field header, RFC-4180 quoting and 6-decimal fidelities.
std::string emit_csv(const std::vector<ResultRow>& rows);

/// Whitespace-separated mirror of the sweep columns for plotting tools.
std::string emit_dat(const std::vector<ResultRow>& rows);

/// Parses `key = value` lines (with # comments) into a config. Unknown keys
/// throw ConfigError. Recognized keys mirror the CLI flags: kind, epsilon,
/// steps, scheme, noise, shots, seed, fidelity, post-select, mitigate,
/// opt-level, plus noise.p1 / noise.p2 / noise.barrier-p / noise.readout for
/// inline noise models.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// The circuit a row executes before basis rotations: encoded preparation
/// followed by the optimized evolution.
Circuit row_circuit(const ExperimentConfig& cfg, double epsilon, std::size_t steps);

/// Register geometry of a kind.
BosonRegister kind_register(ExperimentKind k);

/// Exact truncated reference state for a kind at one epsilon: the dense
/// exponential of the generator applied to the prepared codeword.
Vector reference_state(ExperimentKind k, double epsilon);

}  // namespace bosonq
