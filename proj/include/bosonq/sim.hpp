#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bosonq/circuit.hpp"
#include "bosonq/matrix.hpp"

namespace bosonq {

/// Readout confusion rates for one qubit.
struct ReadoutError {
  double p01 = 0.0;  // probability of reading 1 when the true bit is 0
  double p10 = 0.0;  // probability of reading 0 when the true bit is 1
};

struct NoiseModel {
  double p1 = 0.0;  // depolarizing probability after each single-qubit gate
  double p2 = 0.0;  // two-qubit depolarizing probability after each CNOT
  // Optional whole-register depolarizing probability charged per barrier.
  // Defaults to zero: barriers are treated as free.
  double barrier_p = 0.0;
  // Per-qubit readout confusion. Qubits beyond the end of the vector reuse
  // the last entry, so one element sets a uniform model; empty reads
  // perfectly.
  std::vector<ReadoutError> readout;

  ReadoutError readout_for(std::size_t q) const;
  void validate() const;  // throws if any probability is outside [0, 1]
};

/// Named presets: "ideal", "santiago", "casablanca".
NoiseModel noise_preset(const std::string& name);

struct Counts {
  std::map<std::string, std::size_t> histogram;  // bitstring -> shots
  std::size_t total = 0;
  std::string basis;  // one measurement-axis letter per qubit
  std::uint64_t seed = 0;
};

/// Amplitudes of the circuit applied to |0...0>, including the global phase.
/// Requires n_qubits <= 20 and no Measure gates; barriers are skipped.
Vector statevector(const Circuit& c);

/// Density-matrix execution with one depolarizing channel after each gate on
/// its support (single-qubit gates at p1, CNOTs at p2 on the joint space).
/// Measure gates are ignored; barriers are free unless barrier_p is set.
/// Requires n_qubits <= 10.
Matrix density_matrix(const Circuit& c, const NoiseModel& nm);

/// Draws shots from the Born distribution of a state (or the diagonal of a
/// density operator), pushing every outcome through the per-qubit readout
/// confusion of `nm`. Identical (input, shots, nm, seed) give identical
/// Counts. `basis` defaults to all-Z when empty.
Counts sample_counts(const Vector& state, std::size_t shots,
                     const NoiseModel& nm, std::uint64_t seed,
                     std::string basis = "");
Counts sample_counts(const Matrix& rho, std::size_t shots,
                     const NoiseModel& nm, std::uint64_t seed,
                     std::string basis = "");

/// One JSON object per line: {"bitstring": ..., "count": ...}.
std::string counts_to_jsonl(const Counts& counts);

}  // namespace bosonq
