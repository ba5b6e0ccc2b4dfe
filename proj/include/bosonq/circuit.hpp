#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bosonq/bosons.hpp"
#include "bosonq/matrix.hpp"
#include "bosonq/pauli.hpp"

namespace bosonq {

enum class GateKind { U1, U2, U3, CNOT, X, H, S, Sdg, Barrier, Measure };

std::string gate_name(GateKind kind);

struct Gate {
  GateKind kind;
  std::vector<std::size_t> qubits;  // CNOT: {control, target}
  std::vector<double> params;       // U1: {lambda}; U2: {phi, lambda}; U3: {theta, phi, lambda}

  bool is_single_qubit() const;
};

// Local matrix of a gate: 2x2 for single-qubit kinds, 4x4 for CNOT
// (first qubit = control = leftmost tensor factor). Throws for
// Barrier/Measure, which have no unitary action.
Matrix gate_matrix(const Gate& g);

struct Circuit {
  std::size_t n_qubits = 0;
  std::vector<Gate> gates;
  // The circuit's unitary is exp(i * global_phase) times the product of the
  // gate matrices, so compiled evolutions match their generator exactly.
  double global_phase = 0.0;

  Circuit() = default;
  explicit Circuit(std::size_t n) : n_qubits(n) {}

  void u1(std::size_t q, double lambda);
  void u2(std::size_t q, double phi, double lambda);
  void u3(std::size_t q, double theta, double phi, double lambda);
  void cnot(std::size_t control, std::size_t target);
  void x(std::size_t q);
  void h(std::size_t q);
  void s(std::size_t q);
  void sdg(std::size_t q);
  void barrier();
  void measure_all();

  void append(const Circuit& other);  // other must have the same qubit count
};

// Full 2^n x 2^n unitary, including the global phase. Barriers are skipped;
// Measure gates are rejected.
Matrix unitary_of(const Circuit& c);

// Applies exp(i * theta * term.coeff * P) as gates. The coefficient must be
// real. Identity terms become pure global phase. Cost: 2*(weight-1) CNOTs
// plus single-qubit rotations.
void append_exp_pauli(Circuit& c, const PauliString& term, double theta);

// Standalone circuit for exp(i * theta * P). The string must carry unit
// coefficient (fold coefficients into theta first) and at least one
// non-identity axis; pure phases belong on Circuit::global_phase instead.
Circuit exp_pauli_term(std::size_t n_qubits, const PauliString& term, double theta);

// Deterministic term order used by every compiled evolution: sort by lowest
// support qubit, then lexicographically by axis text. Identity terms last.
std::vector<PauliString> canonical_terms(const PauliSum& h);

// Greedy partition of the canonical terms into mutually commuting groups:
// each term joins the first group it commutes with entirely.
std::vector<std::vector<PauliString>> commuting_groups(const PauliSum& h);

enum class TrotterScheme { Exact, FirstOrder, Symmetric };

struct EvolutionOptions {
  TrotterScheme scheme = TrotterScheme::Exact;
  std::size_t steps = 1;            // FirstOrder only; Symmetric is always one stage
  bool insert_barriers = true;      // barriers between FirstOrder steps
};

// Circuit for exp(i * epsilon * H).
//   Exact      - single product over all terms; requires a pairwise-commuting
//                sum and is then exact.
//   FirstOrder - steps repetitions of the group product at epsilon/steps,
//                separated by barriers.
//   Symmetric  - one Strang stage: half-angle sweep over the leading groups,
//                full angle on the last, then the mirror of the sweep.
Circuit compile_evolution(const PauliSum& h, double epsilon,
                          const EvolutionOptions& opts = {});

// X gates turning |0...0> into the encoded occupation state.
Circuit prepare_fock(const BosonRegister& reg, const std::vector<std::size_t>& occupations);

// Per-qubit change of basis so a Z measurement reads out the given axis
// (X: H; Y: Sdg then H; Z or I: nothing).
void append_basis_rotation(Circuit& c, const std::vector<Axis>& axes);

// Change of basis on one encoded mode of a two-level register so that a Z
// readout of the mode's qubit pair measures the mode-level axis: occupation
// bitstrings "01"/"10" map to the +1/-1 eigenstate outcomes and leakage
// stays inside {"00", "11"}.
void append_mode_basis_rotation(Circuit& c, const BosonRegister& reg, std::size_t mode,
                                Axis axis);

std::map<std::string, std::size_t> gate_histogram(const Circuit& c);
std::size_t cnot_count(const Circuit& c);
std::size_t single_qubit_gate_count(const Circuit& c);
std::size_t depth(const Circuit& c);  // barriers synchronize all qubits

std::string to_qasm(const Circuit& c);

}  // namespace bosonq
