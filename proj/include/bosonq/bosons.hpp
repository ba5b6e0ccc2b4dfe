#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bosonq/pauli.hpp"

namespace bosonq {

/// A register of truncated bosonic modes in the one-cold encoding:
/// occupation n of a mode maps to the block bitstring with character n set to
/// '0' and all others '1'. Mode m occupies qubits
/// [m*(max_exc+1), (m+1)*(max_exc+1)).
struct BosonRegister {
  std::size_t n_modes = 1;
  std::size_t max_exc = 2;  // highest Fock level kept per mode

  BosonRegister(std::size_t modes, std::size_t exc);

  std::size_t levels() const { return max_exc + 1; }
  std::size_t n_qubits() const { return n_modes * levels(); }
  std::size_t qubit_offset(std::size_t mode) const;
};

/// Bitstring (qubit 0 leftmost) for a tuple of per-mode occupations.
std::string fock_to_bitstring(const BosonRegister& reg, const std::vector<std::size_t>& occ);

/// All encoded basis states, ordered by occupation tuples ascending with
/// mode 0 as the most significant digit.
std::vector<std::string> codewords(const BosonRegister& reg);

/// Creation operator of one mode:
/// sum_k sqrt(k+1) * sigma_minus[o+k] * sigma_plus[o+k+1].
PauliSum creation_op(const BosonRegister& reg, std::size_t mode);

/// b^dag^2 + b^2 split by string weight: the weight-2 strings move pairs of
/// excitations within the encoded subspace; the weight-4 strings annihilate
/// every codeword (they only act outside the encoding).
struct SqueezeHamiltonian {
  PauliSum weight2;
  PauliSum weight4;  // empty when max_exc == 2

  PauliSum full() const;
};

/// Squeeze generator for a single-mode register. Supported truncations are 2
/// and 4 excitations unless allow_any_truncation is set.
SqueezeHamiltonian single_mode_squeeze_h(const BosonRegister& reg,
                                         bool allow_any_truncation = false);

/// Terms of s with Pauli weight w (sub-sum selector, used to split the
/// squeeze Hamiltonian into its two-qubit and four-qubit parts).
PauliSum weight_part(const PauliSum& s, std::size_t w);

/// b_plus^dag a_minus + h.c. over a two-mode register truncated at one
/// excitation per mode.
PauliSum beam_splitter_h(const BosonRegister& reg);

/// b_plus^dag a_minus^dag + h.c. over the same register shape.
PauliSum two_mode_squeeze_h(const BosonRegister& reg);

/// Index of a bitstring in the computational basis (qubit 0 = most significant).
std::size_t bitstring_index(const std::string& bits);
std::string index_bitstring(std::size_t index, std::size_t n_qubits);

/// Submatrix of op's dense form on the codeword subspace, codeword order.
Matrix restrict_to_codewords(const BosonRegister& reg, const Matrix& op);

}  // namespace bosonq
