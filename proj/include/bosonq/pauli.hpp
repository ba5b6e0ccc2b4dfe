#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bosonq/matrix.hpp"

namespace bosonq {

/// Single-qubit Pauli axis. Values double as indices into multiplication tables.
enum class Axis : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char axis_char(Axis a);
Axis axis_from_char(char c);

/// Tensor product of single-qubit Paulis with a complex prefactor.
/// Qubit 0 is the leftmost tensor factor and the leftmost character in text form.
struct PauliString {
  std::vector<Axis> axes;
  complexd coeff{1.0, 0.0};

  PauliString() = default;
  explicit PauliString(std::size_t n_qubits, complexd c = {1.0, 0.0});
  /// Parse e.g. "XIX" or "IZ"; one character per qubit.
  static PauliString parse(const std::string& text, complexd c = {1.0, 0.0});

  std::size_t n_qubits() const { return axes.size(); }
  /// Number of non-identity positions.
  std::size_t weight() const;
  /// Indices of non-identity positions, ascending.
  std::vector<std::size_t> support() const;
  bool is_identity_axes() const { return weight() == 0; }

  std::string axes_text() const;
  std::string text() const;

  Matrix to_matrix() const;
};

/// Product a*b with exact phase bookkeeping; axes-wise single-qubit table.
PauliString mul(const PauliString& a, const PauliString& b);

/// True when a and b commute (even number of anticommuting positions).
bool commutes(const PauliString& a, const PauliString& b);

/// Real-linear combination of Pauli strings over a fixed qubit count.
/// Canonical form: terms sorted by axes (I<X<Y<Z lexicographic), merged,
/// coefficients below 1e-14 in magnitude pruned.
struct PauliSum {
  std::size_t n = 0;
  std::vector<PauliString> terms;

  PauliSum() = default;
  explicit PauliSum(std::size_t n_qubits) : n(n_qubits) {}

  std::size_t n_qubits() const { return n; }
  bool empty() const { return terms.empty(); }

  PauliSum& add(const PauliString& t);

  std::string text() const;
  Matrix to_matrix() const;
};

/// Coefficient pruning threshold used by simplify().
inline constexpr double kCoeffPrune = 1e-14;

/// Sort, merge equal-axes terms, prune tiny coefficients.
PauliSum simplify(const PauliSum& s);

PauliSum add(const PauliSum& a, const PauliSum& b);
PauliSum sub(const PauliSum& a, const PauliSum& b);
PauliSum scale(const PauliSum& a, complexd c);
/// Distributed product of two sums (simplified).
PauliSum mul(const PauliSum& a, const PauliSum& b);
/// Conjugate-transpose: conjugates coefficients (strings are hermitian).
PauliSum adjoint(const PauliSum& a);
/// a*b - b*a, simplified (empty when they commute).
PauliSum commutator(const PauliSum& a, const PauliSum& b);

/// All pairs of terms commute.
bool commutes_pairwise(const PauliSum& s);
/// All coefficients real after simplification.
bool is_hermitian(const PauliSum& s);

/// sigma_plus / sigma_minus ladder operators as 2-term sums on one qubit of an
/// n-qubit register: (X +- iY)/2. sigma_minus maps |0> to |1>.
PauliSum sigma_plus(std::size_t n_qubits, std::size_t qubit);
PauliSum sigma_minus(std::size_t n_qubits, std::size_t qubit);

}  // namespace bosonq
