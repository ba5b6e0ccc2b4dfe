#pragma once

#include <random>
#include <string>
#include <vector>

#include "bosonq/matrix.hpp"
#include "bosonq/pauli.hpp"

namespace bosonq::testing {

inline PauliString random_string(std::mt19937_64& rng, std::size_t n_qubits,
                                 bool unit_coeff = false) {
  std::uniform_int_distribution<int> axis(0, 3);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  PauliString p(n_qubits, {1.0, 0.0});
  for (std::size_t q = 0; q < n_qubits; ++q) p.axes[q] = static_cast<Axis>(axis(rng));
  if (!unit_coeff) p.coeff = {val(rng), val(rng)};
  return p;
}

inline Vector basis_vector(const std::string& bits) {
  std::size_t idx = 0;
  for (char c : bits) idx = (idx << 1) | std::size_t(c - '0');
  Vector v = Vector::Zero(Eigen::Index(1) << bits.size());
  v(Eigen::Index(idx)) = 1.0;
  return v;
}

}  // namespace bosonq::testing
