#pragma once

#include <cstddef>

#include "bosonq/circuit.hpp"
#include "bosonq/matrix.hpp"

namespace bosonq {

struct GateCounts {
  std::size_t cnot = 0;
  std::size_t single_qubit = 0;
  std::size_t barriers = 0;
  std::size_t depth = 0;
};

GateCounts gate_counts(const Circuit& c);

/// Exact rewrite of one 2x2 unitary as a canonical gate: a U1 when diagonal,
/// else a U3, plus the scalar phase factored out. matrix() rebuilds
/// exp(i*phase) * gate to round-off.
struct SingleQubitDecomposition {
  bool diagonal = false;
  bool identity = false;  // pure phase; no gate needed
  double theta = 0.0, phi = 0.0, lambda = 0.0;
  double phase = 0.0;
};

SingleQubitDecomposition decompose_single_qubit(const Matrix& u);

/// Canonical two-qubit form
///   u = exp(i*phase) * (a1 kron b1) * exp(i*(x XX + y YY + z ZZ)) * (a2 kron b2)
/// with real interaction coefficients and single-qubit unitaries a*, b*.
struct TwoQubitKak {
  Matrix a1, b1, a2, b2;
  double x = 0.0, y = 0.0, z = 0.0;
  double phase = 0.0;
};

TwoQubitKak kak_decompose(const Matrix& u);

/// Merges maximal per-wire runs of single-qubit gates (runs end at CNOT
/// endpoints, barriers, and measurements) into one U1/U3; identity results
/// are dropped with their phase recorded. Gates already in canonical form
/// that stand alone are kept untouched, so the pass is idempotent.
Circuit fuse_single_qubit(const Circuit& c);

/// Removes CNOT pairs with identical control and target when nothing acts on
/// the target wire between them and the control wire sees only diagonal
/// gates (which commute through the control and are kept in place).
Circuit cancel_cnot_pairs(const Circuit& c);

/// Rebuilds contiguous two-qubit segments holding three or more CNOTs from
/// their canonical form when the ZZ coefficient is a multiple of pi/2, which
/// caps them at two CNOTs. Segments that would not get strictly cheaper, or
/// whose rebuilt unitary fails an exactness check, are left alone.
Circuit resynthesize_two_qubit_blocks(const Circuit& c);

/// 0: unchanged. 1: single-qubit fusion. 2: fusion, CNOT-pair cancellation,
/// and two-qubit resynthesis iterated to a fixed point. The unitary is
/// preserved exactly (global phase tracked) at every level.
Circuit optimize(const Circuit& c, int level);

bool operator==(const Gate& a, const Gate& b);
bool structurally_equal(const Circuit& a, const Circuit& b);

}  // namespace bosonq
