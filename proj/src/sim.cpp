#include "bosonq/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "bosonq/bosons.hpp"
#include "json.hpp"

namespace bosonq {

namespace {

constexpr std::size_t kMaxStatevectorQubits = 20;
constexpr std::size_t kMaxDensityQubits = 10;

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) +
                                " must lie in [0, 1], got " + std::to_string(p));
  }
}

std::size_t qubit_bit(std::size_t n, std::size_t q) {
  return std::size_t(1) << (n - 1 - q);  // qubit 0 is the most significant bit
}

// Left-multiplies every column of m by the gate unitary. m has 2^n rows;
// a statevector is the one-column case.
void left_apply_single(Matrix& m, std::size_t n, std::size_t q, const Matrix& u) {
  const std::size_t bit = qubit_bit(n, q);
  const std::size_t dim = std::size_t(m.rows());
  Eigen::RowVectorXcd r0, r1;
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    r0 = m.row(Eigen::Index(i));
    r1 = m.row(Eigen::Index(i | bit));
    m.row(Eigen::Index(i)) = u(0, 0) * r0 + u(0, 1) * r1;
    m.row(Eigen::Index(i | bit)) = u(1, 0) * r0 + u(1, 1) * r1;
  }
}

void left_apply_cnot(Matrix& m, std::size_t n, std::size_t control,
                     std::size_t target) {
  const std::size_t cbit = qubit_bit(n, control);
  const std::size_t tbit = qubit_bit(n, target);
  const std::size_t dim = std::size_t(m.rows());
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & cbit) && !(i & tbit)) {
      m.row(Eigen::Index(i)).swap(m.row(Eigen::Index(i | tbit)));
    }
  }
}

void left_apply_gate(Matrix& m, std::size_t n, const Gate& g) {
  if (g.kind == GateKind::CNOT) {
    left_apply_cnot(m, n, g.qubits[0], g.qubits[1]);
  } else {
    left_apply_single(m, n, g.qubits[0], gate_matrix(g));
  }
}

// m <- m * U^dagger, used to conjugate a density matrix from the right.
void right_apply_adjoint_single(Matrix& m, std::size_t n, std::size_t q,
                                const Matrix& u) {
  const std::size_t bit = qubit_bit(n, q);
  const std::size_t dim = std::size_t(m.cols());
  Vector c0, c1;
  for (std::size_t j = 0; j < dim; ++j) {
    if (j & bit) continue;
    c0 = m.col(Eigen::Index(j));
    c1 = m.col(Eigen::Index(j | bit));
    m.col(Eigen::Index(j)) = std::conj(u(0, 0)) * c0 + std::conj(u(0, 1)) * c1;
    m.col(Eigen::Index(j | bit)) = std::conj(u(1, 0)) * c0 + std::conj(u(1, 1)) * c1;
  }
}

void right_apply_adjoint_gate(Matrix& m, std::size_t n, const Gate& g) {
  if (g.kind == GateKind::CNOT) {
    const std::size_t cbit = qubit_bit(n, g.qubits[0]);
    const std::size_t tbit = qubit_bit(n, g.qubits[1]);
    const std::size_t dim = std::size_t(m.cols());
    for (std::size_t j = 0; j < dim; ++j) {
      if ((j & cbit) && !(j & tbit)) {
        m.col(Eigen::Index(j)).swap(m.col(Eigen::Index(j | tbit)));
      }
    }
  } else {
    right_apply_adjoint_single(m, n, g.qubits[0], gate_matrix(g));
  }
}

// P rho P^dagger for a Pauli string supported on `ops`; phases are tracked
// per basis index so the conjugation is a single entrywise pass.
Matrix pauli_conjugate(const Matrix& rho, std::size_t n,
                       const std::vector<std::pair<std::size_t, Axis>>& ops) {
  std::size_t mask = 0;
  for (const auto& [q, a] : ops) {
    if (a == Axis::X || a == Axis::Y) mask |= qubit_bit(n, q);
  }
  auto phase = [&](std::size_t b) {
    complexd f{1.0, 0.0};
    for (const auto& [q, a] : ops) {
      const bool set = (b & qubit_bit(n, q)) != 0;
      if (a == Axis::Y) f *= set ? complexd(0.0, -1.0) : complexd(0.0, 1.0);
      if (a == Axis::Z && set) f = -f;
    }
    return f;
  };
  const std::size_t dim = std::size_t(rho.rows());
  Matrix out(rho.rows(), rho.cols());
  for (std::size_t i = 0; i < dim; ++i) {
    const complexd fi = phase(i ^ mask);
    for (std::size_t j = 0; j < dim; ++j) {
      out(Eigen::Index(i), Eigen::Index(j)) =
          fi * std::conj(phase(j ^ mask)) *
          rho(Eigen::Index(i ^ mask), Eigen::Index(j ^ mask));
    }
  }
  return out;
}

// (1-p) rho + p * (maximally mixed on `qubits`) x (reduced rest), realized as
// the uniform Pauli twirl over the support.
void depolarize(Matrix& rho, std::size_t n, const std::vector<std::size_t>& qubits,
                double p) {
  if (p == 0.0) return;
  static constexpr Axis kAxes[4] = {Axis::I, Axis::X, Axis::Y, Axis::Z};
  const std::size_t combos = std::size_t(1) << (2 * qubits.size());
  Matrix twirl = Matrix::Zero(rho.rows(), rho.cols());
  for (std::size_t word = 0; word < combos; ++word) {
    std::vector<std::pair<std::size_t, Axis>> ops;
    for (std::size_t k = 0; k < qubits.size(); ++k) {
      const Axis a = kAxes[(word >> (2 * k)) & 3];
      if (a != Axis::I) ops.emplace_back(qubits[k], a);
    }
    twirl += ops.empty() ? rho : pauli_conjugate(rho, n, ops);
  }
  rho = (1.0 - p) * rho + (p / double(combos)) * twirl;
}

double next_uniform(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;  // 53-bit mantissa in [0, 1)
}

Counts sample_from_probabilities(Eigen::VectorXd probs, std::size_t n,
                                 std::size_t shots, const NoiseModel& nm,
                                 std::uint64_t seed, std::string basis) {
  nm.validate();
  if (shots < 1) throw std::invalid_argument("sample_counts: shots must be >= 1");
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs(i) < 0.0) probs(i) = 0.0;  // round-off floor
  }
  const double total = probs.sum();
  if (total <= 0.0) {
    throw std::invalid_argument("sample_counts: probabilities sum to zero");
  }
  probs /= total;

  std::vector<double> cumulative(std::size_t(probs.size()));
  double acc = 0.0;
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    acc += probs(Eigen::Index(i));
    cumulative[i] = acc;
  }
  cumulative.back() = 1.0;

  Counts out;
  out.total = shots;
  out.seed = seed;
  out.basis = basis.empty() ? std::string(n, 'Z') : std::move(basis);

  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < shots; ++s) {
    const double u = next_uniform(rng);
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t idx = std::min<std::size_t>(
        std::size_t(it - cumulative.begin()), cumulative.size() - 1);
    for (std::size_t q = 0; q < n; ++q) {
      const ReadoutError ro = nm.readout_for(q);
      const bool bit = (idx & qubit_bit(n, q)) != 0;
      const double flip = bit ? ro.p10 : ro.p01;
      if (next_uniform(rng) < flip) idx ^= qubit_bit(n, q);
    }
    ++out.histogram[index_bitstring(idx, n)];
  }
  return out;
}

std::size_t qubit_count_from_dim(Eigen::Index dim, const char* what) {
  std::size_t n = 0;
  while ((Eigen::Index(1) << n) < dim) ++n;
  if ((Eigen::Index(1) << n) != dim) {
    throw std::invalid_argument(std::string(what) +
                                ": dimension must be a power of two");
  }
  return n;
}

}  // namespace

ReadoutError NoiseModel::readout_for(std::size_t q) const {
  if (readout.empty()) return {};
  return q < readout.size() ? readout[q] : readout.back();
}

void NoiseModel::validate() const {
  check_probability(p1, "NoiseModel.p1");
  check_probability(p2, "NoiseModel.p2");
  check_probability(barrier_p, "NoiseModel.barrier_p");
  for (const auto& ro : readout) {
    check_probability(ro.p01, "NoiseModel.readout.p01");
    check_probability(ro.p10, "NoiseModel.readout.p10");
  }
}

NoiseModel noise_preset(const std::string& name) {
  if (name == "ideal") return {};
  if (name == "santiago") {
    NoiseModel nm;
    nm.p1 = 2.15e-4;
    nm.p2 = 6.0e-3;
    nm.readout = {{1.4e-2, 1.4e-2}};
    return nm;
  }
  if (name == "casablanca") {
    NoiseModel nm;
    nm.p1 = 3.5e-3;
    nm.p2 = 3.5e-2;
    nm.readout = {{1.8e-2, 1.8e-2}};
    return nm;
  }
  throw std::invalid_argument("noise_preset: unknown preset '" + name + "'");
}

Vector statevector(const Circuit& c) {
  if (c.n_qubits == 0 || c.n_qubits > kMaxStatevectorQubits) {
    throw std::invalid_argument("statevector: supports 1..20 qubits");
  }
  const Eigen::Index dim = Eigen::Index(1) << c.n_qubits;
  Matrix state = Matrix::Zero(dim, 1);
  state(0, 0) = 1.0;
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::Barrier) continue;
    if (g.kind == GateKind::Measure) {
      throw std::invalid_argument("statevector: circuit contains measurements");
    }
    left_apply_gate(state, c.n_qubits, g);
  }
  state *= std::polar(1.0, c.global_phase);
  return state.col(0);
}

Matrix density_matrix(const Circuit& c, const NoiseModel& nm) {
  nm.validate();
  if (c.n_qubits == 0 || c.n_qubits > kMaxDensityQubits) {
    throw std::invalid_argument("density_matrix: supports 1..10 qubits");
  }
  const Eigen::Index dim = Eigen::Index(1) << c.n_qubits;
  Matrix rho = Matrix::Zero(dim, dim);
  rho(0, 0) = 1.0;
  std::vector<std::size_t> all_qubits(c.n_qubits);
  for (std::size_t q = 0; q < c.n_qubits; ++q) all_qubits[q] = q;
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::Measure) continue;
    if (g.kind == GateKind::Barrier) {
      depolarize(rho, c.n_qubits, all_qubits, nm.barrier_p);
      continue;
    }
    left_apply_gate(rho, c.n_qubits, g);
    right_apply_adjoint_gate(rho, c.n_qubits, g);
    if (g.kind == GateKind::CNOT) {
      depolarize(rho, c.n_qubits, g.qubits, nm.p2);
    } else {
      depolarize(rho, c.n_qubits, g.qubits, nm.p1);
    }
  }
  return rho;
}

Counts sample_counts(const Vector& state, std::size_t shots, const NoiseModel& nm,
                     std::uint64_t seed, std::string basis) {
  const std::size_t n = qubit_count_from_dim(state.size(), "sample_counts");
  Eigen::VectorXd probs = state.cwiseAbs2();
  return sample_from_probabilities(std::move(probs), n, shots, nm, seed,
                                   std::move(basis));
}

Counts sample_counts(const Matrix& rho, std::size_t shots, const NoiseModel& nm,
                     std::uint64_t seed, std::string basis) {
  if (rho.rows() != rho.cols()) {
    throw std::invalid_argument("sample_counts: density matrix must be square");
  }
  const std::size_t n = qubit_count_from_dim(rho.rows(), "sample_counts");
  Eigen::VectorXd probs = rho.diagonal().real();
  return sample_from_probabilities(std::move(probs), n, shots, nm, seed,
                                   std::move(basis));
}

std::string counts_to_jsonl(const Counts& counts) {
  std::ostringstream out;
  for (const auto& [bits, count] : counts.histogram) {
    nlohmann::json line;
    line["bitstring"] = bits;
    line["count"] = count;
    out << line.dump() << '\n';
  }
  return out.str();
}

}  // namespace bosonq
