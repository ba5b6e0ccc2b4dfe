#include "bosonq/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bosonq {

namespace {

constexpr double kPi = std::numbers::pi;

Matrix u3_matrix(double theta, double phi, double lambda) {
  Matrix m(2, 2);
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  m << c, -std::exp(I_UNIT * lambda) * s, std::exp(I_UNIT * phi) * s,
      std::exp(I_UNIT * (phi + lambda)) * c;
  return m;
}

}  // namespace

std::string gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::U1: return "u1";
    case GateKind::U2: return "u2";
    case GateKind::U3: return "u3";
    case GateKind::CNOT: return "cx";
    case GateKind::X: return "x";
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::Barrier: return "barrier";
    case GateKind::Measure: return "measure";
  }
  throw std::logic_error("unknown gate kind");
}

bool Gate::is_single_qubit() const {
  switch (kind) {
    case GateKind::U1:
    case GateKind::U2:
    case GateKind::U3:
    case GateKind::X:
    case GateKind::H:
    case GateKind::S:
    case GateKind::Sdg:
      return true;
    default:
      return false;
  }
}

Matrix gate_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::U1: return u3_matrix(0.0, 0.0, g.params[0]);
    case GateKind::U2: return u3_matrix(kPi / 2.0, g.params[0], g.params[1]);
    case GateKind::U3: return u3_matrix(g.params[0], g.params[1], g.params[2]);
    case GateKind::X: return u3_matrix(kPi, 0.0, kPi);
    case GateKind::H: {
      Matrix m(2, 2);
      const double r = 1.0 / std::sqrt(2.0);
      m << r, r, r, -r;
      return m;
    }
    case GateKind::S: return (Matrix(2, 2) << 1, 0, 0, I_UNIT).finished();
    case GateKind::Sdg: return (Matrix(2, 2) << 1, 0, 0, -I_UNIT).finished();
    case GateKind::CNOT: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
      return m;
    }
    case GateKind::Barrier:
    case GateKind::Measure:
      throw std::invalid_argument("gate has no unitary matrix");
  }
  throw std::logic_error("unknown gate kind");
}

void Circuit::u1(std::size_t q, double lambda) {
  gates.push_back({GateKind::U1, {q}, {lambda}});
}
void Circuit::u2(std::size_t q, double phi, double lambda) {
  gates.push_back({GateKind::U2, {q}, {phi, lambda}});
}
void Circuit::u3(std::size_t q, double theta, double phi, double lambda) {
  gates.push_back({GateKind::U3, {q}, {theta, phi, lambda}});
}
void Circuit::cnot(std::size_t control, std::size_t target) {
  if (control == target) throw std::invalid_argument("cnot needs distinct qubits");
  gates.push_back({GateKind::CNOT, {control, target}, {}});
}
void Circuit::x(std::size_t q) { gates.push_back({GateKind::X, {q}, {}}); }
void Circuit::h(std::size_t q) { gates.push_back({GateKind::H, {q}, {}}); }
void Circuit::s(std::size_t q) { gates.push_back({GateKind::S, {q}, {}}); }
void Circuit::sdg(std::size_t q) { gates.push_back({GateKind::Sdg, {q}, {}}); }
void Circuit::barrier() { gates.push_back({GateKind::Barrier, {}, {}}); }
void Circuit::measure_all() {
  for (std::size_t q = 0; q < n_qubits; ++q) gates.push_back({GateKind::Measure, {q}, {}});
}

void Circuit::append(const Circuit& other) {
  if (other.n_qubits != n_qubits)
    throw std::invalid_argument("appended circuit must match qubit count");
  gates.insert(gates.end(), other.gates.begin(), other.gates.end());
  global_phase += other.global_phase;
}

namespace {

// Full-register embedding of a single-qubit matrix (qubit 0 leftmost).
Matrix embed_single(std::size_t n, std::size_t q, const Matrix& m) {
  const auto left = Eigen::Index(1) << q;
  const auto right = Eigen::Index(1) << (n - q - 1);
  return kron(kron(Matrix::Identity(left, left), m), Matrix::Identity(right, right));
}

Matrix embed_cnot(std::size_t n, std::size_t control, std::size_t target) {
  const auto dim = Eigen::Index(1) << n;
  Matrix m = Matrix::Zero(dim, dim);
  const std::size_t cbit = n - 1 - control, tbit = n - 1 - target;
  for (Eigen::Index i = 0; i < dim; ++i) {
    auto u = std::size_t(i);
    std::size_t j = (u >> cbit) & 1u ? u ^ (std::size_t(1) << tbit) : u;
    m(Eigen::Index(j), i) = 1.0;
  }
  return m;
}

}  // namespace

Matrix unitary_of(const Circuit& c) {
  if (c.n_qubits > 12)
    throw std::invalid_argument("dense circuit unitaries are capped at 12 qubits");
  const auto dim = Eigen::Index(1) << c.n_qubits;
  Matrix u = Matrix::Identity(dim, dim);
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::Barrier) continue;
    if (g.kind == GateKind::Measure)
      throw std::invalid_argument("circuit with measurements has no unitary");
    if (g.kind == GateKind::CNOT)
      u = embed_cnot(c.n_qubits, g.qubits[0], g.qubits[1]) * u;
    else
      u = embed_single(c.n_qubits, g.qubits[0], gate_matrix(g)) * u;
  }
  return std::exp(I_UNIT * c.global_phase) * u;
}

namespace {

// Opening/closing single-qubit conversions taking the naturally produced
// axis on a wire to the requested one. Each pair multiplies to the identity,
// so no global phase is involved.
void emit_axis_conversion(Circuit& c, std::size_t q, Axis natural, Axis target,
                          bool closing) {
  if (natural == target) return;
  if (natural == Axis::X) {
    if (target == Axis::Y) {
      closing ? c.s(q) : c.sdg(q);
    } else {  // Z
      closing ? c.u2(q, kPi, kPi) : c.u2(q, 0.0, 0.0);
    }
  } else {  // natural == Axis::Y (pivot wire of an odd-weight term)
    if (target == Axis::X) {
      closing ? c.sdg(q) : c.s(q);
    } else {  // Z
      closing ? c.u2(q, -kPi / 2.0, kPi / 2.0) : c.u2(q, kPi / 2.0, -kPi / 2.0);
    }
  }
}

}  // namespace

void append_exp_pauli(Circuit& c, const PauliString& term, double theta) {
  if (term.axes.size() != c.n_qubits)
    throw std::invalid_argument("term size does not match circuit");
  if (std::abs(term.coeff.imag()) > 1e-12)
    throw std::invalid_argument("exponentiated term must have a real coefficient");
  const double angle = theta * term.coeff.real();
  const auto support = term.support();
  const std::size_t w = support.size();
  if (w == 0) {
    c.global_phase += angle;
    return;
  }

  // The central block produces exp(i*s*angle*A) on the pivot with A = X for
  // even weight, Y for odd, and s = -1 when weight mod 4 is 0 or 1. Folding
  // s into the angle makes the whole construction exact.
  const unsigned wm4 = unsigned(w % 4);
  const double tp = ((wm4 == 2 || wm4 == 3) ? 1.0 : -1.0) * angle;
  const std::size_t pivot = support.front();
  const Axis natural_pivot = (w % 2 == 0) ? Axis::X : Axis::Y;

  auto natural_axis = [&](std::size_t q) { return q == pivot ? natural_pivot : Axis::X; };

  for (std::size_t q : support) emit_axis_conversion(c, q, natural_axis(q), term.axes[q], false);
  for (auto it = support.rbegin(); it != support.rend(); ++it)
    if (*it != pivot) c.cnot(pivot, *it);

  if (w == 1) {
    c.u2(pivot, kPi / 2.0, -kPi / 2.0);
    c.u1(pivot, -2.0 * tp);
    c.global_phase += tp;
    c.u2(pivot, -kPi / 2.0, kPi / 2.0);
  } else {
    const double wrap = double(w - 2) * kPi / 2.0;
    if (w > 2) {
      c.u1(pivot, -wrap);
      c.global_phase += wrap / 2.0;
    }
    c.u2(pivot, kPi / 2.0, -kPi);
    c.global_phase += kPi / 4.0;
    c.u1(pivot, -2.0 * tp);
    c.global_phase += tp;
    c.u2(pivot, 0.0, kPi / 2.0);
    c.global_phase += -kPi / 4.0;
    if (w > 2) {
      c.u1(pivot, wrap);
      c.global_phase += -wrap / 2.0;
    }
  }

  for (std::size_t q : support)
    if (q != pivot) c.cnot(pivot, q);
  // Closing conversions in reverse qubit order: the whole block is then a
  // strict palindrome around the central Z rotation.
  for (auto it = support.rbegin(); it != support.rend(); ++it)
    emit_axis_conversion(c, *it, natural_axis(*it), term.axes[*it], true);
}

Circuit exp_pauli_term(std::size_t n_qubits, const PauliString& term, double theta) {
  if (term.is_identity_axes())
    throw std::invalid_argument("identity strings are pure phases; set global_phase directly");
  if (std::abs(term.coeff - complexd{1.0, 0.0}) > 1e-12)
    throw std::invalid_argument("fold the string coefficient into theta first");
  Circuit c(n_qubits);
  append_exp_pauli(c, term, theta);
  return c;
}

std::vector<PauliString> canonical_terms(const PauliSum& h) {
  auto s = simplify(h);
  std::sort(s.terms.begin(), s.terms.end(), [&](const PauliString& a, const PauliString& b) {
    auto sa = a.support(), sb = b.support();
    const std::size_t ka = sa.empty() ? h.n : sa.front();
    const std::size_t kb = sb.empty() ? h.n : sb.front();
    if (ka != kb) return ka < kb;
    return a.axes_text() < b.axes_text();
  });
  return s.terms;
}

std::vector<std::vector<PauliString>> commuting_groups(const PauliSum& h) {
  std::vector<std::vector<PauliString>> groups;
  for (const auto& term : canonical_terms(h)) {
    bool placed = false;
    for (auto& g : groups) {
      bool ok = true;
      for (const auto& member : g)
        if (!commutes(member, term)) {
          ok = false;
          break;
        }
      if (ok) {
        g.push_back(term);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({term});
  }
  return groups;
}

namespace {

// Emits exp(i*epsilon*sum(terms)); callers guarantee the terms commute.
// Terms are laid down in reverse canonical order, so the first canonical
// term is the last gate block applied.
void emit_group(Circuit& c, const std::vector<PauliString>& terms, double epsilon) {
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) append_exp_pauli(c, *it, epsilon);
}

}  // namespace

Circuit compile_evolution(const PauliSum& h, double epsilon, const EvolutionOptions& opts) {
  Circuit c(h.n);
  switch (opts.scheme) {
    case TrotterScheme::Exact: {
      if (!commutes_pairwise(h))
        throw std::invalid_argument(
            "exact product form needs a pairwise-commuting generator; pick a stepped scheme");
      emit_group(c, canonical_terms(h), epsilon);
      return c;
    }
    case TrotterScheme::FirstOrder: {
      if (opts.steps == 0) throw std::invalid_argument("steps must be positive");
      const auto groups = commuting_groups(h);
      const double slice = epsilon / double(opts.steps);
      for (std::size_t step = 0; step < opts.steps; ++step) {
        if (step > 0 && opts.insert_barriers) c.barrier();
        for (auto git = groups.rbegin(); git != groups.rend(); ++git)
          emit_group(c, *git, slice);
      }
      return c;
    }
    case TrotterScheme::Symmetric: {
      const auto groups = commuting_groups(h);
      if (groups.size() == 1) {
        emit_group(c, groups.front(), epsilon);
        return c;
      }
      for (std::size_t i = 0; i + 1 < groups.size(); ++i)
        emit_group(c, groups[i], epsilon / 2.0);
      emit_group(c, groups.back(), epsilon);
      for (std::size_t i = groups.size() - 1; i-- > 0;)
        emit_group(c, groups[i], epsilon / 2.0);
      return c;
    }
  }
  throw std::logic_error("unknown scheme");
}

Circuit prepare_fock(const BosonRegister& reg, const std::vector<std::size_t>& occupations) {
  Circuit c(reg.n_qubits());
  const std::string bits = fock_to_bitstring(reg, occupations);
  for (std::size_t q = 0; q < bits.size(); ++q)
    if (bits[q] == '1') c.x(q);
  return c;
}

void append_basis_rotation(Circuit& c, const std::vector<Axis>& axes) {
  if (axes.size() != c.n_qubits)
    throw std::invalid_argument("axis list does not match circuit size");
  for (std::size_t q = 0; q < axes.size(); ++q) {
    switch (axes[q]) {
      case Axis::X: c.h(q); break;
      case Axis::Y:
        c.sdg(q);
        c.h(q);
        break;
      default: break;
    }
  }
}

void append_mode_basis_rotation(Circuit& c, const BosonRegister& reg, std::size_t mode,
                                Axis axis) {
  if (reg.levels() != 2)
    throw std::invalid_argument("mode-level readout rotations need a two-level register");
  if (reg.n_qubits() != c.n_qubits)
    throw std::invalid_argument("register does not match circuit size");
  const std::size_t a = reg.qubit_offset(mode), b = a + 1;
  switch (axis) {
    case Axis::X:
      c.cnot(a, b);
      c.h(a);
      c.cnot(a, b);
      break;
    case Axis::Y:
      c.sdg(a);
      c.cnot(a, b);
      c.h(a);
      c.cnot(a, b);
      break;
    default: break;
  }
}

std::map<std::string, std::size_t> gate_histogram(const Circuit& c) {
  std::map<std::string, std::size_t> counts;
  for (const auto& g : c.gates) ++counts[gate_name(g.kind)];
  return counts;
}

std::size_t cnot_count(const Circuit& c) {
  std::size_t n = 0;
  for (const auto& g : c.gates) n += g.kind == GateKind::CNOT;
  return n;
}

std::size_t single_qubit_gate_count(const Circuit& c) {
  std::size_t n = 0;
  for (const auto& g : c.gates) n += g.is_single_qubit();
  return n;
}

std::size_t depth(const Circuit& c) {
  std::vector<std::size_t> level(c.n_qubits, 0);
  std::size_t overall = 0;
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::Barrier) {
      const std::size_t top = *std::max_element(level.begin(), level.end());
      std::fill(level.begin(), level.end(), top);
      continue;
    }
    std::size_t start = 0;
    for (std::size_t q : g.qubits) start = std::max(start, level[q]);
    for (std::size_t q : g.qubits) level[q] = start + 1;
    overall = std::max(overall, start + 1);
  }
  return overall;
}

std::string to_qasm(const Circuit& c) {
  std::ostringstream out;
  out.precision(12);
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  out << "// global phase: " << c.global_phase << "\n";
  out << "qreg q[" << c.n_qubits << "];\n";
  out << "creg c[" << c.n_qubits << "];\n";
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case GateKind::U1: out << "u1(" << g.params[0] << ") q[" << g.qubits[0] << "];\n"; break;
      case GateKind::U2:
        out << "u2(" << g.params[0] << "," << g.params[1] << ") q[" << g.qubits[0] << "];\n";
        break;
      case GateKind::U3:
        out << "u3(" << g.params[0] << "," << g.params[1] << "," << g.params[2] << ") q["
            << g.qubits[0] << "];\n";
        break;
      case GateKind::CNOT:
        out << "cx q[" << g.qubits[0] << "],q[" << g.qubits[1] << "];\n";
        break;
      case GateKind::Barrier: out << "barrier q;\n"; break;
      case GateKind::Measure:
        out << "measure q[" << g.qubits[0] << "] -> c[" << g.qubits[0] << "];\n";
        break;
      default: out << gate_name(g.kind) << " q[" << g.qubits[0] << "];\n"; break;
    }
  }
  return out.str();
}

}  // namespace bosonq
