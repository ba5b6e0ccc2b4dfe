#include "bosonq/transpile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace bosonq {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Entry tolerance for picking a structural branch (diagonal / anti-diagonal)
// and for dropping identity factors. Kept well below the 1e-10 equivalence
// budget so pruning never costs more than round-off.
constexpr double kEntryTol = 1e-12;
constexpr double kAngleTol = 1e-12;
// A rebuilt two-qubit block must match the original to this tolerance or the
// original gates are kept.
constexpr double kVerifyTol = 1e-10;

double principal_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

bool is_canonical_single(const Gate& g) {
  return g.kind == GateKind::U1 || g.kind == GateKind::U3;
}

bool is_diagonal_single(const Gate& g) {
  return g.kind == GateKind::U1 || g.kind == GateKind::S ||
         g.kind == GateKind::Sdg;
}

bool gate_touches(const Gate& g, std::size_t q) {
  return std::find(g.qubits.begin(), g.qubits.end(), q) != g.qubits.end();
}

// Appends the canonical gate for a decomposition and books its phase.
void emit_single(Circuit& c, std::size_t q, const SingleQubitDecomposition& d) {
  c.global_phase += d.phase;
  if (d.identity) return;
  if (d.diagonal) {
    c.u1(q, d.lambda);
  } else {
    c.u3(q, d.theta, d.phi, d.lambda);
  }
}

Matrix pauli_matrix(char axis) {
  Matrix m(2, 2);
  switch (axis) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -I_UNIT, I_UNIT, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::logic_error("pauli_matrix: unknown axis");
  }
  return m;
}

// Isometry between the product basis and the basis in which every
// single-qubit pair A (x) B becomes a real orthogonal matrix and XX, YY, ZZ
// all become diagonal.
const Matrix& magic_basis() {
  static const Matrix m = [] {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix b = Matrix::Zero(4, 4);
    b(0, 0) = s;          b(0, 3) = s * I_UNIT;
    b(1, 1) = s * I_UNIT; b(1, 2) = s;
    b(2, 1) = s * I_UNIT; b(2, 2) = -s;
    b(3, 0) = s;          b(3, 3) = -s * I_UNIT;
    return b;
  }();
  return m;
}

}  // namespace

GateCounts gate_counts(const Circuit& c) {
  GateCounts out;
  out.cnot = cnot_count(c);
  out.single_qubit = single_qubit_gate_count(c);
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::Barrier) ++out.barriers;
  }
  out.depth = depth(c);
  return out;
}

SingleQubitDecomposition decompose_single_qubit(const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2) {
    throw std::invalid_argument("decompose_single_qubit: matrix must be 2x2");
  }
  const complexd m00 = u(0, 0), m01 = u(0, 1);
  const complexd m10 = u(1, 0), m11 = u(1, 1);
  SingleQubitDecomposition d;
  if (std::abs(m01) <= kEntryTol && std::abs(m10) <= kEntryTol) {
    d.diagonal = true;
    d.phase = std::arg(m00);
    d.lambda = principal_angle(std::arg(m11) - d.phase);
    if (std::abs(d.lambda) <= kAngleTol) {
      d.identity = true;
      d.lambda = 0.0;
    }
    return d;
  }
  if (std::abs(m00) <= kEntryTol && std::abs(m11) <= kEntryTol) {
    d.theta = kPi;
    d.phase = std::arg(m10);
    d.phi = 0.0;
    d.lambda = principal_angle(std::arg(-m01) - d.phase);
    return d;
  }
  d.phase = std::arg(m00);
  d.theta = 2.0 * std::atan2(std::abs(m10), std::abs(m00));
  d.phi = principal_angle(std::arg(m10) - d.phase);
  d.lambda = principal_angle(std::arg(-m01) - d.phase);
  return d;
}

Circuit fuse_single_qubit(const Circuit& c) {
  Circuit out(c.n_qubits);
  out.global_phase = c.global_phase;
  std::vector<std::vector<const Gate*>> runs(c.n_qubits);

  auto flush = [&](std::size_t q) {
    auto& run = runs[q];
    if (run.empty()) return;
    // A lone gate already in canonical form is copied verbatim so repeated
    // passes are byte-stable.
    if (run.size() == 1 && is_canonical_single(*run.front())) {
      out.gates.push_back(*run.front());
      run.clear();
      return;
    }
    Matrix m = Matrix::Identity(2, 2);
    for (const Gate* g : run) m = gate_matrix(*g) * m;
    emit_single(out, q, decompose_single_qubit(m));
    run.clear();
  };
  auto flush_all = [&] {
    for (std::size_t q = 0; q < c.n_qubits; ++q) flush(q);
  };

  for (const auto& g : c.gates) {
    switch (g.kind) {
      case GateKind::CNOT:
        flush(g.qubits[0]);
        flush(g.qubits[1]);
        out.gates.push_back(g);
        break;
      case GateKind::Barrier:
      case GateKind::Measure:
        flush_all();
        out.gates.push_back(g);
        break;
      default:
        runs[g.qubits[0]].push_back(&g);
        break;
    }
  }
  flush_all();
  return out;
}

Circuit cancel_cnot_pairs(const Circuit& c) {
  std::vector<Gate> gates = c.gates;
  std::vector<bool> dead(gates.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < gates.size(); ++i) {
      if (dead[i] || gates[i].kind != GateKind::CNOT) continue;
      const std::size_t ctrl = gates[i].qubits[0];
      const std::size_t tgt = gates[i].qubits[1];
      for (std::size_t j = i + 1; j < gates.size(); ++j) {
        if (dead[j]) continue;
        const Gate& g = gates[j];
        if (g.kind == GateKind::CNOT && g.qubits[0] == ctrl &&
            g.qubits[1] == tgt) {
          dead[i] = dead[j] = true;
          changed = true;
          break;
        }
        if (g.kind == GateKind::Barrier || g.kind == GateKind::Measure) break;
        if (gate_touches(g, tgt)) break;
        if (gate_touches(g, ctrl)) {
          // Diagonal gates commute with the control and stay where they are.
          if (g.is_single_qubit() && is_diagonal_single(g)) continue;
          break;
        }
      }
    }
  }
  Circuit out(c.n_qubits);
  out.global_phase = c.global_phase;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (!dead[i]) out.gates.push_back(std::move(gates[i]));
  }
  return out;
}

namespace {

// Factors a (numerically exact) tensor product g = a (x) b of two 2x2
// matrices by a rank-one split of the index-reshuffled matrix.
void factor_tensor_product(const Matrix& g, Matrix& a, Matrix& b) {
  Matrix r(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) r(2 * i + j, 2 * k + l) = g(2 * i + k, 2 * j + l);
  Eigen::JacobiSVD<Matrix> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double scale = std::sqrt(svd.singularValues()(0));
  const Vector va = svd.matrixU().col(0);
  const Vector vb = svd.matrixV().col(0).conjugate();
  a.resize(2, 2);
  b.resize(2, 2);
  a << va(0), va(1), va(2), va(3);
  b << vb(0), vb(1), vb(2), vb(3);
  a *= scale;
  b *= scale;
}

}  // namespace

TwoQubitKak kak_decompose(const Matrix& u) {
  if (u.rows() != 4 || u.cols() != 4) {
    throw std::invalid_argument("kak_decompose: matrix must be 4x4");
  }
  const Matrix& mb = magic_basis();

  // Strip the determinant so the magic-basis image is special orthogonal
  // on each side of the diagonal core.
  const double phi0 = std::arg(u.determinant()) / 4.0;
  const Matrix usu = std::polar(1.0, -phi0) * u;
  const Matrix up = mb.adjoint() * usu * mb;

  // m is complex symmetric and unitary, so its real and imaginary parts are
  // commuting real symmetric matrices with a common orthogonal eigenbasis.
  const Matrix m = up.transpose() * up;
  Eigen::MatrixXd re = m.real();
  Eigen::MatrixXd im = m.imag();
  re = 0.5 * (re + re.transpose()).eval();
  im = 0.5 * (im + im.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> res(re);
  Eigen::MatrixXd p = res.eigenvectors();
  const Eigen::VectorXd ev = res.eigenvalues();
  for (int s = 0; s < 4;) {
    int e = s + 1;
    while (e < 4 && ev(e) - ev(e - 1) < 1e-8) ++e;
    const int width = e - s;
    if (width > 1) {
      Eigen::MatrixXd block =
          p.middleCols(s, width).transpose() * im * p.middleCols(s, width);
      block = 0.5 * (block + block.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bes(block);
      p.middleCols(s, width) = (p.middleCols(s, width) * bes.eigenvectors()).eval();
    }
    s = e;
  }
  if (p.determinant() < 0.0) p.col(0) = -p.col(0);

  // Half the argument of each eigenvalue of m gives the diagonal core; the
  // leftover columns then form a real orthogonal factor.
  const Matrix pc = p.cast<complexd>();
  const Matrix cols = up * pc;
  std::array<double, 4> theta{};
  for (int k = 0; k < 4; ++k) {
    const complexd lam = (cols.col(k).transpose() * cols.col(k)).value();
    theta[k] = 0.5 * std::arg(lam);
  }
  {
    Matrix o1 = cols;
    for (int k = 0; k < 4; ++k) o1.col(k) *= std::polar(1.0, -theta[k]);
    if (o1.real().determinant() < 0.0) theta[0] += kPi;
  }
  Matrix o1c = cols;
  for (int k = 0; k < 4; ++k) o1c.col(k) *= std::polar(1.0, -theta[k]);
  const Matrix o1 = o1c.real().cast<complexd>();

  // Interaction coefficients from the diagonal images of XX, YY, ZZ.
  const Matrix xx = kron(pauli_matrix('X'), pauli_matrix('X'));
  const Matrix yy = kron(pauli_matrix('Y'), pauli_matrix('Y'));
  const Matrix zz = kron(pauli_matrix('Z'), pauli_matrix('Z'));
  const Eigen::Vector4d dxx = (mb.adjoint() * xx * mb).diagonal().real();
  const Eigen::Vector4d dyy = (mb.adjoint() * yy * mb).diagonal().real();
  const Eigen::Vector4d dzz = (mb.adjoint() * zz * mb).diagonal().real();
  const Eigen::Vector4d th(theta[0], theta[1], theta[2], theta[3]);

  TwoQubitKak kak;
  kak.x = dxx.dot(th) / 4.0;
  kak.y = dyy.dot(th) / 4.0;
  kak.z = dzz.dot(th) / 4.0;

  factor_tensor_product(mb * o1 * mb.adjoint(), kak.a1, kak.b1);
  factor_tensor_product(mb * pc.transpose() * mb.adjoint(), kak.a2, kak.b2);

  // Fix the scalar factor directly against the input so every intermediate
  // branch choice is absorbed.
  const Matrix core = expi_hermitian(kak.x * xx + kak.y * yy + kak.z * zz, 1.0);
  const Matrix recon = kron(kak.a1, kak.b1) * core * kron(kak.a2, kak.b2);
  kak.phase = std::arg((recon.adjoint() * u).trace());
  return kak;
}

namespace {

bool near_half_pi_multiple(double v) {
  return std::abs(std::remainder(v, 0.5 * kPi)) <= 1e-9;
}

// Conjugates the interaction so that the coefficient sitting on ZZ is the
// one that is a multiple of pi/2, absorbing the basis change into the
// single-qubit factors. Returns false when no coefficient qualifies.
bool move_half_pi_slot_to_zz(TwoQubitKak& kak) {
  if (near_half_pi_multiple(kak.z)) return true;
  Matrix t(2, 2);
  if (near_half_pi_multiple(kak.x)) {
    // Hadamard conjugation exchanges XX and ZZ and fixes YY.
    const double s = 1.0 / std::sqrt(2.0);
    t << s, s, s, -s;
    std::swap(kak.x, kak.z);
  } else if (near_half_pi_multiple(kak.y)) {
    // exp(-i pi/4 X) conjugation exchanges YY and ZZ and fixes XX.
    const double s = 1.0 / std::sqrt(2.0);
    t << s, -s * I_UNIT, -s * I_UNIT, s;
    std::swap(kak.y, kak.z);
  } else {
    return false;
  }
  kak.a1 = (kak.a1 * t.adjoint()).eval();
  kak.b1 = (kak.b1 * t.adjoint()).eval();
  kak.a2 = (t * kak.a2).eval();
  kak.b2 = (t * kak.b2).eval();
  return true;
}

// Two-CNOT realization of the canonical form once the ZZ coefficient is a
// multiple of pi/2: the leftover XX + YY core conjugates to an X rotation on
// the control and a Z rotation on the target between the two CNOTs.
Circuit build_two_cnot_block(const TwoQubitKak& kak) {
  Circuit rep(2);
  const long k = std::lround(kak.z / (0.5 * kPi));
  Matrix zk = Matrix::Identity(2, 2);
  if (k % 2 != 0) zk = pauli_matrix('Z');
  const Matrix a2 = zk * kak.a2;
  const Matrix b2 = zk * kak.b2;
  rep.global_phase += kak.phase + double(k) * 0.5 * kPi;

  if (std::abs(kak.x) <= kAngleTol && std::abs(kak.y) <= kAngleTol) {
    emit_single(rep, 0, decompose_single_qubit((kak.a1 * a2).eval()));
    emit_single(rep, 1, decompose_single_qubit((kak.b1 * b2).eval()));
    return rep;
  }

  emit_single(rep, 0, decompose_single_qubit(a2));
  emit_single(rep, 1, decompose_single_qubit(b2));
  rep.u2(0, 0.5 * kPi, -0.5 * kPi);
  rep.u2(1, 0.5 * kPi, -0.5 * kPi);
  rep.cnot(0, 1);
  if (std::abs(kak.x) > kAngleTol) rep.u3(0, 2.0 * kak.x, 0.5 * kPi, -0.5 * kPi);
  if (std::abs(kak.y) > kAngleTol) {
    rep.u1(1, -2.0 * kak.y);
    rep.global_phase += kak.y;
  }
  rep.cnot(0, 1);
  rep.u2(0, -0.5 * kPi, 0.5 * kPi);
  rep.u2(1, -0.5 * kPi, 0.5 * kPi);
  emit_single(rep, 0, decompose_single_qubit(kak.a1));
  emit_single(rep, 1, decompose_single_qubit(kak.b1));
  return rep;
}

// Attempts to rebuild gates [begin, end) — all supported on the qubit pair
// `pr` — as a two-CNOT block. Appends the result (or nothing) to `out` and
// reports whether the originals were replaced.
bool try_rebuild_segment(const std::vector<Gate>& gates, std::size_t begin,
                         std::size_t end, const std::array<std::size_t, 2>& pr,
                         std::size_t segment_cnots, Circuit& out) {
  Circuit seg(2);
  for (std::size_t k = begin; k < end; ++k) {
    Gate g = gates[k];
    for (auto& q : g.qubits) q = (q == pr[0]) ? 0 : 1;
    seg.gates.push_back(std::move(g));
  }
  const Matrix u = unitary_of(seg);

  TwoQubitKak kak = kak_decompose(u);
  if (!move_half_pi_slot_to_zz(kak)) return false;
  const Circuit rep = build_two_cnot_block(kak);
  if (cnot_count(rep) >= segment_cnots) return false;
  if (max_abs_diff(unitary_of(rep), u) > kVerifyTol) return false;

  out.global_phase += rep.global_phase;
  for (Gate g : rep.gates) {
    for (auto& q : g.qubits) q = (q == 0) ? pr[0] : pr[1];
    out.gates.push_back(std::move(g));
  }
  return true;
}

}  // namespace

Circuit resynthesize_two_qubit_blocks(const Circuit& c) {
  Circuit out(c.n_qubits);
  out.global_phase = c.global_phase;
  const auto& gs = c.gates;
  std::size_t i = 0;
  while (i < gs.size()) {
    if (gs[i].kind == GateKind::Barrier || gs[i].kind == GateKind::Measure) {
      out.gates.push_back(gs[i]);
      ++i;
      continue;
    }
    std::set<std::size_t> support(gs[i].qubits.begin(), gs[i].qubits.end());
    std::size_t cnots = gs[i].kind == GateKind::CNOT ? 1 : 0;
    std::size_t j = i + 1;
    while (j < gs.size()) {
      const Gate& g = gs[j];
      if (g.kind == GateKind::Barrier || g.kind == GateKind::Measure) break;
      std::set<std::size_t> trial = support;
      trial.insert(g.qubits.begin(), g.qubits.end());
      if (trial.size() > 2) break;
      support.swap(trial);
      if (g.kind == GateKind::CNOT) ++cnots;
      ++j;
    }
    bool replaced = false;
    if (support.size() == 2 && cnots >= 3) {
      auto it = support.begin();
      const std::array<std::size_t, 2> pr{*it, *std::next(it)};
      replaced = try_rebuild_segment(gs, i, j, pr, cnots, out);
    }
    if (!replaced) out.gates.insert(out.gates.end(), gs.begin() + i, gs.begin() + j);
    i = j;
  }
  return out;
}

Circuit optimize(const Circuit& c, int level) {
  if (level < 0 || level > 2) {
    throw std::invalid_argument("optimize: level must be 0, 1, or 2");
  }
  if (level == 0) return c;
  if (level == 1) return fuse_single_qubit(c);
  Circuit cur = c;
  for (int round = 0; round < 32; ++round) {
    Circuit next =
        resynthesize_two_qubit_blocks(cancel_cnot_pairs(fuse_single_qubit(cur)));
    const bool settled = structurally_equal(next, cur);
    cur = std::move(next);
    if (settled) break;
  }
  return cur;
}

bool operator==(const Gate& a, const Gate& b) {
  return a.kind == b.kind && a.qubits == b.qubits && a.params == b.params;
}

bool structurally_equal(const Circuit& a, const Circuit& b) {
  return a.n_qubits == b.n_qubits && a.global_phase == b.global_phase &&
         a.gates == b.gates;
}

}  // namespace bosonq
