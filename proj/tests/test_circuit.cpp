#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "bosonq/bosons.hpp"
#include "bosonq/circuit.hpp"
#include "bosonq/matrix.hpp"
#include "bosonq/pauli.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bosonq;
using bosonq::testing::basis_vector;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix dense_exp(const PauliSum& h, double epsilon) {
  return expi_hermitian(h.to_matrix(), epsilon);
}

PauliSum sum_of(std::size_t n, const std::vector<PauliString>& terms) {
  PauliSum s(n);
  for (const auto& t : terms) s.add(t);
  return s;
}

}  // namespace

TEST_CASE("primitive gate matrices have the frozen entries") {
  Matrix u1 = gate_matrix({GateKind::U1, {0}, {0.3}});
  CHECK(std::abs(u1(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(u1(1, 1) - std::exp(I_UNIT * 0.3)) < 1e-15);
  CHECK(std::abs(u1(0, 1)) < 1e-15);

  Matrix u2 = gate_matrix({GateKind::U2, {0}, {0.0, 0.0}});
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(u2(0, 0) - r) < 1e-15);
  CHECK(std::abs(u2(0, 1) + r) < 1e-15);
  CHECK(std::abs(u2(1, 0) - r) < 1e-15);
  CHECK(std::abs(u2(1, 1) - r) < 1e-15);

  // u3(pi,0,pi) is exactly X, and the X gate matches it.
  Matrix u3x = gate_matrix({GateKind::U3, {0}, {kPi, 0.0, kPi}});
  Matrix x = gate_matrix({GateKind::X, {0}, {}});
  CHECK(max_abs_diff(u3x, x) < 1e-15);
  CHECK(std::abs(x(0, 1) - 1.0) < 1e-15);

  Matrix cx = gate_matrix({GateKind::CNOT, {0, 1}, {}});
  Matrix cx_expected(4, 4);
  cx_expected << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
  CHECK(max_abs_diff(cx, cx_expected) < 1e-15);
}

TEST_CASE("fourth power of the phase gate is the identity with zero phase") {
  Circuit c(1);
  for (int k = 0; k < 4; ++k) c.s(0);
  CHECK(max_abs_diff(unitary_of(c), Matrix::Identity(2, 2)) < 1e-15);
  CHECK(c.global_phase == 0.0);
}

TEST_CASE("controlled-not with control on the higher-index qubit") {
  Circuit c(2);
  c.cnot(1, 0);
  Matrix expected(4, 4);
  expected << 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0;
  CHECK(max_abs_diff(unitary_of(c), expected) < 1e-15);
}

TEST_CASE("unitary of a gate list matches the dense product") {
  Circuit c(2);
  c.h(0);
  c.cnot(0, 1);
  c.u1(1, 0.7);
  Matrix h2 = kron(gate_matrix({GateKind::H, {0}, {}}), Matrix::Identity(2, 2));
  Matrix cx(4, 4);
  cx << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
  Matrix u1 = kron(Matrix::Identity(2, 2), gate_matrix({GateKind::U1, {0}, {0.7}}));
  CHECK(max_abs_diff(unitary_of(c), Matrix(u1 * cx * h2)) < 1e-14);
}

TEST_CASE("exponentiated strings reproduce the dense exponential exactly") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> angle(-2.5, 2.5);
  std::uniform_real_distribution<double> cval(-1.5, 1.5);
  std::uniform_int_distribution<int> axis(0, 3);

  for (int trial = 0; trial < 160; ++trial) {
    const std::size_t n = 2 + std::size_t(trial % 4);  // up to 5 qubits
    PauliString p(n, {cval(rng), 0.0});
    for (std::size_t q = 0; q < n; ++q) p.axes[q] = static_cast<Axis>(axis(rng));
    const double theta = angle(rng);

    Circuit c(n);
    append_exp_pauli(c, p, theta);
    PauliString unit = p;
    unit.coeff = 1.0;
    Matrix expected = expi_hermitian(unit.to_matrix(), theta * p.coeff.real());
    CHECK(max_abs_diff(unitary_of(c), expected) < 1e-12);
    CHECK(cnot_count(c) == (p.weight() == 0 ? 0 : 2 * (p.weight() - 1)));
  }
}

TEST_CASE("phase-tracked shorthand identities hold as matrices") {
  Matrix x = PauliString::parse("X").to_matrix();
  Matrix z = PauliString::parse("Z").to_matrix();

  Matrix lhs = expi_hermitian(x, kPi / 4.0) * expi_hermitian(z, kPi / 4.0);
  Matrix rhs = std::exp(I_UNIT * kPi / 4.0) * gate_matrix({GateKind::U2, {0}, {kPi / 2.0, -kPi}});
  CHECK(max_abs_diff(lhs, rhs) < 1e-12);

  Matrix lhs2 = expi_hermitian(z, -kPi / 4.0) * expi_hermitian(x, -kPi / 4.0);
  Matrix rhs2 =
      std::exp(-I_UNIT * kPi / 4.0) * gate_matrix({GateKind::U2, {0}, {0.0, kPi / 2.0}});
  CHECK(max_abs_diff(lhs2, rhs2) < 1e-12);

  for (double theta : {0.05, -0.3, 1.2}) {
    Matrix lhs3 = expi_hermitian(z, theta);
    Matrix rhs3 = std::exp(I_UNIT * theta) * gate_matrix({GateKind::U1, {0}, {-2.0 * theta}});
    CHECK(max_abs_diff(lhs3, rhs3) < 1e-12);
  }
}

TEST_CASE("exponentiated blocks are palindromes around the central rotation") {
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<int> axis(1, 3);
  std::uniform_real_distribution<double> angle(-1.5, 1.5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + std::size_t(trial % 3);
    PauliString p(n);
    // random support of size >= 1
    std::size_t w = 1 + std::size_t(rng() % n);
    std::vector<std::size_t> qs(n);
    for (std::size_t q = 0; q < n; ++q) qs[q] = q;
    std::shuffle(qs.begin(), qs.end(), rng);
    for (std::size_t k = 0; k < w; ++k) p.axes[qs[k]] = static_cast<Axis>(axis(rng));

    Circuit c = exp_pauli_term(n, p, angle(rng));
    REQUIRE(c.gates.size() % 2 == 1);
    const std::size_t mid = c.gates.size() / 2;
    CHECK(c.gates[mid].kind == GateKind::U1);
    for (std::size_t k = 1; k + mid < c.gates.size(); ++k) {
      const Gate& before = c.gates[mid - k];
      const Gate& after = c.gates[mid + k];
      CHECK(before.qubits == after.qubits);
      Matrix prod = gate_matrix(after) * gate_matrix(before);
      CHECK(max_abs_diff(prod, Matrix::Identity(prod.rows(), prod.cols())) < 1e-13);
    }
  }
}

TEST_CASE("standalone block builder rejects phases and unfolded coefficients") {
  CHECK_THROWS(exp_pauli_term(2, PauliString::parse("II"), 0.3));
  CHECK_THROWS(exp_pauli_term(2, PauliString::parse("XX", {0.5, 0.0}), 0.3));
  CHECK_NOTHROW(exp_pauli_term(2, PauliString::parse("XX"), 0.3));
}

TEST_CASE("single-axis exponentials stay compact") {
  for (char a : {'X', 'Y', 'Z'}) {
    auto p = PauliString::parse(std::string(1, a));
    Circuit c = exp_pauli_term(1, p, 0.37);
    CHECK(cnot_count(c) == 0);
    PauliString unit = p;
    CHECK(max_abs_diff(unitary_of(c), expi_hermitian(unit.to_matrix(), 0.37)) < 1e-13);
  }
  // Identity axes fold into pure phase on the append path.
  Circuit c(2);
  append_exp_pauli(c, PauliString::parse("II", {0.5, 0.0}), 0.8);
  CHECK(c.gates.empty());
  CHECK(c.global_phase == doctest::Approx(0.4));
}

TEST_CASE("two-level squeeze compiles to the frozen fourteen-gate sequence") {
  BosonRegister reg(1, 2);
  const double eps_hat = 0.05;
  PauliSum h = single_mode_squeeze_h(reg).full();
  Circuit c = compile_evolution(h, std::sqrt(2.0) * eps_hat);

  REQUIRE(c.gates.size() == 14);
  CHECK(single_qubit_gate_count(c) == 10);
  CHECK(cnot_count(c) == 4);
  CHECK(c.global_phase == doctest::Approx(2.0 * eps_hat));

  struct Expect {
    GateKind kind;
    std::vector<std::size_t> qubits;
    std::vector<double> params;
  };
  const std::vector<Expect> expected = {
      {GateKind::Sdg, {0}, {}},
      {GateKind::Sdg, {2}, {}},
      {GateKind::CNOT, {0, 2}, {}},
      {GateKind::U2, {0}, {kPi / 2.0, -kPi}},
      {GateKind::U1, {0}, {-2.0 * eps_hat}},
      {GateKind::U2, {0}, {0.0, kPi / 2.0}},
      {GateKind::CNOT, {0, 2}, {}},
      {GateKind::S, {2}, {}},
      {GateKind::S, {0}, {}},
      {GateKind::CNOT, {0, 2}, {}},
      {GateKind::U2, {0}, {kPi / 2.0, -kPi}},
      {GateKind::U1, {0}, {-2.0 * eps_hat}},
      {GateKind::U2, {0}, {0.0, kPi / 2.0}},
      {GateKind::CNOT, {0, 2}, {}},
  };
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CAPTURE(i);
    CHECK(c.gates[i].kind == expected[i].kind);
    CHECK(c.gates[i].qubits == expected[i].qubits);
    REQUIRE(c.gates[i].params.size() == expected[i].params.size());
    for (std::size_t k = 0; k < expected[i].params.size(); ++k)
      CHECK(c.gates[i].params[k] == doctest::Approx(expected[i].params[k]).epsilon(1e-12));
  }

  CHECK(max_abs_diff(unitary_of(c), dense_exp(h, std::sqrt(2.0) * eps_hat)) < 1e-12);
}

TEST_CASE("weight-four blocks use six entangling gates") {
  auto p = PauliString::parse("XXXX", {1.0, 0.0});
  Circuit c = exp_pauli_term(4, p, 0.3);
  CHECK(cnot_count(c) == 6);
  PauliString unit = p;
  CHECK(max_abs_diff(unitary_of(c), expi_hermitian(unit.to_matrix(), 0.3)) < 1e-12);
}

TEST_CASE("exact scheme covers every commuting generator and rejects the rest") {
  const double eps = 0.31;
  for (auto make : {+[] { return single_mode_squeeze_h(BosonRegister(1, 2)).full(); },
                    +[] { return beam_splitter_h(BosonRegister(2, 1)); },
                    +[] { return two_mode_squeeze_h(BosonRegister(2, 1)); }}) {
    PauliSum h = make();
    Circuit c = compile_evolution(h, eps);
    CHECK(max_abs_diff(unitary_of(c), dense_exp(h, eps)) < 1e-12);
  }
  CHECK_THROWS(compile_evolution(single_mode_squeeze_h(BosonRegister(1, 4)).full(), eps));
}

TEST_CASE("half-excitation swap at the quarter-period beam splitter angle") {
  PauliSum h = beam_splitter_h(BosonRegister(2, 1));
  Matrix u = unitary_of(compile_evolution(h, kPi / 2.0));
  Vector out = u * basis_vector("1001");
  CHECK((out - I_UNIT * basis_vector("0110")).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("term grouping splits the four-level squeeze couplings into the frozen pair") {
  auto groups = commuting_groups(single_mode_squeeze_h(BosonRegister(1, 4)).weight2);
  REQUIRE(groups.size() == 2);
  REQUIRE(groups[0].size() == 4);
  CHECK(groups[0][0].axes_text() == "XIXII");
  CHECK(groups[0][1].axes_text() == "YIYII");
  CHECK(groups[0][2].axes_text() == "IXIXI");
  CHECK(groups[0][3].axes_text() == "IYIYI");
  REQUIRE(groups[1].size() == 2);
  CHECK(groups[1][0].axes_text() == "IIXIX");
  CHECK(groups[1][1].axes_text() == "IIYIY");
}

TEST_CASE("first-order stepping matches its dense product formula") {
  PauliSum h = single_mode_squeeze_h(BosonRegister(1, 4)).weight2;
  const double eps = 0.4;
  auto groups = commuting_groups(h);

  for (std::size_t n : {1u, 2u, 5u}) {
    Circuit c = compile_evolution(h, eps, {TrotterScheme::FirstOrder, n});
    // Within one step the later groups act first: the step matrix is the
    // left-to-right product of the group exponentials in canonical order.
    Matrix step = Matrix::Identity(32, 32);
    for (const auto& g : groups) step = step * dense_exp(sum_of(h.n, g), eps / double(n));
    Matrix expected = Matrix::Identity(32, 32);
    for (std::size_t k = 0; k < n; ++k) expected = step * expected;
    CHECK(max_abs_diff(unitary_of(c), expected) < 1e-11);
    CHECK(gate_histogram(c)["barrier"] == n - 1);
  }
}

TEST_CASE("symmetric stepping matches the half-full-half dense formula") {
  PauliSum h = single_mode_squeeze_h(BosonRegister(1, 4)).weight2;
  const double eps = 0.4;
  auto groups = commuting_groups(h);
  Matrix a = sum_of(h.n, groups[0]).to_matrix();
  Matrix b = sum_of(h.n, groups[1]).to_matrix();
  Matrix expected =
      expi_hermitian(a, eps / 2.0) * expi_hermitian(b, eps) * expi_hermitian(a, eps / 2.0);
  Circuit c = compile_evolution(h, eps, {TrotterScheme::Symmetric, 99});
  CHECK(max_abs_diff(unitary_of(c), expected) < 1e-11);
}

TEST_CASE("symmetric stepping beats first-order at equal cost") {
  PauliSum h = single_mode_squeeze_h(BosonRegister(1, 4)).weight2;
  const double eps = 0.2;
  Matrix exact = dense_exp(h, eps);
  double err1 = op_norm(unitary_of(compile_evolution(h, eps, {TrotterScheme::FirstOrder, 1})) -
                        exact);
  double err2 = op_norm(unitary_of(compile_evolution(h, eps, {TrotterScheme::Symmetric, 1})) -
                        exact);
  CHECK(err2 < err1);
}

TEST_CASE("state preparation lights up the one-cold pattern") {
  BosonRegister reg(1, 2);
  Circuit c = prepare_fock(reg, {0});
  Vector ground = Vector::Zero(8);
  ground(0) = 1.0;
  Vector out = unitary_of(c) * ground;
  CHECK((out - basis_vector("011")).cwiseAbs().maxCoeff() < 1e-14);

  BosonRegister two(2, 1);
  Vector g4 = Vector::Zero(16);
  g4(0) = 1.0;
  Vector out2 = unitary_of(prepare_fock(two, {1, 0})) * g4;
  CHECK((out2 - basis_vector("1001")).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("qubit basis rotations map each axis onto the readout axis") {
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    Circuit c(1);
    append_basis_rotation(c, {a});
    Matrix u = unitary_of(c);
    Matrix z = PauliString::parse("Z").to_matrix();
    PauliString p(1);
    p.axes[0] = a;
    CHECK(max_abs_diff(Matrix(u.adjoint() * z * u), p.to_matrix()) < 1e-14);
  }
}

TEST_CASE("mode-level rotations send eigenstates to codewords and keep leakage out") {
  BosonRegister reg(2, 1);

  Circuit cx(4);
  append_mode_basis_rotation(cx, reg, 0, Axis::X);
  Matrix ux = unitary_of(cx);
  const double r = 1.0 / std::sqrt(2.0);

  // Occupation bit of mode 0 lives on qubits 0 and 1; mode 1 left in "01".
  Vector plus = r * (basis_vector("0101") + basis_vector("1001"));
  Vector minus = r * (basis_vector("0101") - basis_vector("1001"));
  CHECK((ux * plus - basis_vector("0101")).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((ux * minus - basis_vector("1001")).cwiseAbs().maxCoeff() < 1e-13);

  // Leakage strings stay within the leakage span.
  for (const char* leak : {"0001", "1101"}) {
    Vector out = ux * basis_vector(leak);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      if (std::abs(out(i)) < 1e-13) continue;
      const std::size_t hi = std::size_t(i) >> 3 & 1, lo = std::size_t(i) >> 2 & 1;
      CHECK(hi == lo);  // both-cold or both-hot on the rotated pair
    }
  }

  Circuit cy(4);
  append_mode_basis_rotation(cy, reg, 1, Axis::Y);
  Matrix uy = unitary_of(cy);
  Vector yplus = r * (basis_vector("0101") + I_UNIT * basis_vector("0110"));
  Vector yminus = r * (basis_vector("0101") - I_UNIT * basis_vector("0110"));
  CHECK((uy * yplus - basis_vector("0101")).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((uy * yminus - basis_vector("0110")).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("gate statistics and depth") {
  Circuit c(3);
  c.h(0);
  c.cnot(0, 1);
  c.barrier();
  c.u1(2, 0.1);
  c.cnot(1, 2);
  auto counts = gate_histogram(c);
  CHECK(counts["h"] == 1);
  CHECK(counts["cx"] == 2);
  CHECK(counts["u1"] == 1);
  CHECK(counts["barrier"] == 1);
  CHECK(cnot_count(c) == 2);
  CHECK(single_qubit_gate_count(c) == 2);
  CHECK(depth(c) == 4);  // h | cx | (u1, cx start) with barrier sync after cx
}

TEST_CASE("qasm export carries header, gates, and measurements") {
  BosonRegister reg(1, 2);
  Circuit c = prepare_fock(reg, {0});
  c.append(compile_evolution(single_mode_squeeze_h(reg).full(), 0.1));
  c.measure_all();
  std::string qasm = to_qasm(c);
  CHECK(qasm.find("OPENQASM 2.0;") == 0);
  CHECK(qasm.find("qreg q[3];") != std::string::npos);
  CHECK(qasm.find("cx q[0],q[2];") != std::string::npos);
  CHECK(qasm.find("u2(") != std::string::npos);
  CHECK(qasm.find("measure q[2] -> c[2];") != std::string::npos);
  CHECK(qasm.find("global phase") != std::string::npos);
}

TEST_CASE("append merges gates and phases") {
  Circuit a(2), b(2);
  a.h(0);
  a.global_phase = 0.25;
  b.cnot(0, 1);
  b.global_phase = 0.5;
  a.append(b);
  CHECK(a.gates.size() == 2);
  CHECK(a.global_phase == doctest::Approx(0.75));
  Circuit wrong(3);
  CHECK_THROWS(a.append(wrong));
}
