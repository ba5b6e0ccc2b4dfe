#include "bosonq/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace bosonq {

char axis_char(Axis a) {
  switch (a) {
    case Axis::I: return 'I';
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    case Axis::Z: return 'Z';
  }
  throw std::logic_error("bad axis");
}

Axis axis_from_char(char c) {
  switch (c) {
    case 'I': return Axis::I;
    case 'X': return Axis::X;
    case 'Y': return Axis::Y;
    case 'Z': return Axis::Z;
    default: throw std::invalid_argument(std::string("bad axis character: ") + c);
  }
}

PauliString::PauliString(std::size_t n_qubits, complexd c)
    : axes(n_qubits, Axis::I), coeff(c) {}

PauliString PauliString::parse(const std::string& text, complexd c) {
  PauliString p(text.size(), c);
  for (std::size_t q = 0; q < text.size(); ++q) p.axes[q] = axis_from_char(text[q]);
  return p;
}

std::size_t PauliString::weight() const {
  std::size_t w = 0;
  for (Axis a : axes)
    if (a != Axis::I) ++w;
  return w;
}

std::vector<std::size_t> PauliString::support() const {
  std::vector<std::size_t> s;
  for (std::size_t q = 0; q < axes.size(); ++q)
    if (axes[q] != Axis::I) s.push_back(q);
  return s;
}

std::string PauliString::axes_text() const {
  std::string t(axes.size(), 'I');
  for (std::size_t q = 0; q < axes.size(); ++q) t[q] = axis_char(axes[q]);
  return t;
}

std::string PauliString::text() const {
  std::ostringstream os;
  os << coeff.real();
  if (coeff.imag() != 0.0) os << (coeff.imag() > 0 ? "+" : "") << coeff.imag() << "i";
  os << " * " << axes_text();
  return os.str();
}

namespace {

const Matrix& axis_matrix(Axis a) {
  static const Matrix i = Matrix::Identity(2, 2);
  static const Matrix x = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  static const Matrix y = (Matrix(2, 2) << 0, -I_UNIT, I_UNIT, 0).finished();
  static const Matrix z = (Matrix(2, 2) << 1, 0, 0, -1).finished();
  switch (a) {
    case Axis::I: return i;
    case Axis::X: return x;
    case Axis::Y: return y;
    case Axis::Z: return z;
  }
  throw std::logic_error("bad axis");
}

// Single-qubit products: result axis and phase for a*b, indexed [a][b].
// Phase codes: 0 -> 1, 1 -> i, 2 -> -1, 3 -> -i (powers of i).
struct MulEntry {
  Axis axis;
  std::uint8_t phase_pow;
};

constexpr MulEntry kMulTable[4][4] = {
    // a = I
    {{Axis::I, 0}, {Axis::X, 0}, {Axis::Y, 0}, {Axis::Z, 0}},
    // a = X
    {{Axis::X, 0}, {Axis::I, 0}, {Axis::Z, 1}, {Axis::Y, 3}},
    // a = Y
    {{Axis::Y, 0}, {Axis::Z, 3}, {Axis::I, 0}, {Axis::X, 1}},
    // a = Z
    {{Axis::Z, 0}, {Axis::Y, 1}, {Axis::X, 3}, {Axis::I, 0}},
};

complexd phase_from_pow(std::uint8_t pow4) {
  switch (pow4 & 3) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

}  // namespace

Matrix PauliString::to_matrix() const {
  Matrix m = Matrix::Identity(1, 1);
  for (Axis a : axes) m = kron(m, axis_matrix(a));
  return coeff * m;
}

PauliString mul(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits())
    throw std::invalid_argument("pauli product: qubit count mismatch");
  PauliString out(a.n_qubits(), a.coeff * b.coeff);
  std::uint8_t pow4 = 0;
  for (std::size_t q = 0; q < a.axes.size(); ++q) {
    const MulEntry& e = kMulTable[static_cast<int>(a.axes[q])][static_cast<int>(b.axes[q])];
    out.axes[q] = e.axis;
    pow4 = static_cast<std::uint8_t>(pow4 + e.phase_pow);
  }
  out.coeff *= phase_from_pow(pow4);
  return out;
}

bool commutes(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits())
    throw std::invalid_argument("pauli commute: qubit count mismatch");
  std::size_t anti = 0;
  for (std::size_t q = 0; q < a.axes.size(); ++q) {
    Axis x = a.axes[q], y = b.axes[q];
    if (x != Axis::I && y != Axis::I && x != y) ++anti;
  }
  return anti % 2 == 0;
}

PauliSum& PauliSum::add(const PauliString& t) {
  if (t.n_qubits() != n) throw std::invalid_argument("pauli sum: qubit count mismatch");
  terms.push_back(t);
  return *this;
}

std::string PauliSum::text() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (k) os << " + ";
    os << terms[k].text();
  }
  return os.str();
}

Matrix PauliSum::to_matrix() const {
  const Eigen::Index dim = Eigen::Index(1) << n;
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& t : terms) m += t.to_matrix();
  return m;
}

PauliSum simplify(const PauliSum& s) {
  std::map<std::vector<Axis>, complexd> acc;
  for (const auto& t : s.terms) acc[t.axes] += t.coeff;
  PauliSum out(s.n);
  for (const auto& [axes, c] : acc) {
    if (std::abs(c) < kCoeffPrune) continue;
    PauliString t;
    t.axes = axes;
    t.coeff = c;
    out.terms.push_back(std::move(t));
  }
  return out;
}

PauliSum add(const PauliSum& a, const PauliSum& b) {
  if (a.n != b.n) throw std::invalid_argument("pauli sum add: qubit count mismatch");
  PauliSum out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return simplify(out);
}

PauliSum sub(const PauliSum& a, const PauliSum& b) { return add(a, scale(b, {-1, 0})); }

PauliSum scale(const PauliSum& a, complexd c) {
  PauliSum out = a;
  for (auto& t : out.terms) t.coeff *= c;
  return simplify(out);
}

PauliSum mul(const PauliSum& a, const PauliSum& b) {
  if (a.n != b.n) throw std::invalid_argument("pauli sum mul: qubit count mismatch");
  PauliSum out(a.n);
  for (const auto& x : a.terms)
    for (const auto& y : b.terms) out.terms.push_back(mul(x, y));
  return simplify(out);
}

PauliSum adjoint(const PauliSum& a) {
  PauliSum out = a;
  for (auto& t : out.terms) t.coeff = std::conj(t.coeff);
  return simplify(out);
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) {
  return sub(mul(a, b), mul(b, a));
}

bool commutes_pairwise(const PauliSum& s) {
  for (std::size_t i = 0; i < s.terms.size(); ++i)
    for (std::size_t j = i + 1; j < s.terms.size(); ++j)
      if (!commutes(s.terms[i], s.terms[j])) return false;
  return true;
}

bool is_hermitian(const PauliSum& s) {
  PauliSum c = simplify(s);
  for (const auto& t : c.terms)
    if (std::abs(t.coeff.imag()) > 1e-12) return false;
  return true;
}

namespace {
PauliSum ladder(std::size_t n_qubits, std::size_t qubit, double y_sign) {
  if (qubit >= n_qubits) throw std::invalid_argument("ladder operator: qubit out of range");
  PauliSum s(n_qubits);
  PauliString x(n_qubits, {0.5, 0.0});
  x.axes[qubit] = Axis::X;
  PauliString y(n_qubits, complexd{0.0, 0.5 * y_sign});
  y.axes[qubit] = Axis::Y;
  s.add(x).add(y);
  return s;
}
}  // namespace

PauliSum sigma_plus(std::size_t n_qubits, std::size_t qubit) {
  return ladder(n_qubits, qubit, +1.0);
}

PauliSum sigma_minus(std::size_t n_qubits, std::size_t qubit) {
  return ladder(n_qubits, qubit, -1.0);
}

}  // namespace bosonq
