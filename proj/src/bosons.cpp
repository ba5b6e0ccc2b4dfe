#include "bosonq/bosons.hpp"

#include <cmath>
#include <stdexcept>

namespace bosonq {

BosonRegister::BosonRegister(std::size_t modes, std::size_t exc)
    : n_modes(modes), max_exc(exc) {
  if (modes == 0) throw std::invalid_argument("register needs at least one mode");
  if (exc == 0) throw std::invalid_argument("register needs at least one excitation level");
}

std::size_t BosonRegister::qubit_offset(std::size_t mode) const {
  if (mode >= n_modes) throw std::invalid_argument("mode index out of range");
  return mode * levels();
}

std::string fock_to_bitstring(const BosonRegister& reg, const std::vector<std::size_t>& occ) {
  if (occ.size() != reg.n_modes)
    throw std::invalid_argument("occupation tuple size must match mode count");
  std::string bits(reg.n_qubits(), '1');
  for (std::size_t m = 0; m < reg.n_modes; ++m) {
    if (occ[m] > reg.max_exc) throw std::invalid_argument("occupation exceeds truncation");
    bits[reg.qubit_offset(m) + occ[m]] = '0';
  }
  return bits;
}

std::vector<std::string> codewords(const BosonRegister& reg) {
  std::vector<std::string> out;
  std::vector<std::size_t> occ(reg.n_modes, 0);
  const std::size_t L = reg.levels();
  const std::size_t total = [&] {
    std::size_t t = 1;
    for (std::size_t m = 0; m < reg.n_modes; ++m) t *= L;
    return t;
  }();
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rem = k;
    for (std::size_t m = reg.n_modes; m-- > 0;) {
      occ[m] = rem % L;
      rem /= L;
    }
    out.push_back(fock_to_bitstring(reg, occ));
  }
  return out;
}

PauliSum creation_op(const BosonRegister& reg, std::size_t mode) {
  const std::size_t n = reg.n_qubits();
  const std::size_t o = reg.qubit_offset(mode);
  PauliSum sum(n);
  for (std::size_t k = 0; k < reg.max_exc; ++k) {
    PauliSum hop = mul(sigma_minus(n, o + k), sigma_plus(n, o + k + 1));
    sum = add(sum, scale(hop, {std::sqrt(double(k + 1)), 0.0}));
  }
  return sum;
}

PauliSum SqueezeHamiltonian::full() const { return simplify(add(weight2, weight4)); }

SqueezeHamiltonian single_mode_squeeze_h(const BosonRegister& reg, bool allow_any_truncation) {
  if (reg.n_modes != 1)
    throw std::invalid_argument("squeeze hamiltonian is single-mode");
  if (!allow_any_truncation && reg.max_exc != 2 && reg.max_exc != 4)
    throw std::invalid_argument("squeeze hamiltonian supports truncation at 2 or 4 excitations");
  PauliSum bdag = creation_op(reg, 0);
  PauliSum b = adjoint(bdag);
  PauliSum h = simplify(add(mul(bdag, bdag), mul(b, b)));
  SqueezeHamiltonian parts{weight_part(h, 2), weight_part(h, 4)};
  // The ladder structure only ever produces those two weights; anything else
  // would mean the expansion above is broken.
  if (parts.weight2.terms.size() + parts.weight4.terms.size() != h.terms.size())
    throw std::logic_error("squeeze expansion produced unexpected string weights");
  return parts;
}

PauliSum weight_part(const PauliSum& s, std::size_t w) {
  PauliSum out(s.n);
  for (const auto& t : s.terms)
    if (t.weight() == w) out.terms.push_back(t);
  return simplify(out);
}

namespace {
void require_two_mode_single_exc(const BosonRegister& reg, const char* what) {
  if (reg.n_modes != 2 || reg.max_exc != 1)
    throw std::invalid_argument(std::string(what) +
                                " needs two modes truncated at one excitation");
}
}  // namespace

PauliSum beam_splitter_h(const BosonRegister& reg) {
  require_two_mode_single_exc(reg, "beam splitter hamiltonian");
  PauliSum bdag = creation_op(reg, 0);
  PauliSum a = adjoint(creation_op(reg, 1));
  PauliSum hop = mul(bdag, a);
  return add(hop, adjoint(hop));
}

PauliSum two_mode_squeeze_h(const BosonRegister& reg) {
  require_two_mode_single_exc(reg, "two-mode squeeze hamiltonian");
  PauliSum bdag = creation_op(reg, 0);
  PauliSum adag = creation_op(reg, 1);
  PauliSum pair = mul(bdag, adag);
  return add(pair, adjoint(pair));
}

std::size_t bitstring_index(const std::string& bits) {
  std::size_t idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bitstring must be over {0,1}");
    idx = (idx << 1) | std::size_t(c - '0');
  }
  return idx;
}

std::string index_bitstring(std::size_t index, std::size_t n_qubits) {
  std::string bits(n_qubits, '0');
  for (std::size_t q = 0; q < n_qubits; ++q)
    bits[n_qubits - 1 - q] = char('0' + ((index >> q) & 1));
  return bits;
}

Matrix restrict_to_codewords(const BosonRegister& reg, const Matrix& op) {
  const auto cw = codewords(reg);
  const Eigen::Index dim = Eigen::Index(1) << reg.n_qubits();
  if (op.rows() != dim || op.cols() != dim)
    throw std::invalid_argument("operator dimension does not match register");
  Matrix out(cw.size(), cw.size());
  for (std::size_t r = 0; r < cw.size(); ++r)
    for (std::size_t c = 0; c < cw.size(); ++c)
      out(r, c) = op(bitstring_index(cw[r]), bitstring_index(cw[c]));
  return out;
}

}  // namespace bosonq
