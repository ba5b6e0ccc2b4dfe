#include "bosonq/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "json.hpp"

#include "bosonq/circuit.hpp"

namespace bosonq {

namespace {

void check_axes_label(const std::string& label) {
  for (char c : label) {
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
      throw std::invalid_argument("bad axis character '" + std::string(1, c) +
                                  "' in label '" + label + "'");
    }
  }
}

/// Z-completion of an observable: the basis that measures it directly.
std::string z_completed(const std::string& observable) {
  std::string basis = observable;
  std::replace(basis.begin(), basis.end(), 'I', 'Z');
  return basis;
}

bool compatible(const std::string& basis, const std::string& observable) {
  if (basis.size() != observable.size()) return false;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (observable[i] != 'I' && basis[i] != observable[i]) return false;
  }
  return true;
}

const std::map<std::string, double>& basis_weights(const WeightedTomograms& t,
                                                   const std::string& observable) {
  const auto exact = t.bases.find(z_completed(observable));
  if (exact != t.bases.end()) return exact->second;
  for (const auto& [label, weights] : t.bases) {
    if (compatible(label, observable)) return weights;
  }
  throw std::invalid_argument("no measured basis is compatible with observable '" +
                              observable + "'");
}

double signed_average_qubit(const std::map<std::string, double>& weights,
                            const std::string& observable) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& [bits, w] : weights) {
    int sign = 1;
    for (std::size_t i = 0; i < observable.size(); ++i) {
      if (observable[i] != 'I' && bits[i] == '1') sign = -sign;
    }
    num += sign * w;
    den += w;
  }
  if (den <= 0.0) throw std::domain_error("no weight behind observable '" + observable + "'");
  return num / den;
}

double signed_average_mode(const std::map<std::string, double>& weights,
                           const std::string& observable) {
  const std::size_t modes = observable.size();
  double num = 0.0;
  double den = 0.0;
  for (const auto& [bits, w] : weights) {
    int sign = 1;
    bool leaked = false;
    for (std::size_t m = 0; m < modes && !leaked; ++m) {
      const char a = bits[2 * m];
      const char b = bits[2 * m + 1];
      if (a == '0' && b == '1') {
        // logical 0: eigenvalue +1
      } else if (a == '1' && b == '0') {
        if (observable[m] != 'I') sign = -sign;
      } else {
        leaked = true;
      }
    }
    if (leaked) continue;
    num += sign * w;
    den += w;
  }
  if (den <= 0.0) {
    throw std::domain_error("every shot leaked out of the encoding for observable '" +
                            observable + "'");
  }
  return num / den;
}

Eigen::MatrixXd kron_real(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::size_t qubits_of_dimension(Eigen::Index dim, const char* who) {
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw std::invalid_argument(std::string(who) + ": dimension is not a power of two");
  }
  return n;
}

Eigen::VectorXd counts_vector(const Counts& c, std::size_t n_qubits) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(Eigen::Index{1} << n_qubits);
  for (const auto& [bits, n] : c.histogram) {
    if (bits.size() != n_qubits) {
      throw std::invalid_argument("bitstring width mismatch in counts");
    }
    v(static_cast<Eigen::Index>(bitstring_index(bits))) += static_cast<double>(n);
  }
  return v;
}

}  // namespace

void TomogramSet::insert(const std::string& basis, Counts counts) {
  check_axes_label(basis);
  for (const auto& [bits, n] : counts.histogram) {
    (void)n;
    if (n_qubits == 0) n_qubits = bits.size();
    if (bits.size() != n_qubits) {
      throw std::invalid_argument("tomogram bitstrings must share one register width");
    }
  }
  counts.basis = basis;
  bases[basis] = std::move(counts);
}

WeightedTomograms weights_of(const TomogramSet& t) {
  WeightedTomograms out;
  out.n_qubits = t.n_qubits;
  for (const auto& [label, counts] : t.bases) {
    auto& w = out.bases[label];
    for (const auto& [bits, n] : counts.histogram) w[bits] = static_cast<double>(n);
  }
  return out;
}

Eigen::Matrix2d ConfusionMatrix::matrix_for(std::size_t q) const {
  if (qubit.empty()) return Eigen::Matrix2d::Identity();
  return qubit[std::min(q, qubit.size() - 1)];
}

Eigen::MatrixXd ConfusionMatrix::full(std::size_t n_qubits) const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Ones(1, 1);
  for (std::size_t q = 0; q < n_qubits; ++q) a = kron_real(a, matrix_for(q));
  return a;
}

ConfusionMatrix calibration_confusion(const NoiseModel& nm, std::size_t n_qubits) {
  nm.validate();
  ConfusionMatrix out;
  out.qubit.reserve(n_qubits);
  for (std::size_t q = 0; q < n_qubits; ++q) {
    const ReadoutError r = nm.readout_for(q);
    Eigen::Matrix2d m;
    m << 1.0 - r.p01, r.p10, r.p01, 1.0 - r.p10;
    out.qubit.push_back(m);
  }
  return out;
}

ConfusionMatrix calibration_confusion(const Counts& all_zeros, const Counts& all_ones) {
  if (all_zeros.total == 0 || all_ones.total == 0) {
    throw std::invalid_argument("calibration runs must contain shots");
  }
  const std::size_t n = all_zeros.histogram.begin()->first.size();
  std::vector<double> ones_seen_zero(n, 0.0);
  std::vector<double> zeros_seen_one(n, 0.0);
  for (const auto& [bits, count] : all_zeros.histogram) {
    if (bits.size() != n) throw std::invalid_argument("calibration width mismatch");
    for (std::size_t q = 0; q < n; ++q) {
      if (bits[q] == '1') ones_seen_zero[q] += static_cast<double>(count);
    }
  }
  for (const auto& [bits, count] : all_ones.histogram) {
    if (bits.size() != n) throw std::invalid_argument("calibration width mismatch");
    for (std::size_t q = 0; q < n; ++q) {
      if (bits[q] == '0') zeros_seen_one[q] += static_cast<double>(count);
    }
  }
  ConfusionMatrix out;
  out.qubit.reserve(n);
  for (std::size_t q = 0; q < n; ++q) {
    const double p01 = ones_seen_zero[q] / static_cast<double>(all_zeros.total);
    const double p10 = zeros_seen_one[q] / static_cast<double>(all_ones.total);
    Eigen::Matrix2d m;
    m << 1.0 - p01, p10, p01, 1.0 - p10;
    out.qubit.push_back(m);
  }
  return out;
}

Eigen::VectorXd mitigate(const Eigen::VectorXd& observed, const ConfusionMatrix& a) {
  const std::size_t n = qubits_of_dimension(observed.size(), "mitigate");
  for (std::size_t q = 0; q < n; ++q) {
    if (std::abs(a.matrix_for(q).determinant()) < 1e-12) {
      throw std::invalid_argument("mitigate: confusion matrix is singular");
    }
  }
  const double mass = observed.sum();
  if (mass <= 0.0) throw std::invalid_argument("mitigate: observed distribution is empty");

  const Eigen::Index dim = observed.size();
  const Eigen::VectorXd c = observed / mass;
  const Eigen::MatrixXd A = a.full(n);
  const Eigen::MatrixXd Q = A.transpose() * A;
  const Eigen::VectorXd b = A.transpose() * c;

  // Active-set method for: minimize ||A x - c||^2 with x >= 0, sum(x) = 1.
  // Variables pinned at zero form the active set; the rest solve the
  // equality-constrained normal equations. A pinned variable is released when
  // its bound multiplier 2*(Q x - b)_i + nu turns negative.
  std::vector<bool> active(static_cast<std::size_t>(dim), false);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
  const double feas_tol = 1e-12;
  const double release_tol = 1e-10;
  const int max_iter = 16 * static_cast<int>(dim) + 64;
  bool converged = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<Eigen::Index> free_idx;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (!active[static_cast<std::size_t>(i)]) free_idx.push_back(i);
    }
    const Eigen::Index k = static_cast<Eigen::Index>(free_idx.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
    Eigen::VectorXd rhs(k + 1);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index s = 0; s < k; ++s) kkt(r, s) = 2.0 * Q(free_idx[r], free_idx[s]);
      kkt(r, k) = 1.0;
      kkt(k, r) = 1.0;
      rhs(r) = 2.0 * b(free_idx[r]);
    }
    rhs(k) = 1.0;
    const Eigen::VectorXd sol = kkt.partialPivLu().solve(rhs);

    Eigen::Index worst = -1;
    double worst_val = -feas_tol;
    for (Eigen::Index r = 0; r < k; ++r) {
      if (sol(r) < worst_val) {
        worst_val = sol(r);
        worst = free_idx[r];
      }
    }
    if (worst >= 0) {
      active[static_cast<std::size_t>(worst)] = true;
      continue;
    }

    x.setZero();
    for (Eigen::Index r = 0; r < k; ++r) x(free_idx[r]) = std::max(sol(r), 0.0);
    const double nu = sol(k);
    const Eigen::VectorXd grad = 2.0 * (Q * x - b);
    Eigen::Index release = -1;
    double release_val = -release_tol;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (active[static_cast<std::size_t>(i)] && grad(i) + nu < release_val) {
        release_val = grad(i) + nu;
        release = i;
      }
    }
    if (release >= 0) {
      active[static_cast<std::size_t>(release)] = false;
      continue;
    }
    converged = true;
    break;
  }
  if (!converged) throw std::runtime_error("mitigate: active-set solver did not converge");
  const double total = x.sum();
  if (total > 0.0) x /= total;
  return x;
}

std::map<std::string, double> mitigate(const Counts& c, const ConfusionMatrix& a) {
  if (c.total == 0) throw std::invalid_argument("mitigate: counts are empty");
  const std::size_t n = c.histogram.begin()->first.size();
  const Eigen::VectorXd x = mitigate(counts_vector(c, n), a);
  std::map<std::string, double> out;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) > 0.0) out[index_bitstring(static_cast<std::size_t>(i), n)] = x(i);
  }
  return out;
}

WeightedTomograms mitigate(const TomogramSet& t, const ConfusionMatrix& a) {
  WeightedTomograms out;
  out.n_qubits = t.n_qubits;
  for (const auto& [label, counts] : t.bases) out.bases[label] = mitigate(counts, a);
  return out;
}

PostSelected post_select(const Counts& c, const std::set<std::string>& keep) {
  PostSelected out;
  out.counts.basis = c.basis;
  out.counts.seed = c.seed;
  std::size_t kept = 0;
  for (const auto& [bits, n] : c.histogram) {
    if (keep.count(bits) != 0) {
      out.counts.histogram[bits] = n;
      kept += n;
    }
  }
  out.counts.total = kept;
  out.retained_fraction =
      c.total == 0 ? 0.0 : static_cast<double>(kept) / static_cast<double>(c.total);
  return out;
}

PostSelectedWeights post_select(const std::map<std::string, double>& w,
                                const std::set<std::string>& keep) {
  PostSelectedWeights out;
  double total = 0.0;
  double kept = 0.0;
  for (const auto& [bits, weight] : w) {
    total += weight;
    if (keep.count(bits) != 0) {
      out.weights[bits] = weight;
      kept += weight;
    }
  }
  out.retained_fraction = total <= 0.0 ? 0.0 : kept / total;
  return out;
}

std::set<std::string> codeword_set(const BosonRegister& reg) {
  const auto words = codewords(reg);
  return {words.begin(), words.end()};
}

double expectation(const WeightedTomograms& t, const std::string& observable,
                   MeasurementLevel level) {
  check_axes_label(observable);
  if (level == MeasurementLevel::Qubit) {
    if (observable.size() != t.n_qubits) {
      throw std::invalid_argument("observable width must match the register");
    }
    return signed_average_qubit(basis_weights(t, observable), observable);
  }
  if (observable.size() * 2 != t.n_qubits) {
    throw std::invalid_argument("mode observables need two qubits per mode");
  }
  return signed_average_mode(basis_weights(t, observable), observable);
}

double expectation(const TomogramSet& t, const std::string& observable,
                   MeasurementLevel level) {
  return expectation(weights_of(t), observable, level);
}

std::vector<std::string> tomography_bases(std::size_t n_qubits) {
  std::vector<std::string> out{""};
  for (std::size_t q = 0; q < n_qubits; ++q) {
    std::vector<std::string> next;
    next.reserve(out.size() * 3);
    for (const auto& prefix : out) {
      for (char axis : {'X', 'Y', 'Z'}) next.push_back(prefix + axis);
    }
    out = std::move(next);
  }
  return out;
}

TomographyResult tomography(const WeightedTomograms& t, bool project_psd) {
  const std::size_t n = t.n_qubits;
  if (n < 1 || n > 4) throw std::invalid_argument("tomography supports 1 to 4 qubits");
  for (const auto& label : tomography_bases(n)) {
    if (t.bases.find(label) == t.bases.end()) {
      throw std::invalid_argument("tomography: missing basis " + label);
    }
  }

  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix rho = Matrix::Zero(dim, dim);
  std::vector<std::string> paulis{""};
  for (std::size_t q = 0; q < n; ++q) {
    std::vector<std::string> next;
    next.reserve(paulis.size() * 4);
    for (const auto& prefix : paulis) {
      for (char axis : {'I', 'X', 'Y', 'Z'}) next.push_back(prefix + axis);
    }
    paulis = std::move(next);
  }
  for (const auto& label : paulis) {
    const PauliString p = PauliString::parse(label);
    const double ev = p.is_identity_axes() ? 1.0 : expectation(t, label, MeasurementLevel::Qubit);
    rho += ev * p.to_matrix();
  }
  rho /= static_cast<double>(dim);
  rho = ((rho + Matrix(rho.adjoint())) / 2.0).eval();

  TomographyResult out;
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.positive = out.min_eigenvalue >= -1e-10;
  if (project_psd && out.min_eigenvalue < 0.0) {
    Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
    vals /= vals.sum();
    rho = es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
    out.min_eigenvalue = 0.0;
    out.positive = true;
  }
  out.rho = std::move(rho);
  return out;
}

TomographyResult tomography(const TomogramSet& t, bool project_psd) {
  return tomography(weights_of(t), project_psd);
}

WeightedTomograms analytic_tomograms(const Matrix& rho,
                                     const std::vector<std::string>& bases,
                                     MeasurementLevel level) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("state must be square");
  const std::size_t n = qubits_of_dimension(rho.rows(), "analytic_tomograms");
  WeightedTomograms out;
  out.n_qubits = n;
  for (const auto& label : bases) {
    check_axes_label(label);
    Circuit rot(n);
    if (level == MeasurementLevel::Qubit) {
      if (label.size() != n) throw std::invalid_argument("basis width must match the register");
      std::vector<Axis> axes;
      axes.reserve(n);
      for (char c : label) axes.push_back(axis_from_char(c));
      append_basis_rotation(rot, axes);
    } else {
      if (label.size() * 2 != n) {
        throw std::invalid_argument("mode bases need two qubits per mode");
      }
      const BosonRegister reg(label.size(), 1);
      for (std::size_t m = 0; m < label.size(); ++m) {
        append_mode_basis_rotation(rot, reg, m, axis_from_char(label[m]));
      }
    }
    const Matrix u = unitary_of(rot);
    const Matrix rotated = u * rho * u.adjoint();
    auto& weights = out.bases[label];
    for (Eigen::Index i = 0; i < rotated.rows(); ++i) {
      weights[index_bitstring(static_cast<std::size_t>(i), n)] = rotated(i, i).real();
    }
  }
  return out;
}

Vector perturbative_state_sm(double epsilon) {
  if (!(std::abs(epsilon) < 0.5)) {
    throw std::domain_error("perturbative squeeze state needs |epsilon| < 0.5");
  }
  const double e2 = epsilon * epsilon;
  const double norm = std::sqrt(1.0 + e2 * e2);
  Vector psi = Vector::Zero(8);
  psi(static_cast<Eigen::Index>(bitstring_index("011"))) = complexd((1.0 - e2) / norm, 0.0);
  psi(static_cast<Eigen::Index>(bitstring_index("110"))) =
      complexd(0.0, std::numbers::sqrt2 * epsilon / norm);
  return psi;
}

Vector bs_exact_state(double epsilon) {
  Vector psi = Vector::Zero(16);
  psi(static_cast<Eigen::Index>(bitstring_index("1001"))) = complexd(std::cos(epsilon), 0.0);
  psi(static_cast<Eigen::Index>(bitstring_index("0110"))) = complexd(0.0, std::sin(epsilon));
  return psi;
}

Vector bs_exact_state_logical(double epsilon) {
  Vector psi = Vector::Zero(4);
  psi(static_cast<Eigen::Index>(bitstring_index("10"))) = complexd(std::cos(epsilon), 0.0);
  psi(static_cast<Eigen::Index>(bitstring_index("01"))) = complexd(0.0, std::sin(epsilon));
  return psi;
}

double fidelity_pure(const Vector& psi, const Matrix& rho) {
  if (rho.rows() != rho.cols() || psi.size() != rho.rows()) {
    throw std::invalid_argument("fidelity_pure: state dimensions do not match");
  }
  return (psi.adjoint() * rho * psi).value().real();
}

double fidelity_sm_tomographic(const WeightedTomograms& t, double epsilon) {
  if (t.n_qubits != 3) {
    throw std::invalid_argument("squeeze fidelity needs a three-qubit tomogram");
  }
  const auto ev = [&](const char* p) { return expectation(t, p, MeasurementLevel::Qubit); };
  const double e2 = epsilon * epsilon;
  const double e4 = e2 * e2;
  // Exact Pauli weights of the normalized perturbative target: the three
  // groups carry (1 + e^4), (1 - 4 e^2 + e^4) and 2 sqrt(2) e (1 - e^2) over
  // the shared norm 1 + e^4.
  const double f = (1.0 + e4) * (1.0 + ev("ZZZ") - ev("IZI") - ev("ZIZ")) +
                   (1.0 - 4.0 * e2 + e4) * (ev("ZII") + ev("IZZ") - ev("IIZ") - ev("ZZI")) +
                   2.0 * std::numbers::sqrt2 * epsilon * (1.0 - e2) *
                       (ev("XZY") + ev("YIX") - ev("XIY") - ev("YZX"));
  return f / (8.0 * (1.0 + e4));
}

double fidelity_sm_tomographic(const TomogramSet& t, double epsilon) {
  return fidelity_sm_tomographic(weights_of(t), epsilon);
}

std::vector<std::string> sm_fidelity_bases() { return {"XZY", "YZX", "ZZZ"}; }

double fidelity_bs_tomographic(const WeightedTomograms& t, double epsilon) {
  if (t.n_qubits != 4) {
    throw std::invalid_argument("beam-splitter fidelity needs a two-mode tomogram");
  }
  const auto ev = [&](const char* p) { return expectation(t, p, MeasurementLevel::Mode); };
  const double c = std::cos(epsilon);
  return 0.25 * (1.0 - ev("ZZ") + std::sin(2.0 * epsilon) * (ev("XY") - ev("YX")) +
                 (1.0 - 2.0 * c * c) * (ev("ZI") - ev("IZ")));
}

double fidelity_bs_tomographic(const TomogramSet& t, double epsilon) {
  return fidelity_bs_tomographic(weights_of(t), epsilon);
}

std::vector<std::string> bs_fidelity_bases() { return {"XY", "YX", "ZZ"}; }

double fidelity_p0(const Counts& c, const BosonRegister& reg) {
  if (c.total == 0) throw std::domain_error("vacuum fidelity needs retained shots");
  const std::string vac = fock_to_bitstring(reg, std::vector<std::size_t>(reg.n_modes, 0));
  const auto it = c.histogram.find(vac);
  const double hits = it == c.histogram.end() ? 0.0 : static_cast<double>(it->second);
  return hits / static_cast<double>(c.total);
}

double fidelity_p0(const std::map<std::string, double>& w, const BosonRegister& reg) {
  double total = 0.0;
  for (const auto& [bits, weight] : w) {
    (void)bits;
    total += weight;
  }
  if (total <= 0.0) throw std::domain_error("vacuum fidelity needs retained weight");
  const std::string vac = fock_to_bitstring(reg, std::vector<std::size_t>(reg.n_modes, 0));
  const auto it = w.find(vac);
  return (it == w.end() ? 0.0 : it->second) / total;
}

std::string tomograms_to_jsonl(const TomogramSet& t) {
  std::ostringstream out;
  for (const auto& [label, counts] : t.bases) {
    for (const auto& [bits, n] : counts.histogram) {
      nlohmann::json line;
      line["basis"] = label;
      line["bitstring"] = bits;
      line["count"] = n;
      out << line.dump() << '\n';
    }
  }
  return out.str();
}

TomogramSet tomograms_from_jsonl(const std::string& text) {
  TomogramSet t;
  std::map<std::string, Counts> staged;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    const std::string basis = j.at("basis").get<std::string>();
    const std::string bits = j.at("bitstring").get<std::string>();
    const std::size_t count = j.at("count").get<std::size_t>();
    Counts& c = staged[basis];
    c.histogram[bits] += count;
    c.total += count;
  }
  for (auto& [basis, counts] : staged) t.insert(basis, std::move(counts));
  return t;
}

}  // namespace bosonq
