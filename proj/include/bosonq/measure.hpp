#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bosonq/bosons.hpp"
#include "bosonq/matrix.hpp"
#include "bosonq/sim.hpp"

namespace bosonq {

/// Whether labels address physical qubits or encoded two-level modes.
enum class MeasurementLevel { Qubit, Mode };

/// Counts collected in several measurement bases of one prepared state.
/// Every Counts entry must describe the same register width; basis labels are
/// one axis letter per qubit (qubit level) or per mode (mode level).
struct TomogramSet {
  std::size_t n_qubits = 0;
  std::map<std::string, Counts> bases;

  /// Adds one basis worth of counts, checking bitstring widths against
  /// n_qubits (adopting the width on first insert).
  void insert(const std::string& basis, Counts counts);
};

/// Same shape as TomogramSet but with real-valued weights per bitstring, so
/// exact Born probabilities and mitigated quasi-distributions can flow through
/// the same estimators as raw counts.
struct WeightedTomograms {
  std::size_t n_qubits = 0;
  std::map<std::string, std::map<std::string, double>> bases;
};

/// Raw counts reinterpreted as weights.
WeightedTomograms weights_of(const TomogramSet& t);

/// Per-qubit readout confusion under a tensor-product model. Each matrix is
/// column stochastic: column j holds the distribution of the observed bit when
/// the true bit is j. Qubits beyond the end of the vector reuse the last
/// entry, mirroring NoiseModel::readout.
struct ConfusionMatrix {
  std::vector<Eigen::Matrix2d> qubit;

  Eigen::Matrix2d matrix_for(std::size_t q) const;
  /// Tensor product over the full register, qubit 0 as the leftmost factor.
  Eigen::MatrixXd full(std::size_t n_qubits) const;
};

/// Confusion predicted by a noise model's readout rates.
ConfusionMatrix calibration_confusion(const NoiseModel& nm, std::size_t n_qubits);

/// Maximum-likelihood per-qubit flip rates from two calibration runs: one
/// preparing every qubit in |0>, one preparing every qubit in |1>. Throws if
/// either run has zero shots.
ConfusionMatrix calibration_confusion(const Counts& all_zeros, const Counts& all_ones);

/// Readout mitigation: the closest true distribution explaining `observed`,
///   minimize ||A x - observed||_2  subject to  x >= 0 and sum(x) = 1,
/// solved exactly by an active-set method. `observed` is indexed like the
/// computational basis (qubit 0 most significant) and is normalized first.
Eigen::VectorXd mitigate(const Eigen::VectorXd& observed, const ConfusionMatrix& a);

/// Counts convenience overload; returns the nonzero weights keyed by bitstring.
std::map<std::string, double> mitigate(const Counts& c, const ConfusionMatrix& a);

/// Applies mitigation to every basis of a tomogram set.
WeightedTomograms mitigate(const TomogramSet& t, const ConfusionMatrix& a);

/// Counts restricted to a codeword set plus the fraction of shots retained.
/// An empty result (retained_fraction == 0) marks a degenerate run; downstream
/// fidelity estimators reject it.
struct PostSelected {
  Counts counts;
  double retained_fraction = 0.0;
};
PostSelected post_select(const Counts& c, const std::set<std::string>& keep);

struct PostSelectedWeights {
  std::map<std::string, double> weights;
  double retained_fraction = 0.0;
};
PostSelectedWeights post_select(const std::map<std::string, double>& w,
                                const std::set<std::string>& keep);

/// Codewords of a register as a set, for post-selection.
std::set<std::string> codeword_set(const BosonRegister& reg);

/// Expectation value of a tensor observable over {I,X,Y,Z} estimated from the
/// tomograms. The basis used is the observable with identities completed to Z
/// when that basis was measured, otherwise the first compatible basis (equal on
/// every non-identity position). Qubit level: the eigenvalue of an outcome is
/// the bit parity over the observable's support. Mode level: each two-qubit
/// block is classified as "01" -> +1, "10" -> -1, anything else is discarded
/// (post-selection is built in). Throws if no compatible basis exists or no
/// weight survives.
double expectation(const WeightedTomograms& t, const std::string& observable,
                   MeasurementLevel level);
double expectation(const TomogramSet& t, const std::string& observable,
                   MeasurementLevel level);

/// All 3^n qubit-level basis labels over {X,Y,Z}, lexicographic.
std::vector<std::string> tomography_bases(std::size_t n_qubits);

/// Linear-inversion state reconstruction from a complete set of 3^n bases:
/// rho = 2^-n * sum_P <P> P over all Pauli strings, <I..I> fixed to 1. The
/// estimate is hermitian with unit trace but may fail to be positive; it is
/// returned as-is with its smallest eigenvalue unless project_psd is set, in
/// which case negative eigenvalues are clipped and the spectrum renormalized.
struct TomographyResult {
  Matrix rho;
  double min_eigenvalue = 0.0;
  bool positive = true;
};
TomographyResult tomography(const WeightedTomograms& t, bool project_psd = false);
TomographyResult tomography(const TomogramSet& t, bool project_psd = false);

/// Exact Born weights of `rho` measured in each listed basis: the infinite-shot
/// analogue of running the basis-rotation circuits and counting. Qubit level
/// rotates single qubits; mode level rotates encoded mode pairs of a two-level
/// register and keys weights by physical bitstrings.
WeightedTomograms analytic_tomograms(const Matrix& rho,
                                     const std::vector<std::string>& bases,
                                     MeasurementLevel level);

/// Second-order small-angle state of the single-mode squeeze acting on vacuum,
/// normalized: ((1 - eps^2)|011> + i sqrt(2) eps |110>) / sqrt(1 + eps^4).
/// Requires |eps| < 0.5.
Vector perturbative_state_sm(double epsilon);

/// Exact beam-splitter image of one excitation in the first mode:
/// cos(eps)|1001> + i sin(eps)|0110> on the four-qubit encoding.
Vector bs_exact_state(double epsilon);
/// The same state on the two-qubit mode level: cos(eps)|10> + i sin(eps)|01>.
Vector bs_exact_state_logical(double epsilon);

/// Overlap fidelity Re <psi|rho|psi> of a pure target with a state estimate.
double fidelity_pure(const Vector& psi, const Matrix& rho);

/// Squeeze fidelity against the perturbative target from Z-parity and
/// XZY-type correlators of a three-qubit tomogram; exact polynomial weights in
/// eps so the estimate equals fidelity_pure on analytic inputs.
double fidelity_sm_tomographic(const WeightedTomograms& t, double epsilon);
double fidelity_sm_tomographic(const TomogramSet& t, double epsilon);
/// Bases sufficient for fidelity_sm_tomographic.
std::vector<std::string> sm_fidelity_bases();

/// Beam-splitter fidelity against cos(eps)|10> + i sin(eps)|01> from
/// mode-level ZZ, XY and YX tomograms (leakage post-selected inside).
double fidelity_bs_tomographic(const WeightedTomograms& t, double epsilon);
double fidelity_bs_tomographic(const TomogramSet& t, double epsilon);
/// Mode-level bases sufficient for fidelity_bs_tomographic.
std::vector<std::string> bs_fidelity_bases();

/// Vacuum-return probability: relative frequency of the all-modes-vacuum
/// codeword among (post-selected) counts. Throws when no shots remain.
double fidelity_p0(const Counts& c, const BosonRegister& reg);
double fidelity_p0(const std::map<std::string, double>& w, const BosonRegister& reg);

/// One JSON object per line: {"basis": ..., "bitstring": ..., "count": ...}.
std::string tomograms_to_jsonl(const TomogramSet& t);
TomogramSet tomograms_from_jsonl(const std::string& text);

}  // namespace bosonq
