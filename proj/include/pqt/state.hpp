#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "pqt/errors.hpp"

namespace pqt {

using Amplitude = std::complex<double>;

// Tolerance for validating caller-supplied amplitudes.
inline constexpr double kInputNormTol = 1e-9;
// Tolerance the library guarantees for its own invariants (norms, Gram matrices).
inline constexpr double kInvariantTol = 1e-12;

/// Single-qubit information state a|0> + b|1>, |a|^2 + |b|^2 = 1.
struct InfoQubit {
    Amplitude a{1.0, 0.0};
    Amplitude b{0.0, 0.0};
};

/// Validates normalization and finiteness.
InfoQubit make_info_qubit(Amplitude a, Amplitude b);

/// Three-qubit resource cos(chi)|000> + sin(chi)|111>, chi in [0, pi/4].
/// The concurrence of any bipartition is sin(2 chi).
struct GhzResource {
    double chi = 0.0;
};

inline double concurrence_of(const GhzResource& r) { return std::sin(2.0 * r.chi); }

/// Dense amplitude vector over a small register of labeled qubits.
///
/// The amplitude index is read as a big-endian bitstring over the labels in
/// register order: with labels [0,1,2,3], index 0b0110 is |0110>.  Collapsed
/// states drop measured qubits but keep the surviving labels, so later
/// operations keep addressing qubits by label rather than by position.
/// Instances are immutable after construction.
class PureState {
  public:
    PureState(std::vector<int> labels, std::vector<Amplitude> amplitudes);

    int num_qubits() const { return static_cast<int>(labels_.size()); }
    std::size_t dim() const { return amplitudes_.size(); }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<Amplitude>& amplitudes() const { return amplitudes_; }
    const Amplitude& operator[](std::size_t i) const { return amplitudes_[i]; }

    bool has_label(int label) const;
    /// Position of `label` in register order; throws UnknownQubitLabelError.
    int position_of(int label) const;

    double norm() const;

    /// Same state with qubits permuted so labels ascend.
    PureState sorted_by_label() const;

  private:
    std::vector<int> labels_;
    std::vector<Amplitude> amplitudes_;
};

PureState make_info_state(const InfoQubit& info);            // label {0}
PureState make_info_state(Amplitude a, Amplitude b);
PureState make_ghz(const GhzResource& resource);             // labels {1,2,3}

/// Register capacity guard for tensor products.  Default 8; the environment
/// variable PQT_MAX_QUBITS overrides it (read once per process).
int register_capacity();

/// Kronecker product; labels are concatenated left-to-right.
PureState tensor(const PureState& left, const PureState& right);

Amplitude inner_product(const PureState& lhs, const PureState& rhs);

/// One outcome of a complete projective measurement.  Zero-probability
/// outcomes are reported with probability 0 and no collapsed state so that
/// branch enumeration keeps a fixed tree shape.
struct MeasurementOutcome {
    int outcome_index = 0;
    double probability = 0.0;
    std::optional<PureState> collapsed;  // over the remaining qubits
};

/// Projective measurement of `qubits` (by label) in a complete orthonormal
/// basis given as 2^m amplitude vectors, big-endian over `qubits` order.
/// The collapsed states are renormalized residuals over the remaining labels.
std::vector<MeasurementOutcome> measure_in_basis(
    const PureState& state, const std::vector<int>& qubits,
    const std::vector<std::vector<Amplitude>>& basis_vectors);

enum class Pauli { I, Z, X, ZX };

const char* to_string(Pauli p);

/// Applies I, sigma_z, sigma_x or sigma_z*sigma_x to a single-qubit state.
PureState apply_pauli(const PureState& state, Pauli correction);

/// |<target|candidate>|^2 for a single-qubit candidate; phase-insensitive.
double fidelity(const PureState& candidate, const InfoQubit& target);

}  // namespace pqt
