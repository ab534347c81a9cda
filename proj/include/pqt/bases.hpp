#pragma once

#include <array>
#include <utility>
#include <vector>

#include "pqt/state.hpp"

namespace pqt {

/// One generalized Bell vector B^(r,k) at entanglement angle chi.
/// k in {0,1} lives on span{|00>,|11>}, k in {2,3} on span{|01>,|10>}:
///   B^(r,0) = N_r [cos^r chi |00> + sin^r chi |11>]
///   B^(r,1) = N_r [sin^r chi |00> - cos^r chi |11>]
///   B^(r,2) = N_r [cos^r chi |01> + sin^r chi |10>]
///   B^(r,3) = N_r [sin^r chi |01> - cos^r chi |10>]
struct BellVector {
    int r = 1;
    int k = 0;
    double chi = 0.0;
    std::array<Amplitude, 4> amplitudes{};
};

/// Complete two-qubit basis; the diagonal sector (k=0,1) and off-diagonal
/// sector (k=2,3) may use different exponents and stay orthonormal because
/// the sectors are disjoint.
struct BellBasis {
    int r_diag = 1;
    int r_off = 1;
    double chi = 0.0;
    std::array<BellVector, 4> vectors;
};

enum class VnmKind { Plain, Generalized };

/// Single-qubit von Neumann basis: Plain is {|+>, |->}; Generalized is
/// {N_r[cos^r|0> + sin^r|1>], N_r[sin^r|0> - cos^r|1>]}.
struct VnmBasis {
    VnmKind kind = VnmKind::Plain;
    int r = 1;
    double chi = 0.0;
    std::array<std::array<Amplitude, 2>, 2> vectors{};
};

/// N_r = [cos^2r chi + sin^2r chi]^(-1/2); N_1 = 1 for every chi.
double normalization(int r, double chi);

BellVector bell_vector(int r, int k, double chi);
BellBasis mixed_basis(int r_diag, int r_off, double chi);
VnmBasis vnm_basis(VnmKind kind, int r, double chi);

bool is_orthonormal(const BellBasis& basis, double tol = kInvariantTol);

/// Bell vector as a two-qubit state over the given labels.
PureState bell_vector_state(const BellVector& vector, std::pair<int, int> labels);

std::vector<MeasurementOutcome> measure_pair(const PureState& state,
                                             std::pair<int, int> qubits,
                                             const BellBasis& basis);
std::vector<MeasurementOutcome> measure_single(const PureState& state, int qubit,
                                               const VnmBasis& basis);

}  // namespace pqt
