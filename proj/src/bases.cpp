#include "pqt/bases.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pqt {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

void check_exponent(int r) {
    if (r < 1) throw OutOfRangeError("basis exponent must be a positive integer");
}

void check_chi(double chi) {
    if (!std::isfinite(chi) || chi < 0.0 || chi > kQuarterPi + 1e-12) {
        throw OutOfRangeError("chi must lie in [0, pi/4]");
    }
}

// (N_r cos^r, N_r sin^r) computed through tan(chi) <= 1 so that large
// exponents underflow gracefully instead of dividing 0 by 0.
std::pair<double, double> sector_weights(int r, double chi) {
    double t = std::tan(chi);
    double tr = std::pow(t, r);
    double den = std::sqrt(1.0 + tr * tr);
    return {1.0 / den, tr / den};
}

}  // namespace

double normalization(int r, double chi) {
    check_exponent(r);
    check_chi(chi);
    double c2 = std::cos(chi) * std::cos(chi);
    double s2 = std::sin(chi) * std::sin(chi);
    return 1.0 / std::sqrt(std::pow(c2, r) + std::pow(s2, r));
}

BellVector bell_vector(int r, int k, double chi) {
    check_exponent(r);
    check_chi(chi);
    if (k < 0 || k > 3) throw OutOfRangeError("Bell sector index must be 0..3");

    auto [hi, lo] = sector_weights(r, chi);
    BellVector v{r, k, chi, {}};
    switch (k) {
        case 0:
            v.amplitudes[0] = hi;  // |00>
            v.amplitudes[3] = lo;  // |11>
            break;
        case 1:
            v.amplitudes[0] = lo;
            v.amplitudes[3] = -hi;
            break;
        case 2:
            v.amplitudes[1] = hi;  // |01>
            v.amplitudes[2] = lo;  // |10>
            break;
        case 3:
            v.amplitudes[1] = lo;
            v.amplitudes[2] = -hi;
            break;
    }
    return v;
}

BellBasis mixed_basis(int r_diag, int r_off, double chi) {
    check_exponent(r_diag);
    check_exponent(r_off);
    check_chi(chi);
    return BellBasis{r_diag, r_off, chi,
                     {bell_vector(r_diag, 0, chi), bell_vector(r_diag, 1, chi),
                      bell_vector(r_off, 2, chi), bell_vector(r_off, 3, chi)}};
}

VnmBasis vnm_basis(VnmKind kind, int r, double chi) {
    VnmBasis basis;
    basis.kind = kind;
    if (kind == VnmKind::Plain) {
        const double inv = 1.0 / std::numbers::sqrt2;
        basis.r = 1;
        basis.chi = chi;
        basis.vectors = {{{inv, inv}, {inv, -inv}}};
        return basis;
    }
    check_exponent(r);
    check_chi(chi);
    auto [hi, lo] = sector_weights(r, chi);
    basis.r = r;
    basis.chi = chi;
    basis.vectors = {{{hi, lo}, {lo, -hi}}};
    return basis;
}

bool is_orthonormal(const BellBasis& basis, double tol) {
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            Amplitude g{};
            for (int s = 0; s < 4; ++s) {
                g += std::conj(basis.vectors[i].amplitudes[s]) * basis.vectors[j].amplitudes[s];
            }
            double expect = (i == j) ? 1.0 : 0.0;
            if (std::abs(g - expect) > tol) return false;
        }
    }
    return true;
}

PureState bell_vector_state(const BellVector& vector, std::pair<int, int> labels) {
    return PureState({labels.first, labels.second},
                     {vector.amplitudes[0], vector.amplitudes[1], vector.amplitudes[2],
                      vector.amplitudes[3]});
}

std::vector<MeasurementOutcome> measure_pair(const PureState& state,
                                             std::pair<int, int> qubits,
                                             const BellBasis& basis) {
    std::vector<std::vector<Amplitude>> vectors;
    vectors.reserve(4);
    for (const BellVector& v : basis.vectors) {
        vectors.emplace_back(v.amplitudes.begin(), v.amplitudes.end());
    }
    return measure_in_basis(state, {qubits.first, qubits.second}, vectors);
}

std::vector<MeasurementOutcome> measure_single(const PureState& state, int qubit,
                                               const VnmBasis& basis) {
    std::vector<std::vector<Amplitude>> vectors{
        {basis.vectors[0][0], basis.vectors[0][1]},
        {basis.vectors[1][0], basis.vectors[1][1]}};
    return measure_in_basis(state, {qubit}, vectors);
}

}  // namespace pqt
