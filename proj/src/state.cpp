#include "pqt/state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

namespace pqt {

namespace {

bool finite(Amplitude z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::size_t bit_of(std::size_t index, int position, int num_qubits) {
    return (index >> (num_qubits - 1 - position)) & 1u;
}

}  // namespace

InfoQubit make_info_qubit(Amplitude a, Amplitude b) {
    if (!finite(a) || !finite(b)) {
        throw NotNormalizedError("information state amplitudes must be finite");
    }
    double n = std::norm(a) + std::norm(b);
    if (std::abs(n - 1.0) > kInputNormTol) {
        throw NotNormalizedError("information state must satisfy |a|^2+|b|^2 = 1, got " +
                                 std::to_string(n));
    }
    return InfoQubit{a, b};
}

PureState::PureState(std::vector<int> labels, std::vector<Amplitude> amplitudes)
    : labels_(std::move(labels)), amplitudes_(std::move(amplitudes)) {
    if (labels_.empty() || labels_.size() > 30) {
        throw OutOfRangeError("register must hold between 1 and 30 qubits");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        for (std::size_t j = i + 1; j < labels_.size(); ++j) {
            if (labels_[i] == labels_[j]) throw Error("duplicate qubit label in register");
        }
    }
    if (amplitudes_.size() != (std::size_t{1} << labels_.size())) {
        throw Error("amplitude count must be 2^num_qubits");
    }
    double n2 = 0.0;
    for (const Amplitude& z : amplitudes_) {
        if (!finite(z)) throw NotNormalizedError("state amplitudes must be finite");
        n2 += std::norm(z);
    }
    if (std::abs(n2 - 1.0) > kInputNormTol) {
        throw NotNormalizedError("state norm must be 1, got norm^2 = " + std::to_string(n2));
    }
}

bool PureState::has_label(int label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

int PureState::position_of(int label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw UnknownQubitLabelError("qubit label " + std::to_string(label) +
                                     " not present in register");
    }
    return static_cast<int>(it - labels_.begin());
}

double PureState::norm() const {
    double n2 = 0.0;
    for (const Amplitude& z : amplitudes_) n2 += std::norm(z);
    return std::sqrt(n2);
}

PureState PureState::sorted_by_label() const {
    const int n = num_qubits();
    std::vector<int> order(labels_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int lhs, int rhs) { return labels_[lhs] < labels_[rhs]; });

    std::vector<int> new_labels(labels_.size());
    for (std::size_t i = 0; i < order.size(); ++i) new_labels[i] = labels_[order[i]];

    std::vector<Amplitude> out(amplitudes_.size());
    for (std::size_t src = 0; src < amplitudes_.size(); ++src) {
        std::size_t dst = 0;
        for (int p = 0; p < n; ++p) {
            dst |= bit_of(src, order[p], n) << (n - 1 - p);
        }
        out[dst] = amplitudes_[src];
    }
    return PureState(std::move(new_labels), std::move(out));
}

PureState make_info_state(const InfoQubit& info) {
    return PureState({0}, {info.a, info.b});
}

PureState make_info_state(Amplitude a, Amplitude b) {
    return make_info_state(make_info_qubit(a, b));
}

PureState make_ghz(const GhzResource& resource) {
    constexpr double quarter_pi = std::numbers::pi / 4.0;
    if (!std::isfinite(resource.chi) || resource.chi < 0.0 ||
        resource.chi > quarter_pi + 1e-12) {
        throw OutOfRangeError("chi must lie in [0, pi/4]");
    }
    std::vector<Amplitude> amps(8, Amplitude{});
    amps[0] = std::cos(resource.chi);
    amps[7] = std::sin(resource.chi);
    return PureState({1, 2, 3}, std::move(amps));
}

int register_capacity() {
    static const int capacity = [] {
        if (const char* env = std::getenv("PQT_MAX_QUBITS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && *end == '\0' && v >= 1 && v <= 30) return static_cast<int>(v);
        }
        return 8;
    }();
    return capacity;
}

PureState tensor(const PureState& left, const PureState& right) {
    int total = left.num_qubits() + right.num_qubits();
    if (total > register_capacity()) {
        throw CapacityExceededError("tensor product would exceed the register capacity of " +
                                    std::to_string(register_capacity()) + " qubits");
    }
    std::vector<int> labels = left.labels();
    labels.insert(labels.end(), right.labels().begin(), right.labels().end());

    std::vector<Amplitude> amps(left.dim() * right.dim());
    for (std::size_t i = 0; i < left.dim(); ++i) {
        for (std::size_t j = 0; j < right.dim(); ++j) {
            amps[i * right.dim() + j] = left[i] * right[j];
        }
    }
    return PureState(std::move(labels), std::move(amps));
}

Amplitude inner_product(const PureState& lhs, const PureState& rhs) {
    if (lhs.labels() != rhs.labels()) {
        throw UnknownQubitLabelError("inner product requires identical registers");
    }
    Amplitude acc{};
    for (std::size_t i = 0; i < lhs.dim(); ++i) acc += std::conj(lhs[i]) * rhs[i];
    return acc;
}

std::vector<MeasurementOutcome> measure_in_basis(
    const PureState& state, const std::vector<int>& qubits,
    const std::vector<std::vector<Amplitude>>& basis_vectors) {
    const int n = state.num_qubits();
    const int m = static_cast<int>(qubits.size());

    std::vector<int> pos;
    pos.reserve(qubits.size());
    for (int q : qubits) pos.push_back(state.position_of(q));
    for (std::size_t i = 0; i < pos.size(); ++i) {
        for (std::size_t j = i + 1; j < pos.size(); ++j) {
            if (pos[i] == pos[j]) throw UnknownQubitLabelError("measured qubits must be distinct");
        }
    }

    const std::size_t bdim = std::size_t{1} << m;
    if (basis_vectors.size() != bdim) {
        throw BasisNotOrthonormalError("a complete basis over " + std::to_string(m) +
                                       " qubits needs " + std::to_string(bdim) + " vectors");
    }
    for (const auto& v : basis_vectors) {
        if (v.size() != bdim) throw BasisNotOrthonormalError("basis vector has wrong dimension");
    }
    for (std::size_t i = 0; i < bdim; ++i) {
        for (std::size_t j = i; j < bdim; ++j) {
            Amplitude g{};
            for (std::size_t s = 0; s < bdim; ++s) g += std::conj(basis_vectors[i][s]) * basis_vectors[j][s];
            double expect = (i == j) ? 1.0 : 0.0;
            if (std::abs(g - expect) > kInvariantTol) {
                throw BasisNotOrthonormalError("basis fails orthonormality validation");
            }
        }
    }

    std::vector<int> rem;
    for (int p = 0; p < n; ++p) {
        if (std::find(pos.begin(), pos.end(), p) == pos.end()) rem.push_back(p);
    }
    std::vector<int> rem_labels;
    for (int p : rem) rem_labels.push_back(state.labels()[p]);

    const std::size_t rdim = std::size_t{1} << rem.size();
    std::vector<MeasurementOutcome> outcomes;
    outcomes.reserve(bdim);
    for (std::size_t k = 0; k < bdim; ++k) {
        std::vector<Amplitude> residual(rdim, Amplitude{});
        for (std::size_t mi = 0; mi < bdim; ++mi) {
            Amplitude w = std::conj(basis_vectors[k][mi]);
            if (w == Amplitude{}) continue;
            for (std::size_t ri = 0; ri < rdim; ++ri) {
                std::size_t full = 0;
                for (int b = 0; b < m; ++b) {
                    full |= ((mi >> (m - 1 - b)) & 1u) << (n - 1 - pos[b]);
                }
                for (std::size_t b = 0; b < rem.size(); ++b) {
                    full |= ((ri >> (rem.size() - 1 - b)) & 1u) << (n - 1 - rem[b]);
                }
                residual[ri] += w * state[full];
            }
        }
        // Scale by the largest amplitude before squaring so branches with
        // tiny mass keep a full-precision collapse direction (the squares
        // would otherwise land in the subnormal range).
        double scale = 0.0;
        for (const Amplitude& z : residual) scale = std::max(scale, std::abs(z));
        MeasurementOutcome out;
        out.outcome_index = static_cast<int>(k);
        if (scale > 0.0) {
            double sum = 0.0;
            for (Amplitude& z : residual) {
                z /= scale;
                sum += std::norm(z);
            }
            double root = std::sqrt(sum);
            out.probability = (scale * root) * (scale * root);
            if (out.probability > 0.0 && !rem.empty()) {
                for (Amplitude& z : residual) z /= root;
                out.collapsed = PureState(rem_labels, std::move(residual));
            }
        }
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

const char* to_string(Pauli p) {
    switch (p) {
        case Pauli::I: return "I";
        case Pauli::Z: return "Z";
        case Pauli::X: return "X";
        case Pauli::ZX: return "ZX";
    }
    return "?";
}

PureState apply_pauli(const PureState& state, Pauli correction) {
    if (state.num_qubits() != 1) {
        throw OutOfRangeError("Pauli corrections act on a single-qubit state");
    }
    Amplitude v0 = state[0], v1 = state[1];
    switch (correction) {
        case Pauli::I: break;
        case Pauli::Z: v1 = -v1; break;
        case Pauli::X: std::swap(v0, v1); break;
        case Pauli::ZX: {
            Amplitude t = v0;
            v0 = v1;
            v1 = -t;
            break;
        }
    }
    return PureState(state.labels(), {v0, v1});
}

double fidelity(const PureState& candidate, const InfoQubit& target) {
    if (candidate.num_qubits() != 1) {
        throw OutOfRangeError("fidelity compares single-qubit states");
    }
    Amplitude overlap = std::conj(target.a) * candidate[0] + std::conj(target.b) * candidate[1];
    return std::norm(overlap);
}

}  // namespace pqt
