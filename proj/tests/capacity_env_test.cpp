// The register capacity guard honors PQT_MAX_QUBITS; this runs in its own
// process because the value is read once and cached.
#include <cstdio>
#include <cstdlib>

#include "pqt/state.hpp"

using namespace pqt;

namespace {

PureState basis_state(std::vector<int> labels) {
    std::vector<Amplitude> amps(std::size_t{1} << labels.size(), Amplitude{});
    amps[0] = 1.0;
    return PureState(std::move(labels), std::move(amps));
}

}  // namespace

int main() {
    setenv("PQT_MAX_QUBITS", "10", 1);
    if (register_capacity() != 10) {
        std::fprintf(stderr, "expected capacity 10, got %d\n", register_capacity());
        return 1;
    }
    PureState five = basis_state({0, 1, 2, 3, 4});
    PureState four = basis_state({5, 6, 7, 8});
    PureState nine = tensor(five, four);  // 9 <= 10, allowed
    if (nine.num_qubits() != 9) return 1;
    try {
        tensor(nine, basis_state({9, 10}));  // 11 > 10
        std::fprintf(stderr, "capacity guard did not trigger\n");
        return 1;
    } catch (const CapacityExceededError&) {
    }
    std::printf("capacity override ok\n");
    return 0;
}
