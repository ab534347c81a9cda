#pragma once

#include "pqt/protocol.hpp"

namespace pqt {

struct MafResult {
    double maf = 0.0;
    double success_prob = 0.0;
};

/// Maximal average fidelity: the protocol's final fidelity with the best
/// per-leaf Pauli correction, averaged over inputs uniform on the Bloch
/// sphere.  Deterministic quadrature; see maf_of_trace for the method.
MafResult compute_maf(double c, int depth, Termination strategy);

/// Integrates the trace's leaf maps.  For each leaf the azimuthal average of
/// max_P |<psi|P M psi>|^2 has a closed form (the X-family envelope is
/// c2 + c3|cos 2phi|), leaving a 1D polar integral done with composite
/// Gauss-Legendre panels.
double maf_of_trace(const ProtocolTrace& trace);

}  // namespace pqt
