#include "pqt/maf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pqt/analytic.hpp"

namespace pqt {

namespace {

constexpr int kPanels = 512;
constexpr double kNodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                              0.5384693101056831, 0.9061798459386640};
constexpr double kWeights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                0.4786286704993665, 0.2369268850561891};

// Mean over phi of max(g, c2 + c3*|cos 2phi|); reduces to a quarter period.
double phi_average(double g, double c2, double c3) {
    if (c3 <= 0.0) return std::max(g, c2);
    if (g <= c2) return c2 + c3 * (2.0 / std::numbers::pi);
    double tau = (g - c2) / c3;
    if (tau >= 1.0) return g;
    double u = std::acos(tau);
    return (2.0 / std::numbers::pi) * (c2 * u + c3 * std::sin(u) + g * (std::numbers::pi / 2.0 - u));
}

// Azimuthal averages of max_P |<psi|P M psi>|^2 for a diagonal map diag(alpha, beta),
// as a function of x = cos(theta): A = (1+x)/2, B = (1-x)/2.
double diag_leaf_integrand(double alpha, double beta, double x) {
    double big = (1.0 + x) / 2.0, small = (1.0 - x) / 2.0;
    double ab = big * small;
    double g = std::abs(alpha) * big + std::abs(beta) * small;
    return phi_average(g * g, (alpha * alpha + beta * beta) * ab,
                       2.0 * std::abs(alpha * beta) * ab);
}

// Dense fallback for a map that is neither diagonal nor antidiagonal.  The
// channel never produces one, but the integral stays correct if it did.
double general_leaf_average(const LeafMap& m) {
    constexpr int nx = 400, nphi = 800;
    double total = 0.0;
    for (int i = 0; i < nx; ++i) {
        double x = -1.0 + (i + 0.5) * (2.0 / nx);
        double a = std::sqrt((1.0 + x) / 2.0), r = std::sqrt((1.0 - x) / 2.0);
        for (int j = 0; j < nphi; ++j) {
            double phi = (j + 0.5) * (2.0 * std::numbers::pi / nphi);
            Amplitude b = r * Amplitude{std::cos(phi), std::sin(phi)};
            Amplitude c0 = m.m00 * a + m.m01 * b;
            Amplitude c1 = m.m10 * a + m.m11 * b;
            double vi = std::norm(std::conj(Amplitude{a}) * c0 + std::conj(b) * c1);
            double vz = std::norm(std::conj(Amplitude{a}) * c0 - std::conj(b) * c1);
            double vx = std::norm(std::conj(Amplitude{a}) * c1 + std::conj(b) * c0);
            double vzx = std::norm(std::conj(Amplitude{a}) * c1 - std::conj(b) * c0);
            total += std::max({vi, vz, vx, vzx});
        }
    }
    return total / (static_cast<double>(nx) * nphi);
}

}  // namespace

double maf_of_trace(const ProtocolTrace& trace) {
    double total = 0.0;
    for (const LeafMap& raw : trace.leaf_maps) {
        LeafMap m = raw;
        double diag = std::abs(m.m00) + std::abs(m.m11);
        double anti = std::abs(m.m01) + std::abs(m.m10);
        if (anti > diag) {
            std::swap(m.m00, m.m10);  // left-multiply by X; the Pauli max is unchanged
            std::swap(m.m01, m.m11);
            std::swap(diag, anti);
        }
        if (diag == 0.0) continue;
        if (anti > 1e-10 * diag) {
            total += general_leaf_average(m);
            continue;
        }
        double alpha = m.m00, beta = m.m11;
        double acc = 0.0;
        for (int p = 0; p < kPanels; ++p) {
            double lo = -1.0 + p * (2.0 / kPanels);
            double half = 1.0 / kPanels;
            double mid = lo + half;
            for (int q = 0; q < 5; ++q) {
                acc += kWeights[q] * half * diag_leaf_integrand(alpha, beta, mid + half * kNodes[q]);
            }
        }
        total += acc / 2.0;  // d(cos theta)/2 is the uniform sphere measure
    }
    return total;
}

MafResult compute_maf(double c, int depth, Termination strategy) {
    double chi = chi_from_concurrence(c);
    InfoQubit balanced{1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
    ProtocolConfig config;
    config.max_repetitions = depth;
    config.termination = strategy;
    ProtocolTrace trace = run_enumeration(balanced, GhzResource{chi}, config);
    return MafResult{maf_of_trace(trace), trace.total_success()};
}

}  // namespace pqt
