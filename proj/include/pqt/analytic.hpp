#pragma once

#include <utility>
#include <vector>

#include "pqt/errors.hpp"

namespace pqt {

/// Bipartite concurrence of the resource, C = sin(2 chi), in [0, 1].
struct Concurrence {
    double c = 0.0;
};

Concurrence concurrence_from_chi(double chi);
double chi_from_concurrence(double c);

/// Cumulative success probability after n repetitions (n in 0..3), as a
/// polynomial in the concurrence.  Closed forms exist only to the third
/// repetition; deeper depths are the enumeration engine's job.
double p_success(int n, double c);

/// Same quantity through the trigonometric route (powers of cos/sin chi);
/// the two routes must agree to 1e-12 and are cross-checked in tests.
double p_success_trig(int n, double chi);

/// Success-probability increment of repetition n (n in 1..3), direct form.
double increment(int n, double c);

/// Variant of the third increment with a different innermost denominator
/// bracket in its deepest term.  It does not match the branch enumeration
/// (increment() does); kept so the verification report can log the deviation.
double increment3_alt(double c);

/// P(1) evaluated through both routes: (trig form, concurrence-polynomial form).
std::pair<double, double> trig_identity_check(double chi);

/// Reference fidelity (2+C)/3 of deterministic teleportation over the same
/// resource without repetition; used as a baseline on fidelity plots.
double baseline_fidelity(double c);

struct SuccessCurve {
    int attempt = 0;
    std::vector<std::pair<double, double>> samples;  // (c, probability)
};

SuccessCurve success_curve(int attempt, const std::vector<double>& c_grid);

}  // namespace pqt
