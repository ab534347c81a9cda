#include "pqt/analytic.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pqt {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

void check_c(double c) {
    if (!std::isfinite(c) || c < 0.0 || c > 1.0 + 1e-12) {
        throw OutOfRangeError("concurrence must lie in [0, 1]");
    }
}

double pw(double x, int n) { return std::pow(x, n); }

// Denominator family: D = 4 - 3C^2, B = 4D^2 - 3C^6, W = 4D^2B^2 - 3C^18.
// They are 4*s3, 64*s9/s3 and 262144*s27/s9 for s_m = cos^2m + sin^2m.
double d_of(double c) { return 4.0 - 3.0 * c * c; }
double b_of(double c) { return 4.0 * pw(d_of(c), 2) - 3.0 * pw(c, 6); }
double w_of(double c) { return 4.0 * pw(d_of(c), 2) * pw(b_of(c), 2) - 3.0 * pw(c, 18); }

double inc1(double c) {
    double D = d_of(c);
    return pw(c, 4) / 8.0 + pw(c, 6) / (8.0 * D);
}

double inc2(double c) {
    double D = d_of(c), B = b_of(c);
    return pw(c, 6) / 32.0 + pw(c, 8) / (32.0 * D) + pw(c, 12) / (32.0 * pw(D, 3)) +
           pw(c, 18) / (32.0 * pw(D, 3) * B);
}

double inc3(double c) {
    double D = d_of(c), B = b_of(c), W = w_of(c);
    return pw(c, 8) / 128.0 + pw(c, 10) / (128.0 * D) + pw(c, 14) / (128.0 * pw(D, 3)) +
           pw(c, 18) / (128.0 * pw(D, 5)) + pw(c, 54) / (128.0 * pw(D, 5) * pw(B, 3) * W) +
           pw(c, 24) / (128.0 * pw(D, 5) * B) + pw(c, 36) / (128.0 * pw(D, 5) * pw(B, 3)) +
           pw(c, 20) / (128.0 * pw(D, 3) * B);
}

double sig(int m, double chi) {
    double c2 = std::cos(chi) * std::cos(chi);
    double s2 = std::sin(chi) * std::sin(chi);
    return pw(c2, m) + pw(s2, m);
}

}  // namespace

Concurrence concurrence_from_chi(double chi) {
    if (!std::isfinite(chi) || chi < 0.0 || chi > kQuarterPi + 1e-12) {
        throw OutOfRangeError("chi must lie in [0, pi/4]");
    }
    return Concurrence{std::sin(2.0 * chi)};
}

double chi_from_concurrence(double c) {
    check_c(c);
    return std::asin(std::min(c, 1.0)) / 2.0;
}

double p_success(int n, double c) {
    check_c(c);
    if (n < 0 || n > 3) {
        throw UnsupportedDepthError("closed forms exist only for 0..3 repetitions, got " +
                                    std::to_string(n));
    }
    double p = c * c / 2.0;
    if (n >= 1) p += inc1(c);
    if (n >= 2) p += inc2(c);
    if (n >= 3) p += inc3(c);
    return p;
}

double p_success_trig(int n, double chi) {
    if (n < 0 || n > 3) {
        throw UnsupportedDepthError("closed forms exist only for 0..3 repetitions, got " +
                                    std::to_string(n));
    }
    double cc = std::cos(chi), ss = std::sin(chi);
    double cs = cc * ss;
    double s3 = sig(3, chi), s9 = sig(9, chi), s27 = sig(27, chi);
    double p = 2.0 * pw(cs, 2);
    if (n >= 1) p += 2.0 * pw(cs, 6) / s3 + 2.0 * pw(cs, 4);
    if (n >= 2) {
        p += 2.0 * (pw(cs, 6) + pw(cs, 8) / s3 + pw(cs, 12) / pw(s3, 3) +
                    pw(cs, 18) / (pw(s3, 2) * s9));
    }
    if (n >= 3) {
        p += 2.0 * (pw(cs, 8) + pw(cs, 10) / s3 + pw(cs, 14) / pw(s3, 3) +
                    pw(cs, 18) / pw(s3, 5) + pw(cs, 20) / (pw(s3, 2) * s9) +
                    pw(cs, 24) / (pw(s3, 4) * s9) + pw(cs, 36) / (pw(s3, 2) * pw(s9, 3)) +
                    pw(cs, 54) / (pw(s3, 2) * pw(s9, 2) * s27));
    }
    return p;
}

double increment(int n, double c) {
    check_c(c);
    switch (n) {
        case 1: return inc1(c);
        case 2: return inc2(c);
        case 3: return inc3(c);
        default:
            throw UnsupportedDepthError("increments exist for repetitions 1..3, got " +
                                        std::to_string(n));
    }
}

double increment3_alt(double c) {
    check_c(c);
    double D = d_of(c), B = b_of(c);
    double W_alt = 4.0 * pw(D, 2) * pw(pw(D, 2) - pw(c, 6), 2) - pw(c, 18);
    return inc3(c) - pw(c, 54) / (128.0 * pw(D, 5) * pw(B, 3) * w_of(c)) +
           pw(c, 54) / (128.0 * pw(D, 5) * pw(B, 3) * W_alt);
}

std::pair<double, double> trig_identity_check(double chi) {
    if (!std::isfinite(chi) || chi < 1e-3 || chi > kQuarterPi + 1e-12) {
        throw OutOfRangeError("chi must lie in [1e-3, pi/4]");
    }
    double c = std::sin(2.0 * chi);
    return {p_success_trig(1, chi), p_success(1, c)};
}

double baseline_fidelity(double c) {
    check_c(c);
    return (2.0 + c) / 3.0;
}

SuccessCurve success_curve(int attempt, const std::vector<double>& c_grid) {
    SuccessCurve curve;
    curve.attempt = attempt;
    curve.samples.reserve(c_grid.size());
    for (double c : c_grid) curve.samples.emplace_back(c, p_success(attempt, c));
    return curve;
}

}  // namespace pqt
