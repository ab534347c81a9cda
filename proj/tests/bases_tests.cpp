#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pqt/bases.hpp"

using namespace pqt;

namespace {
constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
}  // namespace

TEST_CASE("normalization constant") {
    for (double chi : {0.1, 0.4, kPi / 4.0}) {
        CHECK(normalization(1, chi) == doctest::Approx(1.0).epsilon(1e-14));
    }
    // cos^6 + sin^6 = 1/4 at pi/4
    CHECK(normalization(3, kPi / 4.0) == doctest::Approx(2.0).epsilon(1e-13));
    // cos^18 + sin^18 = 2^-8 at pi/4
    CHECK(normalization(9, kPi / 4.0) == doctest::Approx(16.0).epsilon(1e-12));
    CHECK_THROWS_AS(normalization(0, 0.3), OutOfRangeError);

    // N_r >= 1, equality only at r=1 or on the product-state boundary chi=0
    for (int r : {1, 3, 9, 27}) {
        for (int i = 0; i <= 20; ++i) {
            double chi = i * (kPi / 4.0) / 20.0;
            double n = normalization(r, chi);
            CHECK(n >= 1.0 - 1e-12);
            bool boundary = (r == 1) || (i == 0);
            if (boundary) {
                CHECK(n == doctest::Approx(1.0).epsilon(1e-10));
            } else {
                CHECK(n > 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("bell vectors") {
    // r=1 at pi/4 reduces to the standard Bell basis
    BellVector phi_plus = bell_vector(1, 0, kPi / 4.0);
    CHECK(phi_plus.amplitudes[0].real() == doctest::Approx(kInvSqrt2).epsilon(1e-14));
    CHECK(phi_plus.amplitudes[3].real() == doctest::Approx(kInvSqrt2).epsilon(1e-14));

    BellVector singlet = bell_vector(1, 3, kPi / 4.0);
    CHECK(singlet.amplitudes[1].real() == doctest::Approx(kInvSqrt2).epsilon(1e-14));
    CHECK(singlet.amplitudes[2].real() == doctest::Approx(-kInvSqrt2).epsilon(1e-14));

    // r=3, k=1 at pi/6: N3[sin^3|00> - cos^3|11>], N3 = (28/64)^(-1/2)
    BellVector v = bell_vector(3, 1, kPi / 6.0);
    double n3 = std::sqrt(64.0 / 28.0);
    CHECK(v.amplitudes[0].real() == doctest::Approx(n3 / 8.0).epsilon(1e-13));
    CHECK(v.amplitudes[3].real() ==
          doctest::Approx(-n3 * 3.0 * std::sqrt(3.0) / 8.0).epsilon(1e-13));
    CHECK(v.amplitudes[1] == Amplitude{});
    CHECK(v.amplitudes[2] == Amplitude{});

    // at pi/4 every exponent collapses to the standard basis up to phase
    for (int r : {1, 3, 9, 27}) {
        for (int k = 0; k < 4; ++k) {
            BellVector w = bell_vector(r, k, kPi / 4.0);
            Amplitude overlap{};
            BellVector ref = bell_vector(1, k, kPi / 4.0);
            for (int s = 0; s < 4; ++s) overlap += std::conj(ref.amplitudes[s]) * w.amplitudes[s];
            CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    CHECK_THROWS_AS(bell_vector(1, 4, 0.3), OutOfRangeError);
    CHECK_THROWS_AS(bell_vector(-3, 0, 0.3), OutOfRangeError);
    CHECK_THROWS_AS(bell_vector(1, 0, 2.0), OutOfRangeError);
}

TEST_CASE("mixed bases stay orthonormal") {
    // uniform exponents reduce to the plain generalized basis
    BellBasis plain = mixed_basis(1, 1, 0.37);
    CHECK(is_orthonormal(plain));
    CHECK(plain.vectors[2].r == 1);

    // Gram matrix is the identity for every exponent pair on a chi grid
    for (int rd : {1, 3, 9, 27}) {
        for (int ro : {1, 3, 9, 27}) {
            for (int i = 1; i <= 50; ++i) {
                double chi = i * (kPi / 4.0) / 50.0;
                CHECK(is_orthonormal(mixed_basis(rd, ro, chi)));
            }
        }
    }

    // completeness: sum_k |B_k><B_k| = identity
    BellBasis basis = mixed_basis(9, 3, 0.5);
    for (int row = 0; row < 4; ++row) {
        for (int col = 0; col < 4; ++col) {
            Amplitude sum{};
            for (const BellVector& v : basis.vectors) {
                sum += v.amplitudes[row] * std::conj(v.amplitudes[col]);
            }
            CHECK(std::abs(sum - (row == col ? 1.0 : 0.0)) < 1e-12);
        }
    }
}

TEST_CASE("von Neumann bases") {
    VnmBasis plain = vnm_basis(VnmKind::Plain, 1, 0.0);
    CHECK(plain.vectors[0][0].real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
    CHECK(plain.vectors[1][1].real() == doctest::Approx(-kInvSqrt2).epsilon(1e-15));

    // generalized with r=1 at pi/4 coincides with |+->/|->
    VnmBasis gen1 = vnm_basis(VnmKind::Generalized, 1, kPi / 4.0);
    for (int v = 0; v < 2; ++v) {
        for (int s = 0; s < 2; ++s) {
            CHECK(std::abs(gen1.vectors[v][s] - plain.vectors[v][s]) < 1e-12);
        }
    }

    VnmBasis gen3 = vnm_basis(VnmKind::Generalized, 3, kPi / 6.0);
    Amplitude dot = std::conj(gen3.vectors[0][0]) * gen3.vectors[1][0] +
                    std::conj(gen3.vectors[0][1]) * gen3.vectors[1][1];
    CHECK(std::abs(dot) < 1e-12);
    CHECK(std::abs(std::norm(gen3.vectors[0][0]) + std::norm(gen3.vectors[0][1]) - 1.0) < 1e-12);

    CHECK_THROWS_AS(vnm_basis(VnmKind::Generalized, 0, 0.3), OutOfRangeError);
}

TEST_CASE("bell vector as a labeled state") {
    PureState s = bell_vector_state(bell_vector(3, 2, 0.4), {0, 2});
    CHECK(s.labels() == std::vector<int>{0, 2});
    CHECK(std::abs(s.norm() - 1.0) < 1e-12);
    CHECK(s[0] == Amplitude{});
    CHECK(s[3] == Amplitude{});
}
