#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "pqt/analytic.hpp"
#include "pqt/maf.hpp"
#include "pqt/sweep.hpp"

using namespace pqt;

namespace {

constexpr double kPi = std::numbers::pi;

// Brute-force Bloch-sphere quadrature over the trace's leaf maps, independent
// of the closed-form azimuthal average used by maf_of_trace.
double brute_maf(const ProtocolTrace& trace, int nx, int nphi) {
    double total = 0.0;
    for (int i = 0; i < nx; ++i) {
        double x = -1.0 + (i + 0.5) * (2.0 / nx);
        double a = std::sqrt((1.0 + x) / 2.0);
        double r = std::sqrt((1.0 - x) / 2.0);
        for (int j = 0; j < nphi; ++j) {
            double phi = (j + 0.5) * (2.0 * kPi / nphi);
            Amplitude b = r * Amplitude{std::cos(phi), std::sin(phi)};
            for (const LeafMap& m : trace.leaf_maps) {
                Amplitude c0 = m.m00 * a + m.m01 * b;
                Amplitude c1 = m.m10 * a + m.m11 * b;
                double vi = std::norm(a * c0 + std::conj(b) * c1);
                double vz = std::norm(a * c0 - std::conj(b) * c1);
                double vx = std::norm(a * c1 + std::conj(b) * c0);
                double vzx = std::norm(a * c1 - std::conj(b) * c0);
                total += std::max({vi, vz, vx, vzx});
            }
        }
    }
    return total / (static_cast<double>(nx) * nphi);
}

double leaf_mass(const ProtocolTrace& trace) {
    // integral of sum_leaves ||M psi||^2 over the sphere: mean of |a|^2 is 1/2
    double mass = 0.0;
    for (const LeafMap& m : trace.leaf_maps) {
        mass += 0.5 * (m.m00 * m.m00 + m.m01 * m.m01 + m.m10 * m.m10 + m.m11 * m.m11);
    }
    return mass;
}

ProtocolTrace trace_for(double c, int depth, Termination strategy) {
    ProtocolConfig config;
    config.max_repetitions = depth;
    config.termination = strategy;
    InfoQubit balanced{1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
    return run_enumeration(balanced, GhzResource{chi_from_concurrence(c)}, config);
}

}  // namespace

TEST_CASE("leaf maps partition the probability") {
    for (double c : {0.3, 0.8, 1.0}) {
        for (Termination strategy :
             {Termination::Continue, Termination::PlainVnm, Termination::MatchedVnm}) {
            ProtocolTrace trace = trace_for(c, 1, strategy);
            CHECK(leaf_mass(trace) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("maf closed-form integration matches the brute quadrature") {
    for (double c : {0.5, 0.8}) {
        for (Termination strategy : {Termination::Continue, Termination::PlainVnm}) {
            ProtocolTrace trace = trace_for(c, 1, strategy);
            double fast = maf_of_trace(trace);
            double brute = brute_maf(trace, 220, 440);
            CHECK(fast == doctest::Approx(brute).epsilon(3e-5));
        }
    }
}

TEST_CASE("maf regression fixture and bounds") {
    // frozen from an independent high-resolution quadrature (Richardson-checked)
    MafResult fixture = compute_maf(0.8, 1, Termination::PlainVnm);
    CHECK(std::abs(fixture.maf - 0.86266068) < 2e-6);

    // maf lies in [success probability, 1]; exactly 1 on a perfect channel
    for (double c : {0.2, 0.6, 0.9}) {
        for (int depth : {0, 1, 2}) {
            MafResult r = compute_maf(c, depth, Termination::MatchedVnm);
            CHECK(r.maf >= r.success_prob - 1e-10);
            CHECK(r.maf <= 1.0 + 1e-10);
        }
    }
    MafResult perfect = compute_maf(1.0, 2, Termination::PlainVnm);
    CHECK(std::abs(perfect.maf - 1.0) < 1e-10);
}

TEST_CASE("sweep rows are ordered and deterministic") {
    SweepSpec spec;
    spec.c_min = 0.1;
    spec.c_max = 0.9;
    spec.points = 5;
    spec.depths = {0, 1};
    spec.strategies = {Termination::Continue, Termination::MatchedVnm};
    spec.jobs = 3;

    auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 5 * 2 * 2);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        bool ordered = rows[i].c > rows[i - 1].c - 1e-15 ||
                       (rows[i].c == rows[i - 1].c && rows[i].depth >= rows[i - 1].depth);
        CHECK(ordered);
    }

    std::ostringstream first, second;
    write_csv(rows, first);
    write_csv(run_sweep(spec), second);
    CHECK(first.str() == second.str());

    // analytic column is filled exactly for the continue strategy
    for (const SweepRow& r : rows) {
        if (r.strategy == Termination::Continue) {
            CHECK(r.p_analytic == doctest::Approx(p_success(r.depth, r.c)).epsilon(1e-14));
            CHECK(r.delta <= 1e-10);
        } else {
            CHECK(std::isnan(r.p_analytic));
            CHECK(r.p_enum >= 0.0);
        }
    }
}

TEST_CASE("csv format is stable and self-describing") {
    SweepSpec spec;
    spec.c_min = 0.25;
    spec.c_max = 0.75;
    spec.points = 2;
    spec.depths = {0};
    spec.strategies = {Termination::Continue};
    auto rows = run_sweep(spec);

    std::ostringstream out;
    write_csv(rows, out);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "c,chi,depth,strategy,p_analytic,p_enum,maf,delta");
    std::string line;
    int count = 0;
    while (std::getline(in, line)) {
        ++count;
        CHECK(line.find("continue") != std::string::npos);
        CHECK(line.find("nan") != std::string::npos);  // maf column unused in sweep mode
    }
    CHECK(count == 2);
}

TEST_CASE("json output is deterministic") {
    SweepSpec spec;
    spec.c_min = 0.4;
    spec.c_max = 0.6;
    spec.points = 2;
    spec.depths = {1};
    spec.strategies = {Termination::PlainVnm};
    spec.with_maf = true;

    std::ostringstream first, second;
    write_json(run_sweep(spec), first);
    write_json(run_sweep(spec), second);
    CHECK(first.str() == second.str());
    CHECK(first.str().find("\"strategy\": \"plain-vnm\"") != std::string::npos);
    CHECK(first.str().find("\"maf\"") != std::string::npos);
}

TEST_CASE("sweep validation") {
    SweepSpec spec;
    spec.c_min = 0.9;
    spec.c_max = 0.1;
    CHECK_THROWS_AS(validate(spec), InvalidSpecError);
    spec = SweepSpec{};
    spec.points = 1;
    CHECK_THROWS_AS(validate(spec), InvalidSpecError);
    spec = SweepSpec{};
    spec.depths = {42};
    CHECK_THROWS_AS(validate(spec), InvalidSpecError);
    spec = SweepSpec{};
    spec.strategies.clear();
    CHECK_THROWS_AS(validate(spec), InvalidSpecError);
    CHECK_THROWS_AS(format_from_string("xml"), InvalidSpecError);
    CHECK(format_from_string("json") == OutputFormat::Json);
}

TEST_CASE("maf columns populate through the sweep pipeline") {
    SweepSpec spec;
    spec.c_min = 0.5;
    spec.c_max = 1.0;
    spec.points = 2;
    spec.depths = {0, 1};
    spec.strategies = {Termination::PlainVnm};
    spec.with_maf = true;
    auto rows = run_sweep(spec);
    auto maf_rows = to_maf_rows(rows);
    REQUIRE(maf_rows.size() == rows.size());
    for (const MafRow& r : maf_rows) {
        CHECK(r.maf >= r.success_prob - 1e-10);
        CHECK(r.maf <= 1.0 + 1e-10);
    }
    // depth hurts the average fidelity away from maximal entanglement
    CHECK(rows[0].maf >= rows[1].maf - 1e-9);   // c = 0.5, depths 0 then 1
    CHECK(std::abs(rows[2].maf - 1.0) < 1e-10);  // c = 1
    CHECK(std::abs(rows[3].maf - 1.0) < 1e-10);
}
