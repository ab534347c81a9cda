#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "pqt/bases.hpp"
#include "pqt/state.hpp"

namespace pqt {

/// What Alice does with the spare qubit when the final repetition also fails:
/// keep reporting failure (Continue), measure it in |+->/|-> (PlainVnm), or in
/// an entanglement-matched generalized basis (MatchedVnm).
enum class Termination { Continue, PlainVnm, MatchedVnm };

const char* to_string(Termination t);
Termination termination_from_string(std::string_view name);

inline constexpr int kMaxRepetitionCeiling = 12;

struct ProtocolConfig {
    int max_repetitions = 0;  // attempts 0..max_repetitions
    Termination termination = Termination::Continue;
    std::uint64_t rng_seed = 1;  // sampling mode only
};

enum class BranchStatus { Success, Failure, Terminated };

const char* to_string(BranchStatus s);

/// Mixed-exponent choice (r_diag for the |00>/|11> sector, r_off for |01>/|10>).
struct BasisChoice {
    int r_diag = 1;
    int r_off = 1;
    friend bool operator==(const BasisChoice&, const BasisChoice&) = default;
};

/// One leaf of the measurement tree.
struct BranchRecord {
    std::vector<int> path;     // Bell outcome per attempt, then final VNM outcome if split
    int attempt_count = 0;     // number of Bell measurements performed
    double probability = 0.0;  // joint probability for the run's input
    BranchStatus status = BranchStatus::Failure;
    std::optional<Pauli> correction;          // Success/Terminated only
    double bob_fidelity = 0.0;                // post-correction, for the run's input
    std::optional<PureState> collapsed;       // absent on zero-probability leaves
    bool unit_for_all_inputs = false;         // probe-verified unit fidelity for every (a,b)
    std::vector<BasisChoice> exponents;       // basis chosen at each attempt on the path
    std::optional<int> terminal_vnm_exponent; // MatchedVnm leaves only
};

/// 2x2 real map taking (a,b) to Bob's unnormalized qubit at a final leaf.
/// Every amplitude in the channel and bases is real, so the map is too.
struct LeafMap {
    double m00 = 0.0, m01 = 0.0;
    double m10 = 0.0, m11 = 0.0;
};

struct ProtocolTrace {
    std::vector<BranchRecord> branches;
    std::vector<double> per_attempt_success;  // cumulative Bell-measurement success mass
    double terminal_success = 0.0;            // unit-fidelity mass added by terminal VNM
    double chi = 0.0;
    InfoQubit info;
    Termination termination = Termination::Continue;
    std::vector<LeafMap> leaf_maps;  // complete partition of probability over final leaves

    double total_success() const {
        return (per_attempt_success.empty() ? 0.0 : per_attempt_success.back()) +
               terminal_success;
    }
};

/// Two linearly independent inputs evolved in lockstep.  A collapse map is
/// proportional to a Pauli, i.e. correctable for every (a,b), exactly when a
/// single correction fixes both probes, so the pair decides classification.
struct ProbePair {
    InfoQubit info_a;
    InfoQubit info_b;
    PureState state_a;
    PureState state_b;
    double chi = 0.0;  // angle the probe states were built at
};

/// Probe inputs: perturbed-(1,0) (exactly normalized 24/25, 7/25) and balanced.
InfoQubit probe_info_a();
InfoQubit probe_info_b();

/// Angle at which branch structure (basis choice, success classification,
/// corrections) is decided.  The structure is angle-independent on (0, pi/4)
/// because the matching conditions are integer exponent identities; fixing it
/// keeps the accounting uniform at chi = pi/4, where every branch happens to
/// become correctable but the protocol still treats the unbalanced outcomes
/// as failures.  Sits close to pi/4 so deep-repetition amplitude skew stays
/// representable up to the attempt ceiling, yet far enough that a genuine
/// imbalance never falls under the classification tolerance.
inline constexpr double kReferenceChi = 0.7850981633974483;  // pi/4 - 3e-4

/// Fresh four-qubit probe pair (info qubit tensored with the resource) at chi.
ProbePair make_root_probes(double chi);

/// Smallest mixed basis (ordered by exponent sum, then r_diag; exponents are
/// powers of three) for which at least two outcomes are correctable for every
/// input.  Throws NoMatchedBasisError if nothing qualifies up to r_max.
BasisChoice select_basis(const ProbePair& probes, std::pair<int, int> qubits, int r_max);

struct VnmCorrections {
    Pauli plus = Pauli::I;   // correction after the first VNM outcome
    Pauli minus = Pauli::I;  // correction after the second
};

/// Success iff both plain-VNM outcomes on the spare qubit admit a Pauli that
/// recovers the information state for every (a,b), checked on both probes.
std::optional<VnmCorrections> classify(const MeasurementOutcome& outcome_a,
                                       const InfoQubit& info_a,
                                       const MeasurementOutcome& outcome_b,
                                       const InfoQubit& info_b, int spare_qubit);

/// The unique Pauli with |<I|P|collapsed>| = 1, if any.
std::optional<Pauli> derive_correction(const PureState& collapsed, const InfoQubit& target);

/// Full branch-tree enumeration with exact probabilities.
ProtocolTrace run_enumeration(const InfoQubit& info, const GhzResource& resource,
                              const ProtocolConfig& config);

struct SampleStats {
    long trials = 0;
    double success_frequency = 0.0;
    double mean_fidelity = 0.0;
};

/// Seeded Monte Carlo over the enumeration's exact leaf distribution.
SampleStats run_sampled(const InfoQubit& info, const GhzResource& resource,
                        const ProtocolConfig& config, long trials);

/// Splits a max-depth failure branch by measuring the spare qubit, either in
/// the plain basis or in the exponent chosen by entanglement matching.  The
/// probe pair holds the branch's two-qubit probe residuals over (spare, 3);
/// `info` is the run's input, used for the reported corrections/fidelities.
std::vector<BranchRecord> terminate_with_vnm(const BranchRecord& branch,
                                             const ProbePair& probes, const InfoQubit& info,
                                             Termination strategy, double chi);

}  // namespace pqt
