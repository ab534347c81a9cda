#include "pqt/protocol.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace pqt {

namespace {

// Unit-fidelity slack for probe classification.  Genuine imbalance at the
// reference angle costs at least ~3.6e-7 of fidelity on the balanced probe;
// float noise on exactly balanced branches stays below ~1e-13.
constexpr double kClassifyTol = 1e-8;
// |<I|P c>| threshold for user-facing correction derivation.
constexpr double kCorrectionTol = 1e-10;
constexpr double kScoreSlack = 1e-12;

constexpr std::array<Pauli, 4> kPaulis{Pauli::I, Pauli::Z, Pauli::X, Pauli::ZX};

int pow3(int k) {
    int r = 1;
    while (k-- > 0) r *= 3;
    return r;
}

std::vector<BasisChoice> candidate_pairs(int r_max) {
    std::vector<int> exps;
    for (int r = 1; r <= r_max; r *= 3) exps.push_back(r);
    std::vector<BasisChoice> out;
    out.reserve(exps.size() * exps.size());
    for (int rd : exps) {
        for (int ro : exps) out.push_back({rd, ro});
    }
    std::sort(out.begin(), out.end(), [](const BasisChoice& l, const BasisChoice& r) {
        if (l.r_diag + l.r_off != r.r_diag + r.r_off) {
            return l.r_diag + l.r_off < r.r_diag + r.r_off;
        }
        return l.r_diag < r.r_diag;
    });
    return out;
}

const VnmBasis& plain_vnm() {
    static const VnmBasis basis = vnm_basis(VnmKind::Plain, 1, 0.0);
    return basis;
}

// A state evolved alongside the structure probes, with the accumulated
// sqrt-probability so unnormalized root amplitudes can be reconstructed.
struct Payload {
    std::optional<PureState> state;
    double acc = 0.0;
};

struct PayloadBranch {
    Payload next;
    double conditional = 0.0;
};

std::array<PayloadBranch, 4> measure_payload_pair(const Payload& p, std::pair<int, int> pair,
                                                  const BellBasis& basis) {
    std::array<PayloadBranch, 4> out{};
    if (!p.state) return out;
    auto outs = measure_pair(*p.state, pair, basis);
    for (int k = 0; k < 4; ++k) {
        out[k].conditional = outs[k].probability;
        out[k].next.acc = p.acc * std::sqrt(outs[k].probability);
        out[k].next.state = std::move(outs[k].collapsed);
    }
    return out;
}

// Unnormalized Bob vectors for the two VNM outcomes of a two-qubit payload.
std::array<std::array<double, 2>, 2> vnm_unnorm_pair(const Payload& p, int spare,
                                                     const VnmBasis& basis) {
    std::array<std::array<double, 2>, 2> out{{{0.0, 0.0}, {0.0, 0.0}}};
    if (!p.state) return out;
    auto outs = measure_single(*p.state, spare, basis);
    for (int v = 0; v < 2; ++v) {
        if (!outs[v].collapsed) continue;
        double w = p.acc * std::sqrt(outs[v].probability);
        out[v] = {w * (*outs[v].collapsed)[0].real(), w * (*outs[v].collapsed)[1].real()};
    }
    return out;
}

LeafMap leaf_map_from(const std::array<double, 2>& ua, const std::array<double, 2>& ub) {
    const double paa = probe_info_a().a.real(), pab = probe_info_a().b.real();
    const double pba = probe_info_b().a.real(), pbb = probe_info_b().b.real();
    const double det = paa * pbb - pba * pab;
    LeafMap m;
    m.m00 = (ua[0] * pbb - ub[0] * pab) / det;
    m.m01 = (-ua[0] * pba + ub[0] * paa) / det;
    m.m10 = (ua[1] * pbb - ub[1] * pab) / det;
    m.m11 = (-ua[1] * pba + ub[1] * paa) / det;
    return m;
}

PureState retensor(const BellVector& v, std::pair<int, int> pair, const PureState& collapsed) {
    return tensor(bell_vector_state(v, pair), collapsed).sorted_by_label();
}

Payload retensor_payload(const BellVector& v, std::pair<int, int> pair, Payload branch) {
    if (branch.state) branch.state = retensor(v, pair, *branch.state);
    return branch;
}

double best_pauli_fidelity(const PureState& bob, const InfoQubit& info, Pauli* which = nullptr) {
    double best = -1.0;
    for (Pauli p : kPaulis) {
        double f = fidelity(apply_pauli(bob, p), info);
        if (f > best) {
            best = f;
            if (which) *which = p;
        }
    }
    return best;
}

// Probability-weighted average of the best-Pauli fidelity over the implicit
// plain-VNM split of a two-qubit failure residual.
double failure_fidelity(const PureState& user2q, int spare, const InfoQubit& info) {
    auto outs = measure_single(user2q, spare, plain_vnm());
    double f = 0.0;
    for (const auto& o : outs) {
        if (o.collapsed) f += o.probability * best_pauli_fidelity(*o.collapsed, info);
    }
    return f;
}

int spare_of(const PureState& state, std::pair<int, int> pair) {
    for (int l : state.labels()) {
        if (l != pair.first && l != pair.second && l != 3) return l;
    }
    throw UnknownQubitLabelError("register has no spare qubit for this pair");
}

// Entanglement-matched terminal exponent: the residual skew at the reference
// angle pins the unique candidate, the scan plus the log-ratio estimate keep
// the search honest.
int select_terminal_exponent(const PureState& sa, const PureState& sb, const InfoQubit& ia,
                             const InfoQubit& ib, double chi_ref, int spare, int r_cap) {
    std::vector<int> cands;
    for (int r = 1; r <= r_cap; ++r) cands.push_back(r);
    const double lt = std::log(std::tan(chi_ref));
    auto push_estimate = [&](double num, double den) {
        if (num <= 0.0 || den <= 0.0 || !std::isfinite(lt) || std::abs(lt) < 1e-12) return;
        double est = std::log(den / num) / lt;
        for (long d = std::lround(est) - 1; d <= std::lround(est) + 1; ++d) {
            if (d >= 1 && d <= 1'000'000 && std::find(cands.begin(), cands.end(), d) == cands.end()) {
                cands.push_back(static_cast<int>(d));
            }
        }
    };
    const auto& amp = sa.amplitudes();
    push_estimate(std::abs(amp[0]), std::abs(amp[3]));  // diagonal residual
    push_estimate(std::abs(amp[1]), std::abs(amp[2]));  // antidiagonal residual
    std::sort(cands.begin(), cands.end());

    int best_r = 1;
    double best_unit = -1.0, best_fid = -1.0;
    for (int r : cands) {
        VnmBasis basis = vnm_basis(VnmKind::Generalized, r, chi_ref);
        auto va = measure_single(sa, spare, basis);
        auto vb = measure_single(sb, spare, basis);
        double unit_mass = 0.0, avg_fid = 0.0;
        for (int v = 0; v < 2; ++v) {
            if (!va[v].collapsed || !vb[v].collapsed) continue;
            bool unit = false;
            for (Pauli p : kPaulis) {
                if (fidelity(apply_pauli(*va[v].collapsed, p), ia) >= 1.0 - kClassifyTol &&
                    fidelity(apply_pauli(*vb[v].collapsed, p), ib) >= 1.0 - kClassifyTol) {
                    unit = true;
                    break;
                }
            }
            double w = 0.5 * (va[v].probability + vb[v].probability);
            if (unit) unit_mass += w;
            avg_fid += 0.5 * (va[v].probability * best_pauli_fidelity(*va[v].collapsed, ia) +
                              vb[v].probability * best_pauli_fidelity(*vb[v].collapsed, ib));
        }
        if (unit_mass > best_unit + kScoreSlack ||
            (unit_mass > best_unit - kScoreSlack && avg_fid > best_fid + kScoreSlack)) {
            best_unit = unit_mass;
            best_fid = avg_fid;
            best_r = r;
        }
    }
    return best_r;
}

struct EnumCtx {
    double chi = 0.0;
    InfoQubit info;
    int max_rep = 0;
    Termination termination = Termination::Continue;
    ProtocolTrace trace;
    std::vector<double> attempt_mass;
};

struct NodeStates {
    PureState sa, sb;  // structure probes at the reference angle
    Payload pa, pb;    // payload probes at the run angle
    Payload user;
};

void emit_terminal(int k, int attempt, const std::vector<int>& kpath,
                   const std::vector<BasisChoice>& exps, int spare,
                   const PayloadBranch& out_pa, const PayloadBranch& out_pb,
                   const PayloadBranch& out_user, EnumCtx& ctx) {
    BranchRecord base;
    base.path = kpath;
    base.attempt_count = attempt + 1;
    base.status = BranchStatus::Failure;
    base.exponents = exps;
    base.probability = out_user.next.acc * out_user.next.acc;
    base.collapsed = out_user.next.state;
    // The terminal measurement is classified at the run's own angle: unlike
    // the repeated-measurement accounting, a terminal residual that happens to
    // be correctable (e.g. any residual at chi = pi/4) genuinely adds success.
    if (ctx.termination == Termination::Continue || !out_pa.next.state ||
        !out_pb.next.state) {
        if (base.collapsed) {
            base.bob_fidelity = failure_fidelity(*base.collapsed, spare, ctx.info);
        }
        for (int v = 0; v < 2; ++v) {
            ctx.trace.leaf_maps.push_back(
                leaf_map_from(vnm_unnorm_pair(out_pa.next, spare, plain_vnm())[v],
                              vnm_unnorm_pair(out_pb.next, spare, plain_vnm())[v]));
        }
        ctx.trace.branches.push_back(std::move(base));
        return;
    }

    ProbePair probes{probe_info_a(), probe_info_b(), *out_pa.next.state, *out_pb.next.state,
                     ctx.chi};
    auto records = terminate_with_vnm(base, probes, ctx.info, ctx.termination, ctx.chi);
    VnmBasis run_basis = plain_vnm();
    if (ctx.termination == Termination::MatchedVnm && records.front().terminal_vnm_exponent) {
        run_basis =
            vnm_basis(VnmKind::Generalized, *records.front().terminal_vnm_exponent, ctx.chi);
    }
    auto maps_a = vnm_unnorm_pair(out_pa.next, spare, run_basis);
    auto maps_b = vnm_unnorm_pair(out_pb.next, spare, run_basis);
    for (int v = 0; v < 2; ++v) {
        ctx.trace.leaf_maps.push_back(leaf_map_from(maps_a[v], maps_b[v]));
        if (records[v].unit_for_all_inputs) ctx.trace.terminal_success += records[v].probability;
        ctx.trace.branches.push_back(std::move(records[v]));
    }
}

void enumerate_node(const NodeStates& node, int attempt, const std::vector<int>& path,
                    std::vector<BasisChoice> exps, EnumCtx& ctx) {
    const std::pair<int, int> pair = (attempt % 2 == 0) ? std::pair<int, int>{0, 1}
                                                        : std::pair<int, int>{0, 2};
    const int spare = (attempt % 2 == 0) ? 2 : 1;

    ProbePair probes{probe_info_a(), probe_info_b(), node.sa, node.sb, kReferenceChi};
    const BasisChoice bc = select_basis(probes, pair, pow3(attempt + 1));
    exps.push_back(bc);

    const BellBasis basis_ref = mixed_basis(bc.r_diag, bc.r_off, kReferenceChi);
    const BellBasis basis_run = mixed_basis(bc.r_diag, bc.r_off, ctx.chi);

    auto outs_sa = measure_pair(node.sa, pair, basis_ref);
    auto outs_sb = measure_pair(node.sb, pair, basis_ref);
    auto outs_pa = measure_payload_pair(node.pa, pair, basis_run);
    auto outs_pb = measure_payload_pair(node.pb, pair, basis_run);
    auto outs_user = measure_payload_pair(node.user, pair, basis_run);

    for (int k = 0; k < 4; ++k) {
        std::vector<int> kpath = path;
        kpath.push_back(k);
        auto corrections =
            classify(outs_sa[k], probe_info_a(), outs_sb[k], probe_info_b(), spare);
        if (corrections) {
            double branch_mass = 0.0;
            auto maps_a = vnm_unnorm_pair(outs_pa[k].next, spare, plain_vnm());
            auto maps_b = vnm_unnorm_pair(outs_pb[k].next, spare, plain_vnm());
            std::vector<MeasurementOutcome> user_vnm;
            if (outs_user[k].next.state) {
                user_vnm = measure_single(*outs_user[k].next.state, spare, plain_vnm());
            }
            for (int v = 0; v < 2; ++v) {
                BranchRecord rec;
                rec.path = kpath;
                rec.path.push_back(v);
                rec.attempt_count = attempt + 1;
                rec.status = BranchStatus::Success;
                rec.correction = (v == 0) ? corrections->plus : corrections->minus;
                rec.exponents = exps;
                rec.unit_for_all_inputs = true;
                rec.bob_fidelity = 1.0;
                if (!user_vnm.empty()) {
                    double user_p = outs_user[k].next.acc * outs_user[k].next.acc;
                    rec.probability = user_p * user_vnm[v].probability;
                    if (user_vnm[v].collapsed) {
                        rec.collapsed = user_vnm[v].collapsed;
                        rec.bob_fidelity =
                            fidelity(apply_pauli(*user_vnm[v].collapsed, *rec.correction), ctx.info);
                    }
                }
                branch_mass += rec.probability;
                ctx.trace.leaf_maps.push_back(leaf_map_from(maps_a[v], maps_b[v]));
                ctx.trace.branches.push_back(std::move(rec));
            }
            ctx.attempt_mass[attempt] += branch_mass;
        } else if (attempt < ctx.max_rep && outs_sa[k].collapsed && outs_sb[k].collapsed) {
            NodeStates next{
                retensor(basis_ref.vectors[k], pair, *outs_sa[k].collapsed),
                retensor(basis_ref.vectors[k], pair, *outs_sb[k].collapsed),
                retensor_payload(basis_run.vectors[k], pair, outs_pa[k].next),
                retensor_payload(basis_run.vectors[k], pair, outs_pb[k].next),
                retensor_payload(basis_run.vectors[k], pair, outs_user[k].next)};
            enumerate_node(next, attempt + 1, kpath, exps, ctx);
        } else {
            emit_terminal(k, attempt, kpath, exps, spare, outs_pa[k], outs_pb[k],
                          outs_user[k], ctx);
        }
    }
}

}  // namespace

const char* to_string(Termination t) {
    switch (t) {
        case Termination::Continue: return "continue";
        case Termination::PlainVnm: return "plain-vnm";
        case Termination::MatchedVnm: return "matched-vnm";
    }
    return "?";
}

Termination termination_from_string(std::string_view name) {
    if (name == "continue") return Termination::Continue;
    if (name == "plain-vnm") return Termination::PlainVnm;
    if (name == "matched-vnm") return Termination::MatchedVnm;
    throw InvalidSpecError("unknown termination strategy: " + std::string(name));
}

const char* to_string(BranchStatus s) {
    switch (s) {
        case BranchStatus::Success: return "success";
        case BranchStatus::Failure: return "failure";
        case BranchStatus::Terminated: return "terminated";
    }
    return "?";
}

InfoQubit probe_info_a() { return InfoQubit{0.96, 0.28}; }

InfoQubit probe_info_b() {
    const double inv = 1.0 / std::numbers::sqrt2;
    return InfoQubit{inv, inv};
}

ProbePair make_root_probes(double chi) {
    GhzResource res{chi};
    return ProbePair{probe_info_a(), probe_info_b(),
                     tensor(make_info_state(probe_info_a()), make_ghz(res)),
                     tensor(make_info_state(probe_info_b()), make_ghz(res)), chi};
}

BasisChoice select_basis(const ProbePair& probes, std::pair<int, int> qubits, int r_max) {
    if (r_max < 1) throw OutOfRangeError("r_max must be positive");
    const int spare = spare_of(probes.state_a, qubits);
    for (const BasisChoice& bc : candidate_pairs(r_max)) {
        BellBasis basis = mixed_basis(bc.r_diag, bc.r_off, probes.chi);
        auto outs_a = measure_pair(probes.state_a, qubits, basis);
        auto outs_b = measure_pair(probes.state_b, qubits, basis);
        int hits = 0;
        for (int k = 0; k < 4; ++k) {
            if (classify(outs_a[k], probes.info_a, outs_b[k], probes.info_b, spare)) ++hits;
        }
        if (hits >= 2) return bc;
    }
    throw NoMatchedBasisError("no exponent pair up to " + std::to_string(r_max) +
                              " yields two correctable outcomes");
}

std::optional<VnmCorrections> classify(const MeasurementOutcome& outcome_a,
                                       const InfoQubit& info_a,
                                       const MeasurementOutcome& outcome_b,
                                       const InfoQubit& info_b, int spare_qubit) {
    if (!outcome_a.collapsed || !outcome_b.collapsed) return std::nullopt;
    auto va = measure_single(*outcome_a.collapsed, spare_qubit, plain_vnm());
    auto vb = measure_single(*outcome_b.collapsed, spare_qubit, plain_vnm());
    VnmCorrections corr;
    for (int v = 0; v < 2; ++v) {
        if (!va[v].collapsed || !vb[v].collapsed) return std::nullopt;
        bool found = false;
        for (Pauli p : kPaulis) {
            if (fidelity(apply_pauli(*va[v].collapsed, p), info_a) >= 1.0 - kClassifyTol &&
                fidelity(apply_pauli(*vb[v].collapsed, p), info_b) >= 1.0 - kClassifyTol) {
                (v == 0 ? corr.plus : corr.minus) = p;
                found = true;
                break;
            }
        }
        if (!found) return std::nullopt;
    }
    return corr;
}

std::optional<Pauli> derive_correction(const PureState& collapsed, const InfoQubit& target) {
    for (Pauli p : kPaulis) {
        PureState fixed = apply_pauli(collapsed, p);
        Amplitude overlap =
            std::conj(target.a) * fixed[0] + std::conj(target.b) * fixed[1];
        if (std::abs(overlap) >= 1.0 - kCorrectionTol) return p;
    }
    return std::nullopt;
}

ProtocolTrace run_enumeration(const InfoQubit& info_in, const GhzResource& resource,
                              const ProtocolConfig& config) {
    InfoQubit info = make_info_qubit(info_in.a, info_in.b);
    if (config.max_repetitions < 0 || config.max_repetitions > kMaxRepetitionCeiling) {
        throw OutOfRangeError("max_repetitions must lie in [0, " +
                              std::to_string(kMaxRepetitionCeiling) + "]");
    }
    PureState ghz_run = make_ghz(resource);
    GhzResource ref{kReferenceChi};

    EnumCtx ctx;
    ctx.chi = resource.chi;
    ctx.info = info;
    ctx.max_rep = config.max_repetitions;
    ctx.termination = config.termination;
    ctx.attempt_mass.assign(config.max_repetitions + 1, 0.0);

    NodeStates root{tensor(make_info_state(probe_info_a()), make_ghz(ref)),
                    tensor(make_info_state(probe_info_b()), make_ghz(ref)),
                    Payload{tensor(make_info_state(probe_info_a()), ghz_run), 1.0},
                    Payload{tensor(make_info_state(probe_info_b()), ghz_run), 1.0},
                    Payload{tensor(make_info_state(info), ghz_run), 1.0}};
    enumerate_node(root, 0, {}, {}, ctx);

    ctx.trace.per_attempt_success.resize(ctx.attempt_mass.size());
    std::partial_sum(ctx.attempt_mass.begin(), ctx.attempt_mass.end(),
                     ctx.trace.per_attempt_success.begin());
    ctx.trace.chi = resource.chi;
    ctx.trace.info = info;
    ctx.trace.termination = config.termination;
    return ctx.trace;
}

SampleStats run_sampled(const InfoQubit& info, const GhzResource& resource,
                        const ProtocolConfig& config, long trials) {
    if (trials < 1) throw OutOfRangeError("trials must be >= 1");
    ProtocolTrace trace = run_enumeration(info, resource, config);

    std::vector<double> cumulative;
    cumulative.reserve(trace.branches.size());
    double total = 0.0;
    for (const BranchRecord& b : trace.branches) {
        total += b.probability;
        cumulative.push_back(total);
    }

    std::mt19937_64 rng(config.rng_seed);
    auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    long successes = 0;
    double fid_sum = 0.0;
    for (long t = 0; t < trials; ++t) {
        double u = uniform() * total;
        std::size_t i = std::lower_bound(cumulative.begin(), cumulative.end(), u) -
                        cumulative.begin();
        if (i >= trace.branches.size()) i = trace.branches.size() - 1;
        const BranchRecord& leaf = trace.branches[i];
        bool success = leaf.status == BranchStatus::Success ||
                       (leaf.status == BranchStatus::Terminated && leaf.unit_for_all_inputs);
        if (success) ++successes;
        fid_sum += leaf.bob_fidelity;
    }
    return SampleStats{trials, static_cast<double>(successes) / static_cast<double>(trials),
                       fid_sum / static_cast<double>(trials)};
}

std::vector<BranchRecord> terminate_with_vnm(const BranchRecord& branch,
                                             const ProbePair& probes,
                                             const InfoQubit& info, Termination strategy,
                                             double chi) {
    if (strategy == Termination::Continue) {
        throw InvalidSpecError("terminal VNM requires a plain-vnm or matched-vnm strategy");
    }
    if (probes.state_a.num_qubits() != 2 || probes.state_b.num_qubits() != 2) {
        throw UnknownQubitLabelError("probe residuals must cover the spare qubit and qubit 3");
    }
    const int spare = probes.state_a.labels()[0];

    std::optional<int> exponent;
    VnmBasis ref_basis = plain_vnm();
    VnmBasis run_basis = plain_vnm();
    if (strategy == Termination::MatchedVnm) {
        int n = std::max(branch.attempt_count - 1, 0);
        int r_cap = std::min(2 * pow3(std::min(n, 3)) + 2, 64);
        int r = select_terminal_exponent(probes.state_a, probes.state_b, probes.info_a,
                                         probes.info_b, probes.chi, spare, r_cap);
        exponent = r;
        ref_basis = vnm_basis(VnmKind::Generalized, r, probes.chi);
        run_basis = vnm_basis(VnmKind::Generalized, r, chi);
    }

    auto va = measure_single(probes.state_a, spare, ref_basis);
    auto vb = measure_single(probes.state_b, spare, ref_basis);
    std::vector<MeasurementOutcome> user;
    if (branch.collapsed) user = measure_single(*branch.collapsed, spare, run_basis);

    std::vector<BranchRecord> out;
    for (int v = 0; v < 2; ++v) {
        BranchRecord rec;
        rec.path = branch.path;
        rec.path.push_back(v);
        rec.attempt_count = branch.attempt_count;
        rec.status = BranchStatus::Terminated;
        rec.exponents = branch.exponents;
        rec.terminal_vnm_exponent = exponent;
        if (va[v].collapsed && vb[v].collapsed) {
            for (Pauli p : kPaulis) {
                if (fidelity(apply_pauli(*va[v].collapsed, p), probes.info_a) >=
                        1.0 - kClassifyTol &&
                    fidelity(apply_pauli(*vb[v].collapsed, p), probes.info_b) >=
                        1.0 - kClassifyTol) {
                    rec.unit_for_all_inputs = true;
                    break;
                }
            }
        }
        if (!user.empty()) {
            rec.probability = branch.probability * user[v].probability;
            if (user[v].collapsed) {
                Pauli best = Pauli::I;
                rec.bob_fidelity = best_pauli_fidelity(*user[v].collapsed, info, &best);
                rec.correction = best;
                rec.collapsed = user[v].collapsed;
            }
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace pqt
