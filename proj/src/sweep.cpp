#include "pqt/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include <json.hpp>

#include "pqt/analytic.hpp"
#include "pqt/maf.hpp"

namespace pqt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

SweepRow compute_row(double c, int depth, Termination strategy, bool with_maf) {
    SweepRow row;
    row.c = c;
    row.chi = chi_from_concurrence(c);
    row.depth = depth;
    row.strategy = strategy;

    InfoQubit balanced{1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
    ProtocolConfig config;
    config.max_repetitions = depth;
    config.termination = strategy;
    ProtocolTrace trace = run_enumeration(balanced, GhzResource{row.chi}, config);
    row.p_enum = trace.total_success();

    bool analytic_available = depth <= 3 && strategy == Termination::Continue;
    row.p_analytic = analytic_available ? p_success(depth, c) : kNaN;
    row.delta = analytic_available ? std::abs(row.p_analytic - row.p_enum) : kNaN;
    row.maf = with_maf ? maf_of_trace(trace) : kNaN;
    return row;
}

}  // namespace

OutputFormat format_from_string(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw InvalidSpecError("unknown output format: " + std::string(name));
}

void validate(const SweepSpec& spec) {
    if (!(spec.c_min >= 0.0 && spec.c_min < spec.c_max && spec.c_max <= 1.0)) {
        throw InvalidSpecError("sweep requires 0 <= c_min < c_max <= 1");
    }
    if (spec.points < 2) throw InvalidSpecError("sweep needs at least 2 points");
    if (spec.depths.empty()) throw InvalidSpecError("sweep needs at least one depth");
    for (int d : spec.depths) {
        if (d < 0 || d > kMaxRepetitionCeiling) {
            throw InvalidSpecError("depths must lie in [0, " +
                                   std::to_string(kMaxRepetitionCeiling) + "]");
        }
    }
    if (spec.strategies.empty()) throw InvalidSpecError("sweep needs at least one strategy");
    if (spec.jobs < 0) throw InvalidSpecError("jobs must be non-negative");
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    validate(spec);

    struct Task {
        double c;
        int depth;
        Termination strategy;
    };
    std::vector<Task> tasks;
    for (int i = 0; i < spec.points; ++i) {
        double c = spec.c_min + (spec.c_max - spec.c_min) * i / (spec.points - 1);
        for (int depth : spec.depths) {
            for (Termination strategy : spec.strategies) tasks.push_back({c, depth, strategy});
        }
    }

    std::vector<SweepRow> rows(tasks.size());
    unsigned jobs = spec.jobs > 0 ? static_cast<unsigned>(spec.jobs)
                                  : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, tasks.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                rows[i] = compute_row(tasks[i].c, tasks[i].depth, tasks[i].strategy,
                                      spec.with_maf);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "c,chi,depth,strategy,p_analytic,p_enum,maf,delta\n";
    for (const SweepRow& r : rows) {
        out << fmt17(r.c) << ',' << fmt17(r.chi) << ',' << r.depth << ','
            << to_string(r.strategy) << ',' << fmt17(r.p_analytic) << ',' << fmt17(r.p_enum)
            << ',' << fmt17(r.maf) << ',' << fmt17(r.delta) << '\n';
    }
}

void write_json(const std::vector<SweepRow>& rows, std::ostream& out) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const SweepRow& r : rows) {
        nlohmann::ordered_json obj;
        obj["c"] = r.c;
        obj["chi"] = r.chi;
        obj["depth"] = r.depth;
        obj["strategy"] = to_string(r.strategy);
        obj["p_analytic"] = r.p_analytic;
        obj["p_enum"] = r.p_enum;
        obj["maf"] = r.maf;
        obj["delta"] = r.delta;
        doc.push_back(std::move(obj));
    }
    out << doc.dump(2) << '\n';
}

std::vector<MafRow> to_maf_rows(const std::vector<SweepRow>& rows) {
    std::vector<MafRow> out;
    out.reserve(rows.size());
    for (const SweepRow& r : rows) {
        if (std::isnan(r.maf)) continue;
        out.push_back(MafRow{r.c, r.depth, r.strategy, r.maf, r.p_enum});
    }
    return out;
}

void emit_rows(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    auto write = [&](std::ostream& out) {
        if (spec.format == OutputFormat::Csv) {
            write_csv(rows, out);
        } else {
            write_json(rows, out);
        }
        if (!out) throw IoError("failed while writing sweep output");
    };
    if (spec.output_path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream file(spec.output_path, std::ios::binary);
    if (!file) throw IoError("cannot open output file: " + spec.output_path);
    write(file);
}

}  // namespace pqt
