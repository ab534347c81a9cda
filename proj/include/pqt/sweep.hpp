#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pqt/protocol.hpp"

namespace pqt {

enum class OutputFormat { Csv, Json };

OutputFormat format_from_string(std::string_view name);

struct SweepSpec {
    double c_min = 0.0;
    double c_max = 1.0;
    int points = 101;
    std::vector<int> depths = {0, 1, 2, 3};
    std::vector<Termination> strategies = {Termination::Continue};
    std::string output_path;  // empty writes to stdout
    OutputFormat format = OutputFormat::Csv;
    int jobs = 0;             // 0 means hardware concurrency
    bool with_maf = false;    // filled by the maf command
};

/// One output row; NaN marks columns that do not apply (analytic values exist
/// only for depth <= 3 under the continue strategy, maf only for maf sweeps).
struct SweepRow {
    double c = 0.0;
    double chi = 0.0;
    int depth = 0;
    Termination strategy = Termination::Continue;
    double p_analytic = 0.0;
    double p_enum = 0.0;
    double maf = 0.0;
    double delta = 0.0;
};

void validate(const SweepSpec& spec);

/// Rows ordered by (c ascending, depth ascending, strategy order as given),
/// computed across a worker pool but assembled deterministically.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void write_json(const std::vector<SweepRow>& rows, std::ostream& out);

/// Writes to spec.output_path (or stdout when empty) in spec.format.
void emit_rows(const SweepSpec& spec, const std::vector<SweepRow>& rows);

/// One MAF table entry; maf always lies in [success_prob, 1].
struct MafRow {
    double c = 0.0;
    int depth = 0;
    Termination strategy = Termination::Continue;
    double maf = 0.0;
    double success_prob = 0.0;
};

/// Projects the MAF view out of sweep rows computed with maf enabled.
std::vector<MafRow> to_maf_rows(const std::vector<SweepRow>& rows);

}  // namespace pqt
