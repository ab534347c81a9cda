#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pqt/analytic.hpp"
#include "pqt/maf.hpp"
#include "pqt/protocol.hpp"
#include "pqt/sweep.hpp"
#include "pqt/verify.hpp"

namespace {

using nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string path_string(const std::vector<int>& path) {
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(path[i]);
    }
    return s;
}

struct RunOptions {
    double a_re = 1.0, a_im = 0.0, b_re = 0.0, b_im = 0.0;
    double chi = std::numbers::pi / 4.0;
    int depth = 0;
    std::string strategy = "continue";
    std::uint64_t seed = 1;
    long trials = 100000;
    std::string mode = "enumerate";
    std::string format = "text";
    std::string out;
};

ordered_json trace_to_json(const pqt::ProtocolTrace& trace) {
    ordered_json doc;
    doc["chi"] = trace.chi;
    doc["concurrence"] = std::sin(2.0 * trace.chi);
    doc["a"] = {trace.info.a.real(), trace.info.a.imag()};
    doc["b"] = {trace.info.b.real(), trace.info.b.imag()};
    doc["strategy"] = pqt::to_string(trace.termination);
    doc["per_attempt_success"] = trace.per_attempt_success;
    doc["terminal_success"] = trace.terminal_success;
    doc["total_success"] = trace.total_success();
    ordered_json branches = ordered_json::array();
    for (const pqt::BranchRecord& b : trace.branches) {
        ordered_json rec;
        rec["path"] = path_string(b.path);
        rec["attempts"] = b.attempt_count;
        rec["probability"] = b.probability;
        rec["status"] = pqt::to_string(b.status);
        rec["correction"] = b.correction ? pqt::to_string(*b.correction) : "";
        rec["fidelity"] = b.bob_fidelity;
        rec["unit_for_all_inputs"] = b.unit_for_all_inputs;
        branches.push_back(std::move(rec));
    }
    doc["branches"] = std::move(branches);
    return doc;
}

void print_trace_text(const pqt::ProtocolTrace& trace, std::ostream& out) {
    out << "chi = " << fmt17(trace.chi) << "  concurrence = " << fmt17(std::sin(2.0 * trace.chi))
        << "  strategy = " << pqt::to_string(trace.termination) << "\n";
    out << "path            prob                    status      corr  fidelity\n";
    for (const pqt::BranchRecord& b : trace.branches) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-15s %-23.17g %-11s %-5s %.12g\n",
                      path_string(b.path).c_str(), b.probability, pqt::to_string(b.status),
                      b.correction ? pqt::to_string(*b.correction) : "-", b.bob_fidelity);
        out << line;
    }
    out << "cumulative success per attempt:";
    for (double p : trace.per_attempt_success) out << ' ' << fmt17(p);
    out << "\ntotal success (incl. terminal measurements) = " << fmt17(trace.total_success())
        << "\n";
}

int cmd_run(const RunOptions& opt) {
    pqt::InfoQubit info =
        pqt::make_info_qubit({opt.a_re, opt.a_im}, {opt.b_re, opt.b_im});
    pqt::ProtocolConfig config;
    config.max_repetitions = opt.depth;
    config.termination = pqt::termination_from_string(opt.strategy);
    config.rng_seed = opt.seed;

    ordered_json doc;
    std::string text;
    if (opt.mode == "enumerate") {
        pqt::ProtocolTrace trace = pqt::run_enumeration(info, pqt::GhzResource{opt.chi}, config);
        doc = trace_to_json(trace);
        std::ostringstream oss;
        print_trace_text(trace, oss);
        text = oss.str();
    } else if (opt.mode == "sample") {
        pqt::SampleStats stats =
            pqt::run_sampled(info, pqt::GhzResource{opt.chi}, config, opt.trials);
        doc["mode"] = "sample";
        doc["seed"] = opt.seed;
        doc["trials"] = stats.trials;
        doc["success_frequency"] = stats.success_frequency;
        doc["mean_fidelity"] = stats.mean_fidelity;
        text = "trials = " + std::to_string(stats.trials) +
               "\nsuccess frequency = " + fmt17(stats.success_frequency) +
               "\nmean fidelity = " + fmt17(stats.mean_fidelity) + "\n";
    } else {
        throw pqt::InvalidSpecError("mode must be enumerate or sample");
    }

    std::string payload = (opt.format == "json") ? doc.dump(2) + "\n" : text;
    if (opt.out.empty()) {
        std::cout << payload;
    } else {
        std::ofstream file(opt.out, std::ios::binary);
        if (!file) throw pqt::IoError("cannot open output file: " + opt.out);
        file << payload;
        if (!file) throw pqt::IoError("failed while writing: " + opt.out);
    }
    return 0;
}

void add_sweep_options(CLI::App* cmd, pqt::SweepSpec& spec, std::string& strategy_csv,
                       std::string& format_name) {
    cmd->add_option("--c-min", spec.c_min, "smallest concurrence")->capture_default_str();
    cmd->add_option("--c-max", spec.c_max, "largest concurrence")->capture_default_str();
    cmd->add_option("--points", spec.points, "grid points")->capture_default_str();
    cmd->add_option("--depths", spec.depths, "repetition depths")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--strategy", strategy_csv,
                    "termination strategies (comma separated: continue, plain-vnm, matched-vnm)")
        ->capture_default_str();
    cmd->add_option("--jobs", spec.jobs, "worker threads (0 = all cores)")
        ->capture_default_str();
    cmd->add_option("--format", format_name, "output format (csv or json)")
        ->capture_default_str();
    cmd->add_option("--out", spec.output_path, "output file (default stdout)");
    cmd->fallthrough();
}

void finish_spec(pqt::SweepSpec& spec, const std::string& strategy_csv,
                 const std::string& format_name) {
    spec.strategies.clear();
    std::size_t start = 0;
    while (start <= strategy_csv.size()) {
        std::size_t comma = strategy_csv.find(',', start);
        std::string token = strategy_csv.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!token.empty()) spec.strategies.push_back(pqt::termination_from_string(token));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    spec.format = pqt::format_from_string(format_name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"probabilistic teleportation through a partially entangled GHZ channel"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key=value config file; subcommand options live under a [sweep], [maf] or "
                   "[run] section; command-line flags take precedence");

    pqt::SweepSpec sweep_spec;
    std::string sweep_strategies = "continue";
    std::string sweep_format = "csv";
    CLI::App* sweep = app.add_subcommand(
        "sweep", "tabulate success probability against concurrence");
    add_sweep_options(sweep, sweep_spec, sweep_strategies, sweep_format);

    pqt::SweepSpec maf_spec;
    maf_spec.depths = {0, 1, 2};
    std::string maf_strategies = "plain-vnm";
    std::string maf_format = "csv";
    CLI::App* maf = app.add_subcommand(
        "maf", "tabulate maximal average fidelity against concurrence");
    add_sweep_options(maf, maf_spec, maf_strategies, maf_format);

    RunOptions run_opt;
    CLI::App* runc = app.add_subcommand("run", "single protocol run, full branch report");
    runc->add_option("--a-re", run_opt.a_re, "Re a")->capture_default_str();
    runc->add_option("--a-im", run_opt.a_im, "Im a")->capture_default_str();
    runc->add_option("--b-re", run_opt.b_re, "Re b")->capture_default_str();
    runc->add_option("--b-im", run_opt.b_im, "Im b")->capture_default_str();
    runc->add_option("--chi", run_opt.chi, "entanglement angle in [0, pi/4]")
        ->capture_default_str();
    runc->add_option("--depth", run_opt.depth, "repetition depth")->capture_default_str();
    runc->add_option("--strategy", run_opt.strategy, "continue, plain-vnm or matched-vnm")
        ->capture_default_str();
    runc->add_option("--seed", run_opt.seed, "RNG seed (sample mode)")->capture_default_str();
    runc->add_option("--trials", run_opt.trials, "trial count (sample mode)")
        ->capture_default_str();
    runc->add_option("--mode", run_opt.mode, "enumerate or sample")->capture_default_str();
    runc->add_option("--format", run_opt.format, "text or json")->capture_default_str();
    runc->add_option("--out", run_opt.out, "output file (default stdout)");
    runc->fallthrough();

    CLI::App* verify = app.add_subcommand("verify", "run the verification battery");

    try {
        app.parse(argc, argv);
        if (sweep->parsed()) {
            finish_spec(sweep_spec, sweep_strategies, sweep_format);
            pqt::emit_rows(sweep_spec, pqt::run_sweep(sweep_spec));
            return 0;
        }
        if (maf->parsed()) {
            finish_spec(maf_spec, maf_strategies, maf_format);
            maf_spec.with_maf = true;
            pqt::emit_rows(maf_spec, pqt::run_sweep(maf_spec));
            return 0;
        }
        if (runc->parsed()) return cmd_run(run_opt);
        if (verify->parsed()) {
            int failures = pqt::verify::report(pqt::verify::run_all());
            return failures == 0 ? 0 : 1;
        }
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const pqt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
