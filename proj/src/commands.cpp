#include "mhd1d/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mhd1d/config.hpp"
#include "mhd1d/limit_study.hpp"
#include "mhd1d/run.hpp"
#include "mhd1d/verify.hpp"

namespace mhd1d {

namespace fs = std::filesystem;

namespace {

fs::path resolve_output_dir(const CommandOptions& options, const RunConfig& config) {
    if (options.output_dir) return *options.output_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
    return config.output_dir;
}

std::string csv_text(const DiagnosticsRecord& record) {
    std::ostringstream os;
    write_csv(os, record);
    return os.str();
}

std::string checkpoint_text(const State& state, const Grid1D& grid) {
    std::ostringstream os;
    write_checkpoint(os, state, grid);
    return os.str();
}

std::string nu_file_name(double nu) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "diagnostics_nu_%.6g.csv", nu);
    return buf;
}

/// Shared prologue: load config, create the output directory.
struct Prepared {
    RunConfig config;
    fs::path dir;
    RunManifest manifest;
};

int prepare(const CommandOptions& options, const std::string& command, Prepared& p, std::ostream& err) {
    try {
        p.config = load_config(options.config_path);
    } catch (const ConfigError& ex) {
        err << "config error: " << ex.what() << "\n";
        return kExitConfig;
    }
    p.dir = resolve_output_dir(options, p.config);
    p.config.output_dir = p.dir.string();
    try {
        fs::create_directories(p.dir);
        write_file_atomic(p.dir / "config.json", canonical_config(p.config));
    } catch (const std::exception& ex) {
        err << "io error: " << ex.what() << "\n";
        return kExitIo;
    }
    p.manifest.command = command;
    p.manifest.fingerprint = config_fingerprint(p.config);
    p.manifest.tool_version = MHD1D_VERSION;
    p.manifest.start_time = utc_timestamp();
    p.manifest.outputs.push_back("config.json");
    return kExitOk;
}

void write_manifest(Prepared& p) {
    p.manifest.end_time = utc_timestamp();
    p.manifest.outputs.push_back("manifest.json");
    write_file_atomic(p.dir / "manifest.json", to_json(p.manifest).dump(2) + "\n");
}

}  // namespace

int cmd_simulate(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    Prepared p;
    if (int rc = prepare(options, "simulate", p, err); rc != kExitOk) return rc;
    const RunConfig& c = p.config;

    std::optional<Simulation> sim;
    try {
        const Grid1D grid = c.grid();
        sim.emplace(c.physics, c.scheme, grid, c.mode, build_initial_state(c.scenario, c.physics, grid),
                    comparison_tag(c));
    } catch (const DomainError& ex) {
        err << "config error: " << ex.what() << "\n";
        return kExitConfig;
    }

    int rc = kExitOk;
    try {
        Simulation* sims[] = {&*sim};
        integrate_lockstep(sims, c.scheme);
    } catch (const BoundaryError& ex) {
        err << "boundary abort: " << ex.what() << "\n";
        p.manifest.boundary_monitor = "tripped";
        p.manifest.status = "boundary_abort";
        rc = kExitBoundary;
    } catch (const NumericalError& ex) {
        err << "numerical failure: " << ex.what() << "\n";
        p.manifest.status = "numerical_failure";
        rc = kExitNumerical;
    }

    // Whatever was computed is persisted, including after an abort.
    try {
        write_file_atomic(p.dir / "diagnostics.csv", csv_text(sim->record()));
        write_file_atomic(p.dir / "final_state.dat", checkpoint_text(sim->state(), sim->grid()));
        p.manifest.outputs.push_back("diagnostics.csv");
        p.manifest.outputs.push_back("final_state.dat");
        p.manifest.clipping_count = sim->clip_events();
        write_manifest(p);
    } catch (const std::exception& ex) {
        err << "io error: " << ex.what() << "\n";
        return kExitIo;
    }
    if (rc == kExitOk)
        out << "simulate: t = " << sim->state().t << ", " << sim->record().rows.size() << " samples, "
            << sim->clip_events() << " clipping events -> " << p.dir.string() << "\n";
    return rc;
}

int cmd_sweep(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    Prepared p;
    if (int rc = prepare(options, "sweep", p, err); rc != kExitOk) return rc;
    const RunConfig& c = p.config;
    const PairConfig pair = c.pair_config();
    try {
        pair.grid();
        build_initial_state(c.scenario, c.physics, pair.grid());
    } catch (const DomainError& ex) {
        err << "config error: " << ex.what() << "\n";
        return kExitConfig;
    }

    // Completed entries are persisted as they arrive so an interrupted sweep
    // leaves a usable partial report.
    ConvergenceReport partial;
    partial.fingerprint = p.manifest.fingerprint;
    std::string io_failure;
    SweepOptions so;
    so.jobs = options.jobs;
    so.fingerprint = p.manifest.fingerprint;
    so.on_entry = [&](const PairRecord& rec) {
        partial.nu.push_back(rec.nu);
        partial.entries.push_back(rec);
        ConvergenceReport snapshot = partial;
        finalize_report(snapshot);
        try {
            if (rec.ok) write_file_atomic(p.dir / nu_file_name(rec.nu), csv_text(rec.diagnostics));
            write_file_atomic(p.dir / "report.json", to_json(snapshot).dump(2) + "\n");
        } catch (const std::exception& ex) {
            io_failure = ex.what();
        }
        out << "sweep: nu = " << rec.nu << (rec.ok ? " done" : " failed: " + rec.failure) << "\n";
    };

    ConvergenceReport report;
    try {
        report = sweep(c.nu_list, pair, so);
    } catch (const DomainError& ex) {
        err << "config error: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const BoundaryError& ex) {
        // Only the pollution proxy runs outside the per-pair guard.
        err << "boundary abort in discretization proxy: " << ex.what() << "\n";
        return kExitBoundary;
    } catch (const NumericalError& ex) {
        err << "numerical failure in discretization proxy: " << ex.what() << "\n";
        return kExitNumerical;
    }

    int rc = kExitOk;
    for (const auto& e : report.entries) {
        p.manifest.clipping_count += e.clip_events;
        if (e.ok) {
            p.manifest.outputs.push_back(nu_file_name(e.nu));
            continue;
        }
        err << "nu = " << e.nu << ": " << e.failure_kind << " failure: " << e.failure << "\n";
        if (rc != kExitOk) continue;
        if (e.failure_kind == "boundary") {
            rc = kExitBoundary;
            p.manifest.boundary_monitor = "tripped";
        } else if (e.failure_kind == "numerical") {
            rc = kExitNumerical;
        } else {
            rc = kExitConfig;
        }
    }
    if (rc != kExitOk) p.manifest.status = "partial";

    try {
        if (!io_failure.empty()) throw std::runtime_error(io_failure);
        write_file_atomic(p.dir / "report.json", to_json(report).dump(2) + "\n");
        p.manifest.outputs.push_back("report.json");
        write_manifest(p);
    } catch (const std::exception& ex) {
        err << "io error: " << ex.what() << "\n";
        return kExitIo;
    }

    if (report.fit)
        out << "sweep: slope " << report.fit->slope << ", pollution guard "
            << (report.pollution_guard_passed ? "passed" : "failed") << "\n";
    else
        out << "sweep: " << report.fit_note << "\n";
    return rc;
}

int cmd_verify(std::ostream& out, std::ostream& err) {
    std::size_t failed = 0;
    const auto results = run_verification([&](const CheckResult& r) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n" << std::flush;
    });
    for (const auto& r : results)
        if (!r.passed) {
            ++failed;
            err << "failed: " << r.name << "\n";
        }
    out << results.size() - failed << "/" << results.size() << " checks passed\n";
    return failed == 0 ? kExitOk : kExitVerifyFailed;
}

}  // namespace mhd1d
