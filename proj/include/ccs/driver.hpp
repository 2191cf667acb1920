// driver.hpp — Orchestration shared by the CLI and the acceptance suite:
// execute a configured run (CCS, split-operator, or both with a comparison
// report), the Table-I recomputation, and f-sweeps with incremental rows.

#pragma once

#include <chrono>
#include <filesystem>
#include <mutex>
#include <thread>

#include "ccs/config.hpp"
#include "ccs/io.hpp"

namespace ccs {

struct ComparisonStats {
    bool valid{false};
    double max_abs_autocorr_dev{0.0};  // max | |c|_ccs - |c|_so |
    double max_cs_dev{0.0};
    double max_esys_dev{0.0};
    double avg_energy_ccs{0.0};
    double avg_energy_splitop{0.0};
};

struct RunArtifacts {
    RunConfig config;
    PropagationResult ccs;
    PropagationResult splitop;
    ProjectionResult projection;
    ComparisonStats comparison;
    double avg_energy{0.0};  // <<E>> of the primary engine over t_average
    std::vector<std::string> files_written;
};

inline RecorderConfig make_recorder(const RunConfig& cfg) {
    RecorderConfig rec;
    rec.x_grid = make_x_grid(cfg.observables.x_min, cfg.observables.x_max,
                             cfg.observables.x_points);
    rec.record_autocorr = cfg.model.f == 0;
    rec.record_cs = true;
    rec.record_density = cfg.observables.record_density;
    rec.density_every = cfg.observables.density_every;
    return rec;
}

inline PropagationResult run_ccs_engine(const RunConfig& cfg, const ModelSpec& spec,
                                        ProjectionResult* proj_out = nullptr,
                                        MatrixXcd* basis_out = nullptr) {
    MatrixXcd basis;
    if (!cfg.basis_file.empty()) {
        basis = basis_from_text_file(cfg.basis_file);
        if (basis.rows() != spec.dof())
            throw std::invalid_argument("basis file dimension does not match the model");
    } else {
        basis = sample_basis(cfg.sampler, spec);
    }
    ProjectionResult proj = project_initial_amplitudes(basis, spec, cfg.sampler.eps_reg);
    if (proj_out) *proj_out = proj;
    if (basis_out) *basis_out = basis;

    CcsState init;
    init.t = 0.0;
    init.basis = basis;
    init.amplitudes = proj.amplitudes;
    return propagate(init, cfg.integrator, spec, make_recorder(cfg));
}

inline PropagationResult run_splitop_engine(const RunConfig& cfg, const ModelSpec& spec) {
    SplitOpConfig so = cfg.splitop;
    so.t_final = cfg.integrator.t_final;
    RecorderConfig rec = make_recorder(cfg);
    return split_operator_propagate(spec, so, rec);
}

// Comparison over the shared record times; series must line up (same record
// spacing in time), extra trailing records are ignored.
inline ComparisonStats compare_series(const ObservableSeries& a, const ObservableSeries& b) {
    ComparisonStats st;
    const std::size_t n = std::min(a.size(), b.size());
    if (n < 2) return st;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(a.times[i] - b.times[i]) > 1e-9)
            throw std::invalid_argument("compare_series: record times do not align");
    st.valid = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (!a.autocorr.empty() && !b.autocorr.empty())
            st.max_abs_autocorr_dev =
                std::max(st.max_abs_autocorr_dev,
                         std::abs(std::abs(a.autocorr[i]) - std::abs(b.autocorr[i])));
        if (!a.c_s.empty() && !b.c_s.empty())
            st.max_cs_dev = std::max(st.max_cs_dev, std::abs(a.c_s[i] - b.c_s[i]));
        st.max_esys_dev = std::max(st.max_esys_dev, std::abs(a.e_system[i] - b.e_system[i]));
    }
    return st;
}

inline json diagnostics_json(const PropagationResult& r) {
    return json{{"initial_norm", r.diagnostics.initial_norm},
                {"max_norm_drift", r.diagnostics.max_norm_drift},
                {"max_energy_drift_rel", r.diagnostics.max_energy_drift_rel},
                {"max_condition", r.diagnostics.max_condition},
                {"max_truncated", r.diagnostics.max_truncated},
                {"total_clamps", r.diagnostics.total_clamps},
                {"derivative_evaluations", r.diagnostics.derivative_evaluations},
                {"aborted", r.aborted},
                {"error", r.error}};
}

// Runs the configured engines and writes all artifacts into output_dir.
inline RunArtifacts execute_run(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    const auto path = [&](const std::string& name) {
        return (fs::path(cfg.output_dir) / name).string();
    };

    RunArtifacts art;
    art.config = cfg;
    const ModelSpec spec = build_model(cfg.model);
    const double t_avg = cfg.observables.t_average.value_or(cfg.integrator.t_final);

    json meta;
    meta["resolved_config"] = resolved_config_json(cfg);
    meta["rng"] = sampler_rng_id();
    meta["integrator_scheme"] =
        cfg.integrator.method == "rk4" ? "classical RK4, fixed step" : "Dormand-Prince 5(4)";
    meta["splitop_scheme"] = "Strang splitting, 2nd order, spectral kinetic";
    meta["frequencies"] = std::vector<double>(spec.bath.frequencies.begin(),
                                              spec.bath.frequencies.end());

    write_text_file(path("resolved_config.json"), resolved_config_json(cfg).dump(1) + "\n");
    art.files_written.push_back(path("resolved_config.json"));

    if (cfg.engine == "tise") {
        const EigenResult res =
            solve_tise(spec.well, cfg.tise_extent, cfg.tise_points, cfg.tise_states);
        std::string csv = "n,energy,overlap_sq\n";
        for (Eigen::Index n = 0; n < res.energies.size(); ++n)
            csv += std::to_string(n + 1) + ',' + format_double(res.energies[n]) + ','
                   + format_double(res.overlap_sq[n]) + '\n';
        write_text_file(path("eigenvalues.csv"), csv);
        art.files_written.push_back(path("eigenvalues.csv"));
        meta["tise"] = {{"extent", cfg.tise_extent},
                        {"points", cfg.tise_points},
                        {"laplacian", "five-point, fourth order"}};
        write_text_file(path("metadata.json"), meta.dump(1) + "\n");
        art.files_written.push_back(path("metadata.json"));
        return art;
    }

    const bool want_ccs = cfg.engine == "ccs" || cfg.engine == "both";
    const bool want_so = cfg.engine == "splitop" || cfg.engine == "both";

    if (want_ccs) {
        MatrixXcd basis;
        const auto t0 = std::chrono::steady_clock::now();
        art.ccs = run_ccs_engine(cfg, spec, &art.projection, &basis);
        meta["ccs_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_text_file(path("ccs_series.csv"), series_csv(art.ccs.series));
        art.files_written.push_back(path("ccs_series.csv"));
        write_text_file(path("basis.txt"), basis_to_text(basis));
        art.files_written.push_back(path("basis.txt"));
        if (!art.ccs.series.density_frames.empty()) {
            write_text_file(path("ccs_density.csv"), density_csv(art.ccs.series));
            art.files_written.push_back(path("ccs_density.csv"));
        }
        save_checkpoint(path("final_state.json"), art.ccs.final_state);
        art.files_written.push_back(path("final_state.json"));
        meta["ccs_diagnostics"] = diagnostics_json(art.ccs);
        meta["projection"] = {{"reconstructed_norm", art.projection.reconstructed_norm},
                              {"residual", art.projection.residual},
                              {"truncated", art.projection.solve_info.truncated},
                              {"condition", art.projection.solve_info.condition()}};
        if (!art.ccs.aborted && art.ccs.series.times.back() >= t_avg - 1e-9) {
            art.avg_energy = long_time_average(art.ccs.series, t_avg);
            meta["ccs_avg_system_energy"] = art.avg_energy;
        }
    }
    if (want_so) {
        const auto t0 = std::chrono::steady_clock::now();
        art.splitop = run_splitop_engine(cfg, spec);
        meta["splitop_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_text_file(path("splitop_series.csv"), series_csv(art.splitop.series));
        art.files_written.push_back(path("splitop_series.csv"));
        if (!art.splitop.series.density_frames.empty()) {
            write_text_file(path("splitop_density.csv"), density_csv(art.splitop.series));
            art.files_written.push_back(path("splitop_density.csv"));
        }
        meta["splitop_diagnostics"] = diagnostics_json(art.splitop);
        if (!art.splitop.aborted && art.splitop.series.times.back() >= t_avg - 1e-9) {
            const double avg = long_time_average(art.splitop.series, t_avg);
            meta["splitop_avg_system_energy"] = avg;
            if (cfg.engine == "splitop") art.avg_energy = avg;
        }
    }

    if (want_ccs && want_so && !art.ccs.aborted && !art.splitop.aborted) {
        art.comparison = compare_series(art.ccs.series, art.splitop.series);
        art.comparison.avg_energy_ccs = meta.value("ccs_avg_system_energy", 0.0);
        art.comparison.avg_energy_splitop = meta.value("splitop_avg_system_energy", 0.0);
        std::string report;
        report += "engine comparison over t in [0, "
                  + format_double(std::min(art.ccs.series.times.back(),
                                           art.splitop.series.times.back()))
                  + "]\n";
        report += "max | |c|_ccs - |c|_splitop |  = "
                  + format_double(art.comparison.max_abs_autocorr_dev) + "\n";
        report += "max | c_S_ccs - c_S_splitop |  = "
                  + format_double(art.comparison.max_cs_dev) + "\n";
        report += "max | E_sys_ccs - E_sys_splitop | = "
                  + format_double(art.comparison.max_esys_dev) + "\n";
        report += "<<E>>_ccs     = " + format_double(art.comparison.avg_energy_ccs) + "\n";
        report += "<<E>>_splitop = " + format_double(art.comparison.avg_energy_splitop) + "\n";
        write_text_file(path("comparison.txt"), report);
        art.files_written.push_back(path("comparison.txt"));
        meta["comparison"] = {{"max_abs_autocorr_dev", art.comparison.max_abs_autocorr_dev},
                              {"max_cs_dev", art.comparison.max_cs_dev},
                              {"max_esys_dev", art.comparison.max_esys_dev}};
    }

    write_text_file(path("metadata.json"), meta.dump(1) + "\n");
    art.files_written.push_back(path("metadata.json"));
    return art;
}

// ------------------------------- Sweeps --------------------------------------

struct SweepRow {
    int f{0};
    int M{0};
    bool ok{false};
    double avg_energy_ccs{0.0};
    double avg_energy_splitop{0.0};
    double norm_drift{0.0};
    double energy_drift_rel{0.0};
    std::string error;
};

// Table-II discretization denominators from the paper's parameter set.
inline int table2_f_co(int f) {
    switch (f) {
        case 2: return 10;
        case 3: return 12;
        case 4: return 14;
        case 5: return 16;
        default: return 0;
    }
}

inline std::string sweep_row_csv(const SweepRow& r) {
    std::string line = std::to_string(r.f) + ',' + std::to_string(r.M) + ','
                       + (r.ok ? "ok" : "failed") + ',' + format_double(r.avg_energy_ccs) + ','
                       + format_double(r.avg_energy_splitop) + ',' + format_double(r.norm_drift)
                       + ',' + format_double(r.energy_drift_rel) + ',' + r.error + '\n';
    return line;
}

inline const char* sweep_header_csv() {
    return "f,M,status,avg_energy_ccs,avg_energy_splitop,norm_drift,energy_drift_rel,error\n";
}

// Runs one sweep point in its own subdirectory of output_dir.
inline SweepRow run_sweep_point(RunConfig cfg, int f) {
    SweepRow row;
    row.f = f;
    row.M = cfg.sampler.M;
    cfg.model.f = f;
    if (f > 0 && cfg.model.f_co <= f) {
        const int from_table = table2_f_co(f);
        if (from_table > 0) cfg.model.f_co = from_table;
    }
    cfg.output_dir += "/f" + std::to_string(f);
    try {
        if ((cfg.engine == "splitop" || cfg.engine == "both") && f > 3)
            throw std::invalid_argument("grid oracle limited to f <= 3");
        const RunArtifacts art = execute_run(cfg);
        const PropagationResult& primary =
            cfg.engine == "splitop" ? art.splitop : art.ccs;
        if (primary.aborted) throw std::runtime_error(primary.error);
        const double t_avg = cfg.observables.t_average.value_or(cfg.integrator.t_final);
        if (cfg.engine != "splitop")
            row.avg_energy_ccs = long_time_average(art.ccs.series, t_avg);
        if (cfg.engine != "ccs")
            row.avg_energy_splitop = long_time_average(art.splitop.series, t_avg);
        row.norm_drift = primary.diagnostics.max_norm_drift;
        row.energy_drift_rel = primary.diagnostics.max_energy_drift_rel;
        row.ok = true;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

// Sweep over f values with bounded parallel workers. Each completed point
// appends its row to sweep_rows.csv immediately; the final sweep.csv is
// rewritten in f order once all points finish.
inline std::vector<SweepRow> run_sweep(const RunConfig& base, const std::vector<int>& f_values,
                                       int workers) {
    namespace fs = std::filesystem;
    fs::create_directories(base.output_dir);
    const std::string log_path = (fs::path(base.output_dir) / "sweep_rows.csv").string();
    {
        std::ofstream log(log_path, std::ios::binary);
        log << sweep_header_csv();
    }

    std::vector<SweepRow> rows(f_values.size());
    std::mutex mtx;
    std::size_t next = 0;
    auto worker = [&]() {
        for (;;) {
            std::size_t idx;
            {
                std::lock_guard lock(mtx);
                if (next >= f_values.size()) return;
                idx = next++;
            }
            SweepRow row = run_sweep_point(base, f_values[idx]);
            {
                std::lock_guard lock(mtx);
                rows[idx] = row;
                std::ofstream log(log_path, std::ios::binary | std::ios::app);
                log << sweep_row_csv(row);
                log.flush();
            }
        }
    };
    const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(f_values.size())));
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::string final_csv = sweep_header_csv();
    for (const auto& row : rows) final_csv += sweep_row_csv(row);
    write_text_file((fs::path(base.output_dir) / "sweep.csv").string(), final_csv);
    return rows;
}

}  // namespace ccs
