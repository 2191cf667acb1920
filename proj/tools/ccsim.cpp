// ccsim — command-line front end for the coupled-coherent-state double-well
// simulator. Verbs: run, sweep, presets, validate. All runs are driven by a
// JSON config (see README for the schema); presets supply ready-made configs
// for the published experiments.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "ccs/driver.hpp"
#include "ccs/presets.hpp"

namespace {

using ccs::json;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    return j;
}

ccs::RunConfig resolve_config(const std::string& config_path, const std::string& preset_name,
                              const std::string& engine_override,
                              const std::string& output_override, bool confirm_long_run,
                              bool* is_sweep_preset = nullptr) {
    json j;
    if (!preset_name.empty()) {
        const auto& table = ccs::presets();
        auto it = table.find(preset_name);
        if (it == table.end())
            throw std::runtime_error("unknown preset '" + preset_name
                                     + "' (see `ccsim presets list`)");
        if (it->second.long_run && !confirm_long_run)
            throw std::runtime_error(
                "preset '" + preset_name
                + "' is a long run (hours to days); pass --confirm-long-run to proceed");
        if (is_sweep_preset) *is_sweep_preset = it->second.is_sweep;
        j = it->second.config;
    } else if (!config_path.empty()) {
        j = load_json_file(config_path);
    } else {
        throw std::runtime_error("either --config or --preset is required");
    }
    ccs::RunConfig cfg = ccs::parse_run_config(j);
    if (!engine_override.empty()) cfg.engine = engine_override;
    if (!output_override.empty()) cfg.output_dir = output_override;
    return cfg;
}

int default_workers() {
    if (const char* env = std::getenv("CCSIM_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    return 1;
}

void print_error_json(const std::string& what) {
    std::cerr << json{{"error", what}}.dump() << "\n";
}

// Table-I reference values for the diff report produced by the tise engine.
struct Table1Row {
    double energy;
    double overlap_sq;
};
constexpr Table1Row kTable1[] = {{-0.300, 0.654}, {0.046, 0.0}, {1.23, 0.323},
                                 {2.46, 0.0},     {3.94, 0.0225}};

void write_table1_diff(const ccs::RunConfig& cfg) {
    const ccs::ModelSpec spec = ccs::build_model(cfg.model);
    const ccs::EigenResult res =
        ccs::solve_tise(spec.well, cfg.tise_extent, cfg.tise_points, cfg.tise_states);
    std::string report = "n,energy,energy_ref,energy_diff,overlap_sq,overlap_sq_ref,overlap_sq_diff\n";
    const int n_ref = static_cast<int>(std::size(kTable1));
    for (Eigen::Index n = 0; n < res.energies.size() && n < n_ref; ++n) {
        report += std::to_string(n + 1) + ',' + ccs::format_double(res.energies[n]) + ','
                  + ccs::format_double(kTable1[n].energy) + ','
                  + ccs::format_double(res.energies[n] - kTable1[n].energy) + ','
                  + ccs::format_double(res.overlap_sq[n]) + ','
                  + ccs::format_double(kTable1[n].overlap_sq) + ','
                  + ccs::format_double(res.overlap_sq[n] - kTable1[n].overlap_sq) + '\n';
    }
    ccs::write_text_file((std::filesystem::path(cfg.output_dir) / "table1_diff.csv").string(),
                         report);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled-coherent-state dynamics of a double well in a finite bath"};
    app.require_subcommand(1);

    std::string config_path, preset_name, engine_override, output_override;
    bool confirm_long_run = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--preset", preset_name, "named preset (see `presets list`)");
        sub->add_option("--engine", engine_override, "override engine: ccs|splitop|both|tise");
        sub->add_option("--output", output_override, "override output directory");
        sub->add_flag("--confirm-long-run", confirm_long_run,
                      "acknowledge a preset marked as cluster-scale");
    };

    auto* run_cmd = app.add_subcommand("run", "execute one configured run");
    add_common(run_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep", "run a sweep over oscillator counts f");
    add_common(sweep_cmd);
    std::vector<int> sweep_f;
    int workers = default_workers();
    sweep_cmd->add_option("--f-values", sweep_f, "list of f values, e.g. --f-values 0 2 3");
    sweep_cmd->add_option("--workers", workers, "parallel sweep workers (env CCSIM_WORKERS)");

    auto* presets_cmd = app.add_subcommand("presets", "preset utilities");
    auto* presets_list = presets_cmd->add_subcommand("list", "list available presets");

    auto* validate_cmd = app.add_subcommand("validate", "parse and validate a config");
    add_common(validate_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (presets_list->parsed()) {
            for (const auto& [name, preset] : ccs::presets()) {
                std::cout << name << (preset.long_run ? "  [long-run]" : "")
                          << (preset.is_sweep ? "  [sweep]" : "") << "\n    "
                          << preset.description << "\n";
            }
            return 0;
        }
        if (validate_cmd->parsed()) {
            const ccs::RunConfig cfg = resolve_config(config_path, preset_name, engine_override,
                                                      output_override, true);
            ccs::build_model(cfg.model);  // model-level validation
            std::cout << ccs::resolved_config_json(cfg).dump(1) << "\n";
            return 0;
        }
        if (run_cmd->parsed()) {
            bool is_sweep = false;
            const ccs::RunConfig cfg = resolve_config(config_path, preset_name, engine_override,
                                                      output_override, confirm_long_run,
                                                      &is_sweep);
            if (is_sweep)
                throw std::runtime_error("preset '" + preset_name
                                         + "' is a sweep; use `ccsim sweep --preset ...`");
            const ccs::RunArtifacts art = ccs::execute_run(cfg);
            if (cfg.engine == "tise") write_table1_diff(cfg);
            for (const auto& f : art.files_written) std::cout << "wrote " << f << "\n";
            if ((cfg.engine != "splitop" && art.ccs.aborted)
                || (cfg.engine != "ccs" && cfg.engine != "tise" && art.splitop.aborted)) {
                print_error_json("propagation aborted: "
                                 + (art.ccs.aborted ? art.ccs.error : art.splitop.error));
                return 2;
            }
            return 0;
        }
        if (sweep_cmd->parsed()) {
            bool is_sweep = false;
            const ccs::RunConfig cfg = resolve_config(config_path, preset_name, engine_override,
                                                      output_override, confirm_long_run,
                                                      &is_sweep);
            std::vector<int> f_values = sweep_f;
            if (f_values.empty() && preset_name == "fig5") f_values = ccs::kFig5SweepF;
            if (f_values.empty())
                throw std::runtime_error("sweep requires --f-values (or the fig5 preset)");
            const auto rows = ccs::run_sweep(cfg, f_values, workers);
            std::cout << ccs::sweep_header_csv();
            for (const auto& row : rows) std::cout << ccs::sweep_row_csv(row);
            for (const auto& row : rows)
                if (!row.ok) return 2;
            return 0;
        }
    } catch (const std::exception& e) {
        print_error_json(e.what());
        return 1;
    }
    return 0;
}
