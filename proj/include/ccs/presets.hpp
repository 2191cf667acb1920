// presets.hpp — Named experiment configurations reproducing the published
// tables and figures. Long-running entries (hours to days of CPU) are marked
// and require explicit confirmation from the CLI.

#pragma once

#include <map>
#include <string>

#include "ccs/config.hpp"

namespace ccs {

struct Preset {
    std::string description;
    bool long_run{false};
    bool is_sweep{false};
    json config;
};

inline const std::map<std::string, Preset>& presets() {
    static const std::map<std::string, Preset> table = [] {
        std::map<std::string, Preset> p;

        p["table1"] = Preset{
            "bare double-well eigenvalues and initial-state overlaps, diffed "
            "against the published values",
            false, false,
            json{{"engine", "tise"},
                 {"model", {{"a", 2.0}, {"b", 1.0}, {"m_x", 1.0}, {"gamma_x", 2.0}, {"f", 0}}},
                 {"tise", {{"extent", 4.0}, {"points", 256}, {"states", 5}}},
                 {"output_dir", "out/table1"}}};

        p["fig2"] = Preset{
            "1D autocorrelation |c(t)|, CCS (M=299) against the split-operator "
            "oracle on the published grid",
            false, false,
            json{{"engine", "both"},
                 {"model", {{"a", 2.0}, {"b", 1.0}, {"m_x", 1.0}, {"gamma_x", 2.0}, {"f", 0}}},
                 {"sampler", {{"M", 299}, {"sigma", 0.5}, {"seed", 20201}}},
                 {"integrator",
                  {{"dt", 0.005}, {"t_final", 20.0}, {"record_stride", 20}}},
                 {"splitop", {{"dt", 0.01}, {"record_stride", 10}, {"x_points", 32},
                              {"x_extent", 3.5}}},
                 {"output_dir", "out/fig2"}}};

        p["fig3-f2"] = Preset{
            "coupled c_S(t), f=2 at the published multiplicity M=799",
            true, false,
            json{{"engine", "both"},
                 {"model",
                  {{"a", 2.0}, {"b", 1.0}, {"m_x", 1.0}, {"gamma_x", 2.0}, {"f", 2},
                   {"m", 0.1}, {"omega_co", 4.0}, {"f_co", 10}, {"g", 0.1}}},
                 {"sampler", {{"M", 799}, {"sigma", 0.5}, {"seed", 20202}}},
                 {"integrator",
                  {{"dt", 0.005}, {"t_final", 100.0}, {"record_stride", 20}}},
                 {"splitop", {{"dt", 0.01}, {"record_stride", 10}}},
                 {"output_dir", "out/fig3-f2"}}};

        p["fig3-f3"] = Preset{
            "coupled c_S(t), f=3 at the published multiplicity M=2999",
            true, false,
            json{{"engine", "both"},
                 {"model",
                  {{"a", 2.0}, {"b", 1.0}, {"m_x", 1.0}, {"gamma_x", 2.0}, {"f", 3},
                   {"m", 0.1}, {"omega_co", 4.0}, {"f_co", 12}, {"g", 0.1}}},
                 {"sampler", {{"M", 2999}, {"sigma", 0.5}, {"seed", 20203}}},
                 {"integrator",
                  {{"dt", 0.005}, {"t_final", 100.0}, {"record_stride", 20}}},
                 {"splitop", {{"dt", 0.01}, {"record_stride", 10}}},
                 {"output_dir", "out/fig3-f3"}}};

        p["fig4"] = Preset{
            "per-term energy expectations, f=4 at the published multiplicity "
            "M=5999 over T=300 (cluster scale)",
            true, false,
            json{{"engine", "ccs"},
                 {"model",
                  {{"a", 2.0}, {"b", 1.0}, {"m_x", 1.0}, {"gamma_x", 2.0}, {"f", 4},
                   {"m", 0.1}, {"omega_co", 4.0}, {"f_co", 14}, {"g", 0.1}}},
                 {"sampler", {{"M", 5999}, {"sigma", 0.5}, {"seed", 20204}}},
                 {"integrator",
                  {{"dt", 0.005}, {"t_final", 300.0}, {"record_stride", 20}}},
                 {"output_dir", "out/fig4"}}};

        p["fig5"] = Preset{
            "long-time average double-well energy as a function of f "
            "(sweep over f = 0, 2, 3, 4, 5; T_tot = 300; cluster scale)",
            true, true,
            json{{"engine", "ccs"},
                 {"model",
                  {{"a", 2.0}, {"b", 1.0}, {"m_x", 1.0}, {"gamma_x", 2.0}, {"f", 0},
                   {"m", 0.1}, {"omega_co", 4.0}, {"g", 0.1}}},
                 {"sampler", {{"M", 2999}, {"sigma", 0.5}, {"seed", 20205}}},
                 {"integrator",
                  {{"dt", 0.005}, {"t_final", 300.0}, {"record_stride", 20}}},
                 {"observables", {{"t_average", 300.0}}},
                 {"output_dir", "out/fig5"}}};

        p["quick-f2"] = Preset{
            "desk-scale f=2 cross-check of both engines (reduced M, short horizon)",
            false, false,
            json{{"engine", "both"},
                 {"model",
                  {{"a", 2.0}, {"b", 1.0}, {"m_x", 1.0}, {"gamma_x", 2.0}, {"f", 2},
                   {"m", 0.1}, {"omega_co", 4.0}, {"f_co", 10}, {"g", 0.1}}},
                 {"sampler", {{"M", 299}, {"sigma", 0.5}, {"seed", 20206}}},
                 {"integrator",
                  {{"dt", 0.01}, {"t_final", 30.0}, {"record_stride", 10}}},
                 {"splitop", {{"dt", 0.01}, {"record_stride", 10}}},
                 {"output_dir", "out/quick-f2"}}};

        return p;
    }();
    return table;
}

inline const std::vector<int> kFig5SweepF{0, 2, 3, 4, 5};

}  // namespace ccs
