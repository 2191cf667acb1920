// config.hpp — Declarative run configuration: one JSON tree covering the
// model, sampler, integrator, observables, and oracle sections. Parsing is
// strict about types and reports the offending key; serialization echoes the
// fully resolved configuration so no default stays implicit.

#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccs/model.hpp"
#include "ccs/propagator.hpp"
#include "ccs/reference.hpp"
#include "ccs/sampler.hpp"

namespace ccs {

using json = nlohmann::json;

struct ObservablesConfig {
    double x_min{-3.5};
    double x_max{3.5};
    int x_points{141};
    bool record_density{false};
    int density_every{1};
    std::optional<double> t_average;  // <<E>> window; defaults to t_final
};

struct RunConfig {
    ModelConfig model;
    SamplerConfig sampler;
    IntegratorConfig integrator;
    SplitOpConfig splitop;
    ObservablesConfig observables;
    std::string engine{"ccs"};  // ccs | splitop | both | tise
    std::string output_dir{"out"};
    std::string basis_file;     // reload a dumped basis instead of sampling
    // tise section (engine == "tise")
    double tise_extent{4.0};
    int tise_points{256};
    int tise_states{5};
    int checkpoint_stride{0};  // CCS checkpoints every N steps; 0 disables
};

namespace detail {

class ConfigReader {
  public:
    ConfigReader(const json& j, std::string scope) : j_(j), scope_(std::move(scope)) {
        if (!j_.is_object()) fail("expected an object");
    }

    template <typename T>
    void get(const char* key, T& out) const {
        auto it = j_.find(key);
        if (it == j_.end()) return;
        try {
            out = it->get<T>();
        } catch (const json::exception&) {
            fail(std::string("invalid value for key '") + key + "'");
        }
        seen_.push_back(key);
    }

    void reject_unknown() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            bool known = false;
            for (const auto& k : seen_)
                if (k == it.key()) { known = true; break; }
            if (!known) fail("unknown key '" + it.key() + "'");
        }
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("config error in " + scope_ + ": " + msg);
    }
    const json& j_;
    std::string scope_;
    mutable std::vector<std::string> seen_;
};

}  // namespace detail

inline RunConfig parse_run_config(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config error: top level must be an object");
    RunConfig cfg;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "model") {
            detail::ConfigReader r(*it, "model");
            r.get("a", cfg.model.a);
            r.get("b", cfg.model.b);
            r.get("m_x", cfg.model.m_x);
            r.get("gamma_x", cfg.model.gamma_x);
            r.get("f", cfg.model.f);
            r.get("m", cfg.model.m);
            r.get("omega_co", cfg.model.omega_co);
            r.get("f_co", cfg.model.f_co);
            r.get("frequencies", cfg.model.frequencies);
            r.get("g", cfg.model.g);
            r.get("include_counter_term", cfg.model.include_counter_term);
            r.reject_unknown();
        } else if (key == "sampler") {
            detail::ConfigReader r(*it, "sampler");
            r.get("M", cfg.sampler.M);
            r.get("sigma", cfg.sampler.sigma);
            r.get("seed", cfg.sampler.seed);
            r.get("min_overlap", cfg.sampler.min_overlap);
            r.get("include_center", cfg.sampler.include_center);
            r.get("max_retries", cfg.sampler.max_retries);
            r.get("eps_reg", cfg.sampler.eps_reg);
            r.get("basis_file", cfg.basis_file);
            r.reject_unknown();
        } else if (key == "integrator") {
            detail::ConfigReader r(*it, "integrator");
            r.get("dt", cfg.integrator.dt);
            r.get("t_final", cfg.integrator.t_final);
            r.get("method", cfg.integrator.method);
            r.get("eps_reg", cfg.integrator.eps_reg);
            r.get("record_stride", cfg.integrator.record_stride);
            r.get("rel_tol", cfg.integrator.rel_tol);
            r.get("abs_tol", cfg.integrator.abs_tol);
            r.reject_unknown();
        } else if (key == "splitop") {
            detail::ConfigReader r(*it, "splitop");
            r.get("dt", cfg.splitop.dt);
            r.get("record_stride", cfg.splitop.record_stride);
            r.get("x_points", cfg.splitop.x_points);
            r.get("x_extent", cfg.splitop.x_extent);
            r.get("bath_points", cfg.splitop.bath_points);
            r.get("bath_extents", cfg.splitop.bath_extents);
            r.reject_unknown();
        } else if (key == "observables") {
            detail::ConfigReader r(*it, "observables");
            r.get("x_min", cfg.observables.x_min);
            r.get("x_max", cfg.observables.x_max);
            r.get("x_points", cfg.observables.x_points);
            r.get("record_density", cfg.observables.record_density);
            r.get("density_every", cfg.observables.density_every);
            double t_avg = -1.0;
            r.get("t_average", t_avg);
            if (t_avg > 0.0) cfg.observables.t_average = t_avg;
            r.reject_unknown();
        } else if (key == "tise") {
            detail::ConfigReader r(*it, "tise");
            r.get("extent", cfg.tise_extent);
            r.get("points", cfg.tise_points);
            r.get("states", cfg.tise_states);
            r.reject_unknown();
        } else if (key == "engine") {
            cfg.engine = it->get<std::string>();
        } else if (key == "output_dir") {
            cfg.output_dir = it->get<std::string>();
        } else if (key == "checkpoint_stride") {
            cfg.checkpoint_stride = it->get<int>();
        } else {
            throw std::invalid_argument("config error: unknown section '" + key + "'");
        }
    }

    if (cfg.engine != "ccs" && cfg.engine != "splitop" && cfg.engine != "both"
        && cfg.engine != "tise")
        throw std::invalid_argument("config error: engine must be ccs, splitop, both, or tise");
    if ((cfg.engine == "splitop" || cfg.engine == "both") && cfg.model.f > 3)
        throw std::invalid_argument(
            "config error: engine '" + cfg.engine + "' requires f <= 3 (grid oracle limit)");
    return cfg;
}

// Fully resolved echo; parse_run_config(resolved_config_json(cfg)) reproduces cfg.
inline json resolved_config_json(const RunConfig& cfg) {
    json j;
    j["model"] = {{"a", cfg.model.a},
                  {"b", cfg.model.b},
                  {"m_x", cfg.model.m_x},
                  {"gamma_x", cfg.model.gamma_x},
                  {"f", cfg.model.f},
                  {"m", cfg.model.m},
                  {"omega_co", cfg.model.omega_co},
                  {"f_co", cfg.model.f_co},
                  {"frequencies", cfg.model.frequencies},
                  {"g", cfg.model.g},
                  {"include_counter_term", cfg.model.include_counter_term}};
    j["sampler"] = {{"M", cfg.sampler.M},
                    {"sigma", cfg.sampler.sigma},
                    {"seed", cfg.sampler.seed},
                    {"min_overlap", cfg.sampler.min_overlap},
                    {"include_center", cfg.sampler.include_center},
                    {"max_retries", cfg.sampler.max_retries},
                    {"eps_reg", cfg.sampler.eps_reg},
                    {"basis_file", cfg.basis_file}};
    j["integrator"] = {{"dt", cfg.integrator.dt},
                       {"t_final", cfg.integrator.t_final},
                       {"method", cfg.integrator.method},
                       {"eps_reg", cfg.integrator.eps_reg},
                       {"record_stride", cfg.integrator.record_stride},
                       {"rel_tol", cfg.integrator.rel_tol},
                       {"abs_tol", cfg.integrator.abs_tol}};
    j["splitop"] = {{"dt", cfg.splitop.dt},
                    {"record_stride", cfg.splitop.record_stride},
                    {"x_points", cfg.splitop.x_points},
                    {"x_extent", cfg.splitop.x_extent},
                    {"bath_points", cfg.splitop.bath_points},
                    {"bath_extents", cfg.splitop.bath_extents}};
    j["observables"] = {{"x_min", cfg.observables.x_min},
                        {"x_max", cfg.observables.x_max},
                        {"x_points", cfg.observables.x_points},
                        {"record_density", cfg.observables.record_density},
                        {"density_every", cfg.observables.density_every}};
    if (cfg.observables.t_average)
        j["observables"]["t_average"] = *cfg.observables.t_average;
    j["tise"] = {{"extent", cfg.tise_extent},
                 {"points", cfg.tise_points},
                 {"states", cfg.tise_states}};
    j["engine"] = cfg.engine;
    j["output_dir"] = cfg.output_dir;
    j["checkpoint_stride"] = cfg.checkpoint_stride;
    return j;
}

}  // namespace ccs
