// io.hpp — Deterministic text output: series CSV, density CSV, JSON metadata
// and checkpoints, and the portable basis dump. All floating-point fields are
// printed with 17 significant digits so identical runs produce identical
// bytes and values round-trip exactly.

#pragma once

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccs/observables.hpp"

namespace ccs {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

// ------------------------------- Series CSV ---------------------------------
//
// Column order (documented in the README): t, norm, e_total, e_system,
// e_interaction, e_counter, e_bath_1..f, then optionally autocorr_re,
// autocorr_im, then optionally c_s, then condition, clamps.

inline std::string series_csv(const ObservableSeries& s) {
    std::string out;
    out += "t,norm,e_total,e_system,e_interaction,e_counter";
    for (int n = 1; n <= s.n_bath; ++n) out += ",e_bath_" + std::to_string(n);
    const bool has_ac = !s.autocorr.empty();
    const bool has_cs = !s.c_s.empty();
    if (has_ac) out += ",autocorr_re,autocorr_im";
    if (has_cs) out += ",c_s";
    out += ",condition,clamps\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += format_double(s.times[i]);
        out += ',' + format_double(s.norm[i]);
        out += ',' + format_double(s.e_total[i]);
        out += ',' + format_double(s.e_system[i]);
        out += ',' + format_double(s.e_interaction[i]);
        out += ',' + format_double(s.e_counter[i]);
        for (int n = 0; n < s.n_bath; ++n) out += ',' + format_double(s.e_bath[i][n]);
        if (has_ac) {
            out += ',' + format_double(s.autocorr[i].real());
            out += ',' + format_double(s.autocorr[i].imag());
        }
        if (has_cs) out += ',' + format_double(s.c_s[i]);
        out += ',' + format_double(s.condition[i]);
        out += ',' + std::to_string(s.clamp_counts[i]);
        out += '\n';
    }
    return out;
}

// Density frames: header row carries the x grid, each following row is
// t followed by rho_S(x_i, t).
inline std::string density_csv(const ObservableSeries& s) {
    std::string out = "t";
    for (Eigen::Index i = 0; i < s.density_x.size(); ++i)
        out += ',' + format_double(s.density_x[i]);
    out += '\n';
    for (std::size_t r = 0; r < s.density_frames.size(); ++r) {
        out += format_double(s.density_times[r]);
        for (Eigen::Index i = 0; i < s.density_frames[r].size(); ++i)
            out += ',' + format_double(s.density_frames[r][i]);
        out += '\n';
    }
    return out;
}

// ------------------------------- Checkpoints ---------------------------------

inline nlohmann::json state_to_json(const CcsState& state) {
    nlohmann::json j;
    j["t"] = state.t;
    j["dof"] = state.basis.rows();
    j["M"] = state.basis.cols();
    std::vector<double> zr, zi, ar, ai;
    for (Eigen::Index l = 0; l < state.basis.cols(); ++l)
        for (Eigen::Index d = 0; d < state.basis.rows(); ++d) {
            zr.push_back(state.basis(d, l).real());
            zi.push_back(state.basis(d, l).imag());
        }
    for (Eigen::Index l = 0; l < state.amplitudes.size(); ++l) {
        ar.push_back(state.amplitudes[l].real());
        ai.push_back(state.amplitudes[l].imag());
    }
    j["z_re"] = zr;
    j["z_im"] = zi;
    j["a_re"] = ar;
    j["a_im"] = ai;
    return j;
}

inline CcsState state_from_json(const nlohmann::json& j) {
    CcsState st;
    st.t = j.at("t").get<double>();
    const Eigen::Index dof = j.at("dof").get<Eigen::Index>();
    const Eigen::Index M = j.at("M").get<Eigen::Index>();
    const auto zr = j.at("z_re").get<std::vector<double>>();
    const auto zi = j.at("z_im").get<std::vector<double>>();
    const auto ar = j.at("a_re").get<std::vector<double>>();
    const auto ai = j.at("a_im").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(zr.size()) != dof * M || zr.size() != zi.size()
        || static_cast<Eigen::Index>(ar.size()) != M || ar.size() != ai.size())
        throw std::invalid_argument("state_from_json: inconsistent checkpoint");
    st.basis.resize(dof, M);
    st.amplitudes.resize(M);
    std::size_t p = 0;
    for (Eigen::Index l = 0; l < M; ++l)
        for (Eigen::Index d = 0; d < dof; ++d, ++p) st.basis(d, l) = Complex(zr[p], zi[p]);
    for (Eigen::Index l = 0; l < M; ++l) st.amplitudes[l] = Complex(ar[l], ai[l]);
    return st;
}

inline void save_checkpoint(const std::string& path, const CcsState& state) {
    write_text_file(path, state_to_json(state).dump(1));
}

inline CcsState load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    nlohmann::json j;
    in >> j;
    return state_from_json(j);
}

// ------------------------------- Basis dump ---------------------------------
//
// One basis function per row: re(z_0) im(z_0) ... re(z_f) im(z_f),
// whitespace-separated. Reloadable for externally generated bases.

inline std::string basis_to_text(const MatrixXcd& Z) {
    std::string out;
    for (Eigen::Index l = 0; l < Z.cols(); ++l) {
        for (Eigen::Index d = 0; d < Z.rows(); ++d) {
            if (d) out += ' ';
            out += format_double(Z(d, l).real());
            out += ' ';
            out += format_double(Z(d, l).imag());
        }
        out += '\n';
    }
    return out;
}

inline MatrixXcd basis_from_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open basis file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> vals;
        std::size_t pos = 0;
        while (pos < line.size()) {
            std::size_t advance = 0;
            vals.push_back(std::stod(line.substr(pos), &advance));
            pos += advance;
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        }
        if (!rows.empty() && vals.size() != rows.front().size())
            throw std::invalid_argument("basis file: ragged rows");
        rows.push_back(std::move(vals));
    }
    if (rows.empty() || rows.front().size() % 2 != 0)
        throw std::invalid_argument("basis file: expected re/im pairs per row");
    const Eigen::Index dof = static_cast<Eigen::Index>(rows.front().size() / 2);
    MatrixXcd Z(dof, static_cast<Eigen::Index>(rows.size()));
    for (std::size_t l = 0; l < rows.size(); ++l)
        for (Eigen::Index d = 0; d < dof; ++d)
            Z(d, static_cast<Eigen::Index>(l)) = Complex(rows[l][2 * d], rows[l][2 * d + 1]);
    return Z;
}

}  // namespace ccs
