#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "embed_kn.hpp"
#include "embed_og.hpp"
#include "forward.hpp"
#include "medium.hpp"
#include "passivity.hpp"

namespace romembed::io {

using json = nlohmann::json;

// %.17g round-trips doubles exactly, which keeps reruns from files identical
inline std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    double at(size_t r, size_t c) const { return std::stod(rows.at(r).at(c)); }
};

inline void write_table(const std::string& path, const Table& t)
{
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    for (size_t k = 0; k < t.header.size(); ++k) os << (k ? "," : "") << t.header[k];
    os << '\n';
    for (auto& r : t.rows) {
        for (size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << r[k];
        os << '\n';
    }
}

inline Table read_table(const std::string& path, const std::vector<std::string>& expect)
{
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    Table t;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(cell);
        return out;
    };
    if (!std::getline(is, line)) throw std::runtime_error(path + ": empty file");
    t.header = split(line);
    if (t.header != expect) throw std::runtime_error(path + ": unexpected header '" + line + "'");
    while (std::getline(is, line))
        if (!line.empty()) t.rows.push_back(split(line));
    return t;
}

inline void write_json(const std::string& path, const json& j)
{
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << j.dump(2) << '\n';
}

inline json read_json(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    return json::parse(is);
}

// ---- medium -------------------------------------------------------------

inline MediumProfile medium_from_json(const json& j)
{
    std::string kind = j.value("kind", "bounded");
    MediumKind k;
    if (kind == "bounded") k = MediumKind::bounded;
    else if (kind == "semi_infinite") k = MediumKind::semi_infinite;
    else throw std::invalid_argument("medium kind must be bounded or semi_infinite");
    const json& sp = j.at("speed");
    std::string type = sp.at("type");
    if (type == "table") {
        auto x = sp.at("x").get<std::vector<double>>();
        auto c = sp.at("c").get<std::vector<double>>();
        if (j.contains("L") && !x.empty() && std::abs(j.at("L").get<double>() - x.back()) > 1e-12 * x.back())
            throw std::invalid_argument("table must end at L");
        return MediumProfile::table(k, x, c);
    }
    if (type == "preset") {
        MediumProfile::Params p;
        if (sp.contains("params"))
            for (auto& [key, v] : sp.at("params").items()) p[key] = v.get<double>();
        return MediumProfile::preset(sp.at("name"), j.at("L"), k, p);
    }
    throw std::invalid_argument("speed type must be table or preset");
}

inline json medium_to_json(const MediumProfile& m)
{
    json j;
    j["kind"] = to_string(m.kind());
    j["L"] = m.length();
    if (m.is_table()) j["speed"] = {{"type", "table"}, {"x", m.table_x()}, {"c", m.table_c()}};
    else j["speed"] = {{"type", "preset"}, {"name", m.name()}, {"params", m.params()}};
    return j;
}

// ---- impedance samples ---------------------------------------------------

inline const std::vector<std::string> impedance_header{"re_s", "im_s", "re_f", "im_f"};

inline void write_impedance(const std::string& path, const ImpedanceSamples& s)
{
    Table t{impedance_header, {}};
    for (size_t k = 0; k < s.size(); ++k)
        t.rows.push_back({num(s.s[k].real()), num(s.s[k].imag()), num(s.f[k].real()), num(s.f[k].imag())});
    write_table(path, t);
}

inline ImpedanceSamples read_impedance(const std::string& path)
{
    Table t = read_table(path, impedance_header);
    ImpedanceSamples s;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        s.s.emplace_back(t.at(r, 0), t.at(r, 1));
        s.f.emplace_back(t.at(r, 2), t.at(r, 3));
    }
    return s;
}

// ---- spectral data -------------------------------------------------------

inline const std::vector<std::string> spectrum_header{"re_lambda", "im_lambda", "re_y", "im_y"};

inline void write_spectrum(const std::string& path, const SpectralData& d)
{
    Table t{spectrum_header, {}};
    for (size_t k = 0; k < d.size(); ++k)
        t.rows.push_back({num(d.poles[k].real()), num(d.poles[k].imag()), num(d.residues[k].real()),
                          num(d.residues[k].imag())});
    write_table(path, t);
    json meta{{"flavor", to_string(d.flavor)}, {"misfit", d.misfit}, {"n", d.size()}};
    write_json(path + ".json", meta);
}

inline SpectralData read_spectrum(const std::string& path)
{
    Table t = read_table(path, spectrum_header);
    SpectralData d;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        d.poles.emplace_back(t.at(r, 0), t.at(r, 1));
        d.residues.emplace_back(t.at(r, 2), t.at(r, 3));
    }
    std::ifstream probe(path + ".json");
    if (probe) {
        json meta = json::parse(probe);
        std::string fl = meta.value("flavor", "unknown");
        d.flavor = fl == "lossless" ? SpectralFlavor::lossless
                   : fl == "passive" ? SpectralFlavor::passive
                                     : SpectralFlavor::unknown;
        d.misfit = meta.value("misfit", 0.0);
    }
    return d;
}

// ---- ROM -----------------------------------------------------------------

inline const std::vector<std::string> weights_header{"j", "re_gamma", "im_gamma", "re_gamma_hat", "im_gamma_hat"};
inline const std::vector<std::string> rom_header{"j", "re_alpha", "im_alpha", "re_beta", "im_beta"};

inline void write_weights(const std::string& path, const GridWeights& w)
{
    Table t{weights_header, {}};
    for (size_t j = 0; j < w.n(); ++j)
        t.rows.push_back({std::to_string(j + 1), num(w.gamma[j].real()), num(w.gamma[j].imag()),
                          num(w.gamma_hat[j].real()), num(w.gamma_hat[j].imag())});
    write_table(path, t);
}

inline GridWeights read_weights(const std::string& path)
{
    Table t = read_table(path, weights_header);
    GridWeights w;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        w.gamma.emplace_back(t.at(r, 1), t.at(r, 2));
        w.gamma_hat.emplace_back(t.at(r, 3), t.at(r, 4));
    }
    return w;
}

// row j carries alpha_j and beta_j; beta_1 does not exist and is written as 0
inline void write_rom(const std::string& path, const TridiagonalROM& rom)
{
    Table t{rom_header, {}};
    for (size_t j = 0; j < rom.alpha.size(); ++j) {
        cplx b = j == 0 ? cplx(0.0) : rom.beta[j - 1];
        t.rows.push_back({std::to_string(j + 1), num(rom.alpha[j].real()), num(rom.alpha[j].imag()), num(b.real()),
                          num(b.imag())});
    }
    write_table(path, t);
    write_json(path + ".json", {{"re_norm_y", rom.norm_y.real()}, {"im_norm_y", rom.norm_y.imag()}, {"warnings", rom.warnings}});
}

inline TridiagonalROM read_rom(const std::string& path)
{
    Table t = read_table(path, rom_header);
    TridiagonalROM rom;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        rom.alpha.emplace_back(t.at(r, 1), t.at(r, 2));
        if (r > 0) rom.beta.emplace_back(t.at(r, 3), t.at(r, 4));
    }
    json meta = read_json(path + ".json");
    rom.norm_y = cplx(meta.at("re_norm_y").get<double>(), meta.at("im_norm_y").get<double>());
    return rom;
}

// ---- embeddings ------------------------------------------------------------

inline void write_og(const std::string& path, const OGReconstruction& rec)
{
    Table t{{"node_type", "x", "c_estimate"}, {}};
    struct Row { double x, c; const char* type; };
    std::vector<Row> rows;
    for (auto& p : rec.primary) rows.push_back({p.x, p.c, "primary"});
    for (auto& d : rec.dual) rows.push_back({d.x, d.c, "dual"});
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.x < b.x; });
    for (auto& r : rows) t.rows.push_back({r.type, num(r.x), num(r.c)});
    write_table(path, t);
    write_json(path + ".json", {{"theta", rec.theta},
                                {"average_slowness_estimate", rec.slowness},
                                {"travel_time_estimate", rec.travel_time},
                                {"n", rec.n},
                                {"warnings", rec.warnings}});
}

inline void write_krein(const std::string& path, const KreinCurve& k)
{
    Table t{{"j", "x_krein", "mass_cumulative"}, {}};
    for (size_t j = 0; j < k.nodes.size(); ++j)
        t.rows.push_back({std::to_string(j), num(k.nodes[j]), j < k.mass.size() ? num(k.mass[j]) : ""});
    write_table(path, t);
}

inline void write_krein_velocity(const std::string& path, const KreinVelocityResult& v)
{
    Table t{{"x_mid", "c_estimate"}, {}};
    for (auto& s : v.samples) t.rows.push_back({num(s.x), num(s.c)});
    write_table(path, t);
}

inline void write_losses(const std::string& path, const LossProfile& lp)
{
    // one row per loss; rh rows carry their own midpoint position
    Table t{{"i", "position", "r", "r_hat"}, {}};
    for (size_t i = 0; i < lp.n(); ++i) {
        t.rows.push_back({std::to_string(i + 1), num(lp.position_r[i]), num(lp.r[i].real()), ""});
        t.rows.push_back({std::to_string(i + 1), num(lp.position_r_hat[i]), "", num(lp.r_hat[i].real())});
    }
    write_table(path, t);
}

inline json passivity_to_json(const PassivityReport& r)
{
    return {{"criterion1_ok", r.criterion1_ok}, {"criterion2_ok", r.criterion2_ok},
            {"criterion3_min", r.criterion3_min}, {"criterion3_ok", r.criterion3_ok},
            {"eps", r.eps},                      {"omega_min", r.omega.empty() ? 0.0 : r.omega.front()},
            {"omega_max", r.omega.empty() ? 0.0 : r.omega.back()}, {"count", r.omega.size()}};
}

}  // namespace romembed::io
