#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <future>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "embed_kn.hpp"
#include "embed_krein.hpp"
#include "embed_og.hpp"
#include "forward.hpp"
#include "io.hpp"
#include "medium.hpp"
#include "passivity.hpp"
#include "ratfit.hpp"
#include "rom.hpp"

namespace romembed {

// ---- metrics on piecewise-linear curves -----------------------------------

struct Curve {
    std::vector<double> x, y;
};

// linear interpolation, constant beyond the end points
inline double interp(const Curve& c, double x)
{
    if (c.x.empty()) throw std::invalid_argument("empty curve");
    if (x <= c.x.front()) return c.y.front();
    if (x >= c.x.back()) return c.y.back();
    auto it = std::upper_bound(c.x.begin(), c.x.end(), x);
    size_t k = size_t(it - c.x.begin());
    double h = c.x[k] - c.x[k - 1];
    if (h <= 0.0) return c.y[k];
    double t = (x - c.x[k - 1]) / h;
    return c.y[k - 1] + t * (c.y[k] - c.y[k - 1]);
}

namespace detail {

inline std::vector<double> merged_abscissae(const Curve& a, const Curve& b, double lo, double hi)
{
    std::vector<double> xs{lo, hi};
    for (double v : a.x)
        if (v > lo && v < hi) xs.push_back(v);
    for (double v : b.x)
        if (v > lo && v < hi) xs.push_back(v);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

}  // namespace detail

// int |rec - truth| / int |truth| over [a,b], trapezoid on the merged abscissae
inline double l1_error(const Curve& rec, const Curve& truth, double a, double b)
{
    if (rec.x.empty() || truth.x.empty()) throw std::invalid_argument("empty curve");
    if (!(b > a)) throw std::invalid_argument("empty interval");
    double lo = std::max(a, truth.x.front()), hi = std::min(b, truth.x.back());
    if (!(hi > lo)) throw std::invalid_argument("curves do not overlap on the interval");
    auto xs = detail::merged_abscissae(rec, truth, lo, hi);
    double num = 0.0, den = 0.0;
    for (size_t k = 1; k < xs.size(); ++k) {
        double h = xs[k] - xs[k - 1];
        double t0 = interp(truth, xs[k - 1]), t1 = interp(truth, xs[k]);
        num += 0.5 * h * (std::abs(interp(rec, xs[k - 1]) - t0) + std::abs(interp(rec, xs[k]) - t1));
        den += 0.5 * h * (std::abs(t0) + std::abs(t1));
    }
    return num / den;
}

inline double linf_error(const Curve& rec, const Curve& truth, double a, double b)
{
    double lo = std::max(a, truth.x.front()), hi = std::min(b, truth.x.back());
    double worst = 0.0, scale = 0.0;
    for (double x : detail::merged_abscissae(rec, truth, lo, hi)) {
        double t = interp(truth, x);
        worst = std::max(worst, std::abs(interp(rec, x) - t));
        scale = std::max(scale, std::abs(t));
    }
    return scale > 0.0 ? worst / scale : worst;
}

// Mass curve through (x_{j-1}, M_j), held constant up to the last node.
inline Curve krein_mass_curve(const KreinCurve& k)
{
    Curve c;
    for (size_t j = 0; j < k.mass.size(); ++j) {
        c.x.push_back(k.nodes[j]);
        c.y.push_back(k.mass[j]);
    }
    c.x.push_back(k.nodes.back());
    c.y.push_back(k.mass.back());
    return c;
}

inline Curve og_velocity_curve(const OGReconstruction& rec)
{
    Curve c;
    for (auto& nd : merged_curve(rec)) {
        c.x.push_back(nd.x);
        c.y.push_back(nd.c);
    }
    return c;
}

inline Curve velocity_curve(const KreinVelocityResult& v)
{
    Curve c;
    for (auto& s : v.samples) {
        c.x.push_back(s.x);
        c.y.push_back(s.c);
    }
    return c;
}

// End of the interval where c differs from its far value by more than rel.
inline double variation_end(const TruthCurves& t, double c_far, double rel = 1e-3)
{
    double xv = 0.0;
    for (size_t k = 0; k < t.x.size(); ++k)
        if (std::abs(t.speed[k] - c_far) > rel * c_far) xv = t.x[k];
    return xv;
}

// ---- configuration ----------------------------------------------------------

inline const std::vector<std::string>& stage_names()
{
    static const std::vector<std::string> names{"forward", "spectrum", "fit", "rom",
                                                "embed-og", "embed-krein", "embed-kn", "passivity"};
    return names;
}

struct ExperimentConfig {
    io::json medium = {{"kind", "bounded"}, {"L", 2.0}, {"speed", {{"type", "preset"}, {"name", "smooth_bump"}}}};
    std::vector<std::string> stages{"spectrum", "rom", "embed-og", "embed-krein"};
    int n = 12;
    int fine_N = 4000;
    double pad = 0.0;
    bool richardson = true;
    // fit band; w_max <= 0 means n*pi/T(L) (the top of the first-n ladder)
    double w_min = 0.0, w_max = 0.0, shift = 0.0;
    int samples = 1000;
    std::string spacing = "linear";
    int iterations = 10;
    double epsilon = 1e-2, tolerance = 1e-6;
    std::string weighting = "uniform";
    std::optional<double> c0;                   // defaults to c(0) of the medium
    std::string slowness_source = "first_weight";  // or "travel_time"
    std::string krein_velocity = "slope";          // or "ratio"
    bool reorthogonalize = true;
    double passivity_eps = 0.0;  // <= 0: 1e-6 * band top
    int passivity_count = 2000;
    double pattern_tol = 0.05;
    int truth_samples = 8192;
    unsigned seed = 0;  // recorded only: every stage is deterministic
    std::string out = "out";
    std::vector<int> sweep_n{6, 12, 25, 50};

    static ExperimentConfig from_json(const io::json& j)
    {
        ExperimentConfig c;
        static const std::set<std::string> known{
            "medium", "medium_file", "stages", "n", "fine_N", "pad", "richardson", "fit", "c0", "slowness_source",
            "krein_velocity", "reorthogonalize", "passivity", "pattern_tol", "truth_samples", "seed", "out", "sweep_n"};
        for (auto& [k, v] : j.items())
            if (!known.count(k)) throw std::invalid_argument("unknown config key '" + k + "'");
        if (j.contains("medium_file")) c.medium = io::read_json(j.at("medium_file"));
        if (j.contains("medium")) c.medium = j.at("medium");
        if (j.contains("stages")) c.stages = j.at("stages").get<std::vector<std::string>>();
        c.n = j.value("n", c.n);
        c.fine_N = j.value("fine_N", c.fine_N);
        c.pad = j.value("pad", c.pad);
        c.richardson = j.value("richardson", c.richardson);
        if (j.contains("fit")) {
            const auto& f = j.at("fit");
            c.w_min = f.value("w_min", c.w_min);
            c.w_max = f.value("w_max", c.w_max);
            c.shift = f.value("shift", c.shift);
            c.samples = f.value("samples", c.samples);
            c.spacing = f.value("spacing", c.spacing);
            c.iterations = f.value("iterations", c.iterations);
            c.epsilon = f.value("epsilon", c.epsilon);
            c.tolerance = f.value("tolerance", c.tolerance);
            c.weighting = f.value("weighting", c.weighting);
        }
        if (j.contains("c0") && !j.at("c0").is_null()) c.c0 = j.at("c0").get<double>();
        c.slowness_source = j.value("slowness_source", c.slowness_source);
        c.krein_velocity = j.value("krein_velocity", c.krein_velocity);
        c.reorthogonalize = j.value("reorthogonalize", c.reorthogonalize);
        if (j.contains("passivity")) {
            c.passivity_eps = j.at("passivity").value("eps", c.passivity_eps);
            c.passivity_count = j.at("passivity").value("count", c.passivity_count);
        }
        c.pattern_tol = j.value("pattern_tol", c.pattern_tol);
        c.truth_samples = j.value("truth_samples", c.truth_samples);
        c.seed = j.value("seed", c.seed);
        c.out = j.value("out", c.out);
        if (j.contains("sweep_n")) c.sweep_n = j.at("sweep_n").get<std::vector<int>>();
        c.validate();
        return c;
    }

    void validate() const
    {
        for (auto& s : stages)
            if (std::find(stage_names().begin(), stage_names().end(), s) == stage_names().end())
                throw std::invalid_argument("unknown stage '" + s + "'");
        if (n < 1) throw std::invalid_argument("n must be >= 1");
        if (spacing != "linear" && spacing != "log") throw std::invalid_argument("spacing must be linear or log");
        if (weighting != "uniform" && weighting != "inverse_magnitude")
            throw std::invalid_argument("weighting must be uniform or inverse_magnitude");
        if (slowness_source != "first_weight" && slowness_source != "travel_time")
            throw std::invalid_argument("slowness_source must be first_weight or travel_time");
        if (krein_velocity != "slope" && krein_velocity != "ratio")
            throw std::invalid_argument("krein_velocity must be slope or ratio");
    }

    io::json to_json() const
    {
        return {{"medium", medium},
                {"stages", stages},
                {"n", n},
                {"fine_N", fine_N},
                {"pad", pad},
                {"richardson", richardson},
                {"fit",
                 {{"w_min", w_min}, {"w_max", w_max}, {"shift", shift}, {"samples", samples}, {"spacing", spacing},
                  {"iterations", iterations}, {"epsilon", epsilon}, {"tolerance", tolerance}, {"weighting", weighting}}},
                {"c0", c0 ? io::json(*c0) : io::json(nullptr)},
                {"slowness_source", slowness_source},
                {"krein_velocity", krein_velocity},
                {"reorthogonalize", reorthogonalize},
                {"passivity", {{"eps", passivity_eps}, {"count", passivity_count}}},
                {"pattern_tol", pattern_tol},
                {"truth_samples", truth_samples},
                {"seed", seed},
                {"out", out},
                {"sweep_n", sweep_n}};
    }
};

struct StageError : std::runtime_error {
    std::string stage;
    StageError(const std::string& s, const std::string& msg) : std::runtime_error("stage '" + s + "': " + msg), stage(s) {}
};

struct Metrics {
    double l1_velocity = std::numeric_limits<double>::quiet_NaN();
    double l1_mass = std::numeric_limits<double>::quiet_NaN();
    double linf_velocity = std::numeric_limits<double>::quiet_NaN();
    double linf_mass = std::numeric_limits<double>::quiet_NaN();
    double runtime_ms = 0.0;
    std::map<std::string, double> stage_ms;
    std::vector<std::string> warnings;
    io::json details = io::json::object();

    io::json to_json() const
    {
        auto nn = [](double v) { return std::isnan(v) ? io::json(nullptr) : io::json(v); };
        return {{"l1_velocity", nn(l1_velocity)}, {"l1_mass", nn(l1_mass)},
                {"linf_velocity", nn(linf_velocity)}, {"linf_mass", nn(linf_mass)}, {"runtime_ms", runtime_ms},
                {"stage_ms", stage_ms},           {"warnings", warnings},   {"details", details}};
    }
};

// Everything a run produces, for callers that want more than files.
struct RunState {
    std::optional<FineGridSystem> system;
    std::optional<ImpedanceSamples> samples;
    std::optional<SpectralData> data;
    std::optional<TridiagonalROM> rom;
    std::optional<GridWeights> weights;
    std::optional<OGReconstruction> og;
    std::optional<KreinCurve> krein;
    std::optional<KreinVelocityResult> krein_vel;
    std::optional<OpenEmbedding> open;
    std::optional<PassivityReport> passivity;
};

namespace detail {

inline double band_top(const ExperimentConfig& c, const MediumProfile& m)
{
    if (c.w_max > 0.0) return c.w_max;
    return c.n * std::numbers::pi / travel_time(m, m.length());
}

inline double band_bottom(const ExperimentConfig& c, const MediumProfile& m)
{
    if (c.w_min > 0.0) return c.w_min;
    return band_top(c, m) / c.samples;
}

inline void write_gnuplot(const std::string& dir, const std::set<std::string>& files)
{
    std::ofstream os(dir + "/plot.gp");
    os << "# gnuplot -persist plot.gp\nset datafile separator ','\nset key autotitle columnhead\n";
    if (files.count("og.csv"))
        os << "set title 'optimal-grid velocity'\n"
              "plot 'truth.csv' using 1:2 with lines title 'truth', "
              "'og.csv' using 2:3 with points pt 7 title 'estimate'\npause -1\n";
    if (files.count("krein_velocity.csv"))
        os << "set title 'Krein velocity'\n"
              "plot 'truth.csv' using 1:2 with lines title 'truth', "
              "'krein_velocity.csv' using 1:2 with points pt 6 title 'estimate'\npause -1\n";
    if (files.count("krein.csv"))
        os << "set title 'mass function'\n"
              "plot 'truth.csv' using 1:3 with lines title 'truth', "
              "'krein.csv' using 2:3 with steps title 'Krein'\npause -1\n";
    if (files.count("losses.csv"))
        os << "set title 'losses'\n"
              "plot 'losses.csv' using 2:3 with impulses title 'r', 'losses.csv' using 2:4 with points title 'r_hat'\n"
              "pause -1\n";
}

}  // namespace detail

inline Metrics run(const ExperimentConfig& cfg, RunState* state_out = nullptr)
{
    namespace fs = std::filesystem;
    using clock = std::chrono::steady_clock;
    auto t_start = clock::now();
    cfg.validate();
    MediumProfile medium = io::medium_from_json(cfg.medium);
    fs::create_directories(cfg.out);
    auto path = [&](const std::string& f) { return (fs::path(cfg.out) / f).string(); };
    Metrics met;
    RunState st;
    std::set<std::string> written;
    const bool open = medium.kind() == MediumKind::semi_infinite;
    const double c0 = cfg.c0 ? *cfg.c0 : medium.speed(0.0);
    LanczosOptions lopt;
    lopt.reorthogonalize = cfg.reorthogonalize;

    auto system = [&]() -> const FineGridSystem& {
        if (!st.system) st.system = discretize(medium, cfg.fine_N, cfg.pad);
        return *st.system;
    };
    auto need_samples = [&](const std::string& stage) {
        if (st.samples) return;
        if (!fs::exists(path("impedance.csv"))) throw StageError(stage, "no impedance samples (run 'forward' first)");
        st.samples = io::read_impedance(path("impedance.csv"));
    };
    auto need_data = [&](const std::string& stage) {
        if (st.data) return;
        if (!fs::exists(path("spectrum.csv"))) throw StageError(stage, "no spectral data (run 'spectrum' or 'fit' first)");
        st.data = io::read_spectrum(path("spectrum.csv"));
    };
    auto need_rom = [&](const std::string& stage) {
        if (st.weights && st.rom) return;
        if (!fs::exists(path("rom.csv")) || !fs::exists(path("weights.csv")))
            throw StageError(stage, "no ROM (run 'rom' first)");
        st.rom = io::read_rom(path("rom.csv"));
        st.weights = io::read_weights(path("weights.csv"));
    };

    // truth on a grid long enough for every embedding we might compare
    double x_truth = medium.length() + (open ? cfg.pad : 0.0);
    TruthCurves truth = truth_curves(medium, x_truth, cfg.truth_samples);
    Curve truth_c{truth.x, truth.speed}, truth_m{truth.x, truth.mass};
    const double x_var = open ? variation_end(truth, medium.speed(medium.length())) : medium.length();

    for (const auto& stage : cfg.stages) {
        auto t0 = clock::now();
        try {
            if (stage == "forward") {
                st.samples = sample_contour(system(), detail::band_bottom(cfg, medium), detail::band_top(cfg, medium),
                                            cfg.samples, cfg.shift, cfg.spacing == "log" ? Spacing::log : Spacing::linear);
                io::write_impedance(path("impedance.csv"), *st.samples);
                written.insert("impedance.csv");
            } else if (stage == "spectrum") {
                SpectrumOptions so;
                so.richardson = cfg.richardson;
                st.data = exact_spectrum(system(), cfg.n, so);
                io::write_spectrum(path("spectrum.csv"), *st.data);
                written.insert("spectrum.csv");
            } else if (stage == "fit") {
                need_samples(stage);
                FitOptions fo;
                fo.iterations = cfg.iterations;
                fo.epsilon = cfg.epsilon;
                fo.tolerance = cfg.tolerance;
                fo.weighting = cfg.weighting == "uniform" ? Weighting::uniform : Weighting::inverse_magnitude;
                FitResult fr = fit(st.samples->s, st.samples->f, cfg.n, detail::band_bottom(cfg, medium),
                                   detail::band_top(cfg, medium), fo);
                if (!open) fr.data.flavor = SpectralFlavor::passive;
                st.data = fr.data;
                met.details["fit"] = {{"misfit", fr.data.misfit}, {"converged", fr.converged}, {"rank_loss", fr.rank_loss},
                                      {"misfit_history", fr.misfit_history}};
                if (!fr.converged) met.warnings.push_back("fit misfit above tolerance");
                io::write_spectrum(path("spectrum.csv"), *st.data);
                written.insert("spectrum.csv");
            } else if (stage == "rom") {
                need_data(stage);
                st.rom = lanczos(assemble(*st.data), lopt);
                st.weights = extract_gamma(*st.rom);
                for (auto& w : st.rom->warnings) met.warnings.push_back(w);
                io::write_rom(path("rom.csv"), *st.rom);
                io::write_weights(path("weights.csv"), *st.weights);
                written.insert("rom.csv");
                written.insert("weights.csv");
                cplx tr = 0.0;
                double lmax = 0.0;
                for (cplx a : st.rom->alpha) tr += a;
                for (cplx l : st.data->poles) {
                    tr -= 2.0 * l.real();
                    lmax = std::max(lmax, std::abs(l));
                }
                met.details["rom"] = {{"trace_residual", std::abs(tr) / lmax},
                                      {"eq14_residual", std::abs(st.weights->gamma_hat[0] * st.rom->norm_y - 1.0)}};
            } else if (stage == "embed-og") {
                if (open) throw StageError(stage, "optimal grids are not defined for semi-infinite media");
                need_rom(stage);
                ReferenceGrid ref = train_reference(int(st.weights->n()), medium.length());
                double slowness;
                double tl_est = std::numeric_limits<double>::quiet_NaN();
                if (cfg.slowness_source == "travel_time") {
                    need_data(stage);
                    tl_est = estimate_TL(*st.data);
                    slowness = tl_est / medium.length();
                } else {
                    slowness = estimate_slowness(*st.weights, ref, c0);
                }
                st.og = reconstruct(*st.weights, ref, slowness);
                for (auto& w : st.og->warnings) met.warnings.push_back(w);
                io::write_og(path("og.csv"), *st.og);
                written.insert("og.csv");
                Curve rec = og_velocity_curve(*st.og);
                met.l1_velocity = l1_error(rec, truth_c, 0.0, medium.length());
                met.linf_velocity = linf_error(rec, truth_c, 0.0, medium.length());
                met.details["embed_og"] = {{"l1_velocity", met.l1_velocity},
                                           {"linf_velocity", met.linf_velocity},
                                           {"average_slowness_estimate", slowness},
                                           {"average_slowness_truth", truth.average_slowness},
                                           {"theta", ref.theta},
                                           {"travel_time_estimate", std::isnan(tl_est) ? io::json(nullptr) : io::json(tl_est)}};
            } else if (stage == "embed-krein") {
                need_rom(stage);
                st.krein = krein_curve(*st.weights);
                st.krein_vel = krein_velocity(*st.krein, cfg.krein_velocity == "slope" ? KreinVelocity::slope
                                                                                       : KreinVelocity::ratio);
                io::write_krein(path("krein.csv"), *st.krein);
                io::write_krein_velocity(path("krein_velocity.csv"), *st.krein_vel);
                written.insert("krein.csv");
                written.insert("krein_velocity.csv");
                double hi = open ? x_var : medium.length();
                double l1m = l1_error(krein_mass_curve(*st.krein), truth_m, 0.0, hi);
                met.l1_mass = l1m;
                met.linf_mass = linf_error(krein_mass_curve(*st.krein), truth_m, 0.0, hi);
                io::json kd = {{"l1_mass", l1m}, {"last_node", st.krein->nodes.back()},
                               {"total_mass", st.krein->mass.back()}};
                if (!st.krein_vel->samples.empty()) {
                    double l1v = l1_error(velocity_curve(*st.krein_vel), truth_c, 0.0, hi);
                    kd["l1_velocity"] = l1v;
                    // OG is the primary velocity estimate when both ran
                    if (std::find(cfg.stages.begin(), cfg.stages.end(), "embed-og") == cfg.stages.end()) {
                        met.l1_velocity = l1v;
                        met.linf_velocity = linf_error(velocity_curve(*st.krein_vel), truth_c, 0.0, hi);
                    }
                }
                met.details["embed_krein"] = kd;
            } else if (stage == "embed-kn") {
                need_data(stage);
                st.open = embed_open(*st.data, lopt);
                io::write_krein(path("krein.csv"), st.open->curve);
                io::write_losses(path("losses.csv"), st.open->losses);
                io::write_weights(path("weights.csv"), st.open->weights);
                io::write_rom(path("rom.csv"), st.open->rom);
                written.insert("krein.csv");
                written.insert("losses.csv");
                const auto& lp = st.open->losses;
                double inner = 0.0, tail = 0.0;
                auto bin = [&](double pos, cplx v) {
                    double& slot = pos < x_var ? inner : tail;
                    slot = std::max(slot, std::abs(v));
                };
                for (size_t i = 0; i < lp.n(); ++i) {
                    bin(lp.position_r[i], lp.r[i]);
                    bin(lp.position_r_hat[i], lp.r_hat[i]);
                }
                double l1m = l1_error(krein_mass_curve(st.open->curve), truth_m, 0.0, x_var);
                met.l1_mass = l1m;
                met.linf_mass = linf_error(krein_mass_curve(st.open->curve), truth_m, 0.0, x_var);
                PatternReport pr = sommerfeld_pattern(lp, cfg.pattern_tol);
                met.details["embed_kn"] = {{"variation_end", x_var},
                                           {"l1_mass", l1m},
                                           {"last_node", st.open->curve.nodes.back()},
                                           {"interior_loss_ratio", tail > 0 ? inner / tail : std::numeric_limits<double>::infinity()},
                                           {"trace_residual", st.open->trace_residual},
                                           {"imag_gamma_rel", st.open->imag_gamma_rel},
                                           {"imag_gamma_hat_rel", st.open->imag_gamma_hat_rel},
                                           {"sommerfeld_pattern", to_string(pr.result)},
                                           {"pattern_violators", pr.violators.size()}};
            } else if (stage == "passivity") {
                need_data(stage);
                double top = st.data->size() ? std::abs(st.data->poles.back().imag()) * 1.5 : 1.0;
                double eps = cfg.passivity_eps > 0 ? cfg.passivity_eps : 1e-6 * top;
                st.passivity = check_passive(*st.data, top / cfg.passivity_count, top, cfg.passivity_count, eps);
                io::write_json(path("passivity.json"), io::passivity_to_json(*st.passivity));
                written.insert("passivity.json");
            }
        } catch (const StageError&) {
            throw;
        } catch (const std::exception& e) {
            throw StageError(stage, e.what());
        }
        met.stage_ms[stage] = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    }

    // truth for plotting
    io::Table tt{{"x", "c", "mass", "travel_time"}, {}};
    for (size_t k = 0; k < truth.x.size(); k += std::max<size_t>(1, truth.x.size() / 2000))
        tt.rows.push_back({io::num(truth.x[k]), io::num(truth.speed[k]), io::num(truth.mass[k]), io::num(truth.slowness[k])});
    io::write_table(path("truth.csv"), tt);
    io::json meta = cfg.to_json();
    meta["resolved"] = {{"c0", c0},
                        {"band", {detail::band_bottom(cfg, medium), detail::band_top(cfg, medium)}},
                        {"medium", io::medium_to_json(medium)},
                        {"truth_travel_time", travel_time(medium, medium.length())},
                        {"truth_mass", mass_function(medium, medium.length())},
                        {"forward_scheme", "staggered second-order FD, uniform grid"}};
    io::write_json(path("meta.json"), meta);
    detail::write_gnuplot(cfg.out, written);
    met.runtime_ms = std::chrono::duration<double, std::milli>(clock::now() - t_start).count();
    io::write_json(path("metrics.json"), met.to_json());
    if (state_out) *state_out = std::move(st);
    return met;
}

struct SweepRow {
    int n;
    double l1_velocity, l1_mass, runtime_ms;
    std::string error;
};

// One run per n, each in <out>/n_<n>; failures are recorded and skipped.
inline std::vector<SweepRow> sweep(const ExperimentConfig& cfg, const std::vector<int>& ns, bool parallel = true)
{
    std::vector<std::future<SweepRow>> jobs;
    for (int n : ns) {
        ExperimentConfig c = cfg;
        c.n = n;
        c.out = (std::filesystem::path(cfg.out) / ("n_" + std::to_string(n))).string();
        auto task = [c]() {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            try {
                Metrics m = run(c);
                return SweepRow{c.n, m.l1_velocity, m.l1_mass, m.runtime_ms, ""};
            } catch (const std::exception& e) {
                return SweepRow{c.n, nan, nan, 0.0, e.what()};
            }
        };
        jobs.push_back(std::async(parallel ? std::launch::async : std::launch::deferred, task));
    }
    std::vector<SweepRow> rows;
    for (auto& j : jobs) rows.push_back(j.get());
    std::filesystem::create_directories(cfg.out);
    io::Table t{{"n", "l1_velocity", "l1_mass", "runtime_ms"}, {}};
    for (auto& r : rows)
        t.rows.push_back({std::to_string(r.n), io::num(r.l1_velocity), io::num(r.l1_mass), io::num(r.runtime_ms)});
    io::write_table((std::filesystem::path(cfg.out) / "sweep.csv").string(), t);
    return rows;
}

}  // namespace romembed
