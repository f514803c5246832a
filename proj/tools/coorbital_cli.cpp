// coorbital: command-line front end for the co-orbital library.

#include "coorbital/acceptance.hpp"
#include "coorbital/action_angle.hpp"
#include "coorbital/csv.hpp"
#include "coorbital/errors.hpp"
#include "coorbital/launch.hpp"
#include "coorbital/parallel.hpp"
#include "coorbital/resonant_frame.hpp"
#include "coorbital/secular.hpp"
#include "coorbital/separatrix.hpp"
#include "coorbital/system_params.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace coorbital;
using nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

MassConfig config_from(const std::string& path) { return path.empty() ? reference_config() : load_config(path); }

// Output sink: the named file, or stdout when the name is empty or "-".
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw UsageError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw UsageError("bad number in list: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi >= lo) || n == 0) throw UsageError("need 0 < delta-min <= delta-max and points > 0");
    std::vector<double> g(n);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) g[i] = n == 1 ? lo : std::exp(a + (b - a) * double(i) / double(n - 1));
    g.front() = lo;
    if (n > 1) g.back() = hi;
    return g;
}

ordered_json constants_json(const MassConfig& cfg, const DerivedConstants& c) {
    ordered_json j;
    j["m0"] = cfg.m0;
    j["m1"] = cfg.m1;
    j["m2"] = cfg.m2;
    j["epsilon"] = cfg.epsilon;
    j["upsilon0"] = cfg.upsilon0;
    j["mu1"] = c.mu1;
    j["mu2"] = c.mu2;
    j["mhat1"] = c.mhat1;
    j["mhat2"] = c.mhat2;
    j["lambda10"] = c.lambda10;
    j["lambda20"] = c.lambda20;
    j["a10"] = c.a10;
    j["a20"] = c.a20;
    j["a_star"] = c.a_star;
    j["lambda1_star"] = c.lambda1_star;
    j["lambda2_star"] = c.lambda2_star;
    j["kappa"] = c.kappa;
    j["A"] = c.A;
    j["B"] = c.B;
    j["D"] = c.D;
    j["E"] = c.E;
    j["K"] = c.K;
    j["fast_period"] = fast_period(cfg);
    j["gascheau_stable"] = gascheau_stable(cfg);
    j["lighter_planet_first"] = lighter_planet_first(cfg);
    return j;
}

QuadratureMode parse_mode(const std::string& s) { return s == "split" ? QuadratureMode::split : QuadratureMode::direct; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Co-orbital (1:1 resonance) horseshoe dynamics toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    unsigned threads = 1;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "mass configuration file (default: reference configuration)");
    };

    auto* params = app.add_subcommand("params", "derived constants as JSON");
    add_config(params);

    auto* portrait = app.add_subcommand("portrait", "energy grid over (zeta1, Z1)");
    std::string model = "mechanical", out_path;
    std::size_t n = 101;
    double zmax = 0.0;
    portrait->add_option("--model", model)->check(CLI::IsMember({"mechanical", "averaged"}));
    portrait->add_option("--n", n)->check(CLI::PositiveNumber);
    portrait->add_option("--zmax", zmax, "half-width in Z1 (default: 3 sqrt(eps B/A))");
    portrait->add_option("--out", out_path);
    portrait->add_option("--threads", threads)->check(CLI::PositiveNumber);
    add_config(portrait);

    auto* separatrix = app.add_subcommand("separatrix", "turning angle and libration amplitude per delta");
    std::string deltas = "0,0.01,0.05,0.1";
    separatrix->add_option("--deltas", deltas, "comma-separated energy shifts");
    separatrix->add_option("--out", out_path);
    add_config(separatrix);

    auto* freq = app.add_subcommand("freq", "semi-fast frequency sweep");
    double dmin = 1e-8, dmax = 0.1;
    std::size_t points = 50;
    std::string mode = "direct";
    freq->add_option("--delta-min", dmin);
    freq->add_option("--delta-max", dmax);
    freq->add_option("--points", points)->check(CLI::PositiveNumber);
    freq->add_option("--mode", mode)->check(CLI::IsMember({"direct", "split"}));
    freq->add_option("--out", out_path);
    freq->add_option("--threads", threads)->check(CLI::PositiveNumber);
    add_config(freq);

    auto* secular = app.add_subcommand("secular", "secular spectrum as JSON");
    double delta = 0.05;
    secular->add_option("--delta", delta);
    add_config(secular);

    auto* torus = app.add_subcommand("torus", "horseshoe torus embedding at theta2 = 0");
    std::size_t samples = 256;
    torus->add_option("--delta", delta);
    torus->add_option("--samples", samples)->check(CLI::PositiveNumber);
    torus->add_option("--out", out_path);
    add_config(torus);

    auto* integ = app.add_subcommand("integrate", "launch from the torus and integrate the full problem");
    double periods = 1000.0, dt = 0.0;
    std::string scheme = "splitting", summary_path;
    std::size_t stride = 10;
    integ->add_option("--delta", delta);
    integ->add_option("--periods", periods);
    integ->add_option("--dt", dt, "step (splitting) or output spacing (rk); default fast period / 200");
    integ->add_option("--scheme", scheme)->check(CLI::IsMember({"splitting", "rk"}));
    integ->add_option("--stride", stride, "keep every n-th step")->check(CLI::PositiveNumber);
    integ->add_option("--out", out_path);
    integ->add_option("--summary", summary_path);
    add_config(integ);

    auto* verify = app.add_subcommand("verify", "run the acceptance battery");
    add_config(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const MassConfig cfg = config_from(config_path);
        const DerivedConstants c = derive_constants(cfg);

        if (*params) {
            std::cout << constants_json(cfg, c).dump(2) << "\n";
        } else if (*portrait) {
            if (zmax == 0.0) zmax = 3.0 * std::sqrt(cfg.epsilon * c.B / c.A);
            if (!(zmax > 0.0)) throw UsageError("--zmax must be positive");
            const auto rows = portrait_grid(model == "averaged" ? PortraitModel::averaged : PortraitModel::mechanical,
                                            n, zmax, cfg, c, threads);
            Sink sink(out_path);
            CsvWriter w(sink.stream(), {"zeta1", "Z1", "H"});
            for (const auto& r : rows) w.row({r.zeta1, r.Z1, r.H});
        } else if (*separatrix) {
            Sink sink(out_path);
            CsvWriter w(sink.stream(), {"delta", "phi_min", "amplitude", "amplitude_deg"});
            for (double d : parse_list(deltas)) {
                const double amp = d >= 0.0 ? libration_amplitude(d) : std::nan("");
                w.row({d, phi_min(d), amp, amp * 180.0 / kPi});
            }
        } else if (*freq) {
            const auto grid = log_grid(dmin, dmax, points);
            const QuadratureMode qm = parse_mode(mode);
            std::vector<FrequencyRecord> recs(grid.size());
            parallel_for(grid.size(), threads, [&](std::size_t i) { recs[i] = period(grid[i], c, cfg, qm); });
            Sink sink(out_path);
            CsvWriter w(sink.stream(), {"delta", "J1", "T", "nu", "nu_prime", "nu_asymptotic", "residual"});
            const double scale = cfg.upsilon0 * std::sqrt(cfg.epsilon) * c.K;
            for (const auto& r : recs) {
                w.row({r.delta, r.J1, r.T, r.nu, r.nu_prime, nu_asymptotic(r.delta, c, cfg),
                       scale / r.nu - std::abs(std::log(r.delta))});
            }
        } else if (*secular) {
            const SecularSpectrum s = secular_eigs(delta, c, cfg);
            const SeparatrixConstants k = separatrix_constants(c, cfg);
            ordered_json j;
            j["delta"] = s.delta;
            j["A_bar"] = s.A_bar;
            j["B_bar"] = s.B_bar;
            j["g1"] = s.g1;
            j["g2"] = s.g2;
            j["C_A"] = k.C_A;
            j["C_B"] = k.C_B;
            j["c2"] = k.c2;
            j["quadrature_error"] = std::max(s.quadrature_error, k.quadrature_error);
            std::cout << j.dump(2) << "\n";
        } else if (*torus) {
            std::vector<double> theta(samples);
            for (std::size_t i = 0; i < samples; ++i) theta[i] = 2.0 * kPi * double(i) / double(samples);
            const HorseshoeTorus t = torus_embedding(delta, theta, c, cfg);
            Sink sink(out_path);
            CsvWriter w(sink.stream(), {"theta1", "zeta1", "Z1", "lambda1", "lambda2", "Lambda1", "Lambda2"});
            for (std::size_t i = 0; i < samples; ++i) {
                const PoincareState p = t.point(i, 0.0);
                w.row({theta[i], t.F_samples[i], t.G_samples[i], p.lambda1, p.lambda2, p.Lambda1, p.Lambda2});
            }
        } else if (*integ) {
            LaunchOptions lo;
            lo.delta = delta;
            lo.periods = periods;
            lo.dt = dt;
            lo.scheme = scheme == "rk" ? Scheme::rk_adaptive : Scheme::splitting;
            lo.sample_stride = stride;
            const LaunchReport rep = launch_from_torus(cfg, lo);
            if (!out_path.empty()) {
                Sink sink(out_path);
                CsvWriter w(sink.stream(), {"t", "r1x", "r1y", "r2x", "r2y", "p1x", "p1y", "p2x", "p2y", "energy",
                                            "angular_momentum", "zeta1", "zeta2"});
                const auto& tr = rep.trajectory;
                for (std::size_t i = 0; i < tr.times.size(); ++i) {
                    const auto& s = tr.states[i];
                    w.row({tr.times[i], s.r1.x, s.r1.y, s.r2.x, s.r2.y, s.p1.x, s.p1.y, s.p2.x, s.p2.y,
                           tr.energy_series[i], tr.angmom_series[i], rep.zeta1[i], rep.zeta2[i]});
                }
            }
            ordered_json j;
            j["delta"] = delta;
            j["scheme"] = scheme;
            j["completed"] = rep.trajectory.completed;
            j["abort_reason"] = rep.trajectory.abort_reason;
            j["t_end"] = rep.trajectory.times.empty() ? 0.0 : rep.trajectory.times.back();
            j["energy_drift"] = rep.energy_drift;
            j["angular_momentum_drift"] = rep.angmom_drift;
            j["dalembert_drift"] = rep.dalembert_drift;
            j["nu_model"] = rep.nu_model;
            j["nu_measured"] = rep.nu_measured;
            j["upsilon_model"] = rep.upsilon_model;
            j["upsilon_measured"] = rep.upsilon_measured;
            j["librates"] = rep.librates;
            j["libration_amplitude_deg"] = rep.libration_amplitude * 180.0 / kPi;
            j["residual"] = rep.residual;
            j["residual_condition"] = rep.residual_condition;
            j["residual_ill_conditioned"] = rep.residual_ill_conditioned;
            if (summary_path.empty()) {
                std::cout << j.dump(2) << "\n";
            } else {
                Sink sink(summary_path);
                sink.stream() << j.dump(2) << "\n";
            }
            return rep.trajectory.completed ? 0 : 1;
        } else if (*verify) {
            bool ok = true;
            std::printf("%-6s %-3s %-8s %s\n", "status", "id", "seconds", "check");
            for (const auto& r : run_acceptance(cfg)) {
                const char* tag = r.informational ? "INFO" : (r.passed ? "PASS" : "FAIL");
                if (!r.informational && !r.passed) ok = false;
                std::printf("%-6s %-3d %-8.2f %s: %s\n", tag, r.id, r.seconds, r.title.c_str(), r.detail.c_str());
            }
            return ok ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
