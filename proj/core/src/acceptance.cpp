#include "coorbital/acceptance.hpp"

#include "coorbital/action_angle.hpp"
#include "coorbital/errors.hpp"
#include "coorbital/freq_analysis.hpp"
#include "coorbital/launch.hpp"
#include "coorbital/resonant_frame.hpp"
#include "coorbital/secular.hpp"
#include "coorbital/separatrix.hpp"
#include "coorbital/three_body.hpp"
#include "quadrature.hpp"

#include <boost/math/tools/roots.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

namespace coorbital {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

bool within(double value, double target, double rel) { return std::abs(value - target) <= rel * std::abs(target); }

using Clock = std::chrono::steady_clock;

// Runs body(result), records its wall time and folds the time budget into
// the verdict. Exceptions from the library count as failures.
CheckResult timed(int id, std::string title, double budget_s, const std::function<void(CheckResult&)>& body) {
    CheckResult r;
    r.id = id;
    r.title = std::move(title);
    const auto t0 = Clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail += std::string(r.detail.empty() ? "" : "; ") + "exception: " + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (budget_s > 0.0 && r.seconds > budget_s) {
        r.passed = false;
        r.detail += "; over the " + num(budget_s) + " s budget";
    }
    return r;
}

// s(delta) = upsilon0 sqrt(eps) K / nu - |ln delta|
double log_offset(double delta, const DerivedConstants& c, const MassConfig& cfg) {
    const FrequencyRecord f = period(delta, c, cfg, QuadratureMode::split);
    return cfg.upsilon0 * std::sqrt(cfg.epsilon) * c.K / f.nu - std::abs(std::log(delta));
}

double nu_prime_ratio(double delta, const DerivedConstants& c, const MassConfig& cfg) {
    const FrequencyRecord f = period(delta, c, cfg, QuadratureMode::split);
    const double L = std::abs(std::log(delta));
    return f.nu_prime * delta * L * L / (cfg.upsilon0 * std::sqrt(cfg.epsilon) * c.K);
}

// Value at the deeper point is stable against the shallower one and close to the target.
bool stabilises(double shallow, double deep, double target, double rel) {
    return std::abs(deep - shallow) <= rel * std::abs(shallow) && within(deep, target, rel);
}

CartesianState random_state(std::mt19937_64& rng, const DerivedConstants& c, double max_e) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        PoincareState p;
        p.Lambda1 = c.lambda10 * (1.0 + 0.02 * (unit(rng) - 0.5));
        p.Lambda2 = c.lambda20 * (1.0 + 0.02 * (unit(rng) - 0.5));
        p.lambda1 = 2.0 * kPi * unit(rng);
        p.lambda2 = 2.0 * kPi * unit(rng);
        auto ecc = [&](double Lambda) {
            const double e = max_e * unit(rng);
            const double w = 2.0 * kPi * unit(rng);
            return std::sqrt(Lambda * (1.0 - std::sqrt(1.0 - e * e))) * std::polar(1.0, w);
        };
        p.x1 = ecc(p.Lambda1);
        p.x2 = ecc(p.Lambda2);
        const CartesianState s = poincare_to_cartesian(p, c);
        if (norm(s.r1 - s.r2) > 0.2 * c.a_star) return s;
    }
}

double angle_gap(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * kPi)); }

}  // namespace

MassConfig reference_config() { return {1.0, 1.0, 0.3, 1e-3, 2.0 * kPi}; }

MassConfig janus_epimetheus_config() {
    const double ratio = 5.266e17 / 1.8975e18;  // Epimetheus / Janus
    MassConfig cfg;
    cfg.m0 = 1.0;
    cfg.epsilon = 4.2e-9;
    cfg.m1 = ratio / (1.0 + ratio);
    cfg.m2 = 1.0 / (1.0 + ratio);
    cfg.upsilon0 = 2.0 * kPi;  // time unit: one 17 h orbit
    return cfg;
}

std::vector<CheckResult> run_acceptance(const MassConfig& cfg) {
    const DerivedConstants c = derive_constants(cfg);
    std::vector<CheckResult> out;

    out.push_back(timed(1, "closed-form anchors", 1.0, [&](CheckResult& r) {
        const MechanicalFunctions m = mechanical_functions(kPi);
        const double eF = std::abs(m.F + 1.0);
        const double eA = std::abs(m.A_tilde - 0.875);
        const double eB = std::abs(m.B_tilde - 0.875);
        const double eK = std::abs(c.K * c.K / (7.0 * kPi * kPi / 6.0 * c.A * c.B) - 1.0);
        r.passed = eF <= 1e-12 && eA <= 1e-12 && eB <= 1e-12 && eK <= 1e-12;
        r.detail = "|F(pi)+1| = " + num(eF) + ", |A(pi)-7/8| = " + num(eA) + ", |B(pi)-7/8| = " + num(eB) +
                   ", K^2 rel = " + num(eK);
    }));

    out.push_back(timed(2, "turning angle at the separatrix and its slope", 0.0, [&](CheckResult& r) {
        const double exact = 2.0 * std::asin((std::numbers::sqrt2 - 1.0) / 2.0);
        const double e0 = std::abs(phi_min(0.0) - exact);
        const double h = 1e-5;
        const double slope = (phi_min(h) - phi_min(-h)) / (2.0 * h);
        const double c0 = phi_min_slope_constant();
        r.passed = e0 <= 1e-10 && std::abs(slope + c0) <= 1e-5 && c0 > 0.25 && c0 < 1.0 / 3.0;
        r.detail = "phi_min(0) err = " + num(e0) + ", slope = " + num(slope) + ", -c0 = " + num(-c0);
    }));

    out.push_back(timed(3, "libration amplitude above 312 degrees on [0, 0.1]", 0.0, [&](CheckResult& r) {
        double worst = 1e9;
        for (int i = 0; i < 20; ++i) {
            const double d = 0.1 * i / 19.0;
            worst = std::min(worst, libration_amplitude(d) * 180.0 / kPi);
        }
        r.passed = worst > 312.0;
        r.detail = "smallest amplitude = " + num(worst) + " deg";
    }));

    out.push_back(timed(4, "parabolic-well closed form vs quadrature", 1.0, [&](CheckResult& r) {
        r.passed = true;
        for (double d : {1e-2, 1e-4}) {
            auto f = [d](double phi) { return 1.0 / std::sqrt(d + 7.0 * (phi - kPi) * (phi - kPi) / 24.0); };
            const double q = detail::integrate(f, {kPi / 3.0, kPi - 10.0 * std::sqrt(d), kPi}).value;
            const double closed = parabolic_well_integral(d);
            const double rel = std::abs(q / closed - 1.0);
            r.passed = r.passed && rel <= 1e-9;
            r.detail += "delta=" + num(d) + ": rel " + num(rel) + " (" + num(closed) + ") ";
        }
    }));

    out.push_back(timed(5, "semi-fast frequency asymptotics", 10.0, [&](CheckResult& r) {
        const double s30 = log_offset(1e-30, c, cfg), s60 = log_offset(1e-60, c, cfg);
        const double p30 = nu_prime_ratio(1e-30, c, cfg), p60 = nu_prime_ratio(1e-60, c, cfg);
        const bool s_ok = std::abs(s30 - s60) <= 0.05 * std::abs(s30);
        const bool p_ok = stabilises(p30, p60, 1.0, 0.05);
        r.passed = s_ok && p_ok;
        r.detail = "s(1e-30) = " + num(s30) + ", s(1e-60) = " + num(s60) + ", nu' ratio " + num(p30) + " -> " +
                   num(p60);
    }));

    SeparatrixConstants sc{};
    out.push_back(timed(6, "separatrix constants", 5.0, [&](CheckResult& r) {
        sc = separatrix_constants(c, cfg);
        r.passed = sc.C_A > -28 && sc.C_A < -27 && sc.C_B > 16 && sc.C_B < 17 && sc.c2 > -90 && sc.c2 < -86 &&
                   sc.quadrature_error <= 1e-6;
        r.detail = "C_A = " + num(sc.C_A) + ", C_B = " + num(sc.C_B) + ", c2 = " + num(sc.c2) +
                   ", error = " + num(sc.quadrature_error);
    }));

    double g2_limit_30 = 0.0, g2_limit_60 = 0.0;
    out.push_back(timed(7, "secular asymptotics", 30.0, [&](CheckResult& r) {
        if (sc.c2 == 0.0) sc = separatrix_constants(c, cfg);
        const double L30 = std::log(1e30), L60 = std::log(1e60);
        const auto ab30 = averaged_AB(1e-30, c, cfg, QuadratureMode::split);
        const auto ab60 = averaged_AB(1e-60, c, cfg, QuadratureMode::split);
        const double a30 = (ab30.A_bar - 0.875) * L30, a60 = (ab60.A_bar - 0.875) * L60;
        const double b30 = (ab30.B_bar - 0.875) * L30, b60 = (ab60.B_bar - 0.875) * L60;
        const double scale = cfg.epsilon * cfg.upsilon0 * (cfg.m1 + cfg.m2) / cfg.m0;
        g2_limit_30 = secular_eigs(1e-30, c, cfg).g2 * L30 / scale;
        g2_limit_60 = secular_eigs(1e-60, c, cfg).g2 * L60 / scale;
        const bool a_ok = stabilises(a30, a60, sc.C_A, 0.05);
        const bool b_ok = stabilises(b30, b60, sc.C_B, 0.05);
        const bool g_ok = stabilises(g2_limit_30, g2_limit_60, sc.c2, 0.05);
        r.passed = a_ok && b_ok && g_ok;
        r.detail = "(A-7/8)|ln d|: " + num(a30) + " -> " + num(a60) + " vs " + num(sc.C_A) +
                   "; (B-7/8)|ln d|: " + num(b30) + " -> " + num(b60) + " vs " + num(sc.C_B) +
                   "; g2 |ln d|/(eps u0 (m1+m2)/m0): " + num(g2_limit_30) + " -> " + num(g2_limit_60) + " vs " +
                   num(sc.c2);
    }));
    {
        CheckResult info;
        info.id = 7;
        info.informational = true;
        info.title = "secular g2 limit with the mass factor m1 m2/(m1+m2)^2";
        const double M = cfg.m1 + cfg.m2;
        const double target = sc.c2 * cfg.m1 * cfg.m2 / (M * M);
        info.passed = stabilises(g2_limit_30, g2_limit_60, target, 0.05);
        info.detail = num(g2_limit_60) + " vs c2 m1 m2/(m1+m2)^2 = " + num(target);
        out.push_back(info);
    }

    out.push_back(timed(8, "mechanical model consistency", 10.0, [&](CheckResult& r) {
        r.passed = true;
        for (double d : {0.01, 0.05, 0.1}) {
            const HorseshoeProfile p = horseshoe_profile(d, 64, c, cfg);
            const double T = period(d, c, cfg, QuadratureMode::direct).T;
            const double rel = std::abs(p.period / T - 1.0);
            r.passed = r.passed && rel <= 1e-8;
            r.detail += "T rel(" + num(d) + ") = " + num(rel) + "; ";
        }
        const double d = 0.05, s = 1e-4;
        const double dJ = action_J1(d + s, c, cfg) - action_J1(d - s, c, cfg);
        const double dh = level_energy(d + s, c, cfg) - level_energy(d - s, c, cfg);
        const double nu = period(d, c, cfg, QuadratureMode::direct).nu;
        const double rel = std::abs(std::abs(dJ / dh) * nu - 1.0);
        r.passed = r.passed && rel <= 1e-5;
        r.detail += "|dJ1/dh| nu - 1 = " + num(rel) + " (dJ1/dh sign " + (dJ / dh < 0 ? "-" : "+") + ")";
    }));

    out.push_back(timed(9, "averaging fidelity under eps halving", 30.0, [&](CheckResult& r) {
        r.passed = true;
        for (double zeta : {kPi / 2.0, kPi, 3.0 * kPi / 2.0}) {
            double gaps[3], refs[3];
            const double eps_list[3] = {1e-3, 5e-4, 2.5e-4};
            for (int i = 0; i < 3; ++i) {
                const MassConfig ce = with_epsilon(cfg, eps_list[i]);
                const DerivedConstants ke = derive_constants(ce);
                const double z1 = ke.lambda1_star - ke.lambda10;
                const double z2 = ke.lambda1_star + ke.lambda2_star - ke.lambda10 - ke.lambda20;
                const double avg = averaged_perturbation_circular(z1, z2, zeta, ce, ke);
                refs[i] = ce.epsilon * ce.upsilon0 * ke.B * coupling_potential(zeta);
                gaps[i] = std::abs(avg - refs[i]);
            }
            // cos(zeta) = 0 makes the second-order gap vanish identically
            const bool vanishing = [&] {
                for (int i = 0; i < 3; ++i) {
                    if (gaps[i] > 1e3 * 2.2e-16 * std::abs(refs[i])) return false;
                }
                return true;
            }();
            bool ok = true;
            std::string ratios;
            for (int i = 0; i < 2; ++i) {
                const double q = gaps[i] / gaps[i + 1];
                ratios += num(q) + " ";
                ok = ok && q >= 3.0 && q <= 5.0;
            }
            ok = ok || vanishing;
            r.passed = r.passed && ok;
            r.detail += "zeta1=" + num(zeta) + (vanishing ? ": gap at rounding level " + num(gaps[0])
                                                          : ": ratios " + ratios) + "; ";
        }
    }));

    auto launch_check = [&](int id, const MassConfig& lc, bool informational, const std::string& title) {
        return timed(id, title, informational ? 0.0 : 300.0, [&](CheckResult& r) {
            r.informational = informational;
            LaunchOptions lo;
            lo.delta = 0.05;
            lo.periods = 1000.0;
            const LaunchReport rep = launch_from_torus(lc, lo);
            const bool done = rep.trajectory.completed;
            const bool drift_ok = rep.energy_drift <= 1e-10 && rep.angmom_drift <= 1e-11 && rep.dalembert_drift <= 1e-11;
            const bool lib_ok = rep.librates && rep.libration_amplitude * 180.0 / kPi > 312.0;
            const bool nu_ok = within(rep.nu_measured, rep.nu_model, 0.05);
            const bool ups_ok = within(rep.upsilon_measured, rep.upsilon_model, 0.01);
            const bool res_ok = rep.residual <= 5e-2;
            r.passed = done && drift_ok && lib_ok && nu_ok && ups_ok && res_ok;
            r.detail = std::string(done ? "completed" : "aborted: " + rep.trajectory.abort_reason) +
                       "; dE = " + num(rep.energy_drift) + ", dC = " + num(rep.angmom_drift) +
                       ", dD = " + num(rep.dalembert_drift) + ", amplitude = " +
                       num(rep.libration_amplitude * 180.0 / kPi) + " deg" + (rep.librates ? "" : " (circulates)") +
                       ", nu = " + num(rep.nu_measured) + " vs " + num(rep.nu_model) + ", upsilon = " +
                       num(rep.upsilon_measured) + " vs " + num(rep.upsilon_model) + ", residual = " +
                       num(rep.residual);
        });
    };
    out.push_back(launch_check(10, cfg, false, "full-problem trajectory on the model torus"));
    out.push_back(launch_check(10, with_epsilon(cfg, 1e-5), true, "same launch with eps = 1e-5"));

    out.push_back(timed(11, "Janus-Epimetheus exchange period", 5.0, [&](CheckResult& r) {
        const MassConfig jc = janus_epimetheus_config();
        const DerivedConstants jk = derive_constants(jc);
        const double target = 50.0 / 151470.0;
        auto separation = [&](double d) {
            const double z = std::sqrt(jc.epsilon * jk.B * d / jk.A);  // |Z1| at zeta1 = pi
            const double L1 = jk.lambda10 + z, L2 = jk.lambda20 - z;
            const double a1 = (L1 / jk.mhat1) * (L1 / jk.mhat1) / jk.mu1;
            const double a2 = (L2 / jk.mhat2) * (L2 / jk.mhat2) / jk.mu2;
            return std::abs(a1 - a2) / jk.a_star - target;
        };
        std::uintmax_t iters = 200;
        const auto bracket = boost::math::tools::toms748_solve(separation, kDirectMinDelta, kDirectMaxDelta,
                                                               boost::math::tools::eps_tolerance<double>(50), iters);
        const double d = 0.5 * (bracket.first + bracket.second);
        const double half_T = 0.5 * period(d, jk, jc, QuadratureMode::direct).T;
        const double years = half_T * 17.0 / (24.0 * 365.25);
        r.passed = years >= 2.0 && years <= 8.0;
        r.detail = "delta = " + num(d) + ", T/2 = " + num(years) + " yr";
    }));

    out.push_back(timed(12, "Melnikov divisor scan", 60.0, [&](CheckResult& r) {
        const double d = default_delta_rule(cfg.epsilon);
        const double nu = period(d, c, cfg, QuadratureMode::direct).nu;
        const SecularSpectrum s = secular_eigs(d, c, cfg);
        const MelnikovResult m = melnikov_min_divisor({nu, cfg.upsilon0}, {s.g1, s.g2}, 10000);
        r.passed = m.min_divisor > 1e-9 * cfg.upsilon0 && m.min_secular > 0.0;
        const double gamma0 = cfg.epsilon / std::abs(std::log(cfg.epsilon));
        r.detail = "delta = " + num(d) + ", min divisor = " + num(m.min_divisor) + " at k=(" +
                   std::to_string(m.k[0]) + "," + std::to_string(m.k[1]) + ") l=(" + std::to_string(m.l[0]) + "," +
                   std::to_string(m.l[1]) + "), secular min = " + num(m.min_secular) + ", eps/|ln eps| = " +
                   num(gamma0);
    }));

    out.push_back(timed(13, "numerical hygiene", 30.0, [&](CheckResult& r) {
        std::mt19937_64 rng(20240611);
        double grad_err = 0.0;
        const double h = 1e-6;
        for (int i = 0; i < 100; ++i) {
            const CartesianState s = random_state(rng, c, 0.1);
            const StateDerivative d = equations_of_motion(s, cfg);
            // dr = dH/dp, dp = -dH/dr
            const double analytic[8] = {-d.dp1.x, -d.dp1.y, -d.dp2.x, -d.dp2.y, d.dr1.x, d.dr1.y, d.dr2.x, d.dr2.y};
            for (int k = 0; k < 8; ++k) {
                CartesianState a = s, b = s;
                double* pa[8] = {&a.r1.x, &a.r1.y, &a.r2.x, &a.r2.y, &a.p1.x, &a.p1.y, &a.p2.x, &a.p2.y};
                double* pb[8] = {&b.r1.x, &b.r1.y, &b.r2.x, &b.r2.y, &b.p1.x, &b.p1.y, &b.p2.x, &b.p2.y};
                *pa[k] += h;
                *pb[k] -= h;
                const double fd = (hamiltonian_energy(a, cfg) - hamiltonian_energy(b, cfg)) / (2.0 * h);
                grad_err = std::max(grad_err, std::abs(fd - analytic[k]));
            }
        }

        double chart_err = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const CartesianState s = random_state(rng, c, 0.3);
            const PoincareState p = cartesian_to_poincare(s, c);
            const PoincareState q = cartesian_to_poincare(poincare_to_cartesian(p, c), c);
            chart_err = std::max({chart_err, std::abs(p.Lambda1 - q.Lambda1), std::abs(p.Lambda2 - q.Lambda2),
                                  angle_gap(p.lambda1, q.lambda1), angle_gap(p.lambda2, q.lambda2),
                                  std::abs(p.x1 - q.x1), std::abs(p.x2 - q.x2)});
        }

        std::vector<std::complex<double>> sig(4096);
        for (std::size_t k = 0; k < sig.size(); ++k) {
            const double t = 0.1 * static_cast<double>(k);
            sig[k] = std::polar(1.0, 0.3 * t) + 0.5 * std::polar(1.0, 1.7 * t);
        }
        const auto comps = fundamental_frequencies(sig, 0.1, 2);
        double tone_err = 1.0;
        if (comps.size() == 2) {
            tone_err = std::max(std::abs(comps[0].frequency - 0.3), std::abs(comps[1].frequency - 1.7));
        }
        r.passed = grad_err <= 1e-7 && chart_err <= 1e-11 && tone_err <= 1e-7;
        r.detail = "gradient err = " + num(grad_err) + ", chart err = " + num(chart_err) + ", tone err = " +
                   num(tone_err);
    }));

    return out;
}

}  // namespace coorbital
