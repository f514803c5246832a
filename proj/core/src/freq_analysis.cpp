#include "coorbital/freq_analysis.hpp"

#include "coorbital/errors.hpp"

#include <Eigen/Dense>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace coorbital {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mutex& planner_mutex() {
    static std::mutex m;  // the FFTW planner is not reentrant
    return m;
}

// |X_j| of the DFT of x, j = 0..N-1
std::vector<double> dft_magnitudes(const std::vector<cd>& x) {
    const int n = static_cast<int>(x.size());
    auto* in = reinterpret_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * x.size()));
    auto* out = reinterpret_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * x.size()));
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    for (int k = 0; k < n; ++k) {
        in[k][0] = x[k].real();
        in[k][1] = x[k].imag();
    }
    fftw_execute(plan);
    std::vector<double> mag(x.size());
    for (int k = 0; k < n; ++k) mag[k] = std::hypot(out[k][0], out[k][1]);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return mag;
}

class WindowedSignal {
public:
    WindowedSignal(std::span<const cd> s, double dt) : dt_(dt), samples_(s.begin(), s.end()), w_(s.size()) {
        const double n1 = static_cast<double>(s.size() - 1);
        for (std::size_t k = 0; k < s.size(); ++k) {
            w_[k] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(k) / n1));
            weight_sum_ += w_[k];
        }
    }

    std::size_t size() const { return samples_.size(); }
    double dt() const { return dt_; }
    double weight(std::size_t k) const { return w_[k]; }
    double weight_sum() const { return weight_sum_; }
    double time(std::size_t k) const { return dt_ * static_cast<double>(k); }
    const std::vector<cd>& samples() const { return samples_; }

    // Phi(w) = sum w_k r_k exp(-i w t_k); derivatives in w on request
    std::array<cd, 3> projection(const std::vector<cd>& r, double omega, bool derivatives) const {
        cd p0{}, p1{}, p2{};
        for (std::size_t k = 0; k < r.size(); ++k) {
            const double t = time(k);
            const cd z = w_[k] * r[k] * std::polar(1.0, -omega * t);
            p0 += z;
            if (derivatives) {
                p1 += cd(0.0, -t) * z;
                p2 += -t * t * z;
            }
        }
        return {p0, p1, p2};
    }

private:
    double dt_;
    std::vector<cd> samples_;
    std::vector<double> w_;
    double weight_sum_ = 0.0;
};

// Local maximum of |Phi| on [lo, hi] by golden section, then Newton on d|Phi|^2/dw.
double refine_peak(const WindowedSignal& ws, const std::vector<cd>& r, double lo, double hi) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    auto mag = [&](double w) { return std::abs(ws.projection(r, w, false)[0]); };
    double a = lo, b = hi;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = mag(x1), f2 = mag(x2);
    const double width = hi - lo;
    while (b - a > 1e-7 * width) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = mag(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = mag(x1);
        }
    }
    double w = 0.5 * (a + b);
    for (int it = 0; it < 8; ++it) {
        const auto p = ws.projection(r, w, true);
        const double slope = std::real(std::conj(p[0]) * p[1]);
        const double curv = std::norm(p[1]) + std::real(std::conj(p[0]) * p[2]);
        if (!(curv < 0.0)) break;  // not at a maximum; keep the golden-section value
        const double step = -slope / curv;
        if (std::abs(step) > 0.5 * width) break;
        w += step;
        if (std::abs(step) <= 1e-13 * std::max(1.0, std::abs(w)) + 1e-12 * width) break;
    }
    return w;
}

// Amplitudes of exp(i w_j t) fitted in the windowed inner product.
std::vector<cd> fit_amplitudes(const WindowedSignal& ws, const std::vector<double>& freqs) {
    const auto m = static_cast<Eigen::Index>(freqs.size());
    Eigen::MatrixXcd G(m, m);
    Eigen::VectorXcd rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        rhs(i) = ws.projection(ws.samples(), freqs[i], false)[0];
        for (Eigen::Index j = 0; j < m; ++j) {
            cd acc{};
            const double dw = freqs[j] - freqs[i];
            for (std::size_t k = 0; k < ws.size(); ++k) acc += ws.weight(k) * std::polar(1.0, dw * ws.time(k));
            G(i, j) = acc;
        }
    }
    const Eigen::VectorXcd a = G.colPivHouseholderQr().solve(rhs);
    return {a.data(), a.data() + a.size()};
}

std::vector<cd> remove_components(const WindowedSignal& ws, const std::vector<double>& freqs,
                                  const std::vector<cd>& amps, std::size_t skip = static_cast<std::size_t>(-1)) {
    std::vector<cd> r = ws.samples();
    for (std::size_t j = 0; j < freqs.size(); ++j) {
        if (j == skip) continue;
        for (std::size_t k = 0; k < r.size(); ++k) r[k] -= amps[j] * std::polar(1.0, freqs[j] * ws.time(k));
    }
    return r;
}

}  // namespace

std::vector<FrequencyComponent> fundamental_frequencies(std::span<const std::complex<double>> samples, double dt,
                                                        std::size_t n_freq, const FrequencyAnalysisOptions& options) {
    if (samples.size() < 256) throw DomainError("fundamental_frequencies: at least 256 samples required");
    if (n_freq == 0 || n_freq > 6) throw DomainError("fundamental_frequencies: n_freq must be in 1..6");
    if (!(dt > 0.0)) throw DomainError("fundamental_frequencies: dt must be positive");

    const WindowedSignal ws(samples, dt);
    const std::size_t n = ws.size();
    const double bin = kTwoPi / (static_cast<double>(n) * dt);

    std::vector<double> freqs;
    std::vector<cd> amps;
    std::vector<cd> residual = ws.samples();
    double first_peak = 0.0;

    for (std::size_t iter = 0; iter < n_freq; ++iter) {
        std::vector<cd> windowed(n);
        for (std::size_t k = 0; k < n; ++k) windowed[k] = ws.weight(k) * residual[k];
        const std::vector<double> mag = dft_magnitudes(windowed);
        const auto peak = static_cast<std::size_t>(std::max_element(mag.begin(), mag.end()) - mag.begin());
        if (iter == 0) first_peak = mag[peak];
        if (!(mag[peak] > 1e-10 * first_peak) || first_peak == 0.0) break;

        const double j = peak > n / 2 ? static_cast<double>(peak) - static_cast<double>(n) : static_cast<double>(peak);
        const double w0 = j * bin;
        freqs.push_back(refine_peak(ws, residual, w0 - bin, w0 + bin));
        amps = fit_amplitudes(ws, freqs);
        residual = remove_components(ws, freqs, amps);
    }

    if (options.joint_refinement && freqs.size() > 1) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < freqs.size(); ++j) {
                const std::vector<cd> others_removed = remove_components(ws, freqs, amps, j);
                freqs[j] = refine_peak(ws, others_removed, freqs[j] - 0.25 * bin, freqs[j] + 0.25 * bin);
            }
            amps = fit_amplitudes(ws, freqs);
        }
    }

    std::vector<FrequencyComponent> out;
    for (std::size_t j = 0; j < freqs.size(); ++j) out.push_back({freqs[j], amps[j]});
    std::stable_sort(out.begin(), out.end(), [](const FrequencyComponent& a, const FrequencyComponent& b) {
        return std::abs(a.amplitude) > std::abs(b.amplitude);
    });
    const double strongest = out.empty() ? 0.0 : std::abs(out.front().amplitude);
    std::erase_if(out, [&](const FrequencyComponent& c) { return std::abs(c.amplitude) < 1e-10 * strongest; });
    return out;
}

ResidualResult quasiperiodic_residual(std::span<const std::complex<double>> samples, double dt,
                                      std::array<double, 2> omega, int max_order) {
    if (samples.size() < 256) throw DomainError("quasiperiodic_residual: at least 256 samples required");
    if (!(dt > 0.0)) throw DomainError("quasiperiodic_residual: dt must be positive");
    if (max_order < 0) throw DomainError("quasiperiodic_residual: negative order");

    const auto n = static_cast<Eigen::Index>(samples.size());
    const int side = 2 * max_order + 1;
    Eigen::MatrixXcd basis(n, side * side);
    Eigen::VectorXcd s(n);
    for (Eigen::Index k = 0; k < n; ++k) s(k) = samples[static_cast<std::size_t>(k)];
    Eigen::Index col = 0;
    for (int k1 = -max_order; k1 <= max_order; ++k1) {
        for (int k2 = -max_order; k2 <= max_order; ++k2, ++col) {
            const double w = k1 * omega[0] + k2 * omega[1];
            for (Eigen::Index k = 0; k < n; ++k) basis(k, col) = std::polar(1.0, w * dt * static_cast<double>(k));
        }
    }

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(basis, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    ResidualResult out;
    out.condition_number = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
    out.ill_conditioned = !(out.condition_number < 1e8);
    svd.setThreshold(1e-12);
    const Eigen::VectorXcd coef = svd.solve(s);
    const double norm_s = s.norm();
    out.residual = norm_s > 0.0 ? (s - basis * coef).norm() / norm_s : 0.0;
    return out;
}

}  // namespace coorbital
