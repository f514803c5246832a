#include "coorbital/kepler.hpp"

#include "coorbital/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace coorbital {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxNewton = 50;

void check_eccentricity(double e) {
    if (!(e >= 0.0) || e > kMaxEccentricity) {
        throw DomainError("eccentricity " + std::to_string(e) + " outside [0, 0.9]");
    }
}

// x - sin x without cancellation for small x
double x_minus_sin(double x) {
    if (std::abs(x) > 0.25) return x - std::sin(x);
    const double x2 = x * x;
    double term = x * x2 / 6.0;
    double sum = term;
    for (int k = 2; k < 10; ++k) {
        term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
        sum += term;
    }
    return sum;
}

// 1 - cos x without cancellation
double one_minus_cos(double x) {
    const double s = std::sin(0.5 * x);
    return 2.0 * s * s;
}

// Solve F + h cos F - k sin F = lambda for the eccentric longitude F.
double solve_eccentric_longitude(double lambda, double k, double h) {
    double F = lambda;
    for (int it = 0; it < kMaxNewton; ++it) {
        const double cf = std::cos(F), sf = std::sin(F);
        const double f = F + h * cf - k * sf - lambda;
        const double df = 1.0 - h * sf - k * cf;
        const double step = f / df;
        F -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(F))) return F;
    }
    throw NumericalError("eccentric longitude iteration did not converge");
}

}  // namespace

double solve_kepler(double M, double e) {
    check_eccentricity(e);
    if (!std::isfinite(M)) throw DomainError("solve_kepler: non-finite mean anomaly");
    // Work on the reduced anomaly so the residual test is not swamped by |M|.
    const double turns = std::round(M / kTwoPi);
    const double Mr = M - turns * kTwoPi;

    double E = Mr + e * std::sin(Mr);
    for (int it = 0; it < kMaxNewton; ++it) {
        const double f = E - e * std::sin(E) - Mr;
        if (std::abs(f) <= 1e-14) return E + turns * kTwoPi;
        const double step = f / (1.0 - e * std::cos(E));
        E -= step;
        if (step == 0.0) break;
    }
    if (std::abs(E - e * std::sin(E) - Mr) <= 1e-14) return E + turns * kTwoPi;
    throw NumericalError("solve_kepler: no convergence after 50 Newton iterations");
}

PhasePoint elements_to_cartesian(const OrbitalElements& el, double mu, double mhat) {
    if (!(el.a > 0.0)) throw DomainError("elements_to_cartesian: a must be positive");
    check_eccentricity(el.e);
    const double M = el.lambda - el.varpi;
    const double E = solve_kepler(M, el.e);
    const double cE = std::cos(E), sE = std::sin(E);
    const double beta = std::sqrt((1.0 - el.e) * (1.0 + el.e));
    const double n = std::sqrt(mu / (el.a * el.a * el.a));
    const double r = el.a * (1.0 - el.e * cE);

    // perifocal frame, then rotate by varpi
    const double xp = el.a * (cE - el.e);
    const double yp = el.a * beta * sE;
    const double vxp = -el.a * el.a * n * sE / r;
    const double vyp = el.a * el.a * n * beta * cE / r;

    const double cw = std::cos(el.varpi), sw = std::sin(el.varpi);
    PhasePoint out;
    out.r = {cw * xp - sw * yp, sw * xp + cw * yp};
    out.p = mhat * Vec2{cw * vxp - sw * vyp, sw * vxp + cw * vyp};
    return out;
}

OrbitalElements cartesian_to_elements(const PhasePoint& s, double mu, double mhat) {
    const Vec2 v = (1.0 / mhat) * s.p;
    const double r = norm(s.r);
    const double energy = 0.5 * norm2(v) - mu / r;
    if (!(energy < 0.0)) throw DomainError("cartesian_to_elements: orbit is not elliptic");
    OrbitalElements el;
    el.a = -mu / (2.0 * energy);
    const Vec2 ev = (1.0 / mu) * ((norm2(v) - mu / r) * s.r - dot(s.r, v) * v);
    el.e = norm(ev);
    el.varpi = el.e > 0.0 ? std::atan2(ev.y, ev.x) : 0.0;
    double Lambda = 0, lambda = 0;
    std::complex<double> x;
    cartesian_planet_to_poincare(s, mu, mhat, Lambda, lambda, x);
    el.lambda = lambda;
    return el;
}

PhasePoint poincare_planet_to_cartesian(double Lambda, double lambda, std::complex<double> x, double mu,
                                        double mhat) {
    const double x2 = std::norm(x);
    if (!(Lambda > 0.0)) throw DomainError("poincare chart: Lambda must be positive");
    if (!(x2 < Lambda)) throw DomainError("poincare chart: |x|^2 >= Lambda (e >= 1)");

    const double ratio = Lambda / mhat;
    const double a = ratio * ratio / mu;
    const double beta = 1.0 - x2 / Lambda;  // sqrt(1 - e^2)
    // (k, h) = e (cos varpi, sin varpi) = x sqrt((1 + beta)/Lambda)
    const std::complex<double> kh = x * std::sqrt((1.0 + beta) / Lambda);
    const double k = kh.real(), h = kh.imag();
    if (std::sqrt(k * k + h * h) > kMaxEccentricity) {
        throw DomainError("poincare chart: eccentricity above 0.9");
    }
    const double b = 1.0 / (1.0 + beta);

    const double F = solve_eccentric_longitude(lambda, k, h);
    const double cF = std::cos(F), sF = std::sin(F);
    const double n = std::sqrt(mu / (a * a * a));
    const double r = a * (1.0 - k * cF - h * sF);

    PhasePoint out;
    out.r = {a * ((1.0 - h * h * b) * cF + h * k * b * sF - k), a * ((1.0 - k * k * b) * sF + h * k * b * cF - h)};
    const double vs = a * a * n / r;
    out.p = mhat * vs * Vec2{h * k * b * cF - (1.0 - h * h * b) * sF, (1.0 - k * k * b) * cF - h * k * b * sF};
    return out;
}

void cartesian_planet_to_poincare(const PhasePoint& s, double mu, double mhat, double& Lambda, double& lambda,
                                  std::complex<double>& x) {
    const Vec2 v = (1.0 / mhat) * s.p;
    const double r = norm(s.r);
    if (!(r > 0.0)) throw DomainError("poincare chart: planet at the origin");
    const double v2 = norm2(v);
    const double energy = 0.5 * v2 - mu / r;
    if (!(energy < 0.0)) throw DomainError("poincare chart: hyperbolic or parabolic orbit");

    const double a = -mu / (2.0 * energy);
    Lambda = mhat * std::sqrt(mu * a);

    const Vec2 ev = (1.0 / mu) * ((v2 - mu / r) * s.r - dot(s.r, v) * v);
    const double k = ev.x, h = ev.y;
    const double e2 = k * k + h * h;
    if (!(e2 < 1.0)) throw DomainError("poincare chart: eccentricity >= 1");
    const double beta = std::sqrt(1.0 - e2);
    x = std::sqrt(Lambda / (1.0 + beta)) * std::complex<double>(k, h);

    // Invert the equinoctial position formulas for (cos F, sin F); the
    // determinant of that 2x2 system equals beta.
    const double b = 1.0 / (1.0 + beta);
    const double u = s.r.x / a + k;
    const double w = s.r.y / a + h;
    const double m11 = 1.0 - h * h * b, m12 = h * k * b, m22 = 1.0 - k * k * b;
    const double cF = (m22 * u - m12 * w) / beta;
    const double sF = (m11 * w - m12 * u) / beta;
    const double F = std::atan2(sF, cF);
    lambda = std::remainder(F + h * std::cos(F) - k * std::sin(F), kTwoPi);
    if (lambda <= -std::numbers::pi) lambda += kTwoPi;
}

CartesianState poincare_to_cartesian(const PoincareState& s, const DerivedConstants& c) {
    const PhasePoint a = poincare_planet_to_cartesian(s.Lambda1, s.lambda1, s.x1, c.mu1, c.mhat1);
    const PhasePoint b = poincare_planet_to_cartesian(s.Lambda2, s.lambda2, s.x2, c.mu2, c.mhat2);
    return {a.p, b.p, a.r, b.r};
}

PoincareState cartesian_to_poincare(const CartesianState& s, const DerivedConstants& c) {
    PoincareState out;
    cartesian_planet_to_poincare({s.r1, s.p1}, c.mu1, c.mhat1, out.Lambda1, out.lambda1, out.x1);
    cartesian_planet_to_poincare({s.r2, s.p2}, c.mu2, c.mhat2, out.Lambda2, out.lambda2, out.x2);
    return out;
}

void kepler_increment(const Vec2& r, const Vec2& v, double mu, double dt, Vec2& dr, Vec2& dv) {
    const double r0 = norm(r);
    const double v2 = norm2(v);
    const double inv_a = 2.0 / r0 - v2 / mu;
    if (!(inv_a > 0.0)) throw DomainError("kepler_drift: orbit is not elliptic");
    const double a = 1.0 / inv_a;
    const double n = std::sqrt(mu * inv_a * inv_a * inv_a);
    const double sigma0 = dot(r, v);
    const double sqrt_mu_a = std::sqrt(mu * a);

    // e sin E0 and e cos E0
    const double S = sigma0 / sqrt_mu_a;
    const double C = 1.0 - r0 * inv_a;

    const double dM_full = n * dt;
    const double turns = std::round(dM_full / kTwoPi);
    const double dM = dM_full - turns * kTwoPi;
    const double dt_red = dt - turns * kTwoPi / n;

    // dM = x + S (1 - cos x) - C sin x
    double x = dM;
    for (int it = 0;; ++it) {
        if (it == kMaxNewton) throw NumericalError("kepler_drift: no convergence");
        const double sx = std::sin(x), omc = one_minus_cos(x);
        const double f = x + S * omc - C * sx - dM;
        const double df = 1.0 - C * std::cos(x) + S * sx;
        const double step = f / df;
        x -= step;
        if (std::abs(step) <= 4e-16 * std::max(1.0, std::abs(x))) break;
    }

    const double sx = std::sin(x), omc = one_minus_cos(x);
    const double rn = a + (r0 - a) * std::cos(x) + sigma0 * std::sqrt(a / mu) * sx;
    const double f_m1 = -a / r0 * omc;
    const double g = dt_red - x_minus_sin(x) / n;
    const double fdot = -sqrt_mu_a * sx / (rn * r0);
    const double gdot_m1 = -a / rn * omc;

    dr = f_m1 * r + g * v;
    dv = fdot * r + gdot_m1 * v;
}

void kepler_drift(Vec2& r, Vec2& v, double mu, double dt) {
    Vec2 dr, dv;
    kepler_increment(r, v, mu, dt, dr, dv);
    r += dr;
    v += dv;
}

}  // namespace coorbital
