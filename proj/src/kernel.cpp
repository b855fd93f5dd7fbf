#include "chainprop/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chainprop {

namespace {

constexpr double pi = std::numbers::pi;

double reduce_phase(double phi) {
    phi = std::remainder(phi, 2.0 * pi);
    if (phi <= -pi) phi += 2.0 * pi;  // land in (-pi, pi]
    return phi;
}

bool near_caustic(double s, double wt, double tol) {
    return std::abs(s) < tol * std::max(1.0, std::abs(wt));
}

std::vector<double> to_modes(const SpectralDecomposition& spectrum, std::span<const double> x) {
    std::vector<double> y(spectrum.n, 0.0);
    for (int j = 0; j < spectrum.n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < spectrum.n; ++i) acc += spectrum.mode(j, i) * x[i];
        y[j] = acc;
    }
    return y;
}

std::vector<double> to_modes_parallel(const SpectralDecomposition& spectrum,
                                      std::span<const double> x) {
    std::vector<double> y(spectrum.n, 0.0);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < spectrum.n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < spectrum.n; ++i) acc += spectrum.mode(j, i) * x[i];
        y[j] = acc;
    }
    return y;
}

// the reduction order of the phase is fixed left to right by mode index so the
// serial and parallel paths agree bit for bit
ComplexAmplitude combine(const std::vector<double>& logs, const std::vector<double>& phases) {
    ComplexAmplitude out;
    for (double l : logs) out.log_modulus += l;
    double phase = 0.0;
    for (double p : phases) phase = reduce_phase(phase + p);
    out.phase = phase;
    out.modulus = std::exp(out.log_modulus);
    return out;
}

}  // namespace

ComplexAmplitude mode_kernel(const ModeOscillator& mode, double y, double y_prev, double t,
                             double caustic_tol) {
    if (t <= 0.0) throw std::invalid_argument("kernel defined for t > 0");
    if (mode.mass <= 0.0 || mode.hbar <= 0.0)
        throw std::invalid_argument("oscillator parameters out of range");
    const double m = mode.mass;
    const double hbar = mode.hbar;
    ComplexAmplitude out;
    if (mode.is_free()) {
        // sqrt(m/(2 pi i hbar t)) exp(i m (y - y')^2 / (2 hbar t))
        const double dy = y - y_prev;
        out.log_modulus = 0.5 * std::log(m / (2.0 * pi * hbar * t));
        out.phase = reduce_phase(-0.25 * pi + m * dy * dy / (2.0 * hbar * t));
        out.modulus = std::exp(out.log_modulus);
        return out;
    }
    const double w = mode.eff_frequency;
    const double s = std::sin(w * t);
    if (near_caustic(s, w * t, caustic_tol))
        throw numeric_error(errc::caustic, "harmonic kernel degenerates where sin(wt) = 0");
    const double c = std::cos(w * t);
    // principal square root of m w / (2 pi i hbar sin wt): phase -pi/4 above the
    // caustic (sin > 0), +pi/4 below
    out.log_modulus = 0.5 * std::log(m * w / (2.0 * pi * hbar * std::abs(s)));
    const double pref_phase = (s > 0.0) ? -0.25 * pi : 0.25 * pi;
    const double expo = m * w / (2.0 * hbar * s) * (c * (y * y + y_prev * y_prev) - 2.0 * y * y_prev);
    out.phase = reduce_phase(pref_phase + expo);
    out.modulus = std::exp(out.log_modulus);
    return out;
}

ComplexAmplitude chain_kernel(const ChainSpec& spec, const SpectralDecomposition& spectrum,
                              std::span<const double> x_final, std::span<const double> x_initial,
                              double t, double caustic_tol, double hbar) {
    const int n = spectrum.n;
    if (static_cast<int>(x_final.size()) != n || static_cast<int>(x_initial.size()) != n)
        throw std::invalid_argument("position lists need one entry per atom");
    const auto modes = mode_oscillators(spec, spectrum, hbar);
    const auto yf = to_modes(spectrum, x_final);
    const auto yi = to_modes(spectrum, x_initial);
    std::vector<double> logs(n), phases(n);
    for (int j = 0; j < n; ++j) {
        try {
            const ComplexAmplitude f = mode_kernel(modes[j], yf[j], yi[j], t, caustic_tol);
            logs[j] = f.log_modulus;
            phases[j] = f.phase;
        } catch (const numeric_error& e) {
            if (e.code == errc::caustic) throw numeric_error(errc::caustic, e.what(), j);
            throw;
        }
    }
    return combine(logs, phases);
}

ComplexAmplitude chain_kernel_parallel(const ChainSpec& spec, const SpectralDecomposition& spectrum,
                                       std::span<const double> x_final,
                                       std::span<const double> x_initial, double t,
                                       double caustic_tol, double hbar) {
    const int n = spectrum.n;
    if (static_cast<int>(x_final.size()) != n || static_cast<int>(x_initial.size()) != n)
        throw std::invalid_argument("position lists need one entry per atom");
    const auto modes = mode_oscillators(spec, spectrum, hbar);
    const auto yf = to_modes_parallel(spectrum, x_final);
    const auto yi = to_modes_parallel(spectrum, x_initial);
    std::vector<double> logs(n), phases(n);
    long bad = -1;  // lowest mode that hit a caustic, matching the serial walk
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        try {
            const ComplexAmplitude f = mode_kernel(modes[j], yf[j], yi[j], t, caustic_tol);
            logs[j] = f.log_modulus;
            phases[j] = f.phase;
        } catch (const numeric_error&) {
#pragma omp critical
            {
                if (bad < 0 || j < bad) bad = j;
            }
        }
    }
    if (bad >= 0)
        throw numeric_error(errc::caustic, "harmonic kernel degenerates where sin(wt) = 0", bad);
    return combine(logs, phases);
}

TruncatedProduct string_kernel_exponent(const TruncationPolicy& policy, double length_L,
                                        double Omega, std::span<const double> eta,
                                        std::span<const double> eta_prev, double t, double mu,
                                        double hbar, StringForm form) {
    if (t <= 0.0) throw std::invalid_argument("kernel defined for t > 0");
    if (length_L <= 0.0 || Omega <= 0.0 || mu <= 0.0 || hbar <= 0.0)
        throw std::invalid_argument("string parameters out of range");
    if (policy.max_modes < 1 || policy.caustic_tol <= 0.0)
        throw std::invalid_argument("bad truncation policy");
    const auto at = [](std::span<const double> v, int j) {
        return j < static_cast<int>(v.size()) ? v[j] : 0.0;
    };
    const complexd iu(0.0, 1.0);
    TruncatedProduct out;
    out.log_increments.reserve(policy.max_modes + 1);
    for (int j = 0; j <= policy.max_modes; ++j) {
        const double ej = at(eta, j);
        const double epj = at(eta_prev, j);
        complexd term, factor;
        if (j == 0) {
            const double d = ej - epj;
            if (form == StringForm::physical) {
                term = iu * mu * d * d / (2.0 * hbar * t);
                factor = std::sqrt(mu / (2.0 * pi * hbar) / (iu * t));
            } else {
                term = iu * pi * d * d / (Omega * t);
                factor = 1.0 / (iu * Omega * t);
            }
        } else {
            const double wt = Omega * j * pi * t / length_L;
            const double s = std::sin(wt);
            if (near_caustic(s, wt, policy.caustic_tol))
                throw numeric_error(errc::caustic, "string mode degenerates where sin = 0", j);
            const double c = std::cos(wt);
            const double quad = c * (ej * ej + epj * epj) - 2.0 * ej * epj;
            if (form == StringForm::physical) {
                term = iu * (mu * Omega * j * pi * quad / (2.0 * hbar * length_L * s));
                // per-mode factor exactly as the mode product states it
                factor = mu * Omega * j * pi / (2.0 * pi * hbar * length_L * s) / iu;
            } else {
                term = iu * (j * pi * pi * quad / (length_L * s));
                factor = (j * pi / length_L) / (iu * s);
            }
        }
        out.exponent += term;
        const complexd lg = std::log(factor);
        out.log_increments.push_back(lg);
        out.prefactor_log_modulus += lg.real();
        out.prefactor_phase = reduce_phase(out.prefactor_phase + lg.imag());
    }
    return out;
}

TruncatedProduct kg_kernel_exponent(const KGrid& grid, std::span<const complexd> eta,
                                    std::span<const complexd> eta_prev, double t,
                                    const KGParams& physics, double caustic_tol) {
    if (t <= 0.0) throw std::invalid_argument("kernel defined for t > 0");
    if (eta.size() != grid.nodes.size() || eta_prev.size() != grid.nodes.size())
        throw std::invalid_argument("field samples must live on the wavenumber grid");
    const complexd iu(0.0, 1.0);
    const double hbar = physics.hbar;
    TruncatedProduct out;
    out.log_increments.reserve(grid.nodes.size());
    for (size_t i = 0; i < grid.nodes.size(); ++i) {
        const double k = grid.nodes[i];
        if (k == 0.0)
            throw numeric_error(errc::singular_k, "kernel carries a 1/k factor",
                                static_cast<long>(i));
        const double ek = dispersion(k, physics);
        const double th = ek * t / hbar;
        const double s = std::sin(th);
        if (near_caustic(s, th, caustic_tol))
            throw numeric_error(errc::caustic, "field mode degenerates where sin = 0",
                                static_cast<long>(i));
        const double c = std::cos(th);
        const complexd quad =
            c * (std::norm(eta[i]) + std::norm(eta_prev[i])) - 2.0 * eta[i] * eta_prev[i];
        out.exponent += grid.weights[i] * (iu * ek / (hbar * hbar * k * s)) * quad;
        const complexd lg = 0.5 * std::log(ek / (iu * hbar * s));
        out.log_increments.push_back(lg);
        out.prefactor_log_modulus += lg.real();
        out.prefactor_phase = reduce_phase(out.prefactor_phase + lg.imag());
    }
    return out;
}

}  // namespace chainprop
