#include "chainprop/quench.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "chainprop/continuum.hpp"

namespace chainprop {

namespace {
constexpr double pi = std::numbers::pi;
}

std::vector<double> project_source(const SourceProfile& source,
                                   const SpectralDecomposition& spectrum) {
    const int n = spectrum.n;
    if (source.kind == SourceProfile::Kind::wavenumber)
        throw std::invalid_argument(
            "wavenumber-space sources are already in normal coordinates");
    if (static_cast<int>(source.values.size()) != n)
        throw std::invalid_argument("source needs one value per site (or per cell center)");

    double scale = 1.0;
    if (source.kind == SourceProfile::Kind::position) {
        if (source.length_L <= 0.0)
            throw std::invalid_argument("sampled force density needs a positive domain length");
        // quadrature of the density against O_j(xi) = O(j,i)/sqrt(a): the cell
        // width a and the mode scaling combine into a single sqrt(a).
        scale = std::sqrt(source.length_L / n);
    }

    std::vector<double> projected(n, 0.0);
    for (int row = 0; row < n; ++row) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += spectrum.mode(row, i) * source.values[i];
        projected[row] = scale * acc;
    }
    return projected;
}

double displacement_discrete(const ModeOscillator& mode, double eps_mode, double t) {
    if (mode.is_free())
        throw numeric_error(errc::free_mode_unsupported,
                            "zero mode accelerates uniformly under a constant force; "
                            "no oscillatory displacement");
    if (t <= 0.0) return 0.0;
    const double w = mode.eff_frequency;
    const double s = std::sin(0.5 * w * t);
    return eps_mode * s * s / (mode.mass * w * w);
}

double displaced_density(const ModeOscillator& mode, double y, double t, double eps_mode) {
    const double a = displacement_discrete(mode, eps_mode, t);
    const double mw = mode.mass * mode.eff_frequency;
    const double u = y + a;
    return std::sqrt(mw / (pi * mode.hbar)) * std::exp(-(mw / mode.hbar) * u * u);
}

double quench_phase_rate(const ModeOscillator& mode, double eps_mode) {
    if (mode.is_free())
        throw numeric_error(errc::free_mode_unsupported, "zero mode has no restoring term");
    const double w = mode.eff_frequency;
    return eps_mode * eps_mode / (2.0 * mode.mass * w * w);
}

double displacement_string(int j, double f_j, double t, double L, double Omega, double mu) {
    if (j < 1) throw std::invalid_argument("string modes start at j = 1");
    if (L <= 0.0 || Omega <= 0.0 || mu <= 0.0)
        throw std::invalid_argument("parameters must be positive");
    if (t <= 0.0) return 0.0;
    const double s = std::sin(0.5 * Omega * t * j * pi / L);
    const double wavenum = j * pi / L;
    return f_j * s * s / (mu * Omega * Omega * wavenum * wavenum);
}

double displacement_kg(double k, double i_k, double t, const KGParams& params, bool massless) {
    if (t <= 0.0) return 0.0;
    if (massless) {
        if (k == 0.0)
            throw numeric_error(errc::singular_k, "massless displacement diverges at k = 0");
        const double s = std::sin(params.c * k * t);
        return i_k * s * s / (2.0 * params.c * params.c * k);
    }
    const double ek = dispersion(k, params);
    const double s = std::sin(0.5 * ek * t / params.hbar);
    return params.hbar * params.hbar * i_k * s * s / (2.0 * ek * ek);
}

double quench_number_density(double k, double i_k, double t, const KGParams& params) {
    if (t <= 0.0) return 0.0;
    const double ek = dispersion(k, params);
    const double s = std::sin(0.5 * ek * t / params.hbar);
    const double s2 = s * s;
    const double h = params.hbar;
    return h * h * h * i_k * i_k * s2 * s2 / (4.0 * ek * ek);
}

std::vector<double> quench_number_density_grid(std::span<const double> ks,
                                               std::span<const double> i_ks, double t,
                                               const KGParams& params) {
    if (ks.size() != i_ks.size())
        throw std::invalid_argument("one source amplitude per wavenumber");
    std::vector<double> nu(ks.size());
    for (size_t i = 0; i < ks.size(); ++i)
        nu[i] = quench_number_density(ks[i], i_ks[i], t, params);
    return nu;
}

std::vector<double> quench_number_density_grid_parallel(std::span<const double> ks,
                                                        std::span<const double> i_ks, double t,
                                                        const KGParams& params) {
    if (ks.size() != i_ks.size())
        throw std::invalid_argument("one source amplitude per wavenumber");
    std::vector<double> nu(ks.size());
    const long n = static_cast<long>(ks.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i)
        nu[i] = quench_number_density(ks[i], i_ks[i], t, params);
    return nu;
}

}  // namespace chainprop
