#include "chainprop/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "chainprop/continuum.hpp"

namespace chainprop {

namespace {
constexpr double pi = std::numbers::pi;

double checked_radicand(double radicand) {
    if (radicand < 0.0)
        throw numeric_error(errc::negative_radicand, "width radicand went negative");
    return radicand;
}
}  // namespace

double width_discrete(const ModeOscillator& mode, double sigma0, double t) {
    if (mode.is_free())
        throw numeric_error(errc::free_mode_unsupported,
                            "zero mode spreads freely; use width_free");
    if (sigma0 <= 0.0) throw std::invalid_argument("initial width must be positive");
    const double w = mode.eff_frequency;
    const double m = mode.mass;
    const double hbar = mode.hbar;
    const double bracket =
        hbar * hbar / (2.0 * m * m * sigma0 * sigma0 * sigma0 * sigma0 * w * w) - 1.0;
    const double s = std::sin(w * t);
    return sigma0 * std::sqrt(checked_radicand(1.0 + bracket * s * s));
}

double width_free(double mass, double hbar, double sigma0, double t) {
    if (mass <= 0.0 || hbar <= 0.0 || sigma0 <= 0.0)
        throw std::invalid_argument("parameters must be positive");
    const double s4 = sigma0 * sigma0 * sigma0 * sigma0;
    return sigma0 * std::sqrt(1.0 + hbar * hbar * t * t / (2.0 * mass * mass * s4));
}

double width_string(int j, double s, double L, double Omega, double mu, double hbar, double t) {
    if (j < 1) throw std::invalid_argument("string modes start at j = 1");
    if (s <= 0.0 || L <= 0.0 || Omega <= 0.0 || mu <= 0.0 || hbar <= 0.0)
        throw std::invalid_argument("parameters must be positive");
    const double s4 = s * s * s * s;
    const double bracket =
        hbar * hbar * L * L / (2.0 * Omega * Omega * mu * mu * s4 * j * j * pi * pi) - 1.0;
    const double sn = std::sin(Omega * t * j * pi / L);
    return s * std::sqrt(checked_radicand(1.0 + bracket * sn * sn));
}

double width_kg(double k, const KGParams& params, double t, KgReading reading) {
    if (params.sbar <= 0.0) throw std::invalid_argument("initial spectral width must be positive");
    const double ek = dispersion(k, params);
    const double sbar = params.sbar;
    const double s4 = sbar * sbar * sbar * sbar;
    const double bracket =
        2.0 * params.hbar * params.hbar * params.c * params.c / (ek * ek * s4) - 1.0;
    const double sn = std::sin(ek * t / params.hbar);
    const double factor = (reading == KgReading::consistent) ? sn * sn : sn;
    return sbar * std::sqrt(checked_radicand(1.0 + bracket * factor));
}

double kg_width_squared(double k, const KGParams& params, double t, KgReading reading) {
    const double v = width_kg(k, params, t, reading);
    return (reading == KgReading::consistent) ? v * v : v;
}

double density_discrete(std::span<const double> widths, std::span<const double> y) {
    if (widths.size() != y.size())
        throw std::invalid_argument("one width per coordinate");
    double log_density = 0.0;
    for (size_t i = 0; i < widths.size(); ++i) {
        const double s2 = widths[i] * widths[i];
        if (s2 <= 0.0) throw std::invalid_argument("widths must be positive");
        log_density += -0.5 * std::log(2.0 * pi * s2) - y[i] * y[i] / (2.0 * s2);
    }
    return std::exp(log_density);
}

double avg_quanta_discrete(const ModeOscillator& mode, double width) {
    if (mode.is_free())
        throw numeric_error(errc::free_mode_unsupported, "quanta need a confining mode");
    if (width <= 0.0) throw std::invalid_argument("width must be positive");
    const double x = mode.mass * mode.eff_frequency * width * width / mode.hbar;
    return 0.5 * x + 0.75 / x - 0.5;
}

double avg_quanta_string(int j, double width, double L, double Omega, double mu, double hbar) {
    if (j < 1) throw std::invalid_argument("string modes start at j = 1");
    if (width <= 0.0 || L <= 0.0 || Omega <= 0.0 || mu <= 0.0 || hbar <= 0.0)
        throw std::invalid_argument("parameters must be positive");
    const double x = mu * Omega * width * width * (j * pi / L) / hbar;
    return 0.5 * x + 0.75 / x - 0.5;
}

double number_density_kg(double k, const KGParams& params, double t, KgReading reading) {
    const double ek = dispersion(k, params);
    const double s2 = kg_width_squared(k, params, t, reading);
    return (ek * s2 / params.hbar + 3.0 * params.hbar / (8.0 * ek) / s2 - 0.5) / pi;
}

}  // namespace chainprop
