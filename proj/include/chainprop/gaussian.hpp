#pragma once

#include <span>

#include "chainprop/chain.hpp"
#include "chainprop/types.hpp"

namespace chainprop {

// Which way to read the relativistic width relation: `consistent` uses sin^2
// like every other width in the family; `verbatim` takes the printed relation
// literally (plain sin, left side the squared width). The switch is echoed in
// all output metadata.
enum class KgReading { consistent, verbatim };

inline const char* to_string(KgReading r) {
    return r == KgReading::consistent ? "consistent" : "verbatim";
}

// Width of mode j at time t for a product Gaussian of common initial width
// sigma0 (sigma0 is the standard deviation of the position density).
double width_discrete(const ModeOscillator& mode, double sigma0, double t);

// Spreading of the free center-of-mass mode, taken as the zero-frequency limit
// of the harmonic width formula.
double width_free(double mass, double hbar, double sigma0, double t);

double width_string(int j, double s, double L, double Omega, double mu, double hbar, double t);

double width_kg(double k, const KGParams& params, double t,
                KgReading reading = KgReading::consistent);

// Squared spectral width as consumed by the number density: the square of the
// width under `consistent`, the printed value itself under `verbatim`.
double kg_width_squared(double k, const KGParams& params, double t,
                        KgReading reading = KgReading::consistent);

double density_discrete(std::span<const double> widths, std::span<const double> y);

// Average quanta of one mode from its instantaneous width; not a conserved
// quantity as written, which is exactly what the verification oracle probes.
double avg_quanta_discrete(const ModeOscillator& mode, double width);

double avg_quanta_string(int j, double width, double L, double Omega, double mu, double hbar);

// Quanta per unit wavenumber of the field at time t.
double number_density_kg(double k, const KGParams& params, double t,
                         KgReading reading = KgReading::consistent);

}  // namespace chainprop
