#pragma once

#include <span>
#include <string>
#include <vector>

#include "chainprop/chain.hpp"
#include "chainprop/types.hpp"

namespace chainprop {

// A linear source switched on suddenly at t = 0.  Three ways to describe it:
// per-site forces, a sampled force density on [0, length_L] (one sample per
// cell center), or its wavenumber-space samples I(k).
struct SourceProfile {
    enum class Kind { site, position, wavenumber };
    Kind kind = Kind::site;
    std::vector<std::string> labels;  // site index, position, or wavenumber
    std::vector<double> values;
    double length_L = 0.0;  // domain length; required for Kind::position
};

// Rotate the source into normal coordinates.  Site forces go through the mode
// matrix directly; a sampled force density is integrated against the mode
// functions (cell width times 1/sqrt(a) mode scaling).  Wavenumber-space
// sources are already diagonal and are rejected here.
std::vector<double> project_source(const SourceProfile& source,
                                   const SpectralDecomposition& spectrum);

// Center displacement of one mode's Gaussian after the switch-on,
// eps_mode * sin^2(w t / 2) / (m w^2).  Zero for t <= 0.
double displacement_discrete(const ModeOscillator& mode, double eps_mode, double t);

// Probability density of the displaced vacuum at normal coordinate y: a
// normalized Gaussian of static ground-state width whose center rides at
// -displacement_discrete(mode, eps_mode, t).
double displaced_density(const ModeOscillator& mode, double y, double t, double eps_mode);

// Energy offset the source adds per mode, eps_mode^2 / (2 m w^2).  It enters
// the evolution only as an overall phase, so every density and expectation
// value is independent of it; kept so that tests can assert exactly that.
double quench_phase_rate(const ModeOscillator& mode, double eps_mode);

// String-mode displacement F_j * sin^2(Omega t j pi / 2L) / (mu Omega^2 (j pi / L)^2).
double displacement_string(int j, double f_j, double t, double L, double Omega, double mu);

// Scalar-field displacement at wavenumber k.  The massless branch reads
// I(k) sin^2(c k t) / (2 c^2 k); the massive branch reads
// hbar^2 I(k) sin^2(E_k t / 2 hbar) / (2 E_k^2).  These do not agree as
// M -> 0 — that mismatch is one of the discrepancies the verify command
// reports, so both branches stay exactly as written.
double displacement_kg(double k, double i_k, double t, const KGParams& params,
                       bool massless = false);

// Particle-number density produced by the quench,
// hbar^3 |I(k)|^2 sin^4(E_k t / 2 hbar) / (4 E_k^2).  Zero for t <= 0.
double quench_number_density(double k, double i_k, double t, const KGParams& params);

// quench_number_density over a whole wavenumber grid.  The parallel version
// distributes nodes across threads and returns bit-identical values.
std::vector<double> quench_number_density_grid(std::span<const double> ks,
                                               std::span<const double> i_ks, double t,
                                               const KGParams& params);
std::vector<double> quench_number_density_grid_parallel(std::span<const double> ks,
                                                        std::span<const double> i_ks, double t,
                                                        const KGParams& params);

}  // namespace chainprop
