#pragma once

#include <span>
#include <utility>
#include <vector>

#include "chainprop/chain.hpp"
#include "chainprop/types.hpp"

namespace chainprop {

// One-mode wavefunction sampled on a uniform grid.  Everything downstream
// (propagation, quadrature, measurement) works on immutable snapshots of
// this; norms are trapezoid integrals of |amp|^2.
struct GridWavefunction {
    double y_min = 0.0;
    double y_max = 0.0;
    int n_points = 0;
    std::vector<complexd> amp;

    double dy() const { return (y_max - y_min) / (n_points - 1); }
    double y(int i) const { return y_min + i * dy(); }
    double norm() const;  // trapezoid integral of |amp|^2
    void normalize();
};

// Normalized Gaussian exp(-(y-center)^2 / 4 sigma^2) on the given grid;
// sigma is the standard deviation of the position density.
GridWavefunction gaussian_state(double y_min, double y_max, int n_points, double sigma,
                                double center = 0.0);

// Same, with the grid chosen for the mode: symmetric about the origin, wide
// enough for the packet to breathe and swing (half_widths times the larger of
// sigma and the ground-state width, plus |center| for the swing).
GridWavefunction prepared_gaussian(const ModeOscillator& mode, double sigma, double center = 0.0,
                                   int n_points = 1024, double half_widths = 12.0);

// Hamiltonian m, w, constant linear force for t > 0, plus a constant energy
// offset that only contributes a global phase.
struct PropagationTask {
    double mass = 1.0;
    double eff_frequency = 0.0;
    double force = 0.0;
    double hbar = 1.0;
    double energy_offset = 0.0;
    double t_final = 0.0;
    int n_steps = 0;
};

// Default step count: 2000 per unit of accumulated phase w*t (2000 per unit
// time for a free mode), never below 100.
int default_steps(double eff_frequency, double t_final);

// Unitary grid propagation by symmetric kinetic/potential splitting with
// spectral kinetic steps: second order in the step size, norm drift at
// roundoff level.  The initial state must be negligible at the grid edges
// (below 1e-10); if more than 1e-6 of amplitude reaches an edge during the
// run the propagation aborts.
GridWavefunction propagate_grid(const GridWavefunction& psi0, const PropagationTask& task);

// Independent propagation route: apply the closed-form one-mode kernel as an
// integral operator by trapezoid quadrature.  O(n^2); the parallel version
// distributes output points across threads and returns bit-identical values.
GridWavefunction apply_kernel_quadrature(const ModeOscillator& mode, const GridWavefunction& psi0,
                                         double t);
GridWavefunction apply_kernel_quadrature_parallel(const ModeOscillator& mode,
                                                  const GridWavefunction& psi0, double t);

enum class Quantity { variance, center, energy, quanta };

// Trapezoid expectation values; the kinetic part of the energy uses the
// 3-point central second-difference stencil, with the boundary points
// contributing zero.  quanta = energy / (hbar w) - 1/2.
double measure(const GridWavefunction& psi, Quantity quantity, const ModeOscillator& mode);

// <conj(a) * b> by trapezoid (same grid required).
complexd overlap(const GridWavefunction& a, const GridWavefunction& b);

// L2 distance sqrt(integral |a - b|^2) on a shared grid.
double l2_distance(const GridWavefunction& a, const GridWavefunction& b);

// Classical driven oscillator m z'' = -m w^2 z + force, from rest at the
// origin, classic Runge-Kutta with fixed step.  Works for w = 0 too (uniform
// acceleration).
TimeSeries classical_driven_oscillator(const ModeOscillator& mode, double force, double t_final,
                                       int n_steps);

// Gauss-Hermite nodes and weights for integrals against exp(-u^2), by the
// symmetric-tridiagonal (Golub-Welsch) route.
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n);

// Composition integral K(y, z; t2) K(z, y_prev; t1) dz evaluated by rotating
// the z contour through the stationary point so the quadratic phase becomes
// exp(-u^2), then Gauss-Hermite quadrature.  The semigroup property says this
// equals the single kernel over t1 + t2.
complexd compose_mode_kernels_gh(const ModeOscillator& mode, double y, double y_prev, double t1,
                                 double t2, int n_nodes = 64);

}  // namespace chainprop
