#pragma once

#include <span>
#include <vector>

#include "chainprop/chain.hpp"
#include "chainprop/types.hpp"

namespace chainprop {

// Scaling dictionary between the discrete chain and the string/elastic rod:
// a = L/N, mu = m/a, Omega = omega*a (the wave speed).
struct ContinuumMap {
    double a = 0.0;
    double L = 0.0;
    double mu = 0.0;
    double Omega = 0.0;

    double young() const { return mu * Omega * Omega; }
};

ContinuumMap make_continuum_map(const ChainSpec& spec, double L);

// Limiting scaled eigenvalue (j*pi/L)^2.
double lambda_continuum(int j, double L);

// Pre-limit value of lambda_j/a^2 along the closed small-angle spectrum; its
// error against lambda_continuum decays like 1/N.
double scaled_eigenvalue(int n_atoms, int j, double L);

struct ConvergenceRow {
    int n_atoms;
    int j;
    double lambda_over_a2;
    double capital_lambda;
    double abs_error;
};

std::vector<ConvergenceRow> convergence_study(std::span<const int> n_values, int j_max, double L);

double dispersion(double k, const KGParams& params);

// Discrete eigenvector at the lattice cell nearest xi, scaled by 1/sqrt(a).
// Sites sit at cell centers xi_i = (i + 1/2) a.
double mode_function_limit(const SpectralDecomposition& spectrum, const ContinuumMap& map,
                           int j, double xi);

enum class FieldDirection { to_modes, to_field };

// Orthogonal transform between lattice field samples and mode amplitudes with
// the 1/sqrt(a) mode-function scaling; round trip is the identity.
std::vector<double> field_transform_pair(std::span<const double> samples, FieldDirection direction,
                                         const SpectralDecomposition& spectrum,
                                         const ContinuumMap& map);

// Half-offset uniform wavenumber grid on (-k_max, k_max): no node at k = 0,
// midpoint weights summing to 2 k_max.
struct KGrid {
    double k_max = 0.0;
    int n_points = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

KGrid make_kgrid(double k_max, int n_points);

}  // namespace chainprop
