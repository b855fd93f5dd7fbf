#pragma once

#include <vector>

#include "chainprop/types.hpp"

namespace chainprop {

// Free-ends coupling matrix: diagonal (1, 2, ..., 2, 1), off-diagonal -1.
// Every row sums to zero, so lambda_0 = 0 always (center of mass).
struct CouplingMatrix {
    int n = 0;
    std::vector<double> diag;
    std::vector<double> off;  // n-1 entries

    double entry(int i, int j) const;
};

struct SpectralDecomposition {
    int n = 0;
    std::vector<double> eigenvalues;  // ascending, lambda_0 = 0
    std::vector<double> mode_matrix;  // row-major; row j = eigenvector of lambda_j

    double mode(int row, int col) const {
        return mode_matrix[static_cast<size_t>(row) * n + col];
    }
};

// One decoupled normal mode. eff_frequency = omega_j * sqrt(lambda_j) stays
// finite for the zero mode of a gapped chain (-> mass_term); it vanishes only
// for the genuinely free center-of-mass mode.
struct ModeOscillator {
    double lambda = 0.0;
    double eff_frequency = 0.0;
    double mass = 1.0;
    double hbar = 1.0;

    bool is_free() const { return eff_frequency == 0.0; }
};

struct CharPolys {
    double phi;  // det(V_n - lambda I), free ends
    double chi;  // det(M_n - lambda I), companion determinant with one clamped end
};

CouplingMatrix build_coupling_matrix(const ChainSpec& spec);

CharPolys char_polys_recursive(int n, double lambda);

// Closed form of the two-term recursion, evaluated at lambda + i*epsilon to step
// around the branch points of a = (lambda + sqrt(lambda(lambda-4)))/2.
CharPolys char_polys_closed(int n, complexd lambda, double epsilon = 1e-10);

// Left-hand side of the secular condition in the angle variable
// lambda = 4 cos^2(alpha/2); vanishes at eigenvalue angles.
double secular_residual(int n, double alpha);

std::vector<double> asymptotic_eigenvalues(const ChainSpec& spec);

SpectralDecomposition exact_spectrum(const ChainSpec& spec);

std::vector<ModeOscillator> mode_oscillators(const ChainSpec& spec,
                                             const SpectralDecomposition& spectrum,
                                             double hbar = 1.0);

}  // namespace chainprop
