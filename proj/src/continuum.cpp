#include "chainprop/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chainprop {

ContinuumMap make_continuum_map(const ChainSpec& spec, double L) {
    if (L <= 0.0) throw std::invalid_argument("string length must be positive");
    if (spec.n_atoms < 2) throw std::invalid_argument("chain needs at least two atoms");
    ContinuumMap map;
    map.L = L;
    map.a = L / spec.n_atoms;
    map.mu = spec.mass / map.a;
    map.Omega = spec.omega * map.a;
    return map;
}

double lambda_continuum(int j, double L) {
    if (j < 0) throw std::invalid_argument("mode number must be non-negative");
    if (L <= 0.0) throw std::invalid_argument("string length must be positive");
    const double q = j * std::numbers::pi / L;
    return q * q;
}

double scaled_eigenvalue(int n_atoms, int j, double L) {
    if (n_atoms < 2) throw std::invalid_argument("chain needs at least two atoms");
    if (j < 0 || j >= n_atoms) throw std::invalid_argument("mode number out of range");
    if (L <= 0.0) throw std::invalid_argument("string length must be positive");
    const double s = std::sin(j * std::numbers::pi / (2.0 * (n_atoms - 1)));
    return 4.0 * n_atoms * n_atoms / (L * L) * s * s;
}

std::vector<ConvergenceRow> convergence_study(std::span<const int> n_values, int j_max, double L) {
    if (j_max < 1) throw std::invalid_argument("need at least one mode");
    std::vector<ConvergenceRow> rows;
    rows.reserve(n_values.size() * j_max);
    for (int n : n_values) {
        for (int j = 1; j <= j_max; ++j) {
            ConvergenceRow r;
            r.n_atoms = n;
            r.j = j;
            r.lambda_over_a2 = scaled_eigenvalue(n, j, L);
            r.capital_lambda = lambda_continuum(j, L);
            r.abs_error = std::abs(r.lambda_over_a2 - r.capital_lambda);
            rows.push_back(r);
        }
    }
    return rows;
}

double dispersion(double k, const KGParams& params) {
    if (params.c <= 0.0 || params.hbar <= 0.0 || params.mass_M < 0.0)
        throw std::invalid_argument("field parameters out of range");
    return std::hypot(params.hbar * params.c * k, params.mass_M * params.c * params.c);
}

double mode_function_limit(const SpectralDecomposition& spectrum, const ContinuumMap& map,
                           int j, double xi) {
    if (j < 0 || j >= spectrum.n) throw std::invalid_argument("mode number out of range");
    if (xi < 0.0 || xi > map.L) throw std::out_of_range("xi outside the string");
    int i = static_cast<int>(std::floor(xi / map.a));
    i = std::clamp(i, 0, spectrum.n - 1);
    return spectrum.mode(j, i) / std::sqrt(map.a);
}

std::vector<double> field_transform_pair(std::span<const double> samples, FieldDirection direction,
                                         const SpectralDecomposition& spectrum,
                                         const ContinuumMap& map) {
    const int n = spectrum.n;
    if (static_cast<int>(samples.size()) != n)
        throw std::invalid_argument("samples must have one entry per lattice site");
    std::vector<double> out(n, 0.0);
    const double root_a = std::sqrt(map.a);
    if (direction == FieldDirection::to_modes) {
        // eta_j = sum_i a * (O_ji/sqrt(a)) * phi_i
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += spectrum.mode(j, i) * samples[i];
            out[j] = root_a * acc;
        }
    } else {
        // phi_i = sum_j (O_ji/sqrt(a)) * eta_j
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += spectrum.mode(j, i) * samples[j];
            out[i] = acc / root_a;
        }
    }
    return out;
}

KGrid make_kgrid(double k_max, int n_points) {
    if (k_max <= 0.0) throw std::invalid_argument("k_max must be positive");
    if (n_points < 2 || n_points % 2 != 0)
        throw std::invalid_argument("need a positive even number of nodes");
    KGrid g;
    g.k_max = k_max;
    g.n_points = n_points;
    const double dk = 2.0 * k_max / n_points;
    g.nodes.resize(n_points);
    g.weights.assign(n_points, dk);
    for (int i = 0; i < n_points; ++i) g.nodes[i] = -k_max + (i + 0.5) * dk;
    return g;
}

}  // namespace chainprop
