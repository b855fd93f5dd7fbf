#include "chainprop/chain.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chainprop {

double CouplingMatrix::entry(int i, int j) const {
    if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("matrix index");
    if (i == j) return diag[i];
    if (std::abs(i - j) == 1) return off[std::min(i, j)];
    return 0.0;
}

CouplingMatrix build_coupling_matrix(const ChainSpec& spec) {
    if (spec.n_atoms < 2) throw std::invalid_argument("chain needs at least two atoms");
    if (spec.mass <= 0.0 || spec.omega <= 0.0 || spec.mass_term < 0.0)
        throw std::invalid_argument("chain parameters out of range");
    CouplingMatrix v;
    v.n = spec.n_atoms;
    v.diag.assign(v.n, 2.0);
    v.diag.front() = 1.0;
    v.diag.back() = 1.0;
    v.off.assign(v.n - 1, -1.0);
    return v;
}

CharPolys char_polys_recursive(int n, double lambda) {
    if (n < 2) throw std::invalid_argument("determinant recursion starts at n = 2");
    double phi = lambda * lambda - 2.0 * lambda;
    double chi = lambda * lambda - 3.0 * lambda + 1.0;
    for (int m = 3; m <= n; ++m) {
        const double phi_next = phi - lambda * chi;
        const double chi_next = phi + (1.0 - lambda) * chi;
        phi = phi_next;
        chi = chi_next;
    }
    return {phi, chi};
}

CharPolys char_polys_closed(int n, complexd lambda, double epsilon) {
    if (n < 2) throw std::invalid_argument("determinant recursion starts at n = 2");
    if (std::abs(lambda * (lambda - 4.0)) < epsilon * epsilon)
        throw numeric_error(errc::evaluation_unstable,
                            "closed form degenerates where the step-matrix eigenvalues collide");
    const complexd z = lambda + complexd(0.0, epsilon);
    const complexd a = 0.5 * (z + std::sqrt(z * (z - 4.0)));
    // diagonalize the one-step matrix [[1, -z], [1, 1-z]]: eigenvalues 1-a and
    // 1-z/a, mixing matrix rows (1, 1) and (a/z, 1/a), determinant z - a^2
    const complexd det = z - a * a;
    const complexd e1 = std::pow(1.0 - a, n - 2);
    const complexd e2 = std::pow(1.0 - z / a, n - 2);
    const complexd phi2 = z * z - 2.0 * z;
    const complexd chi2 = z * z - 3.0 * z + 1.0;
    const complexd u1 = z * phi2 - a * z * chi2;
    const complexd u2 = -a * a * phi2 + a * z * chi2;
    const complexd phi = (e1 * u1 + e2 * u2) / det;
    const complexd chi = ((a / z) * e1 * u1 + (1.0 / a) * e2 * u2) / det;
    return {phi.real(), chi.real()};
}

double secular_residual(int n, double alpha) {
    if (n < 2) throw std::invalid_argument("secular condition needs n >= 2");
    const double half = 0.5 * alpha;
    const double lambda = 4.0 * std::cos(half) * std::cos(half);
    const double phi2 = lambda * lambda - 2.0 * lambda;
    const double chi2 = lambda * lambda - 3.0 * lambda + 1.0;
    return (phi2 - 2.0 * chi2) * std::sin((n - 2) * alpha) * std::cos(half) -
           phi2 * std::cos((n - 2) * alpha) * std::sin(half);
}

std::vector<double> asymptotic_eigenvalues(const ChainSpec& spec) {
    if (spec.n_atoms < 2) throw std::invalid_argument("chain needs at least two atoms");
    std::vector<double> lam(spec.n_atoms);
    for (int n = 0; n < spec.n_atoms; ++n) {
        const double s = std::sin(n * std::numbers::pi / (2.0 * (spec.n_atoms - 1)));
        lam[n] = 4.0 * s * s;
    }
    return lam;
}

SpectralDecomposition exact_spectrum(const ChainSpec& spec) {
    const CouplingMatrix v = build_coupling_matrix(spec);
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(v.diag.data(), v.n);
    Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(v.off.data(), v.n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw numeric_error(errc::solver_failure, "tridiagonal eigensolver did not converge");

    SpectralDecomposition out;
    out.n = v.n;
    out.eigenvalues.resize(v.n);
    out.mode_matrix.assign(static_cast<size_t>(v.n) * v.n, 0.0);
    for (int j = 0; j < v.n; ++j) {
        double lam = solver.eigenvalues()[j];
        if (std::abs(lam) <= 1e-12) lam = 0.0;  // zero mode comes back as -1e-16-ish
        out.eigenvalues[j] = lam;
        // sign convention: first component of noticeable size positive, so the
        // orthogonal matrix is reproducible run to run
        double flip = 1.0;
        for (int i = 0; i < v.n; ++i) {
            const double x = solver.eigenvectors()(i, j);
            if (std::abs(x) > 1e-12) {
                flip = (x < 0.0) ? -1.0 : 1.0;
                break;
            }
        }
        for (int i = 0; i < v.n; ++i)
            out.mode_matrix[static_cast<size_t>(j) * v.n + i] = flip * solver.eigenvectors()(i, j);
    }

    // the chain spectrum is simple, but guard against a sloppy near-degenerate
    // return: re-orthogonalize rows only if some pair drifted
    double worst = 0.0;
    for (int p = 0; p < v.n && worst <= 1e-10; ++p)
        for (int q = p + 1; q < v.n; ++q) {
            double dot = 0.0;
            for (int i = 0; i < v.n; ++i) dot += out.mode(p, i) * out.mode(q, i);
            worst = std::max(worst, std::abs(dot));
            if (worst > 1e-10) break;
        }
    if (worst > 1e-10) {
        for (int p = 0; p < v.n; ++p) {
            for (int q = 0; q < p; ++q) {
                double dot = 0.0;
                for (int i = 0; i < v.n; ++i) dot += out.mode(p, i) * out.mode(q, i);
                for (int i = 0; i < v.n; ++i)
                    out.mode_matrix[static_cast<size_t>(p) * v.n + i] -= dot * out.mode(q, i);
            }
            double nrm = 0.0;
            for (int i = 0; i < v.n; ++i) nrm += out.mode(p, i) * out.mode(p, i);
            nrm = std::sqrt(nrm);
            for (int i = 0; i < v.n; ++i) out.mode_matrix[static_cast<size_t>(p) * v.n + i] /= nrm;
        }
    }
    return out;
}

std::vector<ModeOscillator> mode_oscillators(const ChainSpec& spec,
                                             const SpectralDecomposition& spectrum,
                                             double hbar) {
    if (spectrum.n != spec.n_atoms)
        throw std::invalid_argument("spectrum does not belong to this chain");
    if (hbar <= 0.0) throw std::invalid_argument("hbar must be positive");
    std::vector<ModeOscillator> modes;
    modes.reserve(spectrum.n);
    for (double lam : spectrum.eigenvalues) {
        ModeOscillator m;
        m.lambda = lam;
        m.mass = spec.mass;
        m.hbar = hbar;
        // omega_j^2 lambda = omega^2 lambda + mass_term^2 in one expression; the
        // lambda -> 0 limit lands on the bare gap instead of 0/0
        m.eff_frequency = std::sqrt(spec.omega * spec.omega * lam + spec.mass_term * spec.mass_term);
        modes.push_back(m);
    }
    return modes;
}

}  // namespace chainprop
