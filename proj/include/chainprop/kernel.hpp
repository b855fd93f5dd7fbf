#pragma once

#include <complex>
#include <span>
#include <vector>

#include "chainprop/chain.hpp"
#include "chainprop/continuum.hpp"
#include "chainprop/types.hpp"

namespace chainprop {

// Kernel values travel as modulus/phase with the log of the modulus kept
// alongside: a product over many modes underflows |K| long before log|K| does.
struct ComplexAmplitude {
    double modulus = 0.0;
    double phase = 0.0;  // reduced into (-pi, pi]
    double log_modulus = 0.0;

    complexd value() const { return std::polar(modulus, phase); }
};

struct TruncationPolicy {
    int max_modes = 64;
    double caustic_tol = 1e-9;
};

ComplexAmplitude mode_kernel(const ModeOscillator& mode, double y, double y_prev, double t,
                             double caustic_tol = 1e-9);

ComplexAmplitude chain_kernel(const ChainSpec& spec, const SpectralDecomposition& spectrum,
                              std::span<const double> x_final, std::span<const double> x_initial,
                              double t, double caustic_tol = 1e-9, double hbar = 1.0);

// Same contract and bit-identical result, mode factors evaluated in parallel.
ComplexAmplitude chain_kernel_parallel(const ChainSpec& spec, const SpectralDecomposition& spectrum,
                                       std::span<const double> x_final,
                                       std::span<const double> x_initial, double t,
                                       double caustic_tol = 1e-9, double hbar = 1.0);

enum class StringForm { physical, rescaled };

// A truncated mode sum and product: the exponent is the finite sum over the
// retained modes, the prefactor the finite product of the per-mode factors.
// The infinite product does not converge on its own, so the prefactor is kept
// as a running log-modulus/phase plus each factor's complex log.
struct TruncatedProduct {
    complexd exponent{0.0, 0.0};
    double prefactor_log_modulus = 0.0;
    double prefactor_phase = 0.0;
    std::vector<complexd> log_increments;
};

// Mode-sum kernel of the finite string. Fields are indexed by mode number from
// the zero mode up; entries past the end of a list count as zero. The zero
// mode enters through its small-j limit (a free particle).
TruncatedProduct string_kernel_exponent(const TruncationPolicy& policy, double length_L,
                                        double Omega, std::span<const double> eta,
                                        std::span<const double> eta_prev, double t, double mu,
                                        double hbar, StringForm form = StringForm::physical);

// Wavenumber-integral kernel of the scalar field, discretized on the half-offset
// grid. Evaluated exactly as the mode expansion states it, 1/k factor included.
TruncatedProduct kg_kernel_exponent(const KGrid& grid, std::span<const complexd> eta,
                                    std::span<const complexd> eta_prev, double t,
                                    const KGParams& physics, double caustic_tol = 1e-9);

}  // namespace chainprop
