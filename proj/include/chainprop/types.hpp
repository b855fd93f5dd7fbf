#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chainprop {

using complexd = std::complex<double>;

// Parameters of the N-atom free-ends chain. mass_term is the gap scale Mc^2/hbar
// (units 1/time); zero for the massless chain.
struct ChainSpec {
    int n_atoms = 2;
    double mass = 1.0;
    double omega = 1.0;
    double mass_term = 0.0;
};

// Relativistic field parameters. sbar is the common initial spectral width of the
// wavepacket after the sqrt(mu*Omega/2hbar) field rescaling.
struct KGParams {
    double mass_M = 1.0;
    double c = 1.0;
    double hbar = 1.0;
    double mu = 1.0;
    double sbar = 1.0;
};

enum class errc {
    caustic,
    singular_k,
    evaluation_unstable,
    negative_radicand,
    boundary_leak,
    free_mode_unsupported,
    solver_failure,
};

inline const char* to_string(errc c) {
    switch (c) {
        case errc::caustic: return "caustic";
        case errc::singular_k: return "singular_k";
        case errc::evaluation_unstable: return "evaluation_unstable";
        case errc::negative_radicand: return "negative_radicand";
        case errc::boundary_leak: return "boundary_leak";
        case errc::free_mode_unsupported: return "free_mode_unsupported";
        case errc::solver_failure: return "solver_failure";
    }
    return "unknown";
}

// Numeric failure carrying the offending mode / grid-node index when there is one.
struct numeric_error : std::runtime_error {
    errc code;
    long index;
    numeric_error(errc c, const std::string& msg, long idx = -1)
        : std::runtime_error(msg), code(c), index(idx) {}
};

// A sampled quantity over time plus enough metadata to reproduce the run.
struct TimeSeries {
    std::string quantity;
    std::string label;
    std::vector<double> t;
    std::vector<double> value;
    std::vector<std::pair<std::string, std::string>> metadata;
};

}  // namespace chainprop
