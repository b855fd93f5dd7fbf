#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "chainprop/kernel.hpp"

using namespace chainprop;

namespace {
constexpr double pi = std::numbers::pi;

ModeOscillator free_mode() {
    ModeOscillator m;
    m.lambda = 0.0;
    m.eff_frequency = 0.0;
    return m;
}

ModeOscillator harmonic(double w) {
    ModeOscillator m;
    m.lambda = 1.0;
    m.eff_frequency = w;
    return m;
}
}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("free-particle factor") {
    // coincident endpoints: modulus sqrt(m / 2 pi hbar t), phase -pi/4
    const auto k = mode_kernel(free_mode(), 0.3, 0.3, 1.0);
    CHECK(k.modulus == doctest::Approx(0.3989422804014327).epsilon(1e-13));
    CHECK(k.phase == doctest::Approx(-pi / 4.0).epsilon(1e-13));
    CHECK(k.log_modulus == doctest::Approx(std::log(k.modulus)).epsilon(1e-13));

    // quadratic phase m (y - y')^2 / 2 hbar t on top of the -pi/4
    const auto k2 = mode_kernel(free_mode(), 1.0, 0.0, 1.0);
    CHECK(k2.phase == doctest::Approx(-pi / 4.0 + 0.5).epsilon(1e-13));
    CHECK(k2.modulus == doctest::Approx(k.modulus).epsilon(1e-13));
}

TEST_CASE("harmonic factor at a quarter period") {
    // w t = pi/2: sin = 1, cos = 0, so the exponent is -i m w y y'
    const auto k = mode_kernel(harmonic(1.0), 1.0, 1.0, pi / 2.0);
    CHECK(k.modulus == doctest::Approx(std::sqrt(1.0 / (2.0 * pi))).epsilon(1e-13));
    CHECK(k.phase == doctest::Approx(-pi / 4.0 - 1.0).epsilon(1e-13));
}

TEST_CASE("phase stays in (-pi, pi]") {
    const auto m = harmonic(1.3);
    for (int i = 1; i <= 40; ++i) {
        const double t = 0.11 * i;
        if (std::abs(std::sin(1.3 * t)) < 1e-6) continue;
        const auto k = mode_kernel(m, 0.8, -0.4, t);
        CHECK(k.phase > -pi);
        CHECK(k.phase <= pi);
    }
}

TEST_CASE("caustic detection") {
    CHECK_THROWS_AS(mode_kernel(harmonic(1.0), 0.0, 0.0, pi), numeric_error);
    try {
        mode_kernel(harmonic(1.0), 0.0, 0.0, pi);
    } catch (const numeric_error& e) {
        CHECK(e.code == errc::caustic);
    }
    // the guard is relative to max(1, |w t|)
    CHECK_THROWS_AS(mode_kernel(harmonic(1.0), 0.0, 0.0, pi - 1e-12), numeric_error);
    CHECK_NOTHROW(mode_kernel(harmonic(1.0), 0.0, 0.0, pi - 1e-3));
}

TEST_CASE("two-atom chain kernel at the origin") {
    ChainSpec spec;
    spec.n_atoms = 2;
    const auto spectrum = exact_spectrum(spec);
    const std::vector<double> x{0.0, 0.0};
    const double t = 0.4;
    const auto k = chain_kernel(spec, spectrum, x, x, t);

    // independent arithmetic: free factor times the sqrt(2)-frequency factor
    const double w = std::sqrt(2.0);
    const double mod_free = std::sqrt(1.0 / (2.0 * pi * t));
    const double mod_harm = std::sqrt(w / (2.0 * pi * std::sin(w * t)));
    CHECK(k.modulus == doctest::Approx(mod_free * mod_harm).epsilon(1e-12));
    CHECK(k.phase == doctest::Approx(-pi / 2.0).epsilon(1e-12));
}

TEST_CASE("kernel is symmetric in its endpoints") {
    ChainSpec spec;
    spec.n_atoms = 5;
    const auto spectrum = exact_spectrum(spec);
    std::vector<double> a(5), b(5);
    for (int i = 0; i < 5; ++i) {
        a[i] = std::sin(1.0 + i);
        b[i] = std::cos(2.0 + 0.7 * i);
    }
    const auto kab = chain_kernel(spec, spectrum, a, b, 0.37);
    const auto kba = chain_kernel(spec, spectrum, b, a, 0.37);
    // the quadratic form is symmetric under swapping endpoints, and the
    // floating-point expression commutes operand for operand: exact equality
    CHECK(kab.modulus == kba.modulus);
    CHECK(kab.phase == kba.phase);
    CHECK(kab.log_modulus == kba.log_modulus);
}

TEST_CASE("chain caustic reports the offending mode") {
    ChainSpec spec;
    spec.n_atoms = 3;
    const auto spectrum = exact_spectrum(spec);
    const std::vector<double> x{0.1, 0.0, -0.1};
    // lambda_1 = 1, so mode 1 hits its caustic at t = pi
    try {
        chain_kernel(spec, spectrum, x, x, pi);
        FAIL("expected a caustic");
    } catch (const numeric_error& e) {
        CHECK(e.code == errc::caustic);
        CHECK(e.index == 1);
    }
}

TEST_CASE("string exponent at a quarter period") {
    TruncationPolicy policy;
    policy.max_modes = 1;
    const std::vector<double> eta{0.0, 1.0};
    const std::vector<double> eta_prev{0.0, 0.0};
    // Omega t j pi / L = pi/2 and eta' = 0 kill both the cosine and the cross
    // term, so the whole exponent vanishes
    const auto p = string_kernel_exponent(policy, pi, 1.0, eta, eta_prev, pi / 2.0, 1.0, 1.0);
    CHECK(std::abs(p.exponent) < 1e-14);
    CHECK(p.log_increments.size() == 2);  // zero mode plus j = 1
}

TEST_CASE("modes beyond the data contribute nothing to the exponent") {
    TruncationPolicy narrow, wide;
    narrow.max_modes = 2;
    wide.max_modes = 8;
    const std::vector<double> eta{0.2, 0.5, -0.3};
    const std::vector<double> eta_prev{0.0, 0.1, 0.4};
    const auto a = string_kernel_exponent(narrow, 1.7, 0.9, eta, eta_prev, 0.23, 1.3, 1.0);
    const auto b = string_kernel_exponent(wide, 1.7, 0.9, eta, eta_prev, 0.23, 1.3, 1.0);
    CHECK(std::abs(a.exponent - b.exponent) < 1e-14);
    // ... but they do extend the prefactor product
    CHECK(b.log_increments.size() == 9);
    double log_mod = 0.0;
    for (const auto& inc : b.log_increments) log_mod += inc.real();
    CHECK(b.prefactor_log_modulus == doctest::Approx(log_mod).epsilon(1e-12));
}

TEST_CASE("string term matches the one-mode kernel") {
    // a single excited string mode is an oscillator of mass mu and frequency
    // Omega j pi / L; the exponent must equal log[K(y, y') / K(0, 0)]
    const int j = 2;
    const double L = 1.7, Omega = 0.9, mu = 1.3, t = 0.37;
    std::vector<double> eta(j + 1, 0.0), eta_prev(j + 1, 0.0), zero(j + 1, 0.0);
    eta[j] = 0.8;
    eta_prev[j] = -0.4;

    TruncationPolicy policy;
    policy.max_modes = j;
    const auto p = string_kernel_exponent(policy, L, Omega, eta, eta_prev, t, mu, 1.0);

    ModeOscillator m;
    m.lambda = 1.0;
    m.eff_frequency = Omega * j * pi / L;
    m.mass = mu;
    const complexd ratio =
        mode_kernel(m, eta[j], eta_prev[j], t).value() / mode_kernel(m, 0.0, 0.0, t).value();
    CHECK(std::abs(std::exp(p.exponent) - ratio) < 1e-12);
}

TEST_CASE("physical and rescaled string forms are proportional") {
    // term-by-term the two forms differ by the constant mu Omega / (2 hbar pi)
    const double L = 2.3, Omega = 1.4, mu = 0.8, hbar = 1.0, t = 0.31;
    std::vector<double> eta{0.0, 0.6, -0.2};
    std::vector<double> eta_prev{0.0, 0.1, 0.5};
    std::vector<double> zero(3, 0.0);
    TruncationPolicy policy;
    policy.max_modes = 2;
    // subtract the j = 0 free term by zeroing the zero-mode amplitudes
    eta[0] = eta_prev[0] = 0.0;
    const auto phys =
        string_kernel_exponent(policy, L, Omega, eta, eta_prev, t, mu, hbar, StringForm::physical);
    const auto resc =
        string_kernel_exponent(policy, L, Omega, eta, eta_prev, t, mu, hbar, StringForm::rescaled);
    const double factor = mu * Omega / (2.0 * hbar * pi);
    CHECK(std::abs(phys.exponent - factor * resc.exponent) < 1e-13);
}

TEST_CASE("string caustic carries the mode number") {
    TruncationPolicy policy;
    policy.max_modes = 3;
    const std::vector<double> eta{0.0, 1.0, 0.0, 0.0};
    try {
        string_kernel_exponent(policy, pi, 1.0, eta, eta, pi, 1.0, 1.0);
        FAIL("expected a caustic");
    } catch (const numeric_error& e) {
        CHECK(e.code == errc::caustic);
        CHECK(e.index == 1);  // Omega t j pi / L = pi first for j = 1
    }
}

TEST_CASE("field exponent on a single node") {
    KGrid grid;
    grid.k_max = 1.0;
    grid.n_points = 1;
    grid.nodes = {0.5};
    grid.weights = {1.0};
    KGParams params;  // M = c = hbar = mu = sbar = 1
    const double ek = std::hypot(0.5, 1.0);
    const double t = pi / (2.0 * ek);  // theta = pi/2
    const std::vector<complexd> eta{complexd(1.0, 0.0)};
    const auto p = kg_kernel_exponent(grid, eta, eta, t, params);
    // cos theta = 0, sin theta = 1: exponent = -2 i E |eta|^2 dk / (hbar^2 k)
    CHECK(std::abs(p.exponent.real()) < 1e-12);
    CHECK(p.exponent.imag() == doctest::Approx(-2.0 * ek / 0.5).epsilon(1e-12));
}

TEST_CASE("field exponent rejects k = 0 and flags caustic nodes") {
    KGrid grid;
    grid.k_max = 1.0;
    grid.n_points = 2;
    grid.nodes = {0.0, 0.5};
    grid.weights = {0.5, 0.5};
    KGParams params;
    const std::vector<complexd> eta{complexd(1.0, 0.0), complexd(1.0, 0.0)};
    try {
        kg_kernel_exponent(grid, eta, eta, 0.3, params);
        FAIL("expected singular node");
    } catch (const numeric_error& e) {
        CHECK(e.code == errc::singular_k);
        CHECK(e.index == 0);
    }

    grid.nodes = {0.5, 0.7};
    const double ek = std::hypot(0.5, 1.0);
    try {
        kg_kernel_exponent(grid, eta, eta, pi / ek, params);  // theta = pi at node 0
        FAIL("expected a caustic");
    } catch (const numeric_error& e) {
        CHECK(e.code == errc::caustic);
        CHECK(e.index == 0);
    }
}

TEST_CASE("field exponent is grid-converged at second order or better") {
    KGParams params;
    const double t = 0.4, k_max = 4.0;

    // Smooth, rapidly decaying profiles: the half-offset midpoint sum is
    // spectrally accurate (the 1/k pole cancels pairwise between +-k), so
    // halving the spacing moves the exponent only at roundoff level.
    auto smooth = [&](int n) {
        const auto grid = make_kgrid(k_max, n);
        std::vector<complexd> eta(n), eta_prev(n);
        for (int i = 0; i < n; ++i) {
            const double k = grid.nodes[i];
            // deliberately asymmetric: an even/odd pair would cancel between
            // +k and -k and hide discretization effects entirely
            eta[i] = std::exp(-(k - 0.3) * (k - 0.3));
            eta_prev[i] = 0.8 * std::exp(-(k + 0.1) * (k + 0.1) / 0.5);
        }
        return kg_kernel_exponent(grid, eta, eta_prev, t, params).exponent;
    };
    CHECK(std::abs(smooth(64) - smooth(1024)) < 1e-12);

    // Profiles with a kink defeat the spectral accuracy and expose the rule's
    // underlying order: errors shrink ~4x per halving (Richardson vs a fine
    // reference; the ratio wobbles with where the kink lands between nodes).
    auto kinked = [&](int n) {
        const auto grid = make_kgrid(k_max, n);
        std::vector<complexd> eta(n), eta_prev(n);
        for (int i = 0; i < n; ++i) {
            const double k = grid.nodes[i];
            eta[i] = std::exp(-std::abs(k - 0.3));
            eta_prev[i] = 0.8 * std::exp(-std::abs(k + 0.1) / 0.7);
        }
        return kg_kernel_exponent(grid, eta, eta_prev, t, params).exponent;
    };
    const complexd ref = kinked(65536);
    const double e32 = std::abs(kinked(32) - ref);
    const double e64 = std::abs(kinked(64) - ref);
    const double e128 = std::abs(kinked(128) - ref);
    CHECK(e32 / e64 > 2.5);
    CHECK(e32 / e64 < 6.0);
    CHECK(e64 / e128 > 2.5);
    CHECK(e64 / e128 < 6.0);
}

TEST_CASE("truncated products keep their bookkeeping consistent") {
    TruncationPolicy policy;
    policy.max_modes = 5;
    std::vector<double> eta{0.1, 0.4, -0.2, 0.3, 0.0, 0.2};
    std::vector<double> eta_prev{0.0, 0.2, 0.1, -0.1, 0.3, 0.0};
    const auto p = string_kernel_exponent(policy, 1.9, 1.1, eta, eta_prev, 0.27, 1.0, 1.0);
    double log_mod = 0.0;
    for (const auto& inc : p.log_increments) log_mod += inc.real();
    CHECK(p.prefactor_log_modulus == doctest::Approx(log_mod).epsilon(1e-12));
    CHECK(p.prefactor_phase > -pi);
    CHECK(p.prefactor_phase <= pi);
}

}  // TEST_SUITE
