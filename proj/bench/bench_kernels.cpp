// Timings for the serial kernels against their OpenMP twins.  The parallel
// versions promise bit-identical output, so alongside the speedup we print
// the max |difference|, which must be exactly zero.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "chainprop/chain.hpp"
#include "chainprop/continuum.hpp"
#include "chainprop/kernel.hpp"
#include "chainprop/oracle.hpp"
#include "chainprop/quench.hpp"

using namespace chainprop;

namespace {

template <typename F>
double time_ms(F&& f, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

double sink = 0.0;  // keeps the optimizer from discarding the timed work

void report(const char* name, double serial_ms, double parallel_ms, double max_diff) {
    std::printf("%-28s %10.3f ms %10.3f ms   x%5.2f   max|diff| %g\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms, max_diff);
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-28s %13s %13s %8s\n", "kernel", "serial", "parallel", "speedup");

    {
        ChainSpec spec;
        spec.n_atoms = 1024;
        const auto spectrum = exact_spectrum(spec);
        std::vector<double> xf(spec.n_atoms), xi(spec.n_atoms);
        for (int i = 0; i < spec.n_atoms; ++i) {
            xf[i] = 0.3 * std::sin(2.1 * i / spec.n_atoms);
            xi[i] = 0.2 * std::cos(1.3 * i / spec.n_atoms);
        }
        const double t = 0.4;
        ComplexAmplitude a, b;
        const double ms_s = time_ms([&] { a = chain_kernel(spec, spectrum, xf, xi, t); }, 20);
        const double ms_p =
            time_ms([&] { b = chain_kernel_parallel(spec, spectrum, xf, xi, t); }, 20);
        const double diff = std::max(std::abs(a.log_modulus - b.log_modulus),
                                     std::abs(a.phase - b.phase));
        sink += a.log_modulus + b.phase;
        report("chain_kernel (N=1024)", ms_s, ms_p, diff);
    }

    {
        ModeOscillator m;
        m.lambda = 1.0;
        m.eff_frequency = 1.0;
        const auto psi = prepared_gaussian(m, 0.9, 0.3, 2048);
        GridWavefunction a, b;
        const double ms_s = time_ms([&] { a = apply_kernel_quadrature(m, psi, 0.7); }, 5);
        const double ms_p =
            time_ms([&] { b = apply_kernel_quadrature_parallel(m, psi, 0.7); }, 5);
        double diff = 0.0;
        for (int i = 0; i < a.n_points; ++i)
            diff = std::max(diff, std::abs(a.amp[i] - b.amp[i]));
        sink += a.norm();
        report("mode quadrature (n=2048)", ms_s, ms_p, diff);
    }

    {
        KGParams params;
        const auto grid = make_kgrid(20.0, 1'000'000);
        std::vector<double> i_ks(grid.nodes.size());
        for (size_t i = 0; i < i_ks.size(); ++i)
            i_ks[i] = std::exp(-grid.nodes[i] * grid.nodes[i] / 8.0);
        std::vector<double> a, b;
        const double ms_s =
            time_ms([&] { a = quench_number_density_grid(grid.nodes, i_ks, 1.3, params); }, 10);
        const double ms_p = time_ms(
            [&] { b = quench_number_density_grid_parallel(grid.nodes, i_ks, 1.3, params); }, 10);
        double diff = 0.0;
        for (size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
        sink += a[a.size() / 2];
        report("quench yield (1e6 nodes)", ms_s, ms_p, diff);
    }

    std::printf("(checksum %g)\n", sink);
    return 0;
}
