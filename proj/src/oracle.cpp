#include "chainprop/oracle.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "chainprop/kernel.hpp"

namespace chainprop {

namespace {

constexpr double pi = std::numbers::pi;

// fftw plan creation/destruction is not thread safe; execution is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// In-place forward/backward transform pair on an fftw-owned buffer.
struct FftPair {
    int n;
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    explicit FftPair(int n_points) : n(n_points) {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        buf = fftw_alloc_complex(static_cast<size_t>(n));
        fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftPair() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (buf) fftw_free(buf);
    }
    FftPair(const FftPair&) = delete;
    FftPair& operator=(const FftPair&) = delete;

    complexd* data() { return reinterpret_cast<complexd*>(buf); }
    void forward() { fftw_execute(fwd); }
    void backward() {  // includes the 1/n normalization
        fftw_execute(bwd);
        complexd* z = data();
        const double inv = 1.0 / n;
        for (int i = 0; i < n; ++i) z[i] *= inv;
    }
};

std::vector<double> trapezoid_weights(const GridWavefunction& psi) {
    std::vector<double> w(psi.n_points, psi.dy());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

void check_same_grid(const GridWavefunction& a, const GridWavefunction& b) {
    if (a.n_points != b.n_points || a.y_min != b.y_min || a.y_max != b.y_max)
        throw std::invalid_argument("wavefunctions live on different grids");
}

}  // namespace

double GridWavefunction::norm() const {
    double acc = 0.0;
    for (int i = 0; i < n_points; ++i) {
        double w = (i == 0 || i == n_points - 1) ? 0.5 : 1.0;
        acc += w * std::norm(amp[i]);
    }
    return acc * dy();
}

void GridWavefunction::normalize() {
    const double s = std::sqrt(norm());
    if (s <= 0.0) throw std::invalid_argument("cannot normalize the zero function");
    for (auto& a : amp) a /= s;
}

GridWavefunction gaussian_state(double y_min, double y_max, int n_points, double sigma,
                                double center) {
    if (n_points < 2) throw std::invalid_argument("need at least two grid points");
    if (y_max <= y_min) throw std::invalid_argument("empty grid interval");
    if (sigma <= 0.0) throw std::invalid_argument("width must be positive");
    GridWavefunction psi{y_min, y_max, n_points, std::vector<complexd>(n_points)};
    for (int i = 0; i < n_points; ++i) {
        const double u = psi.y(i) - center;
        psi.amp[i] = std::exp(-u * u / (4.0 * sigma * sigma));
    }
    psi.normalize();
    return psi;
}

GridWavefunction prepared_gaussian(const ModeOscillator& mode, double sigma, double center,
                                   int n_points, double half_widths) {
    if (sigma <= 0.0) throw std::invalid_argument("width must be positive");
    double scale = sigma;
    if (!mode.is_free()) {
        const double ground = std::sqrt(mode.hbar / (2.0 * mode.mass * mode.eff_frequency));
        scale = std::max(scale, ground);
    }
    const double half = half_widths * scale + std::abs(center);
    return gaussian_state(-half, half, n_points, sigma, center);
}

int default_steps(double eff_frequency, double t_final) {
    const double rate = std::max(std::abs(eff_frequency), 1.0);
    const double steps = std::ceil(2000.0 * rate * std::abs(t_final));
    return std::max(100, static_cast<int>(steps));
}

GridWavefunction propagate_grid(const GridWavefunction& psi0, const PropagationTask& task) {
    if (task.n_steps < 100) throw std::invalid_argument("need at least 100 time steps");
    const int n = psi0.n_points;
    if (n < 2 || static_cast<int>(psi0.amp.size()) != n)
        throw std::invalid_argument("malformed grid wavefunction");
    if (std::abs(psi0.amp.front()) > 1e-10 || std::abs(psi0.amp.back()) > 1e-10)
        throw std::invalid_argument("initial state is not negligible at the grid edges");

    const double dt = task.t_final / task.n_steps;
    const double dy = psi0.dy();
    const double box = n * dy;  // periodic length seen by the transform

    // half-step kinetic phases exp(-i hbar k^2 dt / 4m) on transform ordering
    std::vector<complexd> kin_half(n), kin_full(n);
    for (int j = 0; j < n; ++j) {
        const int jj = (j <= n / 2) ? j : j - n;
        const double k = 2.0 * pi * jj / box;
        const double phase = -task.hbar * k * k * dt / (4.0 * task.mass);
        kin_half[j] = std::polar(1.0, phase);
        kin_full[j] = std::polar(1.0, 2.0 * phase);
    }
    std::vector<complexd> pot(n);
    const double w = task.eff_frequency;
    for (int i = 0; i < n; ++i) {
        const double yi = psi0.y(i);
        const double v = 0.5 * task.mass * w * w * yi * yi - task.force * yi + task.energy_offset;
        pot[i] = std::polar(1.0, -v * dt / task.hbar);
    }

    FftPair fft(n);
    complexd* z = fft.data();
    std::copy(psi0.amp.begin(), psi0.amp.end(), z);

    auto kinetic = [&](const std::vector<complexd>& factors) {
        fft.forward();
        for (int j = 0; j < n; ++j) z[j] *= factors[j];
        fft.backward();
    };

    // symmetric splitting with interior kinetic steps fused pairwise
    kinetic(kin_half);
    for (int step = 0; step < task.n_steps; ++step) {
        for (int i = 0; i < n; ++i) z[i] *= pot[i];
        if (std::abs(z[0]) > 1e-6 || std::abs(z[n - 1]) > 1e-6)
            throw numeric_error(errc::boundary_leak, "wavepacket reached the grid edge", step);
        kinetic(step + 1 < task.n_steps ? kin_full : kin_half);
    }

    GridWavefunction out = psi0;
    std::copy(z, z + n, out.amp.begin());
    return out;
}

namespace {

GridWavefunction quadrature_impl(const ModeOscillator& mode, const GridWavefunction& psi0,
                                 double t, bool parallel) {
    const int n = psi0.n_points;
    if (n < 2 || static_cast<int>(psi0.amp.size()) != n)
        throw std::invalid_argument("malformed grid wavefunction");
    const auto w = trapezoid_weights(psi0);
    GridWavefunction out = psi0;

    // rows are independent; the inner sum stays serial in both variants so
    // the parallel result is bit-identical to the serial one
    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n; ++i) {
        try {
            const double yi = psi0.y(i);
            complexd acc = 0.0;
            for (int j = 0; j < n; ++j) {
                const auto k = mode_kernel(mode, yi, psi0.y(j), t);
                acc += w[j] * k.value() * psi0.amp[j];
            }
            out.amp[i] = acc;
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace

GridWavefunction apply_kernel_quadrature(const ModeOscillator& mode, const GridWavefunction& psi0,
                                         double t) {
    return quadrature_impl(mode, psi0, t, false);
}

GridWavefunction apply_kernel_quadrature_parallel(const ModeOscillator& mode,
                                                  const GridWavefunction& psi0, double t) {
    return quadrature_impl(mode, psi0, t, true);
}

double measure(const GridWavefunction& psi, Quantity quantity, const ModeOscillator& mode) {
    const int n = psi.n_points;
    const double dy = psi.dy();
    auto trap = [&](auto f) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double wt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            acc += wt * f(i);
        }
        return acc * dy;
    };

    switch (quantity) {
        case Quantity::center:
            return trap([&](int i) { return psi.y(i) * std::norm(psi.amp[i]); });
        case Quantity::variance: {
            const double c = trap([&](int i) { return psi.y(i) * std::norm(psi.amp[i]); });
            const double m2 = trap([&](int i) {
                const double u = psi.y(i);
                return u * u * std::norm(psi.amp[i]);
            });
            return m2 - c * c;
        }
        case Quantity::energy: {
            const double m = mode.mass;
            const double w = mode.eff_frequency;
            const double hbar = mode.hbar;
            const double kin = trap([&](int i) {
                if (i == 0 || i == n - 1) return 0.0;  // edges carry no amplitude
                const complexd second =
                    (psi.amp[i + 1] - 2.0 * psi.amp[i] + psi.amp[i - 1]) / (dy * dy);
                return std::real(std::conj(psi.amp[i]) * (-hbar * hbar / (2.0 * m)) * second);
            });
            const double potential = trap([&](int i) {
                const double u = psi.y(i);
                return 0.5 * m * w * w * u * u * std::norm(psi.amp[i]);
            });
            return kin + potential;
        }
        case Quantity::quanta: {
            if (mode.is_free())
                throw numeric_error(errc::free_mode_unsupported,
                                    "quanta need a confining mode");
            const double e = measure(psi, Quantity::energy, mode);
            return e / (mode.hbar * mode.eff_frequency) - 0.5;
        }
    }
    throw std::logic_error("unreachable");
}

complexd overlap(const GridWavefunction& a, const GridWavefunction& b) {
    check_same_grid(a, b);
    complexd acc = 0.0;
    for (int i = 0; i < a.n_points; ++i) {
        const double wt = (i == 0 || i == a.n_points - 1) ? 0.5 : 1.0;
        acc += wt * std::conj(a.amp[i]) * b.amp[i];
    }
    return acc * a.dy();
}

double l2_distance(const GridWavefunction& a, const GridWavefunction& b) {
    check_same_grid(a, b);
    double acc = 0.0;
    for (int i = 0; i < a.n_points; ++i) {
        const double wt = (i == 0 || i == a.n_points - 1) ? 0.5 : 1.0;
        acc += wt * std::norm(a.amp[i] - b.amp[i]);
    }
    return std::sqrt(acc * a.dy());
}

TimeSeries classical_driven_oscillator(const ModeOscillator& mode, double force, double t_final,
                                       int n_steps) {
    if (n_steps < 1) throw std::invalid_argument("need at least one step");
    const double m = mode.mass;
    const double w = mode.eff_frequency;
    const double h = t_final / n_steps;

    auto accel = [&](double z) { return -w * w * z + force / m; };

    TimeSeries series;
    series.quantity = "displacement";
    series.label = "classical";
    series.t.reserve(n_steps + 1);
    series.value.reserve(n_steps + 1);

    double z = 0.0, v = 0.0;
    series.t.push_back(0.0);
    series.value.push_back(z);
    for (int s = 0; s < n_steps; ++s) {
        const double k1z = v, k1v = accel(z);
        const double k2z = v + 0.5 * h * k1v, k2v = accel(z + 0.5 * h * k1z);
        const double k3z = v + 0.5 * h * k2v, k3v = accel(z + 0.5 * h * k2z);
        const double k4z = v + h * k3v, k4v = accel(z + h * k3z);
        z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        series.t.push_back((s + 1) * h);
        series.value.push_back(z);
    }
    return series;
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("need at least one node");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(std::max(n - 1, 1));
    for (int j = 1; j < n; ++j) sub[j - 1] = std::sqrt(0.5 * j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw numeric_error(errc::solver_failure, "quadrature eigenproblem failed");
    std::vector<double> nodes(n), weights(n);
    const double sqrt_pi = std::sqrt(pi);
    for (int i = 0; i < n; ++i) {
        nodes[i] = solver.eigenvalues()[i];
        const double v0 = solver.eigenvectors()(0, i);
        weights[i] = sqrt_pi * v0 * v0;
    }
    return {nodes, weights};
}

complexd compose_mode_kernels_gh(const ModeOscillator& mode, double y, double y_prev, double t1,
                                 double t2, int n_nodes) {
    // exponent coefficients of each factor: c (y^2 + z^2) cos - 2 c y z, with
    // c = m w / (2 hbar sin w t) for a bound mode and c = m / (2 hbar t),
    // cos = 1 for a free one
    auto coeffs = [&](double t) -> std::pair<double, double> {
        if (mode.is_free()) return {mode.mass / (2.0 * mode.hbar * t), 1.0};
        const double wt = mode.eff_frequency * t;
        return {mode.mass * mode.eff_frequency / (2.0 * mode.hbar * std::sin(wt)), std::cos(wt)};
    };
    const auto [c1, cos1] = coeffs(t1);
    const auto [c2, cos2] = coeffs(t2);

    // prefactors equal the kernels at y = y' = 0 (vanishing exponent)
    const complexd pref =
        mode_kernel(mode, 0.0, 0.0, t1).value() * mode_kernel(mode, 0.0, 0.0, t2).value();

    const double a = c1 * cos1 + c2 * cos2;  // quadratic phase coefficient in z
    if (std::abs(a) < 1e-12)
        throw numeric_error(errc::caustic, "composed kernel is at a focal time");
    const double b = -2.0 * (c2 * y + c1 * y_prev);
    const double z0 = -b / (2.0 * a);  // stationary point

    const double s = (a > 0.0) ? 1.0 : -1.0;
    const complexd rot = std::polar(1.0, s * pi / 4.0);
    const complexd jac = rot / std::sqrt(std::abs(a));

    auto exponent = [&](complexd z) {
        return complexd{0.0, 1.0} *
               (c2 * (cos2 * (y * y + z * z) - 2.0 * y * z) +
                c1 * (cos1 * (z * z + y_prev * y_prev) - 2.0 * z * y_prev));
    };

    const auto [nodes, weights] = gauss_hermite(n_nodes);
    complexd acc = 0.0;
    for (int i = 0; i < n_nodes; ++i) {
        const complexd z = z0 + jac * nodes[i];
        // the Gauss-Hermite weight already carries exp(-u^2); put it back
        acc += weights[i] * std::exp(exponent(z) + nodes[i] * nodes[i]);
    }
    return pref * jac * acc;
}

}  // namespace chainprop
