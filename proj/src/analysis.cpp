#include "chainprop/analysis.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace chainprop {

namespace {

// vertex of the parabola through (x0-h, ym), (x0, y0), (x0+h, yp)
double parabola_vertex(double x0, double h, double ym, double y0, double yp) {
    const double denom = ym - 2.0 * y0 + yp;
    if (denom == 0.0) return x0;
    return x0 - 0.5 * h * (yp - ym) / denom;
}

}  // namespace

double dominant_period(std::span<const double> t, std::span<const double> v) {
    const size_t n = v.size();
    if (t.size() != n) throw std::invalid_argument("time and value lengths differ");
    if (n < 8) throw std::invalid_argument("series too short");
    const double dt = t[1] - t[0];
    if (dt <= 0.0) throw std::invalid_argument("time samples must increase");

    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    std::vector<double> u(n);
    for (size_t i = 0; i < n; ++i) u[i] = v[i] - mean;

    // unbiased autocorrelation; the 1/(n-l) keeps long lags comparable
    const size_t l_max = n - 2;
    std::vector<double> ac(l_max + 1, 0.0);
    for (size_t l = 0; l <= l_max; ++l) {
        double acc = 0.0;
        for (size_t i = 0; i + l < n; ++i) acc += u[i] * u[i + l];
        ac[l] = acc / static_cast<double>(n - l);
    }

    size_t first_neg = 0;
    for (size_t l = 1; l <= l_max; ++l)
        if (ac[l] < 0.0) {
            first_neg = l;
            break;
        }
    if (first_neg == 0) throw std::runtime_error("series shows no oscillation");

    size_t peak = first_neg;
    for (size_t l = first_neg + 1; l <= l_max; ++l)
        if (ac[l] > ac[peak]) peak = l;
    // a real period shows up as a positive autocorrelation lobe; a drifting
    // trend goes negative and stays there
    if (ac[peak] <= 0.0) throw std::runtime_error("series shows no oscillation");
    if (peak == l_max || peak == 0) throw std::runtime_error("autocorrelation peak at the boundary");

    const double lag = parabola_vertex(static_cast<double>(peak), 1.0, ac[peak - 1], ac[peak],
                                       ac[peak + 1]);
    return lag * dt;
}

double zero_touch_period(std::span<const double> t, std::span<const double> v, double threshold) {
    const size_t n = v.size();
    if (t.size() != n) throw std::invalid_argument("time and value lengths differ");
    if (n < 3) throw std::invalid_argument("series too short");

    std::vector<double> touches;
    for (size_t i = 1; i + 1 < n; ++i) {
        if (v[i] <= v[i - 1] && v[i] <= v[i + 1] && v[i] < threshold) {
            touches.push_back(parabola_vertex(t[i], t[i] - t[i - 1], v[i - 1], v[i], v[i + 1]));
            // skip the plateau partner of a tied minimum
            if (i + 1 < n && v[i + 1] == v[i]) ++i;
        }
    }
    if (touches.size() < 2) throw std::runtime_error("fewer than two zero touches found");
    return (touches.back() - touches.front()) / static_cast<double>(touches.size() - 1);
}

double correlation(std::span<const double> a, std::span<const double> b) {
    const size_t n = a.size();
    if (b.size() != n) throw std::invalid_argument("length mismatch");
    if (n < 2) throw std::invalid_argument("series too short");
    double ma = 0.0, mb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) throw std::invalid_argument("constant series has no correlation");
    return sab / std::sqrt(saa * sbb);
}

}  // namespace chainprop
