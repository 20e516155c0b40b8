// Test-only numerical oracles, kept independent of the closed-form moment
// path: moments are computed as (radial quadrature) x (angular quadrature in
// hyperspherical coordinates), with Gauss-Legendre panels built from scratch.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cubature/types.hpp"

namespace oracle {

struct GaussLegendre {
    std::vector<double> x, w; // on [-1, 1]
    explicit GaussLegendre(int n) {
        x.resize(n);
        w.resize(n);
        for (int i = 0; i < n; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
                }
                double dp = n * (t * p0 - p1) / (t * t - 1.0);
                double dt = p0 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
            }
            double dp = n * (t * p0 - p1) / (t * t - 1.0);
            x[i] = t;
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

inline double integrate(const std::function<double(double)>& f, double a, double b, int panels,
                        const GaussLegendre& gl) {
    double total = 0.0;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        double mid = lo + h / 2, half = h / 2;
        for (size_t i = 0; i < gl.x.size(); ++i) total += gl.w[i] * half * f(mid + half * gl.x[i]);
    }
    return total;
}

/// Integral of u1^a1 ... un^an over the unit sphere S^(n-1), n <= 4.
inline double angular_moment(const std::vector<int>& alpha) {
    static const GaussLegendre gl(48);
    const int n = static_cast<int>(alpha.size());
    auto ipow = [](double v, int e) {
        double r = 1.0;
        for (int i = 0; i < e; ++i) r *= v;
        return r;
    };
    if (n == 1) return ipow(1.0, alpha[0]) + ipow(-1.0, alpha[0]);
    if (n == 2) {
        const int m = 2048;
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
            double th = 2 * M_PI * i / m;
            s += ipow(std::cos(th), alpha[0]) * ipow(std::sin(th), alpha[1]);
        }
        return s * 2 * M_PI / m;
    }
    if (n == 3) {
        const int m = 512;
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            double th = 2 * M_PI * i / m;
            double ct = std::cos(th), st = std::sin(th);
            auto fphi = [&](double phi) {
                double sp = std::sin(phi), cp = std::cos(phi);
                return ipow(sp * ct, alpha[0]) * ipow(sp * st, alpha[1]) * ipow(cp, alpha[2]) * sp;
            };
            total += integrate(fphi, 0, M_PI, 4, gl) * 2 * M_PI / m;
        }
        return total;
    }
    if (n == 4) {
        const int m = 256;
        double total = 0.0;
        auto fpsi = [&](double psi) {
            double spsi = std::sin(psi), cpsi = std::cos(psi);
            auto fphi = [&](double phi) {
                double sp = std::sin(phi), cp = std::cos(phi);
                double s = 0.0;
                for (int i = 0; i < m; ++i) {
                    double th = 2 * M_PI * i / m;
                    s += ipow(cpsi, alpha[0]) * ipow(spsi * cp, alpha[1]) *
                         ipow(spsi * sp * std::cos(th), alpha[2]) *
                         ipow(spsi * sp * std::sin(th), alpha[3]);
                }
                return s * 2 * M_PI / m * sp;
            };
            return integrate(fphi, 0, M_PI, 4, gl) * spsi * spsi;
        };
        total = integrate(fpsi, 0, M_PI, 4, gl);
        return total;
    }
    throw std::invalid_argument("angular_moment: n <= 4 only");
}

/// Radial part int w(r) r^(s + n - 1) dr for the region's weight.
inline double radial_moment(cubature::Region region, int n, int s) {
    static const GaussLegendre gl(48);
    auto p = [&](double r) {
        double v = 1.0;
        for (int i = 0; i < s + n - 1; ++i) v *= r;
        return v;
    };
    switch (region) {
        case cubature::Region::Ball:
            return integrate([&](double r) { return p(r); }, 0, 1, 4, gl);
        case cubature::Region::ExpR2:
            return integrate([&](double r) { return std::exp(-r * r) * p(r); }, 0, 12, 24, gl);
        case cubature::Region::ExpR:
            return integrate([&](double r) { return std::exp(-r) * p(r); }, 0, 160, 80, gl);
        default:
            throw std::invalid_argument("radial_moment: unsupported region");
    }
}

/// Full monomial moment by radial x angular quadrature (n <= 4).
inline double moment(cubature::Region region, int n, const std::vector<int>& alpha) {
    int s = 0;
    for (int a : alpha) s += a;
    return radial_moment(region, n, s) * angular_moment(alpha);
}

} // namespace oracle
