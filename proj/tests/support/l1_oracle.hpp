// Test-only oracle: minimum-l1 extension solved as a real second-order-cone
// program by a log-barrier interior-point method. Completely independent of
// the library's operator-splitting solver; only usable at tiny sizes.
#pragma once

#include "expsum/common.hpp"
#include "expsum/recovery.hpp"

#include <cmath>
#include <vector>

namespace expsum::testing {

// dense Gaussian elimination with partial pivoting
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a,
                                       std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        const double d = a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double m = a[r][col] / d;
            if (m == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= m * a[col][c];
            rhs[r] -= m * rhs[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double acc = rhs[r];
        for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return x;
}

struct OracleResult {
    std::vector<cplx> z;
    double objective = 0.0;
};

// minimize sum_t s_t  s.t.  |z_t| <= s_t  and  dft(z)|_omega = observed
inline OracleResult l1_min_barrier(const MeasurementSet& meas, double gap_tol = 1e-10) {
    validate(meas);
    const int n_mod = meas.modulus;
    const auto nn = static_cast<std::size_t>(n_mod);
    const std::size_t rows = 2 * meas.omega.size();
    const std::size_t vars = 3 * nn;  // x, y, s

    // real-valued equality matrix M v = d
    std::vector<std::vector<double>> M(rows, std::vector<double>(vars, 0.0));
    std::vector<double> d(rows, 0.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_mod));
    for (std::size_t i = 0; i < meas.omega.size(); ++i) {
        const int w = meas.omega[i];
        for (std::size_t t = 0; t < nn; ++t) {
            const double th = 2.0 * kPi * static_cast<double>(t) * w / n_mod;
            M[2 * i][t] = std::cos(th) * scale;
            M[2 * i][nn + t] = std::sin(th) * scale;
            M[2 * i + 1][t] = -std::sin(th) * scale;
            M[2 * i + 1][nn + t] = std::cos(th) * scale;
        }
        d[2 * i] = meas.observed[i].real();
        d[2 * i + 1] = meas.observed[i].imag();
    }

    // strictly feasible start: minimal-l2 extension, s above |z|
    std::vector<double> v(vars, 0.0);
    {
        const Signal x0 = [&] {
            Spectrum s = Spectrum::zeros(n_mod);
            for (std::size_t i = 0; i < meas.omega.size(); ++i) {
                s.values[static_cast<std::size_t>(meas.omega[i])] = meas.observed[i];
            }
            return idft(s);
        }();
        for (std::size_t t = 0; t < nn; ++t) {
            v[t] = x0.values[t].real();
            v[nn + t] = x0.values[t].imag();
            v[2 * nn + t] = std::abs(x0.values[t]) + 1.0;
        }
    }

    auto barrier_val = [&](const std::vector<double>& u, double tau) {
        double f = 0.0;
        for (std::size_t t = 0; t < nn; ++t) {
            const double D = u[2 * nn + t] * u[2 * nn + t] - u[t] * u[t] - u[nn + t] * u[nn + t];
            if (D <= 0.0 || u[2 * nn + t] <= 0.0) return 1e300;
            f += tau * u[2 * nn + t] - std::log(D);
        }
        return f;
    };

    double tau = 1.0;
    const double barrier_order = 2.0 * static_cast<double>(nn);
    while (barrier_order / tau > gap_tol) {
        for (int newton = 0; newton < 60; ++newton) {
            // assemble KKT [H M^T; M 0]
            const std::size_t dim = vars + rows;
            std::vector<std::vector<double>> kkt(dim, std::vector<double>(dim, 0.0));
            std::vector<double> rhs(dim, 0.0);
            for (std::size_t t = 0; t < nn; ++t) {
                const double x = v[t], y = v[nn + t], s = v[2 * nn + t];
                const double D = s * s - x * x - y * y;
                const double D2 = D * D;
                kkt[t][t] = 2.0 / D + 4.0 * x * x / D2;
                kkt[nn + t][nn + t] = 2.0 / D + 4.0 * y * y / D2;
                kkt[2 * nn + t][2 * nn + t] = -2.0 / D + 4.0 * s * s / D2;
                kkt[t][nn + t] = kkt[nn + t][t] = 4.0 * x * y / D2;
                kkt[t][2 * nn + t] = kkt[2 * nn + t][t] = -4.0 * x * s / D2;
                kkt[nn + t][2 * nn + t] = kkt[2 * nn + t][nn + t] = -4.0 * y * s / D2;
                rhs[t] = -(2.0 * x / D);
                rhs[nn + t] = -(2.0 * y / D);
                rhs[2 * nn + t] = -(tau - 2.0 * s / D);
            }
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t c = 0; c < vars; ++c) {
                    kkt[vars + r][c] = M[r][c];
                    kkt[c][vars + r] = M[r][c];
                }
                double resid = d[r];
                for (std::size_t c = 0; c < vars; ++c) resid -= M[r][c] * v[c];
                rhs[vars + r] = resid;
            }
            const auto sol = solve_dense(std::move(kkt), std::move(rhs));

            double decrement = 0.0;
            for (std::size_t c = 0; c < vars; ++c) decrement += sol[c] * sol[c];
            if (std::sqrt(decrement) < 1e-11) break;

            const double f0 = barrier_val(v, tau);
            double step = 1.0;
            std::vector<double> trial(vars);
            for (int bt = 0; bt < 60; ++bt) {
                for (std::size_t c = 0; c < vars; ++c) trial[c] = v[c] + step * sol[c];
                if (barrier_val(trial, tau) < f0 + 1e-12) break;
                step *= 0.5;
            }
            v = trial;
        }
        tau *= 10.0;
    }

    OracleResult out;
    out.z.resize(nn);
    for (std::size_t t = 0; t < nn; ++t) {
        out.z[t] = cplx(v[t], v[nn + t]);
        out.objective += std::abs(out.z[t]);
    }
    return out;
}

}  // namespace expsum::testing
