#pragma once

// Barnes-G structure-constant ratios D_n = C({theta_i}, sigma+n) / C({theta_i}, sigma)
// reduced to Gamma chains via G(1+z) = Gamma(z) G(z), plus the complex
// log-Gamma primitive they need.

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>

#include "isorabi/blocks.hpp"
#include "isorabi/errors.hpp"

namespace isorabi {

using Complex = std::complex<double>;

namespace detail {

// Lanczos approximation, g = 7. Good to ~1e-14 relative over the tested range.
inline Complex lanczos_log_gamma(Complex z) {
    static constexpr double kCoeff[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    constexpr double g = 7.0;
    const double half_log_two_pi = 0.91893853320467274178;

    if (z.real() < 0.5) {
        // reflection: log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
        const Complex pi_z = std::numbers::pi * z;
        return std::log(std::numbers::pi / std::sin(pi_z)) -
               lanczos_log_gamma(1.0 - z);
    }
    const Complex zm1 = z - 1.0;
    Complex acc = kCoeff[0];
    for (int k = 1; k < 9; ++k) acc += kCoeff[k] / (zm1 + static_cast<double>(k));
    const Complex base = zm1 + g + 0.5;
    return half_log_two_pi + (zm1 + 0.5) * std::log(base) - base + std::log(acc);
}

inline bool is_nonpositive_integer(Complex z, double tol) {
    const double nearest = std::round(z.real());
    return std::abs(z.imag()) < tol && nearest <= 0.5 &&
           std::abs(z.real() - nearest) < tol;
}

// Sum of log Gamma values with pole bookkeeping. A pole hit in a factor is
// recorded in `poles` (sign says which side of the ratio it came from); the
// value contribution of that factor is omitted.
struct GammaChain {
    Complex log_sum{0.0, 0.0};
    int poles = 0;

    void add(Complex z, int sign, double pole_tol) {
        if (is_nonpositive_integer(z, pole_tol)) {
            poles += sign;
            return;
        }
        if (sign > 0)
            log_sum += lanczos_log_gamma(z);
        else
            log_sum -= lanczos_log_gamma(z);
    }
};

// log[ G(1+z+m) / G(1+z) ] as a Gamma chain.
inline void accumulate_g_ratio(GammaChain& chain, Complex z, int m, int sign,
                               double pole_tol) {
    if (m > 0) {
        for (int k = 0; k < m; ++k)
            chain.add(1.0 + z + static_cast<double>(k), sign, pole_tol);
    } else if (m < 0) {
        for (int k = 1; k <= -m; ++k)
            chain.add(1.0 + z - static_cast<double>(k), -sign, pole_tol);
    }
}

} // namespace detail

// Principal-branch-continued log Gamma(z); throws on a (near-)pole.
inline Complex log_gamma(Complex z) {
    if (detail::is_nonpositive_integer(z, 1e-13 * (1.0 + std::abs(z))))
        throw pole_error("log_gamma: pole at non-positive integer");
    return detail::lanczos_log_gamma(z);
}

// C({theta_i}, sigma+n) / C({theta_i}, sigma), with
//   C = prod_{eps=+-} G(1+theta_inf+eps*sigma) G(1+theta_t+theta_0+eps*sigma)
//       G(1+theta_t-theta_0+eps*sigma) / G(1+2*eps*sigma).
// Returns 0 when the shift chain lands on Barnes-G zeros (quantized locus);
// throws resonant_parameter_error when it diverges instead.
inline Complex constant_ratio(const ThetaTriple& theta, Complex sigma, int n,
                              double pole_tol = 1e-9) {
    if (n == 0) return Complex{1.0, 0.0};
    detail::GammaChain chain;
    const Complex a_values[3] = {theta.theta_inf, theta.theta_t + theta.theta_0,
                                 theta.theta_t - theta.theta_0};
    for (const Complex& a : a_values) {
        detail::accumulate_g_ratio(chain, a + sigma, n, +1, pole_tol);
        detail::accumulate_g_ratio(chain, a - sigma, -n, +1, pole_tol);
    }
    detail::accumulate_g_ratio(chain, 2.0 * sigma, 2 * n, -1, pole_tol);
    detail::accumulate_g_ratio(chain, -2.0 * sigma, -2 * n, -1, pole_tol);

    if (chain.poles > 0)
        throw resonant_parameter_error(
            "constant_ratio: Gamma pole in the shift chain (n = " +
            std::to_string(n) + ")");
    if (chain.poles < 0) return Complex{0.0, 0.0};
    return std::exp(chain.log_sum);
}

// Ratios D_n for n in [-N, N].
struct ConstantRatioTable {
    int n_window = 0;
    std::map<int, Complex> values;

    ConstantRatioTable() = default;
    ConstantRatioTable(const ThetaTriple& theta, Complex sigma, int N,
                       double pole_tol = 1e-9)
        : n_window(N) {
        for (int n = -N; n <= N; ++n)
            values[n] = constant_ratio(theta, sigma, n, pole_tol);
    }
};

} // namespace isorabi
