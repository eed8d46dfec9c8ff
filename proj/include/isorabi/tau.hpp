#pragma once

// Truncated Painleve V tau-function expansion
//   tau~(t) = sum_n D_n(sigma) s^n t^{(sigma+n)^2 - sigma^2} B({theta_i}, sigma+n; t)
// (printed sum normalized by C(sigma) t^{sigma^2}), with exact term-wise first
// and second logarithmic t-derivatives of tau = t^kappa / tau~_printed.

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "isorabi/blocks.hpp"
#include "isorabi/constants.hpp"
#include "isorabi/errors.hpp"

namespace isorabi {

// Fixed branch: arg t = +pi on the negative real axis.
inline Complex log_branch(Complex t) {
    if (t == Complex{0.0, 0.0})
        throw std::domain_error("log_branch: t = 0");
    if (t.imag() == 0.0 && t.real() < 0.0)
        return Complex{std::log(-t.real()), std::numbers::pi};
    return std::log(t);
}

inline Complex pow_branch(Complex t, Complex exponent) {
    return std::exp(exponent * log_branch(t));
}

// s1 s2 = (2 cos pi sigma - 2 cos pi theta_inf) e^{-i pi theta_inf},
// inverting 2 cos pi sigma = 2 cos pi theta_inf + e^{i pi theta_inf} s1 s2.
inline Complex stokes_product(Complex theta_inf, Complex sigma) {
    const Complex pi = std::numbers::pi;
    return (2.0 * std::cos(pi * sigma) - 2.0 * std::cos(pi * theta_inf)) *
           std::exp(Complex{0.0, -1.0} * pi * theta_inf);
}

struct TauConfig {
    int n_window = 4;            // terms n in [-N, N]
    BlockTruncation trunc{10};   // block level cap
    double singular_tol = -1.0;  // < 0: default_singular_tol(sigma)
    double pole_tol = 1e-9;      // Gamma-chain pole detection
    double zero_tol = 1e-13;     // tau~ zero crossing, relative to term scale
};

// |t| beyond which the small-t expansion is not trusted. Advisory only.
inline constexpr double kConvergenceWindow = 0.5;

inline std::optional<std::string> convergence_warning(Complex t) {
    if (std::abs(t) > kConvergenceWindow)
        return "|t| = " + std::to_string(std::abs(t)) +
               " exceeds the trusted expansion window " +
               std::to_string(kConvergenceWindow);
    return std::nullopt;
}

class TauSeries {
public:
    TauSeries(ThetaTriple theta, Complex sigma, Complex s, TauConfig config = {})
        : theta_(theta), sigma_(sigma), s_(s), config_(config),
          kernel_(std::make_shared<Kernel>(theta, sigma, config)) {}

    const ThetaTriple& theta() const { return theta_; }
    Complex sigma() const { return sigma_; }
    Complex s() const { return s_; }
    int n_window() const { return config_.n_window; }
    const BlockTruncation& truncation() const { return config_.trunc; }

    // kappa = ((theta_0 - theta_t)^2 - theta_inf^2) / 4
    Complex kappa() const {
        const Complex d = theta_.theta_0 - theta_.theta_t;
        return (d * d - theta_.theta_inf * theta_.theta_inf) / 4.0;
    }

    // Same monodromy data, different expansion parameter; the kernel is shared.
    TauSeries with_s(Complex s_new) const {
        TauSeries copy(*this);
        copy.s_ = s_new;
        return copy;
    }

    Complex tau_tilde(Complex t) const { return evaluate(t).f; }

    // d/dt log tau (order 1) or d^2/dt^2 log tau (order 2), with
    // tau = t^kappa / tau~_printed and tau~_printed = C(sigma) t^{sigma^2} tau~.
    Complex dlog_tau(Complex t, int order) const {
        if (order != 1 && order != 2)
            throw std::invalid_argument("dlog_tau: order must be 1 or 2");
        const Evaluation ev = evaluate(t);
        if (std::abs(ev.f) < config_.zero_tol * ev.scale)
            throw zero_crossing_error(
                "dlog_tau: tau~ vanishes at this t (Malgrange divisor)");
        const Complex dlog1 = ev.df / ev.f;
        if (order == 1)
            return kappa() / t - sigma_ * sigma_ / t - dlog1;
        const Complex dlog2 = ev.d2f / ev.f - dlog1 * dlog1;
        return -kappa() / (t * t) + sigma_ * sigma_ / (t * t) - dlog2;
    }

private:
    struct Term {
        int n;
        Complex d_n;                     // structure-constant ratio
        Complex exponent;                // 2 n sigma + n^2
        std::vector<Complex> level_sums; // block level sums at sigma + n
    };

    // sigma-and-theta data shared across s-variations.
    struct Kernel {
        std::vector<Term> terms;

        Kernel(const ThetaTriple& theta, Complex sigma, const TauConfig& config) {
            const double singular_tol = config.singular_tol >= 0.0
                                            ? config.singular_tol
                                            : default_singular_tol(sigma);
            // half-integer sigma sits on the resonant lattice of the pairing
            // denominators
            const Complex two_sigma = 2.0 * sigma;
            if (std::abs(two_sigma.imag()) < singular_tol &&
                std::abs(two_sigma.real() - std::round(two_sigma.real())) <
                    singular_tol)
                throw resonant_parameter_error(
                    "TauSeries: sigma within singular tolerance of a half-integer");
            for (int n = -config.n_window; n <= config.n_window; ++n) {
                Term term;
                term.n = n;
                term.d_n = constant_ratio(theta, sigma, n, config.pole_tol);
                if (term.d_n == Complex{0.0, 0.0}) continue; // unsupported shift
                term.exponent = 2.0 * static_cast<double>(n) * sigma +
                                static_cast<double>(n) * static_cast<double>(n);
                term.level_sums = detail::level_sums(
                    theta, sigma + static_cast<double>(n), config.trunc.max_level,
                    detail::Pairing::nekrasov, singular_tol);
                terms.push_back(std::move(term));
            }
        }
    };

    struct Evaluation {
        Complex f, df, d2f;
        double scale; // sum of term magnitudes, for zero detection
    };

    Evaluation evaluate(Complex t) const {
        if (t == Complex{0.0, 0.0})
            throw std::domain_error("TauSeries: t = 0 is outside the domain");
        const Complex lt = log_branch(t);
        Complex f{}, g{}, h{};
        double scale = 0.0;
        for (const Term& term : kernel_->terms) {
            // P(t), P'(t), P''(t) for the block polynomial at sigma + n
            Complex p{}, dp{}, d2p{};
            const auto& sums = term.level_sums;
            for (int level = static_cast<int>(sums.size()) - 1; level >= 0; --level) {
                const Complex c = sums[static_cast<std::size_t>(level)];
                p = p * t + c;
                if (level >= 1) dp = dp * t + static_cast<double>(level) * c;
                if (level >= 2)
                    d2p = d2p * t +
                          static_cast<double>(level) * static_cast<double>(level - 1) * c;
            }
            const Complex weight =
                term.d_n * std::pow(s_, term.n) * std::exp(term.exponent * lt);
            const Complex e = term.exponent;
            f += weight * p;
            g += weight * (e / t * p + dp);
            h += weight * (e * (e - 1.0) / (t * t) * p + 2.0 * e / t * dp + d2p);
            scale += std::abs(weight) * std::abs(p);
        }
        // exponential prefactor e^{-theta_t t} of every block
        const Complex et = std::exp(-theta_.theta_t * t);
        const Complex tt = theta_.theta_t;
        return {et * f, et * (g - tt * f), et * (h - 2.0 * tt * g + tt * tt * f),
                std::abs(et) * scale};
    }

    ThetaTriple theta_;
    Complex sigma_;
    Complex s_;
    TauConfig config_;
    std::shared_ptr<const Kernel> kernel_;
};

} // namespace isorabi
