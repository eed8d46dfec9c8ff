#pragma once

// Quantized Rabi spectrum via the tau-function initial conditions
//   d/dt  log tau |_{t=-4g^2} = (E+g^2)/2 + Delta^2/(4g^2)
//   d2/dt2 log tau |_{t=-4g^2} = Delta^2/(16 g^4)
// imposed on the quantization ladder sigma_n = 2(E + g^2 + n), solved by a
// damped Newton iteration on the complex pair (E, s).
//
// The tau expansion itself is evaluated in the block normalization, whose
// exponent parameters are half the physical monodromy exponents: the series
// is built at theta_0 = theta_t = (E+g^2)/2 and sigma = E+g^2+n. In that
// normalization the monodromy eigenvalues are e^{2 pi i theta} and
// Tr(M_t M_0) = 2 cos 2 pi sigma, which is the same physical ladder.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "isorabi/fuchsia.hpp"
#include "isorabi/oracle.hpp"
#include "isorabi/rabi_params.hpp"
#include "isorabi/tau.hpp"

namespace isorabi {

// theta_0 = theta_t = E + g^2, theta_inf = 0, sigma = 2(E + g^2 + n).
inline MonodromyData monodromy_from_rabi(const RabiParams& p, int n) {
    MonodromyData data;
    data.theta_0 = p.theta();
    data.theta_t = p.theta();
    data.theta_inf = Complex{0.0, 0.0};
    data.sigma = 2.0 * (p.theta() + static_cast<double>(n));
    return data;
}

// Right-hand sides of the two initial conditions at t = -4g^2.
inline std::pair<Complex, Complex> residual_targets(const RabiParams& p) {
    const double g2 = p.g * p.g;
    const Complex r1 = p.theta() / 2.0 + p.delta * p.delta / (4.0 * g2);
    const Complex r2 = p.delta * p.delta / (16.0 * g2 * g2);
    return {r1, r2};
}

// Series for the Rabi monodromy class at quantization label n: block-side
// parameters are half the physical exponents.
inline TauSeries rabi_tau_series(const RabiParams& p, int n, Complex s,
                                 const TauConfig& config = {}) {
    const Complex half_theta = p.theta() / 2.0;
    const Complex sigma_hat = p.theta() + static_cast<double>(n);
    return TauSeries(ThetaTriple{half_theta, half_theta, Complex{0.0, 0.0}},
                     sigma_hat, s, config);
}

// (r1, r2) at the physical point t = -4g^2.
inline std::pair<Complex, Complex> residuals(const RabiParams& p, int n,
                                             Complex s,
                                             const TauConfig& config = {}) {
    const TauSeries series = rabi_tau_series(p, n, s, config);
    const Complex t{p.t(), 0.0};
    const auto [target1, target2] = residual_targets(p);
    return {series.dlog_tau(t, 1) - target1, series.dlog_tau(t, 2) - target2};
}

struct SpectralResult {
    int n = 0;               // quantization label of the representative used
    double energy = 0.0;
    double energy_imag = 0.0; // diagnostic; converged roots have |Im E| tiny
    Complex s{};
    double residual_norm = 0.0;
    double connection_abs = -1.0; // |connection_offdiag| at this root, if probed
    int n_window = 0;
    int max_level = 0;
    bool converged = false;
    std::string message;

    Complex sigma(double g) const {
        return 2.0 * (energy + g * g + static_cast<double>(n));
    }
};

struct SolverOptions {
    TauConfig tau{};
    int max_iterations = 40;
    double tolerance = 1e-9;      // on ||(r1, r2)||
    double fd_step = 1e-7;        // finite-difference scale in (E, s)
    double im_energy_tol = 1e-6;  // physical-root acceptance
    int max_seed_retries = 3;     // perturbed restarts on resonance

    // The residual equations are invariant under integer energy shifts
    // (an integer Schlesinger transformation of the tau function), so Newton
    // can land on a root displaced by an integer from the physical level.
    // The section-4 regularity criterion |connection_offdiag| = 0 picks the
    // physical member of each ladder family.
    bool connection_filter = true;
    double connection_tol = 1e-4;
    bool rescue_scan = true; // bracket levels the ladder seeds missed
};

namespace detail {

struct ResidualPair {
    Complex r1, r2;
    double norm() const { return std::hypot(std::abs(r1), std::abs(r2)); }
};

// One evaluation of both residuals; the s-derivative column can reuse the
// kernel via TauSeries::with_s.
class RabiResidualMap {
public:
    RabiResidualMap(double g, double delta, int n, const TauConfig& config)
        : g_(g), delta_(delta), n_(n), config_(config) {}

    // seed-scan metric: both components weighted by their target scales
    double scan_metric(const ResidualPair& r, Complex energy) const {
        const auto [t1, t2] = residual_targets(RabiParams{g_, delta_, energy});
        return std::abs(r.r1) / (1.0 + std::abs(t1)) +
               std::abs(r.r2) / (1.0 + std::abs(t2));
    }

    ResidualPair operator()(Complex energy, Complex s) const {
        RabiParams p{g_, delta_, energy};
        const TauSeries series = rabi_tau_series(p, n_, s, config_);
        return eval(series, p);
    }

    // residuals at (E, s) and (E, s + ds) sharing one kernel
    std::pair<ResidualPair, ResidualPair> with_s_shift(Complex energy, Complex s,
                                                       Complex ds) const {
        RabiParams p{g_, delta_, energy};
        const TauSeries series = rabi_tau_series(p, n_, s, config_);
        return {eval(series, p), eval(series.with_s(s + ds), p)};
    }

private:
    ResidualPair eval(const TauSeries& series, const RabiParams& p) const {
        const Complex t{p.t(), 0.0};
        const auto [target1, target2] = residual_targets(p);
        return {series.dlog_tau(t, 1) - target1,
                series.dlog_tau(t, 2) - target2};
    }

    double g_, delta_;
    int n_;
    TauConfig config_;
};

// Coarse 8x8 log-grid scan over s = rho e^{i phi}. Physical roots have
// s e^{2 pi i sigma} real, so the phase grid is anchored there. The scan
// ranks by the full residual norm: |r1| alone vanishes on a curve in the
// s-plane that threads every integer-ladder family, so it cannot select
// the intended one.
inline std::optional<Complex> seed_s(const RabiResidualMap& map, Complex energy,
                                     Complex sigma_hat) {
    std::optional<Complex> best;
    double best_val = 0.0;
    const double base_phase = -2.0 * std::numbers::pi * sigma_hat.real();
    for (int ir = 0; ir < 8; ++ir) {
        const double rho = std::pow(10.0, -3.0 + 6.0 * ir / 7.0);
        for (int ip = 0; ip < 8; ++ip) {
            const double phi = base_phase + ip * std::numbers::pi / 4.0;
            const Complex s = rho * std::exp(Complex{0.0, phi});
            try {
                const double val = map.scan_metric(map(energy, s), energy);
                if (!best || val < best_val) {
                    best = s;
                    best_val = val;
                }
            } catch (const std::exception&) {
                continue;
            }
        }
    }
    return best;
}

inline SpectralResult newton_solve(double g, double delta, int n,
                                   Complex e_seed, Complex s_seed,
                                   const SolverOptions& options) {
    const RabiResidualMap map(g, delta, n, options.tau);
    Complex energy = e_seed, s = s_seed;
    SpectralResult result;
    result.n = n;
    result.n_window = options.tau.n_window;
    result.max_level = options.tau.trunc.max_level;

    ResidualPair r = map(energy, s);
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        if (r.norm() < options.tolerance) break;
        const Complex de = options.fd_step * (1.0 + std::abs(energy));
        const Complex ds = options.fd_step * (1.0 + std::abs(s));
        const auto [r_base, r_s] = map.with_s_shift(energy, s, ds);
        const ResidualPair r_e = map(energy + de, s);
        // complex 2x2 Jacobian, forward differences
        const Complex j11 = (r_e.r1 - r_base.r1) / de;
        const Complex j21 = (r_e.r2 - r_base.r2) / de;
        const Complex j12 = (r_s.r1 - r_base.r1) / ds;
        const Complex j22 = (r_s.r2 - r_base.r2) / ds;
        const Complex det = j11 * j22 - j12 * j21;
        if (std::abs(det) == 0.0) {
            result.message = "singular Jacobian";
            break;
        }
        const Complex step_e = (j22 * r.r1 - j12 * r.r2) / det;
        const Complex step_s = (-j21 * r.r1 + j11 * r.r2) / det;
        double damping = 1.0;
        bool accepted = false;
        for (int halve = 0; halve < 8; ++halve) {
            const Complex e_try = energy - damping * step_e;
            const Complex s_try = s - damping * step_s;
            try {
                const ResidualPair r_try = map(e_try, s_try);
                if (r_try.norm() < r.norm() || halve == 7) {
                    energy = e_try;
                    s = s_try;
                    r = r_try;
                    accepted = true;
                    break;
                }
            } catch (const std::exception&) {
                // trial stepped into a resonance; damp harder
            }
            damping /= 2.0;
        }
        if (!accepted) {
            result.message = "line search failed";
            break;
        }
    }
    result.energy = energy.real();
    result.energy_imag = energy.imag();
    result.s = s;
    result.residual_norm = r.norm();
    if (result.residual_norm < options.tolerance) {
        if (std::abs(energy.imag()) < options.im_energy_tol) {
            result.converged = true;
        } else {
            result.message = "spurious root: |Im E| above tolerance";
        }
    } else if (result.message.empty()) {
        result.message = "no convergence after max iterations";
    }
    return result;
}

} // namespace detail

// Solve one quantization label from a seed energy. Exact decoupled spectrum
// at Delta = 0 (the series parameterization is resonant there).
inline SpectralResult solve_level(double g, double delta, int n, double e_seed,
                                  const SolverOptions& options = {}) {
    if (g <= 0.0) throw std::invalid_argument("solve_level: g must be positive");
    if (delta == 0.0) {
        SpectralResult result;
        result.n = n;
        result.energy = std::round(e_seed + g * g) - g * g;
        result.converged = true;
        result.message = "decoupled limit: exact displaced-oscillator level";
        result.n_window = options.tau.n_window;
        result.max_level = options.tau.trunc.max_level;
        return result;
    }
    const Complex sigma_hat = e_seed + g * g + static_cast<double>(n);
    SpectralResult last;
    for (int attempt = 0; attempt <= options.max_seed_retries; ++attempt) {
        const Complex e_start =
            e_seed + 0.015 * attempt * (attempt % 2 == 0 ? 1.0 : -1.0);
        try {
            const detail::RabiResidualMap map(g, delta, n, options.tau);
            const auto s0 = detail::seed_s(map, e_start, sigma_hat);
            if (!s0) {
                last.n = n;
                last.message = "seed scan found no admissible s";
                continue;
            }
            last = detail::newton_solve(g, delta, n, e_start, *s0, options);
            if (last.converged) return last;
        } catch (const resonant_parameter_error& err) {
            last.n = n;
            last.message = err.what();
        }
    }
    return last;
}

// Quantization representatives worth trying for a seed energy: supported
// windows require n <= 0, centered so the dominant exponent sits inside.
inline std::vector<int> candidate_labels(double theta_seed, int window) {
    const int centered = std::min(0, -static_cast<int>(std::lround(theta_seed)));
    std::vector<int> labels;
    for (int delta_n : {0, -1, 1}) {
        const int n = std::min(0, centered + delta_n);
        if (n < -window) continue;
        if (std::find(labels.begin(), labels.end(), n) == labels.end())
            labels.push_back(n);
    }
    return labels;
}

namespace detail {

inline std::optional<double> connection_abs_at(double g, double delta,
                                               double energy) {
    try {
        return std::abs(connection_offdiag(RabiParams{g, delta, energy}));
    } catch (const std::exception&) {
        return std::nullopt; // resonant Frobenius exponents etc.
    }
}

// Move a converged root to the physical member of its integer ladder family,
// identified by the vanishing connection coefficient. Returns the anchored
// result, or nullopt if no family member passes the criterion.
inline std::optional<SpectralResult>
anchor_to_physical(double g, double delta, const SpectralResult& root,
                   const SolverOptions& options) {
    const auto here = connection_abs_at(g, delta, root.energy);
    if (here && *here < options.connection_tol) {
        SpectralResult out = root;
        out.connection_abs = *here;
        return out;
    }
    int best_shift = 0;
    double best_value = here ? *here : 1e300;
    for (int shift : {-2, -1, 1, 2}) {
        const auto value = connection_abs_at(g, delta, root.energy + shift);
        if (value && *value < best_value) {
            best_value = *value;
            best_shift = shift;
        }
    }
    if (best_shift == 0 || best_value >= options.connection_tol)
        return std::nullopt;
    const double e_target = root.energy + best_shift;
    for (int n : candidate_labels(e_target + g * g, 64)) {
        SpectralResult r = solve_level(g, delta, n, e_target, options);
        if (r.converged && std::abs(r.energy - e_target) < 0.1) {
            const auto confirmed = connection_abs_at(g, delta, r.energy);
            if (confirmed && *confirmed < options.connection_tol) {
                r.connection_abs = *confirmed;
                return r;
            }
        }
    }
    return std::nullopt;
}

// Bracket zeros of Re connection_offdiag(E) on [e_lo, e_hi] and polish the
// bracketed energies with the Newton solver.
inline std::vector<SpectralResult> rescue_levels(double g, double delta,
                                                 double e_lo, double e_hi,
                                                 const SolverOptions& options) {
    std::vector<SpectralResult> rescued;
    const double step = 0.02;
    double prev_e = 0.0, prev_v = 0.0;
    bool have_prev = false;
    for (double e = e_lo; e <= e_hi + 1e-12; e += step) {
        const double theta = e + g * g;
        if (std::abs(theta - std::round(theta)) < 0.02 && theta > -0.02) {
            have_prev = false; // skip resonant Frobenius neighborhoods
            continue;
        }
        double value;
        try {
            value = connection_offdiag(RabiParams{g, delta, e}).real();
        } catch (const std::exception&) {
            have_prev = false;
            continue;
        }
        if (have_prev && prev_v * value < 0.0) {
            double lo = prev_e, hi = e, flo = prev_v;
            for (int iter = 0; iter < 30; ++iter) {
                const double mid = 0.5 * (lo + hi);
                double fm;
                try {
                    fm = connection_offdiag(RabiParams{g, delta, mid}).real();
                } catch (const std::exception&) {
                    break;
                }
                if (flo * fm <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            const double e_root = 0.5 * (lo + hi);
            for (int n : candidate_labels(e_root + g * g, 64)) {
                SpectralResult r = solve_level(g, delta, n, e_root, options);
                if (r.converged && std::abs(r.energy - e_root) < 0.05) {
                    const auto c = connection_abs_at(g, delta, r.energy);
                    if (c && *c < options.connection_tol) {
                        r.connection_abs = *c;
                        rescued.push_back(r);
                        break;
                    }
                }
            }
        }
        prev_e = e;
        prev_v = value;
        have_prev = true;
    }
    return rescued;
}

} // namespace detail

// Spectrum from the g -> 0 ladder E in {m +- Delta} - g^2: Newton-solve each
// seed, anchor each root within its integer ladder family by the
// connection-diagonality criterion, bracket-and-solve any level the seeds
// missed, deduplicate to 1e-6, sort ascending.
inline std::vector<SpectralResult> spectrum(double g, double delta, int levels,
                                            const SolverOptions& options = {}) {
    if (g <= 0.0) throw std::invalid_argument("spectrum: g must be positive");
    std::vector<SpectralResult> found;
    if (delta == 0.0) {
        for (int m = 0; m < levels; ++m)
            found.push_back(solve_level(g, 0.0, 0, m - g * g, options));
        return found;
    }
    std::vector<SpectralResult> failures;
    const int n_window = levels + 2;
    for (int m = 0; m <= levels; ++m) {
        for (double sign : {-1.0, 1.0}) {
            const double e_seed = m + sign * delta - g * g;
            SpectralResult best_failure;
            bool kept = false;
            for (int n : candidate_labels(e_seed + g * g, n_window)) {
                SpectralResult r = solve_level(g, delta, n, e_seed, options);
                if (r.converged) {
                    if (options.connection_filter) {
                        auto anchored = detail::anchor_to_physical(g, delta, r, options);
                        if (anchored) {
                            found.push_back(*anchored);
                            kept = true;
                        }
                    } else {
                        found.push_back(r);
                        kept = true;
                    }
                    break;
                }
                if (best_failure.message.empty() ||
                    r.residual_norm < best_failure.residual_norm)
                    best_failure = r;
            }
            if (!kept && !best_failure.message.empty()) {
                best_failure.message = "seed E=" + std::to_string(e_seed) + ": " +
                                       best_failure.message;
                failures.push_back(best_failure);
            }
        }
    }
    if (options.rescue_scan && options.connection_filter) {
        const double e_lo = -std::abs(delta) - 0.3 - g * g;
        const double e_hi = levels - 1 + std::abs(delta) + 0.3;
        for (SpectralResult& r : detail::rescue_levels(g, delta, e_lo, e_hi, options))
            found.push_back(std::move(r));
    }
    // deduplicate converged roots to 1e-6, keep smallest residual
    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.energy < b.energy; });
    std::vector<SpectralResult> unique;
    for (const SpectralResult& r : found) {
        if (!unique.empty() && std::abs(unique.back().energy - r.energy) < 1e-6) {
            if (r.residual_norm < unique.back().residual_norm) unique.back() = r;
            continue;
        }
        unique.push_back(r);
    }
    // keep failure records only when the batch fell short of the request
    if (static_cast<int>(unique.size()) < levels)
        for (SpectralResult& f : failures) unique.push_back(std::move(f));
    return unique;
}

} // namespace isorabi
