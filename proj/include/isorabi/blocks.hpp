#pragma once

// Irregular conformal block coefficients B_{lambda,mu} and the truncated
// block series B({theta_i}, sigma; t).

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "isorabi/errors.hpp"
#include "isorabi/partition.hpp"

namespace isorabi {

using Complex = std::complex<double>;

// Local exponent differences at z = 0, t, infinity.
struct ThetaTriple {
    Complex theta_0{};
    Complex theta_t{};
    Complex theta_inf{};
};

// Cap on |lambda| + |mu|.
struct BlockTruncation {
    int max_level = 10;
};

inline double default_singular_tol(Complex sigma) {
    return 1e-12 * (1.0 + std::abs(2.0 * sigma));
}

namespace detail {

// sigma-independent box data: diag = i - j, hook^2, and the integer part of
// the pairing (cross) factor.
struct BoxFactor {
    double diag;
    double hook_sq;
    double cross_base;
};

struct PairEntry {
    std::vector<BoxFactor> lam_boxes;
    std::vector<BoxFactor> mu_boxes;
};

inline PairEntry make_pair_entry(const Partition& lam, const Partition& mu) {
    PairEntry entry;
    const Partition lam_c = conjugate(lam), mu_c = conjugate(mu);
    for (int i = 1; i <= static_cast<int>(lam.num_rows()); ++i) {
        for (int j = 1; j <= lam.row(i); ++j) {
            const int hook = lam.row(i) + lam_c.row(j) - i - j + 1;
            entry.lam_boxes.push_back(
                {static_cast<double>(i - j), static_cast<double>(hook) * hook,
                 static_cast<double>(lam_c.row(j) + mu.row(i) - i - j + 1)});
        }
    }
    for (int i = 1; i <= static_cast<int>(mu.num_rows()); ++i) {
        for (int j = 1; j <= mu.row(i); ++j) {
            const int hook = mu.row(i) + mu_c.row(j) - i - j + 1;
            entry.mu_boxes.push_back(
                {static_cast<double>(i - j), static_cast<double>(hook) * hook,
                 static_cast<double>(lam.row(i) + mu_c.row(j) - i - j + 1)});
        }
    }
    return entry;
}

// All (lambda, mu) pairs grouped by total weight, built once per level cap.
class PairTable {
public:
    static std::shared_ptr<const PairTable> get(int max_level) {
        static std::mutex mutex;
        static std::map<int, std::shared_ptr<const PairTable>> cache;
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(max_level);
        if (it != cache.end()) return it->second;
        auto table = std::make_shared<PairTable>(max_level);
        cache.emplace(max_level, table);
        return table;
    }

    explicit PairTable(int max_level) : levels_(max_level + 1) {
        std::vector<std::vector<Partition>> parts(max_level + 1);
        for (int w = 0; w <= max_level; ++w) parts[w] = partitions_of(w);
        for (int total = 0; total <= max_level; ++total) {
            for (int a = 0; a <= total; ++a) {
                for (const Partition& lam : parts[a])
                    for (const Partition& mu : parts[total - a])
                        levels_[total].push_back(make_pair_entry(lam, mu));
            }
        }
    }

    const std::vector<PairEntry>& level(int total) const { return levels_[total]; }
    int max_level() const { return static_cast<int>(levels_.size()) - 1; }

private:
    std::vector<std::vector<PairEntry>> levels_;
};

enum class Pairing {
    as_printed,  // linear cross factors, +2*sigma in both products
    nekrasov,    // squared cross factors, -2*sigma in the mu product
};

inline Complex eval_pair(const PairEntry& entry, const ThetaTriple& th,
                         Complex sigma, Pairing pairing, double singular_tol) {
    Complex value{1.0, 0.0};
    const Complex two_sigma = 2.0 * sigma;
    const bool squared = (pairing == Pairing::nekrasov);
    const double mu_sign = (pairing == Pairing::nekrasov) ? -1.0 : 1.0;
    for (const BoxFactor& box : entry.lam_boxes) {
        const Complex shift = sigma + box.diag;
        const Complex t_shift = th.theta_t + shift;
        const Complex num =
            (th.theta_inf + shift) * (t_shift * t_shift - th.theta_0 * th.theta_0);
        Complex cross = box.cross_base + two_sigma;
        if (std::abs(cross) < singular_tol)
            throw resonant_parameter_error(
                "block coefficient: pairing denominator vanishes (sigma resonant)");
        if (squared) cross *= cross;
        value *= num / (box.hook_sq * cross);
    }
    for (const BoxFactor& box : entry.mu_boxes) {
        const Complex shift = -sigma + box.diag;
        const Complex t_shift = th.theta_t + shift;
        const Complex num =
            (th.theta_inf + shift) * (t_shift * t_shift - th.theta_0 * th.theta_0);
        Complex cross = box.cross_base + mu_sign * two_sigma;
        if (std::abs(cross) < singular_tol)
            throw resonant_parameter_error(
                "block coefficient: pairing denominator vanishes (sigma resonant)");
        if (squared) cross *= cross;
        value *= num / (box.hook_sq * cross);
    }
    return value;
}

inline Complex eval_partition_pair(const ThetaTriple& th, Complex sigma,
                                   const Partition& lam, const Partition& mu,
                                   Pairing pairing, double singular_tol) {
    return eval_pair(make_pair_entry(lam, mu), th, sigma, pairing, singular_tol);
}

// Sum of coefficients at each total level 0..max_level.
inline std::vector<Complex> level_sums(const ThetaTriple& th, Complex sigma,
                                       int max_level, Pairing pairing,
                                       double singular_tol) {
    auto table = PairTable::get(max_level);
    std::vector<Complex> sums(max_level + 1, Complex{0.0, 0.0});
    for (int total = 0; total <= max_level; ++total)
        for (const PairEntry& entry : table->level(total))
            sums[total] += eval_pair(entry, th, sigma, pairing, singular_tol);
    return sums;
}

} // namespace detail

// B_{lambda,mu} with the double product over boxes as printed: lambda boxes
// contribute (theta_inf+sigma+i-j)((theta_t+sigma+i-j)^2-theta_0^2) /
// [h^2(i,j) (lambda'_j+mu_i-i-j+1+2 sigma)], mu boxes the sigma -> -sigma
// mirror with (lambda_i+mu'_j-i-j+1+2 sigma).
inline Complex block_coeff(const ThetaTriple& theta, Complex sigma,
                           const Partition& lambda, const Partition& mu,
                           double singular_tol = -1.0) {
    if (singular_tol < 0.0) singular_tol = default_singular_tol(sigma);
    return detail::eval_partition_pair(theta, sigma, lambda, mu,
                                       detail::Pairing::as_printed, singular_tol);
}

// Same double product with the pairing factors squared and the mirrored sign
// of sigma in the mu-product denominator, i.e. the Nekrasov-normalized form.
// This is the variant the tau expansion is built from: it reproduces the
// Virasoro level-one identity B_1 = (theta_*+sigma)((theta_t+sigma)^2-theta_0^2))/(2 sigma)^2 + (sigma -> -sigma)
// and the isomonodromic flow, which the plain printed form does not.
inline Complex nekrasov_block_coeff(const ThetaTriple& theta, Complex sigma,
                                    const Partition& lambda, const Partition& mu,
                                    double singular_tol = -1.0) {
    if (singular_tol < 0.0) singular_tol = default_singular_tol(sigma);
    return detail::eval_partition_pair(theta, sigma, lambda, mu,
                                       detail::Pairing::nekrasov, singular_tol);
}

// e^{-theta_t t} sum over |lambda|+|mu| <= L of block_coeff * t^{|lambda|+|mu|}.
inline Complex block_series(const ThetaTriple& theta, Complex sigma, Complex t,
                            const BlockTruncation& trunc,
                            double singular_tol = -1.0) {
    if (singular_tol < 0.0) singular_tol = default_singular_tol(sigma);
    const std::vector<Complex> sums = detail::level_sums(
        theta, sigma, trunc.max_level, detail::Pairing::as_printed, singular_tol);
    Complex poly{0.0, 0.0};
    for (int level = trunc.max_level; level >= 0; --level)
        poly = poly * t + sums[static_cast<std::size_t>(level)];
    return std::exp(-theta.theta_t * t) * poly;
}

} // namespace isorabi
