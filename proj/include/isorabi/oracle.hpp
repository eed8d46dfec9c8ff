#pragma once

// Brute-force reference spectrum: truncated Fock-space diagonalization of
// H = a^dag a + Delta sigma^z + g sigma^x (a^dag + a), with parity-block
// reduction.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace isorabi {

struct FockTruncation {
    int n_max = 80; // boson occupation cutoff; matrix dimension 2*(n_max+1)
};

// Basis ordering |n,+>, |n,->, n = 0..n_max.
inline Eigen::MatrixXd build_hamiltonian(double g, double delta,
                                         const FockTruncation& trunc) {
    if (trunc.n_max < 1)
        throw std::invalid_argument("build_hamiltonian: n_max must be >= 1");
    const int dim = 2 * (trunc.n_max + 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 0; n <= trunc.n_max; ++n) {
        h(2 * n, 2 * n) = n + delta;
        h(2 * n + 1, 2 * n + 1) = n - delta;
        if (n < trunc.n_max) {
            const double c = g * std::sqrt(n + 1.0);
            // sigma^x flips the two-level state
            h(2 * n, 2 * (n + 1) + 1) = c;
            h(2 * (n + 1) + 1, 2 * n) = c;
            h(2 * n + 1, 2 * (n + 1)) = c;
            h(2 * (n + 1), 2 * n + 1) = c;
        }
    }
    return h;
}

inline std::vector<double> eigenvalues_of(const Eigen::MatrixXd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h,
                                                          Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

inline std::vector<double> eigenvalues(double g, double delta,
                                       const FockTruncation& trunc) {
    return eigenvalues_of(build_hamiltonian(g, delta, trunc));
}

// Blocks of the parity operator sigma^z (-1)^{a^dag a}. Within a block the
// Hamiltonian is tridiagonal in n; each block has dimension n_max + 1.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd>
parity_blocks(double g, double delta, const FockTruncation& trunc) {
    const int dim = trunc.n_max + 1;
    Eigen::MatrixXd even = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd odd = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        const double sz = (n % 2 == 0) ? 1.0 : -1.0; // spin alternates with n
        even(n, n) = n + sz * delta;
        odd(n, n) = n - sz * delta;
        if (n + 1 < dim) {
            const double c = g * std::sqrt(n + 1.0);
            even(n, n + 1) = even(n + 1, n) = c;
            odd(n, n + 1) = odd(n + 1, n) = c;
        }
    }
    return {even, odd};
}

// Lowest `count` eigenvalues with the cutoff doubled until they are stable
// to `tol`.
inline std::vector<double> stable_lowest_eigenvalues(double g, double delta,
                                                     int count,
                                                     int n_max_start = 80,
                                                     double tol = 1e-10,
                                                     int max_doublings = 4) {
    FockTruncation trunc{n_max_start};
    std::vector<double> prev = eigenvalues(g, delta, trunc);
    for (int step = 0; step < max_doublings; ++step) {
        trunc.n_max *= 2;
        std::vector<double> next = eigenvalues(g, delta, trunc);
        double shift = 0.0;
        for (int k = 0; k < count && k < static_cast<int>(prev.size()); ++k)
            shift = std::max(shift, std::abs(next[k] - prev[k]));
        prev = std::move(next);
        if (shift < tol) break;
    }
    prev.resize(static_cast<std::size_t>(count));
    return prev;
}

} // namespace isorabi
