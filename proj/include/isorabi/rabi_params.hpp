#pragma once

// Physical Rabi parameters and the monodromy data they induce.

#include <complex>
#include <optional>

namespace isorabi {

using Complex = std::complex<double>;

// H = a^dag a + Delta sigma^z + g sigma^x (a^dag + a), candidate energy E.
// Induces t = -4 g^2 and theta_0 = theta_t = E + g^2.
struct RabiParams {
    double g = 0.0;
    double delta = 0.0;
    Complex energy{0.0, 0.0};

    Complex theta() const { return energy + g * g; }
    double t() const { return -4.0 * g * g; }
};

// The set {theta_0, theta_t, theta_inf, sigma} labeling a Fuchsian system
// class, plus the expansion parameter s once solved and the Stokes product.
struct MonodromyData {
    Complex theta_0{};
    Complex theta_t{};
    Complex theta_inf{};
    Complex sigma{};
    std::optional<Complex> s{}; // solver unknown until fixed
};

} // namespace isorabi
