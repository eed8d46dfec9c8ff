#pragma once

// Direct numerical analysis of the Fuchsian system
//   dPhi/dz Phi^{-1} = sigma_3/2 + A_0/z + A_t/(z-t):
// fundamental-matrix transport along paths, loop monodromies, Frobenius
// solutions and the connection coefficient, the Schlesinger flow in t, and
// the scalar-ODE reduction with its apparent-singularity relation.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "isorabi/errors.hpp"
#include "isorabi/rabi_params.hpp"
#include "isorabi/tau.hpp"

namespace isorabi {

using Matrix2C = Eigen::Matrix2cd;
using Vector2C = Eigen::Vector2cd;

inline const Matrix2C& sigma3() {
    static const Matrix2C s = (Matrix2C() << 1.0, 0.0, 0.0, -1.0).finished();
    return s;
}

// Coefficient data of the system at a given deformation time t.
struct SystemSpec {
    Matrix2C a0;
    Matrix2C at;
    Complex t;

    Complex theta_0() const { return a0.trace(); } // rank-1: eigenvalues (tr, 0)
    Complex theta_t() const { return at.trace(); }

    // A(z), optionally determinant-normalized (trace removed so the local
    // exponents are +-theta_i/2 and monodromy eigenvalues e^{+-i pi theta_i}).
    Matrix2C coefficient(Complex z, bool normalized) const {
        Matrix2C a = 0.5 * sigma3() + a0 / z + at / (z - t);
        if (normalized)
            a -= (0.5 * theta_0() / z + 0.5 * theta_t() / (z - t)) *
                 Matrix2C::Identity();
        return a;
    }
};

// A_0 = [[E+g^2, -Delta],[0,0]], A_t = [[0,0],[-Delta, E+g^2]], t = -4 g^2.
inline SystemSpec system_from_rabi(const RabiParams& p) {
    SystemSpec sys;
    const Complex th = p.theta();
    sys.a0 = (Matrix2C() << th, Complex(-p.delta), Complex(0.0), Complex(0.0))
                 .finished();
    sys.at = (Matrix2C() << Complex(0.0), Complex(0.0), Complex(-p.delta), th)
                 .finished();
    sys.t = p.t();
    return sys;
}

// ---------------------------------------------------------------------------
// Paths: line segments and circular arcs, each parameterized over [0, 1].

struct Segment {
    Complex from, to;
};

struct Arc {
    Complex center;
    double radius;
    double phi_from, phi_to; // radians; counterclockwise when phi_to > phi_from
};

using PathPiece = std::variant<Segment, Arc>;
using Path = std::vector<PathPiece>;

namespace detail {

inline Complex piece_point(const PathPiece& piece, double s) {
    if (const Segment* seg = std::get_if<Segment>(&piece))
        return seg->from + s * (seg->to - seg->from);
    const Arc& arc = std::get<Arc>(piece);
    const double phi = arc.phi_from + s * (arc.phi_to - arc.phi_from);
    return arc.center + arc.radius * std::exp(Complex{0.0, phi});
}

inline Complex piece_velocity(const PathPiece& piece, double s) {
    if (const Segment* seg = std::get_if<Segment>(&piece))
        return seg->to - seg->from;
    const Arc& arc = std::get<Arc>(piece);
    const double dphi = arc.phi_to - arc.phi_from;
    const double phi = arc.phi_from + s * dphi;
    return Complex{0.0, dphi} * arc.radius * std::exp(Complex{0.0, phi});
}

inline double segment_distance(const Segment& seg, Complex p) {
    const Complex d = seg.to - seg.from;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - seg.from);
    double proj = ((p - seg.from) * std::conj(d)).real() / len2;
    proj = std::clamp(proj, 0.0, 1.0);
    return std::abs(p - (seg.from + proj * d));
}

inline double piece_distance(const PathPiece& piece, Complex p) {
    if (const Segment* seg = std::get_if<Segment>(&piece))
        return segment_distance(*seg, p);
    const Arc& arc = std::get<Arc>(piece);
    // conservative: distance from the full circle
    return std::abs(std::abs(p - arc.center) - arc.radius);
}

// Real 8-vector view of a 2x2 complex matrix, for the ODE steppers.
using MatrixState = std::array<double, 8>;

inline MatrixState pack(const Matrix2C& m) {
    MatrixState s;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            s[static_cast<std::size_t>(4 * r + 2 * c)] = m(r, c).real();
            s[static_cast<std::size_t>(4 * r + 2 * c + 1)] = m(r, c).imag();
        }
    return s;
}

inline Matrix2C unpack(const MatrixState& s) {
    Matrix2C m;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            m(r, c) = Complex{s[static_cast<std::size_t>(4 * r + 2 * c)],
                              s[static_cast<std::size_t>(4 * r + 2 * c + 1)]};
    return m;
}

template <typename Rhs>
inline void adaptive_integrate(Rhs&& rhs, MatrixState& state, double tol) {
    namespace ode = boost::numeric::odeint;
    auto stepper =
        ode::make_controlled(tol, tol, ode::runge_kutta_fehlberg78<MatrixState>());
    double s = 0.0, ds = 0.05;
    int rejected = 0;
    while (s < 1.0) {
        ds = std::min(ds, 1.0 - s);
        if (stepper.try_step(rhs, state, s, ds) == ode::success) {
            rejected = 0;
        } else if (++rejected > 200 || ds < 1e-14) {
            throw path_too_close_error(
                "adaptive step size underflow near a singular point");
        }
    }
}

} // namespace detail

struct TransportOptions {
    double tol = 1e-12;          // local error target per step
    double safety_radius = -1.0; // < 0: |t|/12 by default
    bool normalized = false;     // integrate the determinant-normalized system
};

// Transport a fundamental matrix along a path of segments/arcs.
inline Matrix2C transport(const SystemSpec& sys, const Path& path,
                          const Matrix2C& phi_init,
                          const TransportOptions& options = {}) {
    const double safety = options.safety_radius >= 0.0
                              ? options.safety_radius
                              : std::abs(sys.t) / 12.0;
    for (const PathPiece& piece : path) {
        if (detail::piece_distance(piece, Complex{0.0, 0.0}) < safety ||
            detail::piece_distance(piece, sys.t) < safety)
            throw path_too_close_error("path within safety radius of z = 0 or t");
    }
    detail::MatrixState state = detail::pack(phi_init);
    for (const PathPiece& piece : path) {
        auto rhs = [&](const detail::MatrixState& y, detail::MatrixState& dy,
                       double s) {
            const Complex z = detail::piece_point(piece, s);
            const Complex v = detail::piece_velocity(piece, s);
            const Matrix2C phi = detail::unpack(y);
            dy = detail::pack((v * sys.coefficient(z, options.normalized) * phi)
                                  .eval());
        };
        detail::adaptive_integrate(rhs, state, options.tol);
    }
    return detail::unpack(state);
}

// Transport along a polyline of waypoints.
inline Matrix2C integrate_path(const SystemSpec& sys,
                               const std::vector<Complex>& polyline,
                               const Matrix2C& phi_init,
                               const TransportOptions& options = {}) {
    Path path;
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i)
        path.push_back(Segment{polyline[i], polyline[i + 1]});
    return transport(sys, path, phi_init, options);
}

// ---------------------------------------------------------------------------
// Loop monodromies.

struct MonodromyPair {
    Matrix2C m0; // normalized-system monodromy around z = 0
    Matrix2C mt; // around z = t
    Complex raw_factor_0; // raw-gauge M_0 = raw_factor_0 * m0
    Complex raw_factor_t;

    Matrix2C m_inf() const { return (mt * m0).inverse(); } // free group relation
    Complex composite_trace() const { return (mt * m0).trace(); }
};

// Loops are circles of radius min(|t|/3, 1/3) traversed counterclockwise
// with common basepoint on the positive real axis.
inline MonodromyPair monodromy_pair(const SystemSpec& sys,
                                    double basepoint = -1.0,
                                    const TransportOptions& options_in = {}) {
    const double r = std::min(std::abs(sys.t) / 3.0, 1.0 / 3.0);
    const double zb = basepoint > 0.0 ? basepoint : r;
    TransportOptions options = options_in;
    options.normalized = true;
    if (options.safety_radius < 0.0) options.safety_radius = r / 4.0;

    constexpr double two_pi = 2.0 * std::numbers::pi;
    Path loop0;
    if (zb != r) loop0.push_back(Segment{Complex(zb), Complex(r)});
    loop0.push_back(Arc{Complex{0.0, 0.0}, r, 0.0, two_pi});
    if (zb != r) loop0.push_back(Segment{Complex(r), Complex(zb)});

    // reach the circle around t through the upper half plane
    const Complex tc = sys.t;
    const Complex approach = tc + r;
    const double h = r;
    Path loop_t;
    loop_t.push_back(Segment{Complex(zb), Complex(zb) + Complex{0.0, h}});
    loop_t.push_back(Segment{Complex(zb) + Complex{0.0, h}, approach + Complex{0.0, h}});
    loop_t.push_back(Segment{approach + Complex{0.0, h}, approach});
    loop_t.push_back(Arc{tc, r, 0.0, two_pi});
    loop_t.push_back(Segment{approach, approach + Complex{0.0, h}});
    loop_t.push_back(Segment{approach + Complex{0.0, h}, Complex(zb) + Complex{0.0, h}});
    loop_t.push_back(Segment{Complex(zb) + Complex{0.0, h}, Complex(zb)});

    MonodromyPair pair;
    pair.m0 = transport(sys, loop0, Matrix2C::Identity(), options);
    pair.mt = transport(sys, loop_t, Matrix2C::Identity(), options);
    const Complex i_pi{0.0, std::numbers::pi};
    pair.raw_factor_0 = std::exp(i_pi * sys.theta_0());
    pair.raw_factor_t = std::exp(i_pi * sys.theta_t());
    return pair;
}

// ---------------------------------------------------------------------------
// Frobenius solutions at the regular singular points.

namespace detail {

struct FrobeniusSolution {
    Complex point;    // expansion point (0 or t)
    Complex exponent; // alpha in (z - p)^alpha * (analytic)
    std::vector<Vector2C> coeffs;

    // value at z, with real positive (z - p) expected by the Rabi matching
    Vector2C eval(Complex z) const {
        const Complex w = z - point;
        Vector2C acc = Vector2C::Zero();
        for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
            acc = w * acc + coeffs[static_cast<std::size_t>(k)];
        return pow_branch(w, exponent) * acc;
    }
};

// Eigenvector of a 2x2 matrix for given eigenvalue.
inline Vector2C eigenvector_for(const Matrix2C& m, Complex eigenvalue,
                                double tol) {
    const Matrix2C shifted = m - eigenvalue * Matrix2C::Identity();
    // pick the larger row to null out
    const Vector2C row0 = shifted.row(0).transpose();
    const Vector2C row1 = shifted.row(1).transpose();
    Vector2C v;
    if (row0.norm() >= row1.norm() && row0.norm() > tol)
        v = Vector2C(-row0(1), row0(0));
    else if (row1.norm() > tol)
        v = Vector2C(-row1(1), row1(0));
    else
        v = Vector2C(1.0, 0.0); // matrix is (near) scalar: any direction
    return v / v.norm();
}

// Series solution y(z) = (z-p)^alpha sum_k y_k (z-p)^k of the raw system,
// matched to tail < tail_tol at radius `radius`.
inline FrobeniusSolution frobenius_at(const SystemSpec& sys, Complex point,
                                      Complex alpha, double radius,
                                      double tail_tol = 1e-14,
                                      int max_depth = 400) {
    const bool at_zero = (point == Complex{0.0, 0.0});
    const Matrix2C residue = at_zero ? sys.a0 : sys.at;
    const Matrix2C other = at_zero ? sys.at : sys.a0;
    const Complex delta = at_zero ? -sys.t : sys.t; // p - other point

    FrobeniusSolution sol;
    sol.point = point;
    sol.exponent = alpha;
    sol.coeffs.push_back(eigenvector_for(residue, alpha, 1e-12));

    // holomorphic part B(z) = sigma_3/2 + other/(z - other_point):
    //   B_m = (m == 0 ? sigma_3/2 : 0) + other * (-1)^m / delta^{m+1}
    std::vector<Matrix2C> b_pows;
    auto b_coeff = [&](int m) -> Matrix2C {
        Matrix2C b = other * (std::pow(-1.0, m) / std::pow(delta, m + 1));
        if (m == 0) b += 0.5 * sigma3();
        return b;
    };

    double tail = 1.0;
    for (int k = 1; k < max_depth; ++k) {
        Vector2C rhs = Vector2C::Zero();
        for (int m = 1; m <= k; ++m)
            rhs += b_coeff(m - 1) * sol.coeffs[static_cast<std::size_t>(k - m)];
        const Matrix2C lhs =
            (alpha + static_cast<double>(k)) * Matrix2C::Identity() - residue;
        const Complex det = lhs.determinant();
        if (std::abs(det) < 1e-10 * (1.0 + lhs.norm() * lhs.norm()))
            throw resonant_parameter_error(
                "frobenius_at: resonant exponents (exceptional spectrum regime)");
        sol.coeffs.push_back(lhs.inverse() * rhs);
        tail = sol.coeffs.back().norm() * std::pow(radius, k);
        if (tail < tail_tol && k > 4) break;
    }
    if (tail >= tail_tol)
        throw path_too_close_error("frobenius_at: series did not reach tolerance");
    return sol;
}

} // namespace detail

// Weight of the non-analytic (z-t)^{theta_t} branch in the continuation of
// the solution analytic at z = 0; vanishes exactly at eigenvalues.
inline Complex connection_offdiag(const RabiParams& p,
                                  const TransportOptions& options = {}) {
    const SystemSpec sys = system_from_rabi(p);
    const double at = std::abs(sys.t);
    const Complex z0 = sys.t / 4.0;       // between 0 and t, |z0| = |t|/4
    const Complex z1 = 3.0 * sys.t / 4.0; // |z1 - t| = |t|/4

    const auto analytic0 =
        detail::frobenius_at(sys, Complex{0.0, 0.0}, Complex{0.0, 0.0}, at / 4.0);
    const auto local_t0 =
        detail::frobenius_at(sys, sys.t, Complex{0.0, 0.0}, at / 4.0);
    const auto local_t_theta =
        detail::frobenius_at(sys, sys.t, sys.theta_t(), at / 4.0);

    TransportOptions topt = options;
    if (topt.safety_radius < 0.0) topt.safety_radius = at / 8.0;
    Vector2C y = analytic0.eval(z0);
    // transport the vector solution along the segment z0 -> z1
    detail::MatrixState state{};
    state[0] = y(0).real();
    state[1] = y(0).imag();
    state[2] = y(1).real();
    state[3] = y(1).imag();
    auto rhs = [&](const detail::MatrixState& s, detail::MatrixState& ds,
                   double u) {
        const Complex z = z0 + u * (z1 - z0);
        const Complex v = z1 - z0;
        const Vector2C w(Complex{s[0], s[1]}, Complex{s[2], s[3]});
        const Vector2C dw = v * (sys.coefficient(z, false) * w);
        ds = {dw(0).real(), dw(0).imag(), dw(1).real(), dw(1).imag(),
              0.0, 0.0, 0.0, 0.0};
    };
    detail::adaptive_integrate(rhs, state, topt.tol);
    y = Vector2C(Complex{state[0], state[1]}, Complex{state[2], state[3]});

    Matrix2C basis;
    basis.col(0) = local_t_theta.eval(z1);
    basis.col(1) = local_t0.eval(z1);
    const Vector2C c = basis.inverse() * y;
    // relative weight of the divergent branch
    return c(0) * basis.col(0).norm() / y.norm();
}

// ---------------------------------------------------------------------------
// Schlesinger flow.

struct FlowOptions {
    double tol = 1e-12;
};

// Integrate dA_0/dt = [A_t,A_0]/t, dA_t/dt = -[A_t,A_0]/t - [A_t,sigma_3]/2
// from sys.t to t_target along the given t-waypoints (straight by default).
inline SystemSpec schlesinger_flow(const SystemSpec& sys, Complex t_target,
                                   std::vector<Complex> waypoints = {},
                                   const FlowOptions& options = {}) {
    if (waypoints.empty()) waypoints = {sys.t, t_target};
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i)
        if (detail::segment_distance(Segment{waypoints[i], waypoints[i + 1]},
                                     Complex{0.0, 0.0}) <
            1e-3 * std::abs(sys.t))
            throw path_too_close_error("schlesinger_flow: path too close to t = 0");

    std::array<double, 16> state{};
    {
        const auto s0 = detail::pack(sys.a0);
        const auto st = detail::pack(sys.at);
        std::copy(s0.begin(), s0.end(), state.begin());
        std::copy(st.begin(), st.end(), state.begin() + 8);
    }
    namespace ode = boost::numeric::odeint;
    using State = std::array<double, 16>;
    auto stepper = ode::make_controlled(options.tol, options.tol,
                                        ode::runge_kutta_fehlberg78<State>());
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
        const Complex from = waypoints[i], to = waypoints[i + 1];
        auto rhs = [&](const State& y, State& dy, double u) {
            const Complex t = from + u * (to - from);
            const Complex v = to - from;
            detail::MatrixState ya, yb;
            std::copy(y.begin(), y.begin() + 8, ya.begin());
            std::copy(y.begin() + 8, y.end(), yb.begin());
            const Matrix2C a0 = detail::unpack(ya), at = detail::unpack(yb);
            const Matrix2C comm = at * a0 - a0 * at;
            const Matrix2C da0 = (v / t) * comm;
            const Matrix2C dat =
                -(v / t) * comm - 0.5 * v * (at * sigma3() - sigma3() * at);
            const auto pa = detail::pack(da0);
            const auto pb = detail::pack(dat);
            std::copy(pa.begin(), pa.end(), dy.begin());
            std::copy(pb.begin(), pb.end(), dy.begin() + 8);
        };
        double u = 0.0, du = 0.02;
        int rejected = 0;
        while (u < 1.0) {
            du = std::min(du, 1.0 - u);
            if (stepper.try_step(rhs, state, u, du) == ode::success) {
                rejected = 0;
            } else if (++rejected > 200 || du < 1e-14) {
                throw path_too_close_error("schlesinger_flow: step underflow");
            }
        }
    }
    SystemSpec out;
    detail::MatrixState ya, yb;
    std::copy(state.begin(), state.begin() + 8, ya.begin());
    std::copy(state.begin() + 8, state.end(), yb.begin());
    out.a0 = detail::unpack(ya);
    out.at = detail::unpack(yb);
    out.t = t_target;
    return out;
}

// ---------------------------------------------------------------------------
// Scalar-ODE reduction.

// Data of f'' + p f' + q f = 0 for the first row, with
//   p(z) = (1-theta_0)/z + (1-theta_t)/(z-t) - 1/(z-lambda),
//   q(z) = -1/4 + C_0/z + C_t/(z-t) + mu/(z-lambda).
struct ScalarReduction {
    Complex k, lambda, mu;
    Complex c0, ct;
    Complex theta_0, theta_t;
    Complex t;

    Complex p_at(Complex z) const {
        return (1.0 - theta_0) / z + (1.0 - theta_t) / (z - t) - 1.0 / (z - lambda);
    }
    Complex q_at(Complex z) const {
        return -0.25 + c0 / z + ct / (z - t) + mu / (z - lambda);
    }
};

inline ScalarReduction reduce_to_scalar(const SystemSpec& sys,
                                        double tol = 1e-9) {
    const Complex a = sys.a0(0, 0), b = sys.a0(0, 1), c = sys.a0(1, 0),
                  d = sys.a0(1, 1);
    const Complex e = sys.at(0, 0), f = sys.at(0, 1), gg = sys.at(1, 0),
                  h = sys.at(1, 1);
    const Complex t = sys.t;
    const double scale = sys.a0.norm() + sys.at.norm();
    if (std::abs(sys.a0.determinant()) > tol * scale * scale ||
        std::abs(sys.at.determinant()) > tol * scale * scale)
        throw reduction_degenerate_error(
            "reduce_to_scalar: residue matrices are not rank one");

    const Complex k = b + f;
    if (std::abs(k) < tol * scale)
        throw reduction_degenerate_error(
            "reduce_to_scalar: A_12 vanishes identically (Delta = 0)");
    const Complex lambda = t * b / k;
    if (std::abs(lambda) < tol * std::abs(t) ||
        std::abs(lambda - t) < tol * std::abs(t))
        throw reduction_degenerate_error(
            "reduce_to_scalar: apparent singularity collides with 0 or t "
            "(unflowed Rabi point)");

    ScalarReduction red;
    red.k = k;
    red.lambda = lambda;
    red.t = t;
    red.theta_0 = a + d;
    red.theta_t = e + h;
    red.mu = 0.5 + a / lambda + e / (lambda - t);
    const Complex big_k = a * h + e * d - b * gg - f * c;
    red.c0 = (d - a) / 2.0 - big_k / t - a / lambda - 0.5 + e / t + a / t;
    red.ct = (h - e) / 2.0 + big_k / t + e / (t - lambda) - 0.5 - a / t - e / t;
    return red;
}

// |mu^2 - [(theta_0-1)/lambda + (theta_t-1)/(lambda-t)] mu
//       + C_0/lambda + C_t/(lambda-t) - 1/4|
inline double apparent_singularity_residual(const ScalarReduction& red) {
    const Complex lhs =
        red.mu * red.mu -
        ((red.theta_0 - 1.0) / red.lambda +
         (red.theta_t - 1.0) / (red.lambda - red.t)) *
            red.mu +
        red.c0 / red.lambda + red.ct / (red.lambda - red.t);
    return std::abs(lhs - 0.25);
}

// ---------------------------------------------------------------------------
// Painleve V variable.

struct PvY {
    Complex entry_form;     // (A_0)_{11} (A_t)_{12} / ((A_t)_{11} (A_0)_{12})
    Complex parameter_form; // via (theta, lambda, mu)
    Complex difference;
};

inline PvY pv_y(const SystemSpec& sys, double tol = 1e-12) {
    const double scale = sys.a0.norm() + sys.at.norm();
    if (std::abs(sys.at(0, 0)) < tol * scale ||
        std::abs(sys.a0(0, 1)) < tol * scale)
        throw degenerate_gauge_error("pv_y: vanishing denominator entry");
    PvY y;
    y.entry_form = sys.a0(0, 0) * sys.at(0, 1) / (sys.at(0, 0) * sys.a0(0, 1));
    const ScalarReduction red = reduce_to_scalar(sys);
    // theta_inf = theta_t - theta_0 in this display (vanishes for Rabi data)
    const Complex theta_inf = red.theta_t - red.theta_0;
    const Complex base = red.theta_0 + red.theta_t - theta_inf;
    y.parameter_form = (base - (2.0 * red.mu - 1.0) * (red.lambda - red.t)) /
                       (base - (2.0 * red.mu - 1.0) * red.lambda);
    y.difference = y.entry_form - y.parameter_form;
    return y;
}

// ---------------------------------------------------------------------------
// Hamiltonian cross-check against the tau expansion.

// Max over sample points of |series dlog tau - (-Tr sigma_3 A_t / 2
// - Tr A_0 A_t / t)| with (A_0, A_t) evolved by the Schlesinger flow.
inline double hamiltonian_check(const SystemSpec& sys, const TauSeries& series,
                                Complex t_begin, Complex t_end,
                                int samples = 9) {
    double max_dev = 0.0;
    auto rhs_value = [](const SystemSpec& s) {
        return -0.5 * (sigma3() * s.at).trace() - (s.a0 * s.at).trace() / s.t;
    };
    // walk outward from sys.t in both directions, reusing the evolved state
    std::vector<Complex> ts;
    for (int i = 0; i < samples; ++i)
        ts.push_back(t_begin +
                     (t_end - t_begin) * (static_cast<double>(i) / (samples - 1)));
    std::sort(ts.begin(), ts.end(), [](Complex x, Complex y) {
        return x.real() < y.real();
    });
    auto sweep = [&](bool upward) {
        SystemSpec cur = sys;
        std::vector<Complex> side;
        for (Complex tv : ts)
            if ((tv.real() > sys.t.real()) == upward &&
                std::abs(tv - sys.t) > 1e-14)
                side.push_back(tv);
        if (!upward) std::reverse(side.begin(), side.end());
        for (Complex tv : side) {
            cur = schlesinger_flow(cur, tv);
            const Complex dev = series.dlog_tau(tv, 1) - rhs_value(cur);
            max_dev = std::max(max_dev, std::abs(dev));
        }
    };
    sweep(false);
    sweep(true);
    for (Complex tv : ts)
        if (std::abs(tv - sys.t) <= 1e-14) {
            const Complex dev = series.dlog_tau(tv, 1) - rhs_value(sys);
            max_dev = std::max(max_dev, std::abs(dev));
        }
    return max_dev;
}

} // namespace isorabi
