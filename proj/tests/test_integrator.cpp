#include <cmath>

#include "doctest.h"
#include "qoc/integrator.hpp"
#include "qoc/open_system.hpp"

using namespace qoc;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = a + (b - a) * i / (n - 1);
    return t;
}

}  // namespace

TEST_CASE("diagonal phase evolution dU/dt = -i Z U") {
    MatrixODE ode;
    ode.dim = 2;
    ode.rhs = [](double, const ComplexMatrix& x, const double*, ComplexMatrix& dx) {
        dx = pauli_z() * x;
        dx *= Complex{0, -1};
    };
    CauchyCounter counter;
    const auto traj = solve_forward(ode, ComplexMatrix::identity(2), 0.0, 1.5, {},
                                    linspace(0.0, 1.5, 31), counter);
    CHECK(counter.count() == 1);
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        ComplexMatrix expect(2);
        expect(0, 0) = std::exp(Complex{0, -t});
        expect(1, 1) = std::exp(Complex{0, t});
        CHECK((traj.states[i] - expect).frobenius_norm() <= 1e-8);
    }
}

TEST_CASE("single-Pauli rotation dU/dt = -i c X U") {
    const double c = 0.8;
    MatrixODE ode;
    ode.dim = 2;
    ode.rhs = [c](double, const ComplexMatrix& x, const double*, ComplexMatrix& dx) {
        dx = pauli_x() * x;
        dx *= Complex{0, -c};
    };
    CauchyCounter counter;
    const auto traj =
        solve_forward(ode, ComplexMatrix::identity(2), 0.0, 2.0, {}, linspace(0.0, 2.0, 21), counter);
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        ComplexMatrix expect = ComplexMatrix::identity(2);
        expect *= Complex{std::cos(c * t), 0.0};
        expect.add_scaled(Complex{0.0, -std::sin(c * t)}, pauli_x());
        CHECK((traj.states[i] - expect).frobenius_norm() <= 1e-8);
        CHECK(unitarity_defect(traj.states[i]) <= 1e-7);
    }
}

TEST_CASE("two-level amplitude damping matches the scalar decay law") {
    // rho' = eps*Omega*(2 A rho A^+ - {A^+A, rho}), excited population e^(-2 eps Omega t)
    const double eps = 0.25, omega = 0.8;
    const ComplexMatrix sigma_minus(2, {0, 1, 0, 0});  // lowers |e> = e2 to |g> = e1
    std::vector<LindbladChannel> channels{{sigma_minus, omega}};
    MatrixODE ode;
    ode.dim = 2;
    ode.rhs = [&](double, const ComplexMatrix& x, const double*, ComplexMatrix& dx) {
        dx = dissipator(channels, {0.0}, x);
        dx *= Complex{eps, 0.0};
    };
    ComplexMatrix rho0(2);
    rho0(1, 1) = 1.0;
    CauchyCounter counter;
    const auto traj = solve_forward(ode, rho0, 0.0, 3.0, {}, linspace(0.0, 3.0, 16), counter);
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const double expect = std::exp(-2.0 * eps * omega * traj.times[i]);
        CHECK(traj.states[i](1, 1).real() == doctest::Approx(expect).epsilon(1e-8));
        CHECK(std::abs(traj.states[i].trace() - Complex{1, 0}) <= 1e-9);
    }
}

TEST_CASE("backward solve") {
    MatrixODE ode;
    ode.dim = 2;
    ode.rhs = [](double, const ComplexMatrix& x, const double*, ComplexMatrix& dx) {
        dx = pauli_z() * x;
        dx *= Complex{0, -1};
    };
    CauchyCounter counter;

    SUBCASE("diagonal analytic terminal condition") {
        const double horizon = 1.3;
        ComplexMatrix bt(2, {0.3, 0, 0, Complex{0, 0.7}});
        const auto traj = solve_backward(ode, bt, 0.0, horizon, {}, {0.0, horizon}, counter);
        // B(0) = diag(e^{i T}, e^{-i T}) B(T)
        ComplexMatrix expect(2);
        expect(0, 0) = std::exp(Complex{0, horizon}) * bt(0, 0);
        expect(1, 1) = std::exp(Complex{0, -horizon}) * bt(1, 1);
        CHECK((traj.states.front() - expect).frobenius_norm() <= 1e-8);
        CHECK((traj.states.back() - bt).frobenius_norm() <= 1e-12);
    }

    SUBCASE("round trip returns the initial condition") {
        ComplexMatrix x0(2, {1, Complex{0.2, 0.1}, Complex{0.2, -0.1}, Complex{0, 1}});
        const auto fwd = solve_forward(ode, x0, 0.0, 2.0, {}, {2.0}, counter);
        const auto back = solve_backward(ode, fwd.states.back(), 0.0, 2.0, {}, {0.0}, counter);
        CHECK((back.states.front() - x0).frobenius_norm() <= 1e-7);
    }

    SUBCASE("zero rhs keeps the terminal value") {
        MatrixODE zero;
        zero.dim = 2;
        zero.rhs = [](double, const ComplexMatrix&, const double*, ComplexMatrix& dx) {
            dx = ComplexMatrix(2);
        };
        ComplexMatrix bt(2, {1, 2, 3, 4});
        const auto traj = solve_backward(zero, bt, 0.0, 1.0, {}, linspace(0.0, 1.0, 5), counter);
        for (const auto& s : traj.states) CHECK((s - bt).frobenius_norm() == 0.0);
    }
}

TEST_CASE("tolerance halving moves the terminal state by a comparable factor") {
    MatrixODE ode;
    ode.dim = 2;
    ode.rhs = [](double t, const ComplexMatrix& x, const double*, ComplexMatrix& dx) {
        ComplexMatrix h = pauli_z();
        h.add_scaled(Complex{std::cos(3.0 * t), 0.0}, pauli_x());
        dx = h * x;
        dx *= Complex{0, -1};
    };
    CauchyCounter counter;
    IntegratorConfig loose{1e-6, 1e-8, 0.0, 0.0};
    IntegratorConfig tight{5e-7, 5e-9, 0.0, 0.0};
    IntegratorConfig ref{1e-12, 1e-14, 0.0, 0.0};
    const auto a = solve_forward(ode, ComplexMatrix::identity(2), 0.0, 2.0, loose, {2.0}, counter);
    const auto b = solve_forward(ode, ComplexMatrix::identity(2), 0.0, 2.0, tight, {2.0}, counter);
    const auto c = solve_forward(ode, ComplexMatrix::identity(2), 0.0, 2.0, ref, {2.0}, counter);
    const double err_a = (a.states.back() - c.states.back()).frobenius_norm();
    const double err_b = (b.states.back() - c.states.back()).frobenius_norm();
    CHECK(err_a <= 10.0 * 1e-6);
    CHECK(err_b <= err_a + 1e-12);
}

TEST_CASE("counter counts one per solve") {
    MatrixODE ode;
    ode.dim = 2;
    ode.rhs = [](double, const ComplexMatrix&, const double*, ComplexMatrix& dx) {
        dx = ComplexMatrix(2);
    };
    CauchyCounter counter;
    solve_forward(ode, ComplexMatrix::identity(2), 0.0, 1.0, {}, {1.0}, counter);
    CHECK(counter.count() == 1);
    solve_backward(ode, ComplexMatrix::identity(2), 0.0, 1.0, {}, {0.0}, counter);
    CHECK(counter.count() == 2);
}

TEST_CASE("control-dependent rhs samples the interpolated control") {
    // dx/dt = u(t) * I: x(T) = exp(integral of u)
    ControlGrid u(1.0, 100, 1);
    for (int m = 0; m <= 100; ++m) u.value(m, 0) = u.node_time(m);  // u(t) = t
    MatrixODE ode;
    ode.dim = 1;
    ode.control = &u;
    ode.rhs = [](double, const ComplexMatrix& x, const double* uv, ComplexMatrix& dx) {
        dx = x;
        dx *= Complex{uv[0], 0.0};
    };
    CauchyCounter counter;
    ComplexMatrix x0(1);
    x0(0, 0) = 1.0;
    const auto traj = solve_forward(ode, x0, 0.0, 1.0, {}, {1.0}, counter);
    CHECK(traj.states.back()(0, 0).real() == doctest::Approx(std::exp(0.5)).epsilon(1e-9));
}
