#include "qoc/closed_system.hpp"

#include <cmath>
#include <stdexcept>

namespace qoc {

double trapezoid(const std::vector<double>& values, double dt) {
    if (values.size() < 2) return 0.0;
    double s = 0.5 * (values.front() + values.back());
    for (size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
    return s * dt;
}

double closed_terminal(const ClosedObjective& obj, const ComplexMatrix& u_final) {
    const int n = u_final.dim();
    if (obj.kind == ClosedObjectiveKind::Gate) {
        Complex tr = 0.0;
        // Tr(U W^dagger) = sum_ij U_ij conj(W_ij)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) tr += u_final(i, j) * std::conj(obj.gate(i, j));
        return 1.0 - std::norm(tr) / (static_cast<double>(n) * n);
    }
    Complex ov = 0.0;  // <psi_target, U psi0>
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ov += std::conj(obj.psi_target[i]) * u_final(i, j) * obj.psi0[j];
    return 1.0 - std::norm(ov);
}

ComplexMatrix adjoint_terminal(const ClosedObjective& obj, const ComplexMatrix& u_final) {
    const int n = u_final.dim();
    if (obj.kind == ClosedObjectiveKind::Gate) {
        Complex tr = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) tr += u_final(i, j) * std::conj(obj.gate(i, j));
        ComplexMatrix b = obj.gate;
        b *= tr * (2.0 / (static_cast<double>(n) * n));
        return b;
    }
    Complex ov = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ov += std::conj(obj.psi_target[i]) * u_final(i, j) * obj.psi0[j];
    // 2 <psi_target, U psi0> |psi_target><psi0|
    ComplexMatrix b(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            b(i, j) = 2.0 * ov * obj.psi_target[i] * std::conj(obj.psi0[j]);
    return b;
}

ClosedProblem::ClosedProblem(ClosedSystem sys, ClosedObjective obj, BoxConstraint box,
                             IntegratorConfig integ)
    : sys_(std::move(sys)), obj_(std::move(obj)), box_(std::move(box)), integ_(integ) {
    if (sys_.couplings.empty()) throw std::invalid_argument("ClosedProblem: no control couplings");
    if (box_.components() != static_cast<int>(sys_.couplings.size()))
        throw std::invalid_argument("ClosedProblem: box/coupling component mismatch");
}

namespace {

std::vector<double> grid_times(const ControlGrid& u) {
    std::vector<double> ts(u.num_nodes());
    for (int m = 0; m < u.num_nodes(); ++m) ts[m] = u.node_time(m);
    return ts;
}

// dX/dt = -i (H0 + sum u_l V_l(t)) X  for X = U (forward) or B (adjoint)
MatrixODE schroedinger_ode(const ClosedSystem& sys, const ControlGrid& u) {
    MatrixODE ode;
    ode.dim = sys.dim;
    ode.control = &u;
    ode.rhs = [&sys](double t, const ComplexMatrix& x, const double* uv, ComplexMatrix& dx) {
        ComplexMatrix h = sys.h0;
        for (size_t l = 0; l < sys.couplings.size(); ++l)
            h.add_scaled(Complex{uv[l] * sys.couplings[l].scale(t), 0.0}, sys.couplings[l].op);
        dx = h * x;
        dx *= Complex{0.0, -1.0};
    };
    return ode;
}

double control_running_cost(const ClosedObjective& obj, const ControlGrid& u) {
    if (obj.penalty == 0.0) return 0.0;
    std::vector<double> f(u.num_nodes());
    for (int m = 0; m < u.num_nodes(); ++m) {
        double norm2 = 0.0;
        for (int k = 0; k < u.components(); ++k) norm2 += u.value(m, k) * u.value(m, k);
        f[m] = obj.penalty * shape_s(u.node_time(m), u.horizon(), obj.shape_cs) * norm2;
    }
    return trapezoid(f, u.dt());
}

}  // namespace

ForwardSolution ClosedProblem::forward(const ControlGrid& u, CauchyCounter& counter) const {
    auto ode = schroedinger_ode(sys_, u);
    auto traj = solve_forward(ode, ComplexMatrix::identity(sys_.dim), 0.0, sys_.horizon, integ_,
                              grid_times(u), counter);
    ForwardSolution fwd;
    fwd.values.terminal = closed_terminal(obj_, traj.back());
    fwd.values.control_integral = control_running_cost(obj_, u);
    fwd.values.total = fwd.values.terminal + fwd.values.control_integral;
    fwd.trajectories.push_back(std::move(traj));
    return fwd;
}

ControlGrid ClosedProblem::gradient_from(const ForwardSolution& fwd, const ControlGrid& u,
                                         CauchyCounter& counter) const {
    const auto& utraj = fwd.trajectories.at(0);
    auto ode = schroedinger_ode(sys_, u);
    const ComplexMatrix b_final = adjoint_terminal(obj_, utraj.back());
    auto btraj = solve_backward(ode, b_final, 0.0, sys_.horizon, integ_, grid_times(u), counter);

    const int nu = num_controls();
    ControlGrid grad(u.horizon(), u.segments(), nu);
    const int n = sys_.dim;
    for (int m = 0; m < u.num_nodes(); ++m) {
        const double t = u.node_time(m);
        const ComplexMatrix& ut = utraj.states[m];
        const ComplexMatrix& bt = btraj.states[m];
        const double st = obj_.penalty != 0.0 ? shape_s(t, u.horizon(), obj_.shape_cs) : 0.0;
        for (int l = 0; l < nu; ++l) {
            const ComplexMatrix vu = sys_.couplings[l].op * ut;
            // Im<B, V_l U> with the time envelope pulled out front
            double im = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) im += (std::conj(bt(i, j)) * vu(i, j)).imag();
            grad.value(m, l) =
                -sys_.couplings[l].scale(t) * im + 2.0 * obj_.penalty * st * u.value(m, l);
        }
    }
    return grad;
}

ClosedEvaluation evaluate_upsilon(const ClosedProblem& p, const ControlGrid& u,
                                  CauchyCounter& counter) {
    const auto v = p.evaluate(u, counter);
    return ClosedEvaluation{v.total, v.terminal, v.control_integral};
}

ControlGrid gradient_upsilon(const ClosedProblem& p, const ControlGrid& u, CauchyCounter& counter) {
    return p.gradient(u, counter);
}

}  // namespace qoc
