#pragma once

#include <functional>
#include <vector>

#include "qoc/problem.hpp"
#include "qoc/tensor.hpp"

namespace qoc {

// Control-coupling operator V(t) = envelope(t) * op (envelope null means 1).
struct ControlCoupling {
    ComplexMatrix op;
    std::function<double(double)> envelope;

    double scale(double t) const { return envelope ? envelope(t) : 1.0; }
    ComplexMatrix at(double t) const {
        ComplexMatrix r = op;
        r *= Complex{scale(t), 0.0};
        return r;
    }
};

// dU/dt = -i (H0 + sum_l u_l(t) V_l(t)) U, U(0) = I
struct ClosedSystem {
    int dim = 0;
    ComplexMatrix h0;
    std::vector<ControlCoupling> couplings;  // V_l
    double horizon = 0.0;
};

enum class ClosedObjectiveKind { StateTransfer, Gate };

// Upsilon(u) = J(u) + P * integral of S(t) ||u(t)||^2
struct ClosedObjective {
    ClosedObjectiveKind kind = ClosedObjectiveKind::Gate;
    std::vector<Complex> psi0, psi_target;  // state transfer
    ComplexMatrix gate;                     // target W
    double penalty = 0.0;                   // P
    double shape_cs = 25.0;                 // C_S
};

// J_1 = 1 - |<psi_target, U psi0>|^2  or  J_2 = 1 - |Tr(U W^dagger)|^2 / N^2
double closed_terminal(const ClosedObjective& obj, const ComplexMatrix& u_final);

// B_T = -grad F(U) |_{U_final}; the scaling is fixed by the finite-difference
// identity dF(Delta) = -Re<B_T, Delta>, which the tests certify.
ComplexMatrix adjoint_terminal(const ClosedObjective& obj, const ComplexMatrix& u_final);

struct ClosedEvaluation {
    double upsilon = 0.0;
    double terminal = 0.0;
    double integral = 0.0;
};

class ClosedProblem : public ControlProblem {
public:
    ClosedProblem(ClosedSystem sys, ClosedObjective obj, BoxConstraint box,
                  IntegratorConfig integ = {});

    int num_controls() const override { return static_cast<int>(sys_.couplings.size()); }
    double horizon() const override { return sys_.horizon; }
    const BoxConstraint& box() const override { return box_; }

    ForwardSolution forward(const ControlGrid& u, CauchyCounter& counter) const override;
    ControlGrid gradient_from(const ForwardSolution& fwd, const ControlGrid& u,
                              CauchyCounter& counter) const override;

    const ClosedSystem& system() const { return sys_; }
    const ClosedObjective& objective() const { return obj_; }
    const IntegratorConfig& integrator() const { return integ_; }

private:
    ClosedSystem sys_;
    ClosedObjective obj_;
    BoxConstraint box_;
    IntegratorConfig integ_;
};

// Spec-level entry points (1 resp. 2 Cauchy solves).
ClosedEvaluation evaluate_upsilon(const ClosedProblem& p, const ControlGrid& u,
                                  CauchyCounter& counter);
ControlGrid gradient_upsilon(const ClosedProblem& p, const ControlGrid& u, CauchyCounter& counter);

}  // namespace qoc
