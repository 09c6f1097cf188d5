#pragma once

#include <memory>
#include <vector>

#include "qoc/control.hpp"
#include "qoc/integrator.hpp"

namespace qoc {

struct ObjectiveValues {
    double total = 0.0;             // Upsilon or Theta
    double terminal = 0.0;          // J or I
    double state_integral = 0.0;    // integral of g(t, rho_t)
    double control_integral = 0.0;  // integral of f(t, c(t))
};

// Forward pass: objective decomposition plus the state trajectories needed by
// the adjoint pass (one per propagated initial state).
struct ForwardSolution {
    ObjectiveValues values;
    std::vector<MatrixTrajectory> trajectories;
};

// A bound-constrained optimal control problem as seen by the optimizer:
// evaluate the objective (forward), and assemble its gradient from a forward
// solution (one extra backward solve per propagated state).
class ControlProblem {
public:
    virtual ~ControlProblem() = default;

    virtual int num_controls() const = 0;
    virtual double horizon() const = 0;
    virtual const BoxConstraint& box() const = 0;

    virtual ForwardSolution forward(const ControlGrid& c, CauchyCounter& counter) const = 0;
    virtual ControlGrid gradient_from(const ForwardSolution& fwd, const ControlGrid& c,
                                      CauchyCounter& counter) const = 0;

    ObjectiveValues evaluate(const ControlGrid& c, CauchyCounter& counter) const {
        return forward(c, counter).values;
    }
    ControlGrid gradient(const ControlGrid& c, CauchyCounter& counter) const {
        return gradient_from(forward(c, counter), c, counter);
    }
};

// Trapezoid rule on the control grid nodes for f sampled at nodes.
double trapezoid(const std::vector<double>& values, double dt);

}  // namespace qoc
