#pragma once

#include <atomic>
#include <functional>
#include <vector>

#include "qoc/control.hpp"
#include "qoc/tensor.hpp"

namespace qoc {

// One initial- or terminal-value solve is the unit of computational cost
// reported by the optimizer; the tally is owned by the calling run.
class CauchyCounter {
public:
    void increment() { n_.fetch_add(1, std::memory_order_relaxed); }
    long count() const { return n_.load(std::memory_order_relaxed); }
    void reset() { n_.store(0, std::memory_order_relaxed); }

private:
    std::atomic<long> n_{0};
};

struct IntegratorConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double initial_step = 0.0;  // 0 -> span/1000
    double max_step = 0.0;      // 0 -> span
};

// Matrix-valued IVP dx/dt = rhs(t, x, u(t)) with u interpolated from `control`.
struct MatrixODE {
    int dim = 0;
    const ControlGrid* control = nullptr;  // may be null when the rhs ignores u
    std::function<void(double t, const ComplexMatrix& x, const double* u, ComplexMatrix& dx)> rhs;
};

// States sampled at the requested times; uniform grids get O(1) interpolation.
class MatrixTrajectory {
public:
    std::vector<double> times;
    std::vector<ComplexMatrix> states;

    const ComplexMatrix& front() const { return states.front(); }
    const ComplexMatrix& back() const { return states.back(); }
    // linear interpolation between stored samples
    void at(double t, ComplexMatrix& out) const;
    ComplexMatrix at(double t) const;
};

// Embedded Dormand-Prince 5(4) with proportional step control and 4th-order
// dense output at the sample times. Counts as one Cauchy solve.
MatrixTrajectory solve_forward(const MatrixODE& ode, const ComplexMatrix& x0, double t0, double t1,
                               const IntegratorConfig& cfg, const std::vector<double>& sample_times,
                               CauchyCounter& counter);

// Terminal-value problem on [t0, t1]: transformed to a forward solve in
// s = t1 - t. Sample times and returned trajectory are in original time order.
MatrixTrajectory solve_backward(const MatrixODE& ode, const ComplexMatrix& x_final, double t0,
                                double t1, const IntegratorConfig& cfg,
                                const std::vector<double>& sample_times, CauchyCounter& counter);

}  // namespace qoc
