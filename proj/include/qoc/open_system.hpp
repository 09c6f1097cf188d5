#pragma once

#include <array>
#include <functional>
#include <vector>

#include "qoc/closed_system.hpp"
#include "qoc/problem.hpp"
#include "qoc/tensor.hpp"

namespace qoc {

struct LindbladChannel {
    ComplexMatrix a;     // jump operator A_j
    double omega = 0.0;  // rate Omega_j >= 0
};

// D_n(rho) = sum_j Omega_j (n_j+1) (2 A rho A^+ - {A^+A, rho})
//          + Omega_j n_j (2 A^+ rho A - {A A^+, rho})
ComplexMatrix dissipator(const std::vector<LindbladChannel>& channels, const std::vector<double>& n,
                         const ComplexMatrix& rho);
// Hilbert-Schmidt adjoint: <chi, D_n(rho)> = <D_n^+(chi), rho>
ComplexMatrix adjoint_dissipator(const std::vector<LindbladChannel>& channels,
                                 const std::vector<double>& n, const ComplexMatrix& chi);
// d D_n(rho) / d n_l for the affine-in-n rates above
ComplexMatrix dissipator_n_derivative(const std::vector<LindbladChannel>& channels, int l,
                                      const ComplexMatrix& rho);

// Dissipator seam used by the dynamics; the affine channel form is the default
// and the only tested one. Non-affine rate structure can be installed here.
struct DissipatorModel {
    std::function<void(const double* n, const ComplexMatrix& rho, ComplexMatrix& out)> apply;
    std::function<void(const double* n, const ComplexMatrix& chi, ComplexMatrix& out)> apply_adjoint;
    std::function<void(int l, const double* n, const ComplexMatrix& rho, ComplexMatrix& out)>
        n_derivative;
};
DissipatorModel affine_dissipator_model(std::vector<LindbladChannel> channels);

// d rho/dt = -i [H0 + eps*sum_l n_l Hn_l + sum_l u_l V_l(t), rho] + eps D_n(rho)
struct OpenSystem {
    int dim = 0;
    ComplexMatrix h0;
    std::vector<ControlCoupling> h_controls;  // coherent couplings H_l
    std::vector<ComplexMatrix> hn_ops;        // effective Hamiltonian, linear in n
    std::vector<LindbladChannel> channels;
    DissipatorModel model;  // defaults to affine_dissipator_model(channels)
    double epsilon = 1.0;
    double horizon = 0.0;

    int num_coherent() const { return static_cast<int>(h_controls.size()); }
    int num_incoherent() const { return static_cast<int>(channels.size()); }
    void finalize();  // installs the affine model if none set
};

// Continuous non-decreasing-by-use weight sigma(t) in [0,1]; pieces are affine,
// jumps allowed (step weights appear in some problems).
class PiecewiseWeight {
public:
    struct Piece {
        double start;   // piece applies for t >= start (until the next start)
        double value0;  // sigma(start)
        double slope;
    };

    PiecewiseWeight() : pieces_{{0.0, 1.0, 0.0}} {}  // neutral weight
    explicit PiecewiseWeight(std::vector<Piece> pieces);
    static PiecewiseWeight constant(double v);
    // 0 until t0, affine ramp to 1 on [t0, t1], 1 afterwards
    static PiecewiseWeight ramp(double t0, double t1);
    // 0 until t0, 1 from t0 on
    static PiecewiseWeight step(double t0);

    double at(double t) const;

private:
    std::vector<Piece> pieces_;
};

enum class OpenObjectiveKind { SteerKeep, Keep, Overlap, GateTriple };

struct OpenObjective {
    OpenObjectiveKind kind = OpenObjectiveKind::Keep;
    ComplexMatrix rho0;         // initial state (single-state objectives)
    ComplexMatrix rho_target;   // target (SteerKeep/Overlap); Keep uses rho0
    ComplexMatrix gate;         // W_N (GateTriple)
    std::array<ComplexMatrix, 3> triple_initials;  // GateTriple initial states
    double p_rho = 0.0;
    PiecewiseWeight sigma;      // weight in the state integrand
    bool path_target = false;   // SteerKeep: ||rho - rhobar_t||^2 with the convex path
    double overlap_bound = 0.0; // b (Overlap)
    double p_u = 0.0, p_n = 0.0;
    double shape_cs = 25.0;

    // Overlap/SteerKeep target of the integral term at time t
    ComplexMatrix path_state(double t, double horizon) const;
};

struct OpenEvaluation {
    double theta = 0.0;
    double terminal = 0.0;
    double state_integral = 0.0;
    double control_integral = 0.0;
};

class OpenProblem : public ControlProblem {
public:
    OpenProblem(OpenSystem sys, OpenObjective obj, BoxConstraint box, IntegratorConfig integ = {});

    int num_controls() const override { return sys_.num_coherent() + sys_.num_incoherent(); }
    double horizon() const override { return sys_.horizon; }
    const BoxConstraint& box() const override { return box_; }

    ForwardSolution forward(const ControlGrid& c, CauchyCounter& counter) const override;
    ControlGrid gradient_from(const ForwardSolution& fwd, const ControlGrid& c,
                              CauchyCounter& counter) const override;

    const OpenSystem& system() const { return sys_; }
    const OpenObjective& objective() const { return obj_; }
    const IntegratorConfig& integrator() const { return integ_; }

    // terminal adjoint chi_T = -dF/drho for propagated state index m
    ComplexMatrix adjoint_terminal_state(const ComplexMatrix& rho_final, int m) const;

private:
    OpenSystem sys_;
    OpenObjective obj_;
    BoxConstraint box_;
    IntegratorConfig integ_;

    int num_states() const { return obj_.kind == OpenObjectiveKind::GateTriple ? 3 : 1; }
    ComplexMatrix initial_state(int m) const;
    ComplexMatrix terminal_target(int m) const;
    double state_integrand(double t, const ComplexMatrix& rho) const;
    void state_integrand_gradient(double t, const ComplexMatrix& rho, ComplexMatrix& out) const;

    friend struct OpenAdjointAccess;
};

OpenEvaluation evaluate_theta(const OpenProblem& p, const ControlGrid& c, CauchyCounter& counter);
ControlGrid gradient_theta(const OpenProblem& p, const ControlGrid& c, CauchyCounter& counter);

// The three special initial density matrices of the gate-triple objective.
std::array<ComplexMatrix, 3> gate_triple_initial_states(int n);

}  // namespace qoc
