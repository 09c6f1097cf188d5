#include "qoc/open_system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qoc {

namespace {

struct ChannelOps {
    ComplexMatrix a, ad, ada, aad;  // A, A^+, A^+A, AA^+
    double omega;
};

std::vector<ChannelOps> precompute(const std::vector<LindbladChannel>& channels) {
    std::vector<ChannelOps> ops;
    ops.reserve(channels.size());
    for (const auto& ch : channels) {
        ChannelOps o;
        o.a = ch.a;
        o.ad = dagger(ch.a);
        o.ada = o.ad * o.a;
        o.aad = o.a * o.ad;
        o.omega = ch.omega;
        ops.push_back(std::move(o));
    }
    return ops;
}

// out += w * (2 L x R - {P, x}) with P = R L precomputed
void accumulate_lindblad_term(ComplexMatrix& out, double w, const ComplexMatrix& l,
                              const ComplexMatrix& r, const ComplexMatrix& p,
                              const ComplexMatrix& x) {
    if (w == 0.0) return;
    out.add_scaled(Complex{2.0 * w, 0.0}, l * x * r);
    out.add_scaled(Complex{-w, 0.0}, p * x);
    out.add_scaled(Complex{-w, 0.0}, x * p);
}

}  // namespace

ComplexMatrix dissipator(const std::vector<LindbladChannel>& channels, const std::vector<double>& n,
                         const ComplexMatrix& rho) {
    if (n.size() != channels.size())
        throw std::invalid_argument("dissipator: control/channel count mismatch");
    ComplexMatrix out(rho.dim());
    for (size_t j = 0; j < channels.size(); ++j) {
        const auto& ch = channels[j];
        const ComplexMatrix ad = dagger(ch.a);
        accumulate_lindblad_term(out, ch.omega * (n[j] + 1.0), ch.a, ad, ad * ch.a, rho);
        accumulate_lindblad_term(out, ch.omega * n[j], ad, ch.a, ch.a * ad, rho);
    }
    return out;
}

ComplexMatrix adjoint_dissipator(const std::vector<LindbladChannel>& channels,
                                 const std::vector<double>& n, const ComplexMatrix& chi) {
    if (n.size() != channels.size())
        throw std::invalid_argument("adjoint_dissipator: control/channel count mismatch");
    ComplexMatrix out(chi.dim());
    for (size_t j = 0; j < channels.size(); ++j) {
        const auto& ch = channels[j];
        const ComplexMatrix ad = dagger(ch.a);
        // positions of A, A^+ swap in the sandwich, anticommutators keep theirs
        accumulate_lindblad_term(out, ch.omega * (n[j] + 1.0), ad, ch.a, ad * ch.a, chi);
        accumulate_lindblad_term(out, ch.omega * n[j], ch.a, ad, ch.a * ad, chi);
    }
    return out;
}

ComplexMatrix dissipator_n_derivative(const std::vector<LindbladChannel>& channels, int l,
                                      const ComplexMatrix& rho) {
    const auto& ch = channels.at(l);
    ComplexMatrix out(rho.dim());
    const ComplexMatrix ad = dagger(ch.a);
    accumulate_lindblad_term(out, ch.omega, ch.a, ad, ad * ch.a, rho);
    accumulate_lindblad_term(out, ch.omega, ad, ch.a, ch.a * ad, rho);
    return out;
}

DissipatorModel affine_dissipator_model(std::vector<LindbladChannel> channels) {
    auto ops = std::make_shared<std::vector<ChannelOps>>(precompute(channels));
    DissipatorModel m;
    m.apply = [ops](const double* n, const ComplexMatrix& rho, ComplexMatrix& out) {
        out = ComplexMatrix(rho.dim());
        for (size_t j = 0; j < ops->size(); ++j) {
            const auto& o = (*ops)[j];
            accumulate_lindblad_term(out, o.omega * (n[j] + 1.0), o.a, o.ad, o.ada, rho);
            accumulate_lindblad_term(out, o.omega * n[j], o.ad, o.a, o.aad, rho);
        }
    };
    m.apply_adjoint = [ops](const double* n, const ComplexMatrix& chi, ComplexMatrix& out) {
        out = ComplexMatrix(chi.dim());
        for (size_t j = 0; j < ops->size(); ++j) {
            const auto& o = (*ops)[j];
            accumulate_lindblad_term(out, o.omega * (n[j] + 1.0), o.ad, o.a, o.ada, chi);
            accumulate_lindblad_term(out, o.omega * n[j], o.a, o.ad, o.aad, chi);
        }
    };
    m.n_derivative = [ops](int l, const double*, const ComplexMatrix& rho, ComplexMatrix& out) {
        const auto& o = (*ops)[l];
        out = ComplexMatrix(rho.dim());
        accumulate_lindblad_term(out, o.omega, o.a, o.ad, o.ada, rho);
        accumulate_lindblad_term(out, o.omega, o.ad, o.a, o.aad, rho);
    };
    return m;
}

void OpenSystem::finalize() {
    if (!model.apply) model = affine_dissipator_model(channels);
}

PiecewiseWeight::PiecewiseWeight(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty() || pieces_.front().start != 0.0)
        throw std::invalid_argument("PiecewiseWeight: first piece must start at 0");
    for (size_t i = 1; i < pieces_.size(); ++i)
        if (pieces_[i].start <= pieces_[i - 1].start)
            throw std::invalid_argument("PiecewiseWeight: breakpoints must increase");
}

PiecewiseWeight PiecewiseWeight::constant(double v) { return PiecewiseWeight({{0.0, v, 0.0}}); }

PiecewiseWeight PiecewiseWeight::ramp(double t0, double t1) {
    return PiecewiseWeight({{0.0, 0.0, 0.0}, {t0, 0.0, 1.0 / (t1 - t0)}, {t1, 1.0, 0.0}});
}

PiecewiseWeight PiecewiseWeight::step(double t0) {
    if (t0 <= 0.0) return constant(1.0);
    return PiecewiseWeight({{0.0, 0.0, 0.0}, {t0, 1.0, 0.0}});
}

double PiecewiseWeight::at(double t) const {
    size_t i = pieces_.size() - 1;
    while (i > 0 && t < pieces_[i].start) --i;
    return pieces_[i].value0 + pieces_[i].slope * (t - pieces_[i].start);
}

ComplexMatrix OpenObjective::path_state(double t, double horizon) const {
    // convex interpolation, a density matrix for every t
    const double s = std::clamp(t / horizon, 0.0, 1.0);
    ComplexMatrix r = rho0;
    r *= Complex{1.0 - s, 0.0};
    r.add_scaled(Complex{s, 0.0}, rho_target);
    return r;
}

OpenProblem::OpenProblem(OpenSystem sys, OpenObjective obj, BoxConstraint box,
                         IntegratorConfig integ)
    : sys_(std::move(sys)), obj_(std::move(obj)), box_(std::move(box)), integ_(integ) {
    sys_.finalize();
    if (box_.components() != num_controls())
        throw std::invalid_argument("OpenProblem: box/control component mismatch");
}

ComplexMatrix OpenProblem::initial_state(int m) const {
    if (obj_.kind == OpenObjectiveKind::GateTriple) return obj_.triple_initials[m];
    return obj_.rho0;
}

ComplexMatrix OpenProblem::terminal_target(int m) const {
    switch (obj_.kind) {
        case OpenObjectiveKind::SteerKeep:
            return obj_.rho_target;
        case OpenObjectiveKind::Keep:
            return obj_.rho0;
        case OpenObjectiveKind::Overlap:
            return obj_.rho_target;
        case OpenObjectiveKind::GateTriple: {
            return obj_.gate * obj_.triple_initials[m] * dagger(obj_.gate);
        }
    }
    throw std::logic_error("unreachable");
}

double OpenProblem::state_integrand(double t, const ComplexMatrix& rho) const {
    if (obj_.p_rho == 0.0 || obj_.kind == OpenObjectiveKind::GateTriple) return 0.0;
    switch (obj_.kind) {
        case OpenObjectiveKind::SteerKeep:
            if (obj_.path_target)
                return obj_.p_rho * hs_dist2(rho, obj_.path_state(t, sys_.horizon));
            return obj_.p_rho * obj_.sigma.at(t) * hs_dist2(rho, obj_.rho_target);
        case OpenObjectiveKind::Keep:
            return obj_.p_rho * obj_.sigma.at(t) * hs_dist2(rho, obj_.rho0);
        case OpenObjectiveKind::Overlap:
            return obj_.p_rho * obj_.sigma.at(t) *
                   (obj_.overlap_bound - hs_inner(rho, obj_.rho_target).real());
        default:
            return 0.0;
    }
}

void OpenProblem::state_integrand_gradient(double t, const ComplexMatrix& rho,
                                           ComplexMatrix& out) const {
    out = ComplexMatrix(sys_.dim);
    if (obj_.p_rho == 0.0 || obj_.kind == OpenObjectiveKind::GateTriple) return;
    switch (obj_.kind) {
        case OpenObjectiveKind::SteerKeep:
            if (obj_.path_target) {
                out = rho;
                out -= obj_.path_state(t, sys_.horizon);
                out *= Complex{2.0 * obj_.p_rho, 0.0};
            } else {
                out = rho;
                out -= obj_.rho_target;
                out *= Complex{2.0 * obj_.p_rho * obj_.sigma.at(t), 0.0};
            }
            break;
        case OpenObjectiveKind::Keep:
            out = rho;
            out -= obj_.rho0;
            out *= Complex{2.0 * obj_.p_rho * obj_.sigma.at(t), 0.0};
            break;
        case OpenObjectiveKind::Overlap:
            out = obj_.rho_target;
            out *= Complex{-obj_.p_rho * obj_.sigma.at(t), 0.0};
            break;
        default:
            break;
    }
}

ComplexMatrix OpenProblem::adjoint_terminal_state(const ComplexMatrix& rho_final, int m) const {
    switch (obj_.kind) {
        case OpenObjectiveKind::SteerKeep:
        case OpenObjectiveKind::Keep: {
            // F = ||rho - target||^2  ->  chi_T = -2 (rho_T - target)
            ComplexMatrix chi = rho_final;
            chi -= terminal_target(m);
            chi *= Complex{-2.0, 0.0};
            return chi;
        }
        case OpenObjectiveKind::Overlap:
            // F = b - <rho, target>  ->  chi_T = target
            return obj_.rho_target;
        case OpenObjectiveKind::GateTriple: {
            // F = (1/6) sum_m ||rho_Tm - target_m||^2, per-state weight 1/3
            ComplexMatrix chi = rho_final;
            chi -= terminal_target(m);
            chi *= Complex{-1.0 / 3.0, 0.0};
            return chi;
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

std::vector<double> grid_times(const ControlGrid& c) {
    std::vector<double> ts(c.num_nodes());
    for (int m = 0; m < c.num_nodes(); ++m) ts[m] = c.node_time(m);
    return ts;
}

}  // namespace

ForwardSolution OpenProblem::forward(const ControlGrid& c, CauchyCounter& counter) const {
    const int nu = sys_.num_coherent();
    const auto& sys = sys_;

    MatrixODE ode;
    ode.dim = sys.dim;
    ode.control = &c;
    ode.rhs = [&sys, nu](double t, const ComplexMatrix& x, const double* cv, ComplexMatrix& dx) {
        ComplexMatrix h = sys.h0;
        for (int l = 0; l < nu; ++l)
            h.add_scaled(Complex{cv[l] * sys.h_controls[l].scale(t), 0.0}, sys.h_controls[l].op);
        for (size_t l = 0; l < sys.hn_ops.size(); ++l)
            h.add_scaled(Complex{sys.epsilon * cv[nu + l], 0.0}, sys.hn_ops[l]);
        dx = commutator(h, x);
        dx *= Complex{0.0, -1.0};
        ComplexMatrix d;
        sys.model.apply(cv + nu, x, d);
        dx.add_scaled(Complex{sys.epsilon, 0.0}, d);
    };

    ForwardSolution fwd;
    const auto times = grid_times(c);
    for (int m = 0; m < num_states(); ++m)
        fwd.trajectories.push_back(
            solve_forward(ode, initial_state(m), 0.0, sys_.horizon, integ_, times, counter));

    // terminal part
    double terminal = 0.0;
    switch (obj_.kind) {
        case OpenObjectiveKind::SteerKeep:
        case OpenObjectiveKind::Keep:
            terminal = hs_dist2(fwd.trajectories[0].back(), terminal_target(0));
            break;
        case OpenObjectiveKind::Overlap:
            terminal =
                obj_.overlap_bound - hs_inner(fwd.trajectories[0].back(), obj_.rho_target).real();
            break;
        case OpenObjectiveKind::GateTriple: {
            double s = 0.0;
            for (int m = 0; m < 3; ++m)
                s += hs_dist2(fwd.trajectories[m].back(), terminal_target(m));
            terminal = s / 6.0;
            break;
        }
    }

    // integral parts on the grid
    std::vector<double> gs(c.num_nodes()), fs(c.num_nodes());
    for (int m = 0; m < c.num_nodes(); ++m) {
        const double t = times[m];
        gs[m] = state_integrand(t, fwd.trajectories[0].states[m]);
        double u2 = 0.0, n1 = 0.0;
        for (int k = 0; k < nu; ++k) u2 += c.value(m, k) * c.value(m, k);
        for (int k = nu; k < c.components(); ++k) n1 += c.value(m, k);
        fs[m] = obj_.p_u * shape_s(t, sys_.horizon, obj_.shape_cs) * u2 + obj_.p_n * n1;
    }

    fwd.values.terminal = terminal;
    fwd.values.state_integral =
        obj_.kind == OpenObjectiveKind::GateTriple ? 0.0 : trapezoid(gs, c.dt());
    fwd.values.control_integral = trapezoid(fs, c.dt());
    fwd.values.total = terminal + fwd.values.state_integral + fwd.values.control_integral;
    return fwd;
}

ControlGrid OpenProblem::gradient_from(const ForwardSolution& fwd, const ControlGrid& c,
                                       CauchyCounter& counter) const {
    const int nu = sys_.num_coherent();
    const int nn = sys_.num_incoherent();
    const auto& sys = sys_;
    const auto times = grid_times(c);
    const bool has_state_term = obj_.p_rho != 0.0 && obj_.kind != OpenObjectiveKind::GateTriple;

    ControlGrid grad(c.horizon(), c.segments(), nu + nn);

    for (int m = 0; m < num_states(); ++m) {
        const auto& rho_traj = fwd.trajectories[m];

        MatrixODE ode;
        ode.dim = sys.dim;
        ode.control = &c;
        ode.rhs = [&, this](double t, const ComplexMatrix& chi, const double* cv,
                            ComplexMatrix& dx) {
            ComplexMatrix h = sys.h0;
            for (int l = 0; l < nu; ++l)
                h.add_scaled(Complex{cv[l] * sys.h_controls[l].scale(t), 0.0},
                             sys.h_controls[l].op);
            for (size_t l = 0; l < sys.hn_ops.size(); ++l)
                h.add_scaled(Complex{sys.epsilon * cv[nu + l], 0.0}, sys.hn_ops[l]);
            dx = commutator(h, chi);
            dx *= Complex{0.0, -1.0};
            ComplexMatrix d;
            sys.model.apply_adjoint(cv + nu, chi, d);
            dx.add_scaled(Complex{-sys.epsilon, 0.0}, d);
            if (has_state_term) {
                ComplexMatrix g;
                state_integrand_gradient(t, rho_traj.at(t), g);
                dx += g;
            }
        };

        const ComplexMatrix chi_final = adjoint_terminal_state(rho_traj.back(), m);
        auto chi_traj = solve_backward(ode, chi_final, 0.0, sys_.horizon, integ_, times, counter);

        for (int node = 0; node < c.num_nodes(); ++node) {
            const double t = times[node];
            const ComplexMatrix& rho = rho_traj.states[node];
            const ComplexMatrix& chi = chi_traj.states[node];
            for (int l = 0; l < nu; ++l) {
                ComplexMatrix icom = commutator(sys.h_controls[l].op, rho);
                icom *= Complex{0.0, sys.h_controls[l].scale(t)};
                grad.value(node, l) += hs_inner(chi, icom).real();
            }
            const double* cv = &c.value(node, 0);
            for (int l = 0; l < nn; ++l) {
                double g = 0.0;
                if (l < static_cast<int>(sys.hn_ops.size())) {
                    ComplexMatrix icom = commutator(sys.hn_ops[l], rho);
                    icom *= Complex{0.0, sys.epsilon};
                    g += hs_inner(chi, icom).real();
                }
                ComplexMatrix dd;
                sys.model.n_derivative(l, cv + nu, rho, dd);
                g -= sys.epsilon * hs_inner(chi, dd).real();
                grad.value(node, nu + l) += g;
            }
        }
    }

    // running-cost derivatives
    for (int node = 0; node < c.num_nodes(); ++node) {
        const double t = times[node];
        const double st = shape_s(t, sys_.horizon, obj_.shape_cs);
        for (int l = 0; l < nu; ++l)
            grad.value(node, l) += 2.0 * obj_.p_u * st * c.value(node, l);
        for (int l = 0; l < nn; ++l) grad.value(node, nu + l) += obj_.p_n;
    }
    return grad;
}

OpenEvaluation evaluate_theta(const OpenProblem& p, const ControlGrid& c, CauchyCounter& counter) {
    const auto v = p.evaluate(c, counter);
    return OpenEvaluation{v.total, v.terminal, v.state_integral, v.control_integral};
}

ControlGrid gradient_theta(const OpenProblem& p, const ControlGrid& c, CauchyCounter& counter) {
    return p.gradient(c, counter);
}

std::array<ComplexMatrix, 3> gate_triple_initial_states(int n) {
    std::array<ComplexMatrix, 3> r{ComplexMatrix(n), ComplexMatrix(n), ComplexMatrix(n)};
    for (int i = 0; i < n; ++i) r[0](i, i) = 2.0 * (n - i) / (static_cast<double>(n) * (n + 1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r[1](i, j) = 1.0 / n;
    for (int i = 0; i < n; ++i) r[2](i, i) = 1.0 / n;
    return r;
}

}  // namespace qoc
