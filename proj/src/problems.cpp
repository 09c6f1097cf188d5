#include "qoc/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace qoc {

namespace {

constexpr double kUnboundedSurrogate = 1e6;  // "no box": a never-active bound

ComplexMatrix eye(int n) { return ComplexMatrix::identity(n); }

ControlGrid zero_guess(double horizon, int segments, int components) {
    return ControlGrid(horizon, segments, components);
}

// u_l(t) = amp * sinc(8 pi (t/T - 1/2)^3) on every component
ControlGrid sinc_guess(double horizon, int segments, int components, double amp) {
    return ControlGrid::from_function(horizon, segments, components, [&](double t, double* v) {
        const double val = amp * sinc_envelope(t, horizon, 1.0, 3);
        for (int k = 0; k < components; ++k) v[k] = val;
    });
}

GPMConfig gate_defaults() {
    GPMConfig cfg;
    cfg.variant = GPMVariant::Gpm2Fixed;
    cfg.alpha = 0.1;
    cfg.beta = 0.5;
    cfg.max_iterations = 2000;
    cfg.eps_stop_terminal = 1e-5;
    cfg.eps_stop_objective = 1e-3;
    cfg.eps_stop_delta = 1e-8;
    return cfg;
}

}  // namespace

ComplexMatrix hadamard_gate() {
    const double s = 1.0 / std::sqrt(2.0);
    return ComplexMatrix(2, {s, s, s, -s});
}

ComplexMatrix cnot_gate() {
    return ComplexMatrix(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
}

ComplexMatrix qft4_gate() {
    const Complex i{0.0, 1.0};
    ComplexMatrix w(4, {1, 1,  1,  1,   //
                        1, i,  -1, -i,  //
                        1, -1, 1,  -1,  //
                        1, -i, -1, i});
    w *= Complex{0.5, 0.0};
    return w;
}

ComplexMatrix werner_state(double p) {
    ComplexMatrix r(4);
    r(0, 0) = (1.0 - p) / 4.0;
    r(3, 3) = (1.0 - p) / 4.0;
    r(1, 1) = (1.0 + p) / 4.0;
    r(2, 2) = (1.0 + p) / 4.0;
    r(1, 2) = -p / 2.0;
    r(2, 1) = -p / 2.0;
    return r;
}

ComplexMatrix whc_map(const ComplexMatrix& sigma) {
    const int n = sigma.dim();
    if (n < 2) throw std::invalid_argument("whc_map: dimension must exceed 1");
    ComplexMatrix r = sigma.transposed();
    r *= Complex{-1.0, 0.0};
    r.add_scaled(sigma.trace(), eye(n));
    r *= Complex{1.0 / (n - 1), 0.0};
    return r;
}

ProblemSpec hadamard_problem(int case_id, int grid_segments) {
    if (case_id < 1 || case_id > 5) throw std::invalid_argument("hadamard case must be 1..5");
    const double horizon = 1.5, omega_z = 1.0, omega_drive = 1.0;

    ClosedSystem sys;
    sys.dim = 2;
    sys.h0 = pauli_z();
    sys.h0 *= Complex{omega_z, 0.0};
    sys.couplings = {
        {pauli_x(), [=](double t) { return 2.0 * std::cos(omega_drive * t); }},
        {pauli_x(), [=](double t) { return 2.0 * std::sin(omega_drive * t); }},
    };
    sys.horizon = horizon;

    ClosedObjective obj;
    obj.kind = ClosedObjectiveKind::Gate;
    obj.gate = hadamard_gate();
    obj.shape_cs = 25.0;

    double c_max = 0.0;
    switch (case_id) {
        case 1: break;
        case 2: c_max = 1.0; break;
        case 3: c_max = 1.0; obj.penalty = 1e-3; break;
        case 4: c_max = 0.6; obj.penalty = 8e-3; break;
        case 5: break;
    }
    const bool enveloped = case_id >= 2 && case_id <= 4;
    BoxConstraint box = enveloped
                            ? BoxConstraint::symmetric_sinc(2, horizon, c_max, 3)
                            : BoxConstraint::constant(2, -kUnboundedSurrogate, kUnboundedSurrogate);

    ProblemSpec spec;
    spec.id = "hadamard" + std::to_string(case_id);
    spec.title = "Hadamard gate, one qubit (case " + std::to_string(case_id) + ")";
    spec.problem = std::make_shared<ClosedProblem>(sys, obj, box);
    spec.make_guess = [horizon, case_id](int m) {
        if (case_id == 5) return sinc_guess(horizon, m, 2, -1.0);
        return zero_guess(horizon, m, 2);
    };
    spec.initial_guess = spec.make_guess(grid_segments);
    spec.defaults = gate_defaults();
    spec.constrained = enveloped;
    spec.sinc_envelope = enveloped;
    if (case_id <= 4) {
        static constexpr int it1[] = {39, 53, 657, 740};
        static constexpr long sv1[] = {79, 107, 1315, 1481};
        static constexpr int it2[] = {14, 21, 330, 379};
        static constexpr long sv2[] = {29, 43, 661, 759};
        spec.reference_runs = {
            {"gpm1", 0.1, 0.0, it1[case_id - 1], sv1[case_id - 1]},
            {"gpm2", 0.1, 0.5, it2[case_id - 1], sv2[case_id - 1]},
        };
    }
    return spec;
}

namespace {

// shared two-qubit superconducting model of the gate problems
ClosedSystem two_qubit_system(double horizon) {
    const double omega1 = 1.0, omega2 = 0.2, coupling = 0.08;  // |omega1 - omega2| / 10
    const ComplexMatrix z1 = kron(pauli_z(), eye(2));
    const ComplexMatrix z2 = kron(eye(2), pauli_z());
    const ComplexMatrix x1x2 = kron(pauli_x(), pauli_x());
    const ComplexMatrix x2 = kron(eye(2), pauli_x());

    ClosedSystem sys;
    sys.dim = 4;
    sys.h0 = ComplexMatrix(4);
    sys.h0.add_scaled(Complex{omega1, 0.0}, z1);
    sys.h0.add_scaled(Complex{omega2, 0.0}, z2);
    sys.h0.add_scaled(Complex{coupling, 0.0}, x1x2);
    sys.couplings = {
        {x2, [=](double t) { return std::cos(omega1 * t); }},
        {x2, [=](double t) { return std::sin(omega1 * t); }},
        {x2, [=](double t) { return std::cos(omega2 * t); }},
        {x2, [=](double t) { return std::sin(omega2 * t); }},
    };
    sys.horizon = horizon;
    return sys;
}

}  // namespace

ProblemSpec cnot_problem(int case_id, int grid_segments) {
    if (case_id < 1 || case_id > 2) throw std::invalid_argument("cnot case must be 1..2");
    const double horizon = 20.0;
    ClosedSystem sys = two_qubit_system(horizon);

    ClosedObjective obj;
    obj.kind = ClosedObjectiveKind::Gate;
    obj.gate = cnot_gate();
    obj.shape_cs = 25.0;

    BoxConstraint box =
        case_id == 2 ? BoxConstraint::symmetric_sinc(4, horizon, 3.0, 3)
                     : BoxConstraint::constant(4, -kUnboundedSurrogate, kUnboundedSurrogate);
    if (case_id == 2) obj.penalty = 1e-3;

    ProblemSpec spec;
    spec.id = "cnot" + std::to_string(case_id);
    spec.title = "CNOT gate, two qubits (case " + std::to_string(case_id) + ")";
    spec.problem = std::make_shared<ClosedProblem>(sys, obj, box);
    spec.make_guess = [horizon](int m) { return zero_guess(horizon, m, 4); };
    spec.initial_guess = spec.make_guess(grid_segments);
    spec.defaults = gate_defaults();
    spec.defaults.beta = 0.95;
    spec.constrained = case_id == 2;
    spec.sinc_envelope = case_id == 2;
    return spec;
}

ProblemSpec bell_problem(int grid_segments) {
    const double horizon = 15.0;
    ClosedSystem sys = two_qubit_system(horizon);

    ClosedObjective obj;
    obj.kind = ClosedObjectiveKind::StateTransfer;
    obj.psi0 = {1, 0, 0, 0};
    const double s = 1.0 / std::sqrt(2.0);
    obj.psi_target = {s, 0, 0, s};
    obj.penalty = 1e-4;
    obj.shape_cs = 25.0;

    ProblemSpec spec;
    spec.id = "bell";
    spec.title = "Bell state transfer, two qubits";
    spec.problem = std::make_shared<ClosedProblem>(
        sys, obj, BoxConstraint::symmetric_sinc(4, horizon, 5.0, 3));
    spec.make_guess = [horizon](int m) { return sinc_guess(horizon, m, 4, 0.2); };
    spec.initial_guess = spec.make_guess(grid_segments);
    spec.defaults = gate_defaults();
    spec.defaults.alpha = 0.11;
    spec.defaults.beta = 0.97;
    spec.constrained = true;
    spec.sinc_envelope = true;
    return spec;
}

namespace {

// open two-qubit system with one coherent and two incoherent controls
OpenSystem open_two_qubit_system(double horizon) {
    const double omega1 = 1.0, omega2 = 1.2;
    const double lambda1 = 0.6, lambda2 = 0.8;
    const double rate1 = 0.8, rate2 = 1.0;
    const double theta = M_PI / 4.0, phi = M_PI / 2.0;

    ComplexMatrix q(2);
    q.add_scaled(Complex{std::sin(theta) * std::cos(phi), 0.0}, pauli_x());
    q.add_scaled(Complex{std::sin(theta) * std::sin(phi), 0.0}, pauli_y());
    q.add_scaled(Complex{std::cos(theta), 0.0}, pauli_z());

    // lowering operator in this model's convention
    const ComplexMatrix sigma_minus(2, {0, 1, 0, 0});

    OpenSystem sys;
    sys.dim = 4;
    sys.h0 = ComplexMatrix(4);
    sys.h0.add_scaled(Complex{0.5 * omega1, 0.0}, kron(pauli_z(), eye(2)));
    sys.h0.add_scaled(Complex{0.5 * omega2, 0.0}, kron(eye(2), pauli_z()));
    ComplexMatrix v = kron(q, eye(2)) + kron(eye(2), q);
    sys.h_controls = {{v, nullptr}};
    ComplexMatrix hn1 = kron(pauli_z(), eye(2));
    hn1 *= Complex{lambda1, 0.0};
    ComplexMatrix hn2 = kron(eye(2), pauli_z());
    hn2 *= Complex{lambda2, 0.0};
    sys.hn_ops = {hn1, hn2};
    sys.channels = {{kron(sigma_minus, eye(2)), rate1}, {kron(eye(2), sigma_minus), rate2}};
    sys.epsilon = 0.25;
    sys.horizon = horizon;
    sys.finalize();
    return sys;
}

GPMConfig werner_defaults() {
    GPMConfig cfg;
    cfg.variant = GPMVariant::Gpm2Fixed;
    cfg.alpha = 10.0;
    cfg.beta = 0.95;
    cfg.max_iterations = 2000;
    cfg.eps_stop_terminal = 0.008;
    cfg.eps_stop_objective = 0.015;
    cfg.eps_stop_delta = 1e-10;
    return cfg;
}

}  // namespace

ProblemSpec werner_two_qubit_problem(WernerTask task, int grid_segments) {
    const double horizon = 6.0;
    OpenSystem sys = open_two_qubit_system(horizon);

    OpenObjective obj;
    obj.p_rho = 1.0;
    obj.p_u = 0.0;
    obj.p_n = 0.0;
    if (task == WernerTask::Keep) {
        obj.kind = OpenObjectiveKind::Keep;
        obj.rho0 = werner_state(0.1);
        obj.sigma = PiecewiseWeight::constant(1.0);
    } else {
        obj.kind = OpenObjectiveKind::SteerKeep;
        obj.rho0 = ComplexMatrix(4);
        obj.rho0(2, 2) = 0.2;
        obj.rho0(3, 3) = 0.8;
        obj.rho_target = werner_state(0.1);
        obj.sigma = PiecewiseWeight::ramp(0.5, 1.0);
    }

    BoxConstraint box = BoxConstraint::per_component(
        {{-35.0, 35.0}, {0.0, 35.0}, {0.0, 35.0}});

    ProblemSpec spec;
    spec.id = task == WernerTask::Keep ? "werner2q-keep" : "werner2q-steer";
    spec.title = task == WernerTask::Keep ? "Werner state keeping, open two-qubit system"
                                          : "Werner state steering-keeping, open two-qubit system";
    spec.problem = std::make_shared<OpenProblem>(sys, obj, box);
    spec.make_guess = [horizon](int m) {
        return ControlGrid::from_function(horizon, m, 3, [](double, double* v) {
            v[0] = 1.0;
            v[1] = 0.0;
            v[2] = 0.0;
        });
    };
    spec.initial_guess = spec.make_guess(grid_segments);
    spec.defaults = werner_defaults();
    spec.constrained = true;
    return spec;
}

ProblemSpec qft_grk_problem(int grid_segments) {
    const double horizon = 1.0;
    OpenSystem sys = open_two_qubit_system(horizon);

    OpenObjective obj;
    obj.kind = OpenObjectiveKind::GateTriple;
    obj.gate = qft4_gate();
    obj.triple_initials = gate_triple_initial_states(4);
    obj.p_u = 1e-4;
    obj.p_n = 0.0;
    obj.shape_cs = 25.0;

    BoxConstraint box = BoxConstraint::per_component(
        {{-20.0, 20.0}, {0.0, 5.0}, {0.0, 5.0}});

    ProblemSpec spec;
    spec.id = "qft-grk";
    spec.title = "QFT gate via three-state objective, open two-qubit system";
    spec.problem = std::make_shared<OpenProblem>(sys, obj, box);
    spec.make_guess = [horizon](int m) {
        return ControlGrid::from_function(horizon, m, 3, [horizon](double t, double* v) {
            v[0] = 2.0 * std::sin(2.0 * M_PI * t / horizon);
            v[1] = 0.0;
            v[2] = 0.0;
        });
    };
    spec.initial_guess = spec.make_guess(grid_segments);
    spec.defaults = gate_defaults();
    spec.defaults.alpha = 0.1;
    spec.defaults.beta = 0.7;
    spec.defaults.eps_stop_terminal = 1e-4;
    spec.defaults.eps_stop_objective = 1e-3;
    spec.defaults.eps_stop_delta = 1e-10;
    spec.constrained = true;
    return spec;
}

namespace {

// open qutrit Lambda-system: levels 1,2 couple to 3, decay 3->1 and 3->2
OpenSystem qutrit_system(double horizon) {
    const double e2 = 1.0, e3 = 2.5, v13 = 1.0, v23 = 1.7;
    const double c13 = 0.4, c23 = 0.2;

    OpenSystem sys;
    sys.dim = 3;
    sys.h0 = ComplexMatrix(3);
    sys.h0(1, 1) = e2;
    sys.h0(2, 2) = e3;
    ComplexMatrix v(3);
    v(0, 2) = v13;
    v(2, 0) = v13;
    v(1, 2) = v23;
    v(2, 1) = v23;
    sys.h_controls = {{v, nullptr}};
    ComplexMatrix a13(3), a23(3);
    a13(0, 2) = v13;
    a23(1, 2) = v23;
    sys.channels = {{a13, c13}, {a23, c23}};
    sys.epsilon = 1.0;
    sys.horizon = horizon;
    sys.finalize();
    return sys;
}

ControlGrid qutrit_guess(double horizon, int m) {
    return ControlGrid::from_function(horizon, m, 3, [](double, double* v) {
        v[0] = 1.0;
        v[1] = 0.0;
        v[2] = 0.0;
    });
}

}  // namespace

ProblemSpec qutrit_overlap_problem(int grid_segments) {
    const double horizon = 20.0;
    OpenSystem sys = qutrit_system(horizon);

    OpenObjective obj;
    obj.kind = OpenObjectiveKind::Overlap;
    obj.rho0 = ComplexMatrix(3);
    obj.rho0(0, 0) = 0.7;
    obj.rho0(1, 1) = 0.3;
    obj.rho_target = ComplexMatrix(3);
    obj.rho_target(0, 0) = 0.2;
    obj.rho_target(1, 1) = 0.8;
    obj.overlap_bound = 0.8;
    obj.sigma = PiecewiseWeight::step(0.7 * horizon);
    obj.p_rho = 5.0;
    obj.p_u = 1e-5;
    obj.p_n = 1e-3;

    BoxConstraint box = BoxConstraint::per_component(
        {{-20.0, 20.0}, {0.0, 20.0}, {0.0, 20.0}});

    ProblemSpec spec;
    spec.id = "qutrit-overlap";
    spec.title = "Final-overlap maximization, open qutrit system";
    spec.problem = std::make_shared<OpenProblem>(sys, obj, box);
    spec.make_guess = [horizon](int m) { return qutrit_guess(horizon, m); };
    spec.initial_guess = spec.make_guess(grid_segments);
    spec.defaults = gate_defaults();
    spec.defaults.alpha = 2.0;
    spec.defaults.beta = 0.9;
    spec.defaults.eps_stop_terminal = 1.2e-5;
    spec.defaults.eps_stop_objective = 0.01;
    spec.defaults.eps_stop_delta = 1e-12;
    spec.constrained = true;
    return spec;
}

ProblemSpec whc_problem(WhcTask task, int grid_segments) {
    const double horizon = task == WhcTask::SteerKeepT3 ? 3.0 : 6.0;
    OpenSystem sys = qutrit_system(horizon);

    ComplexMatrix rho_init(3);
    rho_init(1, 1) = 0.5;
    rho_init(2, 2) = 0.5;
    const ComplexMatrix rho_mapped = whc_map(rho_init);  // diag(1/2, 1/4, 1/4)

    OpenObjective obj;
    obj.p_u = 1e-5;
    obj.p_n = 1e-3;
    switch (task) {
        case WhcTask::SteerKeepT3:
            obj.kind = OpenObjectiveKind::SteerKeep;
            obj.rho0 = rho_init;
            obj.rho_target = rho_mapped;
            obj.sigma = PiecewiseWeight::ramp(1.0, 2.0);
            obj.p_rho = 30.0;
            break;
        case WhcTask::SteerKeepT6:
            obj.kind = OpenObjectiveKind::SteerKeep;
            obj.rho0 = rho_init;
            obj.rho_target = rho_mapped;
            obj.sigma = PiecewiseWeight::ramp(1.0, 2.0);
            obj.p_rho = 20.0;
            break;
        case WhcTask::KeepT6:
            obj.kind = OpenObjectiveKind::Keep;
            obj.rho0 = rho_mapped;
            obj.sigma = PiecewiseWeight::constant(1.0);
            obj.p_rho = 10.0;
            break;
    }

    BoxConstraint box = BoxConstraint::per_component(
        {{-30.0, 30.0}, {0.0, 30.0}, {0.0, 30.0}});

    ProblemSpec spec;
    switch (task) {
        case WhcTask::SteerKeepT3: spec.id = "whc-steer3"; break;
        case WhcTask::SteerKeepT6: spec.id = "whc-steer6"; break;
        case WhcTask::KeepT6: spec.id = "whc-keep"; break;
    }
    spec.title = "Werner-Holevo channel simulation, qutrit (" + spec.id + ")";
    spec.problem = std::make_shared<OpenProblem>(sys, obj, box);
    spec.make_guess = [horizon](int m) { return qutrit_guess(horizon, m); };
    spec.initial_guess = spec.make_guess(grid_segments);
    spec.defaults = gate_defaults();
    spec.defaults.variant = GPMVariant::Gpm3Fixed;
    spec.defaults.alpha = 1.0;
    spec.defaults.beta = 0.6;
    spec.defaults.xi = 0.3;
    spec.defaults.eps_stop_terminal = 1e-4;
    spec.defaults.eps_stop_objective = 0.01;
    spec.defaults.eps_stop_delta = 1e-10;
    spec.constrained = true;
    return spec;
}

ProblemSpec make_problem(const std::string& name, const std::string& selector, int grid_segments) {
    auto want_case = [&](int lo, int hi) {
        if (selector.empty()) return lo;
        const int c = std::stoi(selector);
        if (c < lo || c > hi) throw std::invalid_argument("case out of range for " + name);
        return c;
    };
    if (name == "hadamard") return hadamard_problem(want_case(1, 5), grid_segments);
    if (name == "cnot") return cnot_problem(want_case(1, 2), grid_segments);
    if (name == "bell") return bell_problem(grid_segments);
    if (name == "werner2q") {
        if (selector == "keep" || selector.empty())
            return werner_two_qubit_problem(WernerTask::Keep, grid_segments);
        if (selector == "steer_keep" || selector == "steer")
            return werner_two_qubit_problem(WernerTask::SteerKeep, grid_segments);
        throw std::invalid_argument("werner2q task must be keep|steer_keep");
    }
    if (name == "qft_grk" || name == "qft-grk") return qft_grk_problem(grid_segments);
    if (name == "qutrit_overlap" || name == "qutrit-overlap")
        return qutrit_overlap_problem(grid_segments);
    if (name == "whc") {
        if (selector == "steer_keep_T3" || selector.empty())
            return whc_problem(WhcTask::SteerKeepT3, grid_segments);
        if (selector == "steer_keep_T6") return whc_problem(WhcTask::SteerKeepT6, grid_segments);
        if (selector == "keep_T6") return whc_problem(WhcTask::KeepT6, grid_segments);
        throw std::invalid_argument("whc task must be steer_keep_T3|steer_keep_T6|keep_T6");
    }
    throw std::invalid_argument("unknown problem: " + name);
}

std::vector<std::string> problem_catalog() {
    std::vector<std::string> lines;
    auto add = [&](const ProblemSpec& s, const std::string& name, const std::string& sel) {
        const auto* cp = dynamic_cast<const ClosedProblem*>(s.problem.get());
        const int dim = cp ? cp->system().dim
                           : dynamic_cast<const OpenProblem*>(s.problem.get())->system().dim;
        std::string line = name;
        if (!sel.empty()) line += " --case/--task " + sel;
        line += "  N=" + std::to_string(dim) + "  T=" + std::to_string(s.problem->horizon()) +
                "  default " + to_string(s.defaults.variant) +
                " alpha=" + std::to_string(s.defaults.alpha);
        if (s.defaults.variant != GPMVariant::Gpm1Fixed)
            line += " beta=" + std::to_string(s.defaults.beta);
        if (s.defaults.variant == GPMVariant::Gpm3Fixed)
            line += " xi=" + std::to_string(s.defaults.xi);
        lines.push_back(line);
    };
    // tiny grids keep the catalog cheap to build
    for (int c = 1; c <= 5; ++c) add(hadamard_problem(c, 10), "hadamard", std::to_string(c));
    for (int c = 1; c <= 2; ++c) add(cnot_problem(c, 10), "cnot", std::to_string(c));
    add(bell_problem(10), "bell", "");
    add(werner_two_qubit_problem(WernerTask::Keep, 10), "werner2q", "keep");
    add(werner_two_qubit_problem(WernerTask::SteerKeep, 10), "werner2q", "steer_keep");
    add(qft_grk_problem(10), "qft_grk", "");
    add(qutrit_overlap_problem(10), "qutrit_overlap", "");
    add(whc_problem(WhcTask::SteerKeepT3, 10), "whc", "steer_keep_T3");
    add(whc_problem(WhcTask::SteerKeepT6, 10), "whc", "steer_keep_T6");
    add(whc_problem(WhcTask::KeepT6, 10), "whc", "keep_T6");
    return lines;
}

}  // namespace qoc
