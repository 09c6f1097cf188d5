#include "qoc/run_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace qoc {

JitterReport jitter_report(const ControlGrid& g, double edge_fraction, double range_fraction) {
    JitterReport rep;
    double lo = g.value(0, 0), hi = lo;
    for (int m = 0; m < g.num_nodes(); ++m)
        for (int k = 0; k < g.components(); ++k) {
            lo = std::min(lo, g.value(m, k));
            hi = std::max(hi, g.value(m, k));
        }
    rep.range = hi - lo;
    const double t_edge = edge_fraction * g.horizon();
    for (int m = 0; m + 1 < g.num_nodes(); ++m) {
        const double t = g.node_time(m);
        if (t > t_edge && g.node_time(m + 1) < g.horizon() - t_edge) continue;
        for (int k = 0; k < g.components(); ++k)
            rep.edge_jump = std::max(rep.edge_jump, std::abs(g.value(m + 1, k) - g.value(m, k)));
    }
    rep.flagged = rep.range > 0.0 && rep.edge_jump > range_fraction * rep.range;
    return rep;
}

std::string summary_json(const ProblemSpec& spec, const GPMConfig& cfg, const GPMResult& result,
                         int grid_segments, double wall_seconds) {
    nlohmann::ordered_json j;
    j["problem"] = spec.id;
    j["variant"] = to_string(cfg.variant);
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["xi"] = cfg.xi;
    j["grid_segments"] = grid_segments;
    j["seed"] = cfg.seed;
    j["iterations"] = result.iterations;
    j["cauchy_solves"] = result.cauchy_solves;
    j["stop_reason"] = to_string(result.stop_reason);
    j["final"] = {
        {"objective", result.final_values.total},
        {"terminal", result.final_values.terminal},
        {"state_integral", result.final_values.state_integral},
        {"control_integral", result.final_values.control_integral},
        {"bv", result.trace.empty() ? 0.0 : result.trace.back().bv},
    };
    j["max_box_violation"] = result.max_box_violation;
    j["initial_guess_projected"] = result.initial_guess_projected;
    const auto jit = jitter_report(result.control);
    j["jitter"] = {{"edge_jump", jit.edge_jump}, {"range", jit.range}, {"flagged", jit.flagged}};
    j["wall_time_s"] = wall_seconds;
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << content;
}

void write_trajectory_csv(const ProblemSpec& spec, const ControlGrid& control,
                          const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    char buf[40];
    auto fmt = [&](double x) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return std::string(buf);
    };

    CauchyCounter counter;
    const auto fwd = spec.problem->forward(control, counter);
    const auto& traj = fwd.trajectories.front();

    if (const auto* open = dynamic_cast<const OpenProblem*>(spec.problem.get())) {
        const int n = open->system().dim;
        os << "t";
        for (int i = 1; i <= n; ++i) os << ",rho_" << i << i;
        os << ",dist2_target,entropy_vn,entropy_linear\n";
        const auto& obj = open->objective();
        const bool has_target = obj.kind == OpenObjectiveKind::SteerKeep ||
                                obj.kind == OpenObjectiveKind::Overlap ||
                                obj.kind == OpenObjectiveKind::Keep;
        const ComplexMatrix target =
            obj.kind == OpenObjectiveKind::Keep
                ? obj.rho0
                : (has_target ? obj.rho_target : ComplexMatrix(n));
        for (size_t m = 0; m < traj.times.size(); ++m) {
            const auto& rho = traj.states[m];
            os << fmt(traj.times[m]);
            for (int i = 0; i < n; ++i) os << "," << fmt(rho(i, i).real());
            os << "," << fmt(has_target ? hs_dist2(rho, target) : 0.0);
            os << "," << fmt(von_neumann_entropy(rho, 1e-4));
            os << "," << fmt(linear_entropy(rho, 1e-4));
            os << "\n";
        }
    } else {
        const int n = traj.states.front().dim();
        os << "t";
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) os << ",re_" << i << k << ",im_" << i << k;
        os << "\n";
        for (size_t m = 0; m < traj.times.size(); ++m) {
            os << fmt(traj.times[m]);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) {
                    os << "," << fmt(traj.states[m](i, k).real());
                    os << "," << fmt(traj.states[m](i, k).imag());
                }
            os << "\n";
        }
    }
}

}  // namespace qoc
