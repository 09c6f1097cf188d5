#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qoc/gpm.hpp"
#include "qoc/open_system.hpp"

namespace qoc {

struct ReferenceRun {
    std::string variant;
    double alpha = 0.0, beta = 0.0;
    int iterations = 0;
    long solves = 0;
};

struct ProblemSpec {
    std::string id;
    std::string title;
    std::shared_ptr<ControlProblem> problem;
    std::function<ControlGrid(int segments)> make_guess;
    ControlGrid initial_guess;  // at the construction grid resolution
    GPMConfig defaults;
    bool constrained = false;      // true when the box can actually bind
    bool sinc_envelope = false;    // envelope bounds force u(0) = u(T) = 0
    // fixed-step totals for the default configuration, used by benchmark tests
    std::vector<ReferenceRun> reference_runs;
};

ProblemSpec hadamard_problem(int case_id, int grid_segments = 1000);
ProblemSpec cnot_problem(int case_id, int grid_segments = 1000);
ProblemSpec bell_problem(int grid_segments = 1000);

enum class WernerTask { Keep, SteerKeep };
ProblemSpec werner_two_qubit_problem(WernerTask task, int grid_segments = 1000);

ProblemSpec qft_grk_problem(int grid_segments = 1000);
ProblemSpec qutrit_overlap_problem(int grid_segments = 1000);

enum class WhcTask { SteerKeepT3, SteerKeepT6, KeepT6 };
ProblemSpec whc_problem(WhcTask task, int grid_segments = 1000);

// (Tr(sigma) I - sigma^T) / (N - 1)
ComplexMatrix whc_map(const ComplexMatrix& sigma);

ComplexMatrix werner_state(double p);
ComplexMatrix hadamard_gate();
ComplexMatrix cnot_gate();
ComplexMatrix qft4_gate();

// Registry used by the CLI and bindings. `selector` is the case number or task
// name; empty selects the problem's single variant.
ProblemSpec make_problem(const std::string& name, const std::string& selector,
                         int grid_segments = 1000);
std::vector<std::string> problem_catalog();  // one description line per entry

}  // namespace qoc
