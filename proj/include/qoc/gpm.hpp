#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qoc/problem.hpp"
#include "qoc/search.hpp"

namespace qoc {

enum class GPMVariant { Gpm1Fixed, Gpm1Search, Gpm1Adaptive, Gpm2Fixed, Gpm2Search, Gpm3Fixed };
enum class SearchMethod { NelderMead, Anneal };
enum class StopReason { ObjectiveThresholds, DeltaPlateau, MaxIterations, NumericalFailure };

std::string to_string(GPMVariant v);
std::string to_string(StopReason r);
std::optional<GPMVariant> parse_variant(const std::string& s);

struct GPMConfig {
    GPMVariant variant = GPMVariant::Gpm1Fixed;
    double alpha = 0.1;
    double beta = 0.0;
    double xi = 0.0;

    // parameter search window for the 1d/2d variants
    double alpha_lo = 0.0, alpha_hi = 10.0;
    double beta_lo = 0.0, beta_hi = 0.8;
    bool shrink_beta_box = false;  // beta_hi_k+1 = beta_shrink * beta_hi_k, from beta_bar0
    double beta_bar0 = 0.9;
    double beta_shrink = 0.99;
    SearchMethod search_method = SearchMethod::NelderMead;
    int budget_1d = 30;
    int budget_2d = 60;
    std::uint64_t seed = 0;

    // adaptive one-step variant
    int adapt_warmup = 5;          // iterations of 1d search before fixing alpha
    double adapt_theta = 0.4;      // convex-combination weight
    double adapt_y_percent = 5.0;  // relative-worsening trigger, in percent
    bool adapt_reset_to_best = true;

    int max_iterations = 2000;
    double eps_stop_terminal = 1e-5;   // on J or I
    double eps_stop_objective = 1e-3;  // on Upsilon or Theta
    double eps_stop_delta = 1e-8;      // on |objective change|
    bool use_delta_stop = true;
};

struct IterationRecord {
    int k = 0;
    double objective = 0.0;
    double terminal = 0.0;
    double state_integral = 0.0;
    double control_integral = 0.0;
    long cauchy_count = 0;  // cumulative when this iterate was evaluated
    double bv = 0.0;
    double alpha_used = 0.0, beta_used = 0.0, xi_used = 0.0;  // step that produced this iterate
    double best_objective = 0.0;
};

struct GPMResult {
    ControlGrid control;
    ObjectiveValues final_values;
    std::vector<IterationRecord> trace;
    StopReason stop_reason = StopReason::MaxIterations;
    int iterations = 0;  // accepted updates
    long cauchy_solves = 0;
    bool initial_guess_projected = false;  // u0 violated the box and was projected
    double max_box_violation = 0.0;        // over all iterates; 0 by construction
};

// Projected update u <- Pr(u - a*grad + b*(u - prev) + xi*(prev - prev2)).
ControlGrid apply_update(const ControlGrid& u, const ControlGrid& grad, const ControlGrid* prev,
                         const ControlGrid* prev2, double alpha, double beta, double xi,
                         const BoxConstraint& box);

// One iteration at explicit parameters; consumes one gradient (2 Cauchy solves,
// more for multi-state objectives).
ControlGrid gpm_step(const ControlProblem& p, const ControlGrid& u, const ControlGrid* prev,
                     const ControlGrid* prev2, double alpha, double beta, double xi,
                     CauchyCounter& counter);

GPMResult gpm_run(const ControlProblem& p, const ControlGrid& u0, const GPMConfig& cfg);

// max over nodes/components of |u - Pr(u - alpha*grad)|; zero exactly at
// projected fixed points of the optimality condition.
double pmp_residual(const ControlProblem& p, const ControlGrid& u, double alpha,
                    CauchyCounter& counter);

// trapezoid inner product of grad(u) with a direction on the same grid
double first_variation(const ControlProblem& p, const ControlGrid& u, const ControlGrid& direction,
                       CauchyCounter& counter);
double grid_inner(const ControlGrid& a, const ControlGrid& b);

void write_trace_csv(const std::vector<IterationRecord>& trace, std::ostream& os);
void write_trace_csv(const std::vector<IterationRecord>& trace, const std::string& path);

}  // namespace qoc
