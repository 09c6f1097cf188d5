#pragma once

#include <array>
#include <cstdint>
#include <functional>

namespace qoc {

// 1- or 2-dimensional box for the step-parameter searches.
struct SearchBox {
    int dims = 1;
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{1.0, 1.0};
};

struct SearchBudget {
    int max_evals = 30;   // >= 3
    double x_tol = 1e-8;
    double f_tol = 1e-14;
};

struct SearchResult {
    std::array<double, 2> argmin{0.0, 0.0};
    double value = 0.0;
    int evals = 0;
    bool budget_exhausted = false;
};

using SearchObjective = std::function<double(const double*)>;

// Nelder-Mead with proposals clamped into the box; deterministic (fixed start
// simplex: box center plus 5%-of-range offsets). The center is always the
// first point evaluated, so the result is never worse than it.
SearchResult nelder_mead_box(const SearchObjective& f, const SearchBox& box,
                             const SearchBudget& budget);

// Simplified generalized annealing: heavy-tailed visiting steps (tail shaped by
// q_v), geometric temperature decay, uphill acceptance by Metropolis rule.
// Deterministic given the seed; the box center is evaluated first.
SearchResult anneal_box(const SearchObjective& f, const SearchBox& box, const SearchBudget& budget,
                        std::uint64_t seed, double q_v = 2.62);

}  // namespace qoc
