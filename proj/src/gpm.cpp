#include "qoc/gpm.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace qoc {

std::string to_string(GPMVariant v) {
    switch (v) {
        case GPMVariant::Gpm1Fixed: return "gpm1";
        case GPMVariant::Gpm1Search: return "gpm1-search";
        case GPMVariant::Gpm1Adaptive: return "gpm1-adapt";
        case GPMVariant::Gpm2Fixed: return "gpm2";
        case GPMVariant::Gpm2Search: return "gpm2-search";
        case GPMVariant::Gpm3Fixed: return "gpm3";
    }
    return "?";
}

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::ObjectiveThresholds: return "objective_thresholds";
        case StopReason::DeltaPlateau: return "delta_plateau";
        case StopReason::MaxIterations: return "max_iterations";
        case StopReason::NumericalFailure: return "numerical_failure";
    }
    return "?";
}

std::optional<GPMVariant> parse_variant(const std::string& s) {
    if (s == "gpm1") return GPMVariant::Gpm1Fixed;
    if (s == "gpm1-search") return GPMVariant::Gpm1Search;
    if (s == "gpm1-adapt") return GPMVariant::Gpm1Adaptive;
    if (s == "gpm2") return GPMVariant::Gpm2Fixed;
    if (s == "gpm2-search") return GPMVariant::Gpm2Search;
    if (s == "gpm3") return GPMVariant::Gpm3Fixed;
    return std::nullopt;
}

ControlGrid apply_update(const ControlGrid& u, const ControlGrid& grad, const ControlGrid* prev,
                         const ControlGrid* prev2, double alpha, double beta, double xi,
                         const BoxConstraint& box) {
    ControlGrid next = u;
    auto& v = next.data();
    const auto& g = grad.data();
    for (size_t i = 0; i < v.size(); ++i) v[i] -= alpha * g[i];
    if (beta != 0.0 && prev) {
        const auto& up = prev->data();
        const auto& uc = u.data();
        for (size_t i = 0; i < v.size(); ++i) v[i] += beta * (uc[i] - up[i]);
    }
    if (xi != 0.0 && prev && prev2) {
        const auto& up = prev->data();
        const auto& up2 = prev2->data();
        for (size_t i = 0; i < v.size(); ++i) v[i] += xi * (up[i] - up2[i]);
    }
    return project(next, box);
}

ControlGrid gpm_step(const ControlProblem& p, const ControlGrid& u, const ControlGrid* prev,
                     const ControlGrid* prev2, double alpha, double beta, double xi,
                     CauchyCounter& counter) {
    const ControlGrid grad = p.gradient(u, counter);
    return apply_update(u, grad, prev, prev2, alpha, beta, xi, p.box());
}

double grid_inner(const ControlGrid& a, const ControlGrid& b) {
    // trapezoid quadrature of sum_k a_k(t) b_k(t)
    double s = 0.0;
    const int last = a.segments();
    for (int m = 0; m <= last; ++m) {
        double dot = 0.0;
        for (int k = 0; k < a.components(); ++k) dot += a.value(m, k) * b.value(m, k);
        s += (m == 0 || m == last) ? 0.5 * dot : dot;
    }
    return s * a.dt();
}

double pmp_residual(const ControlProblem& p, const ControlGrid& u, double alpha,
                    CauchyCounter& counter) {
    const ControlGrid grad = p.gradient(u, counter);
    const ControlGrid mapped = apply_update(u, grad, nullptr, nullptr, alpha, 0.0, 0.0, p.box());
    return u.max_abs_diff(mapped);
}

double first_variation(const ControlProblem& p, const ControlGrid& u, const ControlGrid& direction,
                       CauchyCounter& counter) {
    return grid_inner(p.gradient(u, counter), direction);
}

namespace {

struct SearchOutcome {
    double alpha = 0.0;
    double beta = 0.0;
};

}  // namespace

GPMResult gpm_run(const ControlProblem& p, const ControlGrid& u0, const GPMConfig& cfg) {
    GPMResult res;
    CauchyCounter counter;

    const double pre_violation = p.box().max_violation(u0);
    res.initial_guess_projected = pre_violation > 0.0;
    ControlGrid u = res.initial_guess_projected ? project(u0, p.box()) : u0;

    ControlGrid u_prev, u_prev2;
    bool have_prev = false, have_prev2 = false;

    double best_obj = std::numeric_limits<double>::infinity();
    ControlGrid best_u = u, best_grad;
    bool have_best_grad = false;

    // adaptive-variant state
    std::vector<double> warmup_alphas;
    double alpha_adapt = cfg.alpha;
    bool adapt_fixed = false;

    double beta_bar = cfg.beta_bar0;
    double prev_obj = std::numeric_limits<double>::quiet_NaN();
    double pend_a = 0.0, pend_b = 0.0, pend_xi = 0.0;  // step that produced the current iterate
    res.stop_reason = StopReason::MaxIterations;

    for (int k = 0;; ++k) {
        ForwardSolution fwd;
        try {
            fwd = p.forward(u, counter);
        } catch (const std::exception&) {
            res.stop_reason = StopReason::NumericalFailure;
            break;
        }
        const ObjectiveValues vals = fwd.values;
        if (!std::isfinite(vals.total)) {
            res.stop_reason = StopReason::NumericalFailure;
            break;
        }

        if (vals.total < best_obj) {
            best_obj = vals.total;
            best_u = u;
            have_best_grad = false;
        }

        IterationRecord rec;
        rec.k = k;
        rec.objective = vals.total;
        rec.terminal = vals.terminal;
        rec.state_integral = vals.state_integral;
        rec.control_integral = vals.control_integral;
        rec.cauchy_count = counter.count();
        rec.bv = bv_metric(u);
        rec.alpha_used = pend_a;
        rec.beta_used = pend_b;
        rec.xi_used = pend_xi;
        rec.best_objective = best_obj;
        res.trace.push_back(rec);
        res.max_box_violation = std::max(res.max_box_violation, p.box().max_violation(u));
        res.iterations = k;
        res.final_values = vals;
        res.control = u;

        if (vals.terminal < cfg.eps_stop_terminal && vals.total < cfg.eps_stop_objective) {
            res.stop_reason = StopReason::ObjectiveThresholds;
            break;
        }
        if (cfg.use_delta_stop && k > 0 && std::abs(vals.total - prev_obj) < cfg.eps_stop_delta) {
            res.stop_reason = StopReason::DeltaPlateau;
            break;
        }
        if (k >= cfg.max_iterations) {
            res.stop_reason = StopReason::MaxIterations;
            break;
        }
        prev_obj = vals.total;

        ControlGrid grad;
        try {
            grad = p.gradient_from(fwd, u, counter);
        } catch (const std::exception&) {
            res.stop_reason = StopReason::NumericalFailure;
            break;
        }
        if (!have_best_grad && vals.total == best_obj) {
            best_grad = grad;
            have_best_grad = true;
        }

        double a = cfg.alpha, b = 0.0, xi = 0.0;
        switch (cfg.variant) {
            case GPMVariant::Gpm1Fixed:
                break;
            case GPMVariant::Gpm2Fixed:
                if (k >= 1) b = cfg.beta;
                break;
            case GPMVariant::Gpm3Fixed:
                if (k >= 1) b = cfg.beta;
                if (k >= 2) xi = cfg.xi;
                break;
            case GPMVariant::Gpm1Search: {
                SearchBox sb;
                sb.dims = 1;
                sb.lo[0] = cfg.alpha_lo;
                sb.hi[0] = cfg.alpha_hi;
                SearchBudget bud;
                bud.max_evals = cfg.budget_1d;
                auto phi = [&](const double* x) {
                    const ControlGrid trial =
                        apply_update(u, grad, nullptr, nullptr, x[0], 0.0, 0.0, p.box());
                    return p.evaluate(trial, counter).total;
                };
                const SearchResult sr =
                    cfg.search_method == SearchMethod::NelderMead
                        ? nelder_mead_box(phi, sb, bud)
                        : anneal_box(phi, sb, bud, cfg.seed + static_cast<std::uint64_t>(k));
                a = sr.argmin[0];
                break;
            }
            case GPMVariant::Gpm2Search: {
                if (k == 0) {
                    SearchBox sb;
                    sb.dims = 1;
                    sb.lo[0] = cfg.alpha_lo;
                    sb.hi[0] = cfg.alpha_hi;
                    SearchBudget bud;
                    bud.max_evals = cfg.budget_1d;
                    auto phi = [&](const double* x) {
                        const ControlGrid trial =
                            apply_update(u, grad, nullptr, nullptr, x[0], 0.0, 0.0, p.box());
                        return p.evaluate(trial, counter).total;
                    };
                    const SearchResult sr =
                        cfg.search_method == SearchMethod::NelderMead
                            ? nelder_mead_box(phi, sb, bud)
                            : anneal_box(phi, sb, bud, cfg.seed + static_cast<std::uint64_t>(k));
                    a = sr.argmin[0];
                } else {
                    SearchBox sb;
                    sb.dims = 2;
                    sb.lo = {cfg.alpha_lo, cfg.beta_lo};
                    sb.hi = {cfg.alpha_hi, cfg.shrink_beta_box ? 0.99 * beta_bar : cfg.beta_hi};
                    if (cfg.shrink_beta_box) beta_bar *= cfg.beta_shrink;
                    SearchBudget bud;
                    bud.max_evals = cfg.budget_2d;
                    auto phi = [&](const double* x) {
                        const ControlGrid trial =
                            apply_update(u, grad, &u_prev, nullptr, x[0], x[1], 0.0, p.box());
                        return p.evaluate(trial, counter).total;
                    };
                    const SearchResult sr =
                        cfg.search_method == SearchMethod::NelderMead
                            ? nelder_mead_box(phi, sb, bud)
                            : anneal_box(phi, sb, bud, cfg.seed + static_cast<std::uint64_t>(k));
                    a = sr.argmin[0];
                    b = sr.argmin[1];
                }
                break;
            }
            case GPMVariant::Gpm1Adaptive: {
                if (k < cfg.adapt_warmup) {
                    SearchBox sb;
                    sb.dims = 1;
                    sb.lo[0] = cfg.alpha_lo;
                    sb.hi[0] = cfg.alpha_hi;
                    SearchBudget bud;
                    bud.max_evals = cfg.budget_1d;
                    auto phi = [&](const double* x) {
                        const ControlGrid trial =
                            apply_update(u, grad, nullptr, nullptr, x[0], 0.0, 0.0, p.box());
                        return p.evaluate(trial, counter).total;
                    };
                    const SearchResult sr =
                        cfg.search_method == SearchMethod::NelderMead
                            ? nelder_mead_box(phi, sb, bud)
                            : anneal_box(phi, sb, bud, cfg.seed + static_cast<std::uint64_t>(k));
                    a = sr.argmin[0];
                    warmup_alphas.push_back(std::max(a, 1e-12));
                } else {
                    if (!adapt_fixed) {
                        double logsum = 0.0;
                        for (double w : warmup_alphas) logsum += std::log(w);
                        alpha_adapt = std::exp(logsum / warmup_alphas.size());
                        adapt_fixed = true;
                    }
                    // adapt when the current iterate is y% worse than the best seen
                    if (vals.total > 0.0 &&
                        100.0 * (vals.total - best_obj) / vals.total > cfg.adapt_y_percent) {
                        const double tau = best_obj / vals.total;
                        alpha_adapt = cfg.adapt_theta * alpha_adapt +
                                      (1.0 - cfg.adapt_theta) * tau * alpha_adapt;
                        if (cfg.adapt_reset_to_best && have_best_grad) {
                            u = best_u;
                            grad = best_grad;
                        }
                    }
                    a = alpha_adapt;
                }
                break;
            }
        }

        ControlGrid next = apply_update(u, grad, have_prev ? &u_prev : nullptr,
                                        have_prev2 ? &u_prev2 : nullptr, a, b, xi, p.box());
        pend_a = a;
        pend_b = b;
        pend_xi = xi;

        u_prev2 = std::move(u_prev);
        have_prev2 = have_prev;
        u_prev = std::move(u);
        have_prev = true;
        u = std::move(next);
    }

    res.cauchy_solves = counter.count();
    return res;
}

static std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_trace_csv(const std::vector<IterationRecord>& trace, std::ostream& os) {
    os << "k,objective,terminal,state_integral,control_integral,cauchy_count,bv,alpha,beta,xi,"
          "best_objective\n";
    for (const auto& r : trace) {
        os << r.k << "," << fmt17(r.objective) << "," << fmt17(r.terminal) << ","
           << fmt17(r.state_integral) << "," << fmt17(r.control_integral) << "," << r.cauchy_count
           << "," << fmt17(r.bv) << "," << fmt17(r.alpha_used) << "," << fmt17(r.beta_used) << ","
           << fmt17(r.xi_used) << "," << fmt17(r.best_objective) << "\n";
    }
}

void write_trace_csv(const std::vector<IterationRecord>& trace, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_trace_csv(trace, os);
}

}  // namespace qoc
