// qoc: batch front end for the gradient-projection quantum control toolkit.
//
//   qoc run --problem hadamard --case 3 --variant gpm2 --alpha 0.1 --beta 0.9 --out DIR
//   qoc scan --problem hadamard --case 3 --alphas 0.05,0.1 --betas 0,0.5 --out DIR
//   qoc gradcheck --problem werner2q --task keep --trials 10 --h 1e-5
//   qoc list-problems
//
// Exit codes: 0 success, 1 numerical failure, 2 usage error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "qoc/run_io.hpp"

namespace fs = std::filesystem;
using namespace qoc;

namespace {

struct RunOptions {
    std::string problem;
    std::string selector;  // case number or task name
    std::string variant;
    std::string search = "nm";
    double alpha = -1.0, beta = -1.0, xi = -1.0;
    int grid = 1000;
    double rtol = -1.0, atol = -1.0;
    int max_iter = -1;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string config_path;
    // scan extras
    std::string alphas, betas;
    int threads = 0;
};

void apply_config_file(RunOptions& opt, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw CLI::ValidationError("--config", "cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(is);
    auto set_if = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    set_if("problem", opt.problem);
    set_if("case", opt.selector);
    set_if("task", opt.selector);
    set_if("variant", opt.variant);
    set_if("search", opt.search);
    set_if("alpha", opt.alpha);
    set_if("beta", opt.beta);
    set_if("xi", opt.xi);
    set_if("grid", opt.grid);
    set_if("rtol", opt.rtol);
    set_if("atol", opt.atol);
    set_if("max_iter", opt.max_iter);
    set_if("seed", opt.seed);
    set_if("out", opt.out_dir);
    set_if("alphas", opt.alphas);
    set_if("betas", opt.betas);
    set_if("threads", opt.threads);
}

GPMConfig build_config(const ProblemSpec& spec, const RunOptions& opt) {
    GPMConfig cfg = spec.defaults;
    if (!opt.variant.empty()) {
        const auto v = parse_variant(opt.variant);
        if (!v) throw CLI::ValidationError("--variant", "unknown variant " + opt.variant);
        cfg.variant = *v;
    }
    if (opt.alpha >= 0.0) cfg.alpha = opt.alpha;
    if (opt.beta >= 0.0) cfg.beta = opt.beta;
    if (opt.xi >= 0.0) cfg.xi = opt.xi;
    if (opt.max_iter >= 0) cfg.max_iterations = opt.max_iter;
    cfg.search_method = opt.search == "gsa" ? SearchMethod::Anneal : SearchMethod::NelderMead;
    cfg.seed = opt.seed;
    return cfg;
}

ProblemSpec build_problem(const RunOptions& opt) {
    ProblemSpec spec = make_problem(opt.problem, opt.selector, opt.grid);
    if (opt.rtol > 0.0 || opt.atol > 0.0) {
        // rebuild the problem with overridden integrator tolerances
        IntegratorConfig ic;
        if (opt.rtol > 0.0) ic.rel_tol = opt.rtol;
        if (opt.atol > 0.0) ic.abs_tol = opt.atol;
        if (auto* cp = dynamic_cast<ClosedProblem*>(spec.problem.get()))
            spec.problem = std::make_shared<ClosedProblem>(cp->system(), cp->objective(),
                                                           cp->box(), ic);
        else if (auto* op = dynamic_cast<OpenProblem*>(spec.problem.get()))
            spec.problem =
                std::make_shared<OpenProblem>(op->system(), op->objective(), op->box(), ic);
    }
    return spec;
}

int cmd_run(const RunOptions& opt) {
    const ProblemSpec spec = build_problem(opt);
    const GPMConfig cfg = build_config(spec, opt);

    const auto t0 = std::chrono::steady_clock::now();
    const GPMResult result = gpm_run(*spec.problem, spec.initial_guess, cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!opt.out_dir.empty()) {
        fs::create_directories(opt.out_dir);
        write_trace_csv(result.trace, (fs::path(opt.out_dir) / "trace.csv").string());
        write_control_csv(result.control, (fs::path(opt.out_dir) / "controls.csv").string());
        write_trajectory_csv(spec, result.control,
                             (fs::path(opt.out_dir) / "trajectory.csv").string());
        write_text_file((fs::path(opt.out_dir) / "summary.json").string(),
                        summary_json(spec, cfg, result, opt.grid, wall));
    }
    std::cout << summary_json(spec, cfg, result, opt.grid, wall);
    if (result.stop_reason == StopReason::NumericalFailure) {
        std::cerr << "error: numerical failure during optimization\n";
        return 1;
    }
    return 0;
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::string cell;
    std::stringstream ss(csv);
    while (std::getline(ss, cell, ','))
        if (!cell.empty()) out.push_back(std::stod(cell));
    return out;
}

int cmd_scan(const RunOptions& opt) {
    std::vector<double> alphas = parse_list(opt.alphas);
    std::vector<double> betas = parse_list(opt.betas);
    if (alphas.empty()) alphas = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4};
    if (betas.empty()) betas = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

    struct Cell {
        double alpha, beta;
        bool converged = false;
        int iterations = 0;
        long solves = -1;  // sentinel for non-convergence
        double terminal = 0.0, objective = 0.0;
        bool jitter = false;
    };
    std::vector<Cell> cells;
    for (size_t i = 0; i < alphas.size(); ++i)
        for (size_t j = 0; j < betas.size(); ++j)
            cells.push_back({alphas[i], betas[j]});

    const int nthreads =
        opt.threads > 0 ? opt.threads
                        : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t idx = next.fetch_add(1);
            if (idx >= cells.size()) return;
            Cell& cell = cells[idx];
            RunOptions ro = opt;
            // per-cell deterministic seed from scan seed and grid position
            ro.seed = opt.seed * 1000003ull + idx;
            ProblemSpec spec = build_problem(ro);
            GPMConfig cfg = build_config(spec, ro);
            cfg.variant = cell.beta == 0.0 ? GPMVariant::Gpm1Fixed : GPMVariant::Gpm2Fixed;
            cfg.alpha = cell.alpha;
            cfg.beta = cell.beta;
            const GPMResult r = gpm_run(*spec.problem, spec.initial_guess, cfg);
            cell.converged = r.stop_reason == StopReason::ObjectiveThresholds;
            cell.iterations = r.iterations;
            if (cell.converged) cell.solves = r.cauchy_solves;
            cell.terminal = r.final_values.terminal;
            cell.objective = r.final_values.total;
            cell.jitter = jitter_report(r.control).flagged;
        }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ostringstream os;
    os << "alpha,beta,converged,iterations,cauchy_solves,terminal,objective,jitter\n";
    char buf[40];
    auto fmt = [&](double x) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return std::string(buf);
    };
    for (const auto& c : cells)
        os << fmt(c.alpha) << "," << fmt(c.beta) << "," << (c.converged ? 1 : 0) << ","
           << c.iterations << "," << c.solves << "," << fmt(c.terminal) << "," << fmt(c.objective)
           << "," << (c.jitter ? 1 : 0) << "\n";

    if (!opt.out_dir.empty()) {
        fs::create_directories(opt.out_dir);
        write_text_file((fs::path(opt.out_dir) / "scan.csv").string(), os.str());
    }
    std::cout << os.str();
    return 0;
}

int cmd_gradcheck(const RunOptions& opt, int trials, double h) {
    const ProblemSpec spec = build_problem(opt);
    const ControlProblem& p = *spec.problem;
    CauchyCounter counter;

    std::mt19937_64 rng(opt.seed + 12345);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    // random feasible control near the initial guess
    ControlGrid u = spec.initial_guess;
    for (auto& v : u.data()) v += 0.1 * unif(rng);
    u = project(u, p.box());

    const ControlGrid grad = p.gradient(u, counter);
    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        ControlGrid dir(u.horizon(), u.segments(), u.components());
        for (auto& v : dir.data()) v = unif(rng);
        // keep u +- h*dir feasible: zero the direction where the box is active
        for (int m = 0; m < u.num_nodes(); ++m) {
            const double t = u.node_time(m);
            for (int k = 0; k < u.components(); ++k) {
                const double lo = p.box().lo(k, t), hi = p.box().hi(k, t);
                if (u.value(m, k) - h <= lo || u.value(m, k) + h >= hi) dir.value(m, k) = 0.0;
            }
        }
        ControlGrid up = u, dn = u;
        for (size_t i = 0; i < u.data().size(); ++i) {
            up.data()[i] += h * dir.data()[i];
            dn.data()[i] -= h * dir.data()[i];
        }
        const double fd =
            (p.evaluate(up, counter).total - p.evaluate(dn, counter).total) / (2.0 * h);
        const double an = grid_inner(grad, dir);
        const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-12});
        worst = std::max(worst, rel);
        std::printf("trial %d: analytic % .10e  finite-diff % .10e  rel.err %.3e\n", trial, an,
                    fd, rel);
    }
    std::printf("max relative error over %d trials: %.3e (h = %g)\n", trials, worst, h);
    return worst <= 1e-3 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gradient-projection quantum optimal control"};
    app.require_subcommand(1);

    RunOptions opt;
    int trials = 10;
    double fd_h = 1e-5;

    auto add_common = [&](CLI::App* sub, bool needs_problem) {
        if (needs_problem) sub->add_option("--problem", opt.problem, "problem name")->required(false);
        sub->add_option("--case", opt.selector, "problem case number");
        sub->add_option("--task", opt.selector, "problem task name");
        sub->add_option("--variant", opt.variant, "gpm1|gpm1-search|gpm1-adapt|gpm2|gpm2-search|gpm3");
        sub->add_option("--search", opt.search, "nm|gsa line-search method");
        sub->add_option("--alpha", opt.alpha, "step size");
        sub->add_option("--beta", opt.beta, "inertial weight");
        sub->add_option("--xi", opt.xi, "second inertial weight (gpm3)");
        sub->add_option("--grid", opt.grid, "control grid segments");
        sub->add_option("--rtol", opt.rtol, "integrator relative tolerance");
        sub->add_option("--atol", opt.atol, "integrator absolute tolerance");
        sub->add_option("--max-iter", opt.max_iter, "iteration cap");
        sub->add_option("--seed", opt.seed, "rng seed");
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--config", opt.config_path, "JSON config file (flags override)");
    };

    auto* run = app.add_subcommand("run", "run one optimization");
    add_common(run, true);
    auto* scan = app.add_subcommand("scan", "run an (alpha, beta) grid scan");
    add_common(scan, true);
    scan->add_option("--alphas", opt.alphas, "comma-separated alpha values");
    scan->add_option("--betas", opt.betas, "comma-separated beta values");
    scan->add_option("--threads", opt.threads, "scan worker threads");
    auto* gc = app.add_subcommand("gradcheck", "finite-difference gradient audit");
    add_common(gc, true);
    gc->add_option("--trials", trials, "random directions");
    gc->add_option("--fd-step", fd_h, "finite-difference step");
    auto* lp = app.add_subcommand("list-problems", "print the problem catalog");
    (void)lp;

    // config file defaults are applied before parsing so flags override them
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config_file(opt, argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
        }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("list-problems")) {
            for (const auto& line : problem_catalog()) std::cout << line << "\n";
            return 0;
        }
        if (opt.problem.empty()) {
            std::cerr << "error: --problem is required\n";
            return 2;
        }
        if (app.got_subcommand("run")) return cmd_run(opt);
        if (app.got_subcommand("scan")) return cmd_scan(opt);
        if (app.got_subcommand("gradcheck")) return cmd_gradcheck(opt, trials, fd_h);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
