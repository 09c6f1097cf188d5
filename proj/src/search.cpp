#include "qoc/search.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace qoc {

namespace {

void clamp_into(const SearchBox& box, double* x) {
    for (int d = 0; d < box.dims; ++d) x[d] = std::clamp(x[d], box.lo[d], box.hi[d]);
}

}  // namespace

SearchResult nelder_mead_box(const SearchObjective& f, const SearchBox& box,
                             const SearchBudget& budget) {
    if (budget.max_evals < 3) throw std::invalid_argument("search budget must be >= 3");
    const int n = box.dims;
    using Point = std::array<double, 2>;

    SearchResult res;
    int evals = 0;
    auto eval = [&](Point& p) {
        clamp_into(box, p.data());
        ++evals;
        const double v = f(p.data());
        if (v < res.value || evals == 1) {
            res.value = v;
            res.argmin = p;
        }
        return v;
    };

    // start simplex: center, then 5%-of-range offsets per dimension
    std::vector<Point> x(n + 1);
    std::vector<double> fx(n + 1);
    Point center{0.0, 0.0};
    for (int d = 0; d < n; ++d) center[d] = 0.5 * (box.lo[d] + box.hi[d]);
    x[0] = center;
    fx[0] = eval(x[0]);
    for (int d = 0; d < n; ++d) {
        x[d + 1] = center;
        x[d + 1][d] += 0.05 * (box.hi[d] - box.lo[d]);
        if (evals >= budget.max_evals) break;
        fx[d + 1] = eval(x[d + 1]);
    }

    const double refl = 1.0, expa = 2.0, contr = 0.5, shrink = 0.5;
    while (evals < budget.max_evals) {
        // order vertices
        std::vector<int> idx(n + 1);
        for (int i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fx[a] < fx[b]; });
        {
            std::vector<Point> xs(n + 1);
            std::vector<double> fs(n + 1);
            for (int i = 0; i <= n; ++i) {
                xs[i] = x[idx[i]];
                fs[i] = fx[idx[i]];
            }
            x = std::move(xs);
            fx = std::move(fs);
        }
        double spread = 0.0;
        for (int d = 0; d < n; ++d) spread = std::max(spread, std::abs(x[n][d] - x[0][d]));
        if (spread < budget.x_tol && std::abs(fx[n] - fx[0]) < budget.f_tol) break;

        Point c{0.0, 0.0};  // centroid without the worst vertex
        for (int i = 0; i < n; ++i)
            for (int d = 0; d < n; ++d) c[d] += x[i][d] / n;

        Point xr = c;
        for (int d = 0; d < n; ++d) xr[d] += refl * (c[d] - x[n][d]);
        const double fr = eval(xr);

        if (fr < fx[0]) {
            if (evals >= budget.max_evals) break;
            Point xe = c;
            for (int d = 0; d < n; ++d) xe[d] += expa * (xr[d] - c[d]);
            const double fe = eval(xe);
            if (fe < fr) {
                x[n] = xe;
                fx[n] = fe;
            } else {
                x[n] = xr;
                fx[n] = fr;
            }
        } else if (fr < fx[n - 1]) {
            x[n] = xr;
            fx[n] = fr;
        } else {
            if (evals >= budget.max_evals) break;
            Point xc = c;
            const bool outside = fr < fx[n];
            const Point& towards = outside ? xr : x[n];
            for (int d = 0; d < n; ++d) xc[d] = c[d] + contr * (towards[d] - c[d]);
            const double fc = eval(xc);
            if (fc < std::min(fr, fx[n])) {
                x[n] = xc;
                fx[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    if (evals >= budget.max_evals) break;
                    for (int d = 0; d < n; ++d) x[i][d] = x[0][d] + shrink * (x[i][d] - x[0][d]);
                    fx[i] = eval(x[i]);
                }
            }
        }
    }
    res.evals = evals;
    res.budget_exhausted = evals >= budget.max_evals;
    return res;
}

SearchResult anneal_box(const SearchObjective& f, const SearchBox& box, const SearchBudget& budget,
                        std::uint64_t seed, double q_v) {
    if (budget.max_evals < 3) throw std::invalid_argument("search budget must be >= 3");
    const int n = box.dims;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    SearchResult res;
    int evals = 0;
    auto eval = [&](const double* p) {
        ++evals;
        return f(p);
    };

    std::array<double, 2> x{0.0, 0.0};
    for (int d = 0; d < n; ++d) x[d] = 0.5 * (box.lo[d] + box.hi[d]);
    double fx = eval(x.data());
    res.argmin = x;
    res.value = fx;

    const double tail = 1.0 / (3.0 - q_v);  // q_v -> 3 gives ever heavier tails
    const double cool = 0.95;
    const double t_accept0 = std::abs(fx) + 1.0;
    double t_visit = 0.5;

    int iter = 0;
    while (evals < budget.max_evals) {
        const double t_accept = t_accept0 * std::pow(cool, iter);
        std::array<double, 2> y = x;
        for (int d = 0; d < n; ++d) {
            const double w = std::tan(M_PI * (unif(rng) - 0.5));  // Cauchy core
            const double step = std::copysign(std::pow(std::abs(w), tail), w);
            y[d] += t_visit * (box.hi[d] - box.lo[d]) * step;
        }
        clamp_into(box, y.data());
        const double fy = eval(y.data());
        if (fy < res.value) {
            res.value = fy;
            res.argmin = y;
        }
        if (fy <= fx || unif(rng) < std::exp(-(fy - fx) / t_accept)) {
            x = y;
            fx = fy;
        }
        t_visit = std::max(t_visit * cool, 1e-4);
        ++iter;
    }
    res.evals = evals;
    res.budget_exhausted = true;
    return res;
}

}  // namespace qoc
