#include "qoc/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qoc {

void MatrixTrajectory::at(double t, ComplexMatrix& out) const {
    const size_t n = times.size();
    if (n == 0) throw std::runtime_error("trajectory is empty");
    if (t <= times.front()) {
        out = states.front();
        return;
    }
    if (t >= times.back()) {
        out = states.back();
        return;
    }
    size_t i;
    const double h0 = times[1] - times[0];
    // uniform grids dominate; fall back to binary search otherwise
    i = std::min(static_cast<size_t>((t - times.front()) / h0), n - 2);
    if (!(times[i] <= t && t <= times[i + 1]))
        i = static_cast<size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin()) - 1;
    const double theta = (t - times[i]) / (times[i + 1] - times[i]);
    out = states[i];
    out *= (1.0 - theta);
    out.add_scaled(theta, states[i + 1]);
}

ComplexMatrix MatrixTrajectory::at(double t) const {
    ComplexMatrix out;
    at(t, out);
    return out;
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// difference between 5th- and 4th-order weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights (Hairer's contd5)
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

using Rhs = std::function<void(double t, const ComplexMatrix& x, ComplexMatrix& dx)>;

double error_norm(const ComplexMatrix& err, const ComplexMatrix& y0, const ComplexMatrix& y1,
                  double atol, double rtol) {
    double s = 0.0;
    const size_t n = err.data().size();
    for (size_t i = 0; i < n; ++i) {
        const double sc =
            atol + rtol * std::max(std::abs(y0.data()[i]), std::abs(y1.data()[i]));
        const double e = std::abs(err.data()[i]) / sc;
        s += e * e;
    }
    return std::sqrt(s / static_cast<double>(n));
}

// Core stepper on [0, span] with samples in ascending order.
MatrixTrajectory integrate(int dim, const Rhs& f, const ComplexMatrix& x0, double span,
                           const IntegratorConfig& cfg, const std::vector<double>& samples) {
    MatrixTrajectory out;
    out.times = samples;
    out.states.resize(samples.size());

    const double hmax = cfg.max_step > 0.0 ? cfg.max_step : span;
    double h = cfg.initial_step > 0.0 ? cfg.initial_step : span / 1000.0;
    h = std::min(h, hmax);
    const double hmin = 1e-14 * span;

    ComplexMatrix y = x0, ynew(dim), yerr(dim), ytmp(dim);
    ComplexMatrix k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    ComplexMatrix r2(dim), r3(dim), r4(dim), r5(dim);

    size_t next_sample = 0;
    double t = 0.0;
    while (next_sample < samples.size() && samples[next_sample] <= t + 1e-14 * span) {
        out.states[next_sample] = y;
        ++next_sample;
    }

    f(0.0, y, k1);
    bool rejected = false;
    int steps = 0;
    const int max_steps = 50'000'000;

    while (t < span - 1e-14 * span) {
        if (++steps > max_steps) throw std::runtime_error("integrator: step budget exhausted");
        h = std::min(h, span - t);

        // stages
        ytmp = y;
        ytmp.add_scaled(h * a21, k1);
        f(t + c2 * h, ytmp, k2);

        ytmp = y;
        ytmp.add_scaled(h * a31, k1);
        ytmp.add_scaled(h * a32, k2);
        f(t + c3 * h, ytmp, k3);

        ytmp = y;
        ytmp.add_scaled(h * a41, k1);
        ytmp.add_scaled(h * a42, k2);
        ytmp.add_scaled(h * a43, k3);
        f(t + c4 * h, ytmp, k4);

        ytmp = y;
        ytmp.add_scaled(h * a51, k1);
        ytmp.add_scaled(h * a52, k2);
        ytmp.add_scaled(h * a53, k3);
        ytmp.add_scaled(h * a54, k4);
        f(t + c5 * h, ytmp, k5);

        ytmp = y;
        ytmp.add_scaled(h * a61, k1);
        ytmp.add_scaled(h * a62, k2);
        ytmp.add_scaled(h * a63, k3);
        ytmp.add_scaled(h * a64, k4);
        ytmp.add_scaled(h * a65, k5);
        f(t + h, ytmp, k6);

        ynew = y;
        ynew.add_scaled(h * b1, k1);
        ynew.add_scaled(h * b3, k3);
        ynew.add_scaled(h * b4, k4);
        ynew.add_scaled(h * b5, k5);
        ynew.add_scaled(h * b6, k6);
        f(t + h, ynew, k7);  // FSAL

        yerr = ComplexMatrix(dim);
        yerr.add_scaled(h * e1, k1);
        yerr.add_scaled(h * e3, k3);
        yerr.add_scaled(h * e4, k4);
        yerr.add_scaled(h * e5, k5);
        yerr.add_scaled(h * e6, k6);
        yerr.add_scaled(h * e7, k7);

        if (!ynew.all_finite()) throw std::runtime_error("integrator: non-finite state");

        const double err = error_norm(yerr, y, ynew, cfg.abs_tol, cfg.rel_tol);
        if (err <= 1.0) {
            // dense output on (t, t+h]
            if (next_sample < samples.size() && samples[next_sample] <= t + h + 1e-14 * span) {
                r2 = ynew;
                r2 -= y;  // y1 - y0
                r3 = k1;
                r3 *= h;
                r3 -= r2;  // h k1 - dy
                r4 = r2;
                r4.add_scaled(-h, k7);
                r4 -= r3;  // dy - h k7 - r3
                r5 = ComplexMatrix(dim);
                r5.add_scaled(h * d1, k1);
                r5.add_scaled(h * d3, k3);
                r5.add_scaled(h * d4, k4);
                r5.add_scaled(h * d5, k5);
                r5.add_scaled(h * d6, k6);
                r5.add_scaled(h * d7, k7);
                while (next_sample < samples.size() &&
                       samples[next_sample] <= t + h + 1e-14 * span) {
                    const double theta = std::clamp((samples[next_sample] - t) / h, 0.0, 1.0);
                    const double th1 = 1.0 - theta;
                    // y0 + th*(r2 + th1*(r3 + th*(r4 + th1*r5)))
                    ComplexMatrix& s = out.states[next_sample];
                    s = r4;
                    s.add_scaled(th1, r5);
                    s *= theta;
                    s += r3;
                    s *= th1;
                    s += r2;
                    s *= theta;
                    s += y;
                    ++next_sample;
                }
            }
            t += h;
            y = ynew;
            std::swap(k1, k7);
            double fac = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
            fac = std::clamp(fac, 0.2, rejected ? 1.0 : 10.0);
            h = std::min(h * fac, hmax);
            rejected = false;
        } else {
            rejected = true;
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            if (h < hmin) throw std::runtime_error("integrator: step size underflow (stiff problem?)");
        }
    }

    // span == 0 edge case and any samples at exactly the final time
    while (next_sample < samples.size()) {
        out.states[next_sample] = y;
        ++next_sample;
    }
    return out;
}

}  // namespace

MatrixTrajectory solve_forward(const MatrixODE& ode, const ComplexMatrix& x0, double t0, double t1,
                               const IntegratorConfig& cfg, const std::vector<double>& sample_times,
                               CauchyCounter& counter) {
    counter.increment();
    std::vector<double> u(ode.control ? ode.control->components() : 0);
    std::vector<double> samples(sample_times.size());
    for (size_t i = 0; i < samples.size(); ++i) samples[i] = sample_times[i] - t0;
    const auto* ctrl = ode.control;
    const auto& rhs = ode.rhs;
    Rhs f = [&](double s, const ComplexMatrix& x, ComplexMatrix& dx) {
        const double t = t0 + s;
        if (ctrl) ctrl->interpolate(std::clamp(t, 0.0, ctrl->horizon()), u.data());
        rhs(t, x, u.data(), dx);
    };
    auto traj = integrate(ode.dim, f, x0, t1 - t0, cfg, samples);
    traj.times = sample_times;
    return traj;
}

MatrixTrajectory solve_backward(const MatrixODE& ode, const ComplexMatrix& x_final, double t0,
                                double t1, const IntegratorConfig& cfg,
                                const std::vector<double>& sample_times, CauchyCounter& counter) {
    counter.increment();
    std::vector<double> u(ode.control ? ode.control->components() : 0);
    // s = t1 - t turns the terminal-value problem into a forward one
    std::vector<double> samples(sample_times.size());
    for (size_t i = 0; i < samples.size(); ++i)
        samples[i] = t1 - sample_times[sample_times.size() - 1 - i];
    const auto* ctrl = ode.control;
    const auto& rhs = ode.rhs;
    Rhs f = [&](double s, const ComplexMatrix& x, ComplexMatrix& dx) {
        const double t = t1 - s;
        if (ctrl) ctrl->interpolate(std::clamp(t, 0.0, ctrl->horizon()), u.data());
        rhs(t, x, u.data(), dx);
        dx *= Complex{-1.0, 0.0};
    };
    auto traj = integrate(ode.dim, f, x_final, t1 - t0, cfg, samples);
    MatrixTrajectory out;
    out.times = sample_times;
    out.states.resize(traj.states.size());
    for (size_t i = 0; i < traj.states.size(); ++i)
        out.states[i] = std::move(traj.states[traj.states.size() - 1 - i]);
    return out;
}

}  // namespace qoc
