#include "qoc/control.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qoc {

ControlGrid::ControlGrid(double horizon, int segments, int components)
    : horizon_(horizon), segments_(segments), components_(components),
      v_(static_cast<size_t>(segments + 1) * components, 0.0) {
    if (segments < 2) throw std::invalid_argument("ControlGrid: need at least 2 segments");
    if (components < 1) throw std::invalid_argument("ControlGrid: need at least 1 component");
    if (!(horizon > 0.0)) throw std::invalid_argument("ControlGrid: horizon must be positive");
}

ControlGrid ControlGrid::from_function(double horizon, int segments, int components,
                                       const std::function<void(double, double*)>& f) {
    ControlGrid g(horizon, segments, components);
    for (int m = 0; m <= segments; ++m) f(g.node_time(m), &g.value(m, 0));
    return g;
}

void ControlGrid::interpolate(double t, double* out) const {
    if (t < 0.0 || t > horizon_ * (1.0 + 1e-12))
        throw std::invalid_argument("ControlGrid::interpolate: t outside [0, T]");
    const double h = dt();
    int m = static_cast<int>(t / h);
    m = std::clamp(m, 0, segments_ - 1);
    const double theta = std::clamp((t - m * h) / h, 0.0, 1.0);
    for (int k = 0; k < components_; ++k)
        out[k] = (1.0 - theta) * value(m, k) + theta * value(m + 1, k);
}

std::vector<double> ControlGrid::interpolate(double t) const {
    std::vector<double> out(components_);
    interpolate(t, out.data());
    return out;
}

double ControlGrid::max_abs_diff(const ControlGrid& other) const {
    double d = 0.0;
    for (size_t i = 0; i < v_.size(); ++i) d = std::max(d, std::abs(v_[i] - other.v_[i]));
    return d;
}

bool ControlGrid::all_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

BoxConstraint BoxConstraint::constant(int components, double lo, double hi) {
    std::vector<ComponentBounds> comps(components);
    for (auto& c : comps) {
        c.lo = [lo](double) { return lo; };
        c.hi = [hi](double) { return hi; };
    }
    return BoxConstraint(std::move(comps));
}

BoxConstraint BoxConstraint::per_component(const std::vector<std::pair<double, double>>& bounds) {
    std::vector<ComponentBounds> comps(bounds.size());
    for (size_t k = 0; k < bounds.size(); ++k) {
        const double lo = bounds[k].first, hi = bounds[k].second;
        comps[k].lo = [lo](double) { return lo; };
        comps[k].hi = [hi](double) { return hi; };
    }
    return BoxConstraint(std::move(comps));
}

BoxConstraint BoxConstraint::symmetric_sinc(int components, double horizon, double c_max, int q) {
    std::vector<ComponentBounds> comps(components);
    for (auto& c : comps) {
        c.lo = [=](double t) { return -sinc_envelope(t, horizon, c_max, q); };
        c.hi = [=](double t) { return sinc_envelope(t, horizon, c_max, q); };
    }
    return BoxConstraint(std::move(comps));
}

double BoxConstraint::max_violation(const ControlGrid& g) const {
    double worst = 0.0;
    for (int m = 0; m < g.num_nodes(); ++m) {
        const double t = g.node_time(m);
        for (int k = 0; k < g.components(); ++k) {
            const double v = g.value(m, k);
            worst = std::max(worst, lo(k, t) - v);
            worst = std::max(worst, v - hi(k, t));
        }
    }
    return std::max(worst, 0.0);
}

ControlGrid project(const ControlGrid& g, const BoxConstraint& box) {
    ControlGrid r = g;
    for (int m = 0; m < r.num_nodes(); ++m) {
        const double t = r.node_time(m);
        for (int k = 0; k < r.components(); ++k)
            r.value(m, k) = std::clamp(r.value(m, k), box.lo(k, t), box.hi(k, t));
    }
    return r;
}

double sinc(double y) {
    if (std::abs(y) < 1e-8) return 1.0;
    return std::sin(y) / y;
}

double sinc_envelope(double t, double horizon, double c_max, int q) {
    // the endpoints hit sinc(+-pi) = 0; pin them so bounds there are exact
    if (t <= 0.0 || t >= horizon) return 0.0;
    const double s = t / horizon - 0.5;
    const double y = std::pow(2.0, q) * M_PI * std::pow(s, q);
    return c_max * sinc(y);
}

double shape_s(double t, double horizon, double c_s) {
    const double s = t / horizon - 0.5;
    return std::exp(c_s * s * s);
}

double bv_metric(const ControlGrid& g) {
    double s = 0.0;
    for (int k = 0; k < g.components(); ++k)
        s += std::abs(g.value(0, k)) + std::abs(g.value(g.segments(), k));
    return s;
}

static std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_control_csv(const ControlGrid& g, std::ostream& os) {
    os << "t";
    for (int k = 1; k <= g.components(); ++k) os << ",u_" << k;
    os << "\n";
    for (int m = 0; m < g.num_nodes(); ++m) {
        os << fmt17(g.node_time(m));
        for (int k = 0; k < g.components(); ++k) os << "," << fmt17(g.value(m, k));
        os << "\n";
    }
}

void write_control_csv(const ControlGrid& g, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_control_csv(g, os);
}

ControlGrid read_control_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("control csv: empty file");
    int components = -1;
    std::vector<double> times;
    std::vector<double> values;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (components < 0) components = static_cast<int>(row.size()) - 1;
        if (static_cast<int>(row.size()) != components + 1)
            throw std::runtime_error("control csv: ragged row");
        times.push_back(row[0]);
        for (int k = 0; k < components; ++k) values.push_back(row[1 + k]);
    }
    if (times.size() < 3) throw std::runtime_error("control csv: too few rows");
    const int segments = static_cast<int>(times.size()) - 1;
    ControlGrid g(times.back(), segments, components);
    for (int m = 0; m <= segments; ++m)
        for (int k = 0; k < components; ++k) g.value(m, k) = values[static_cast<size_t>(m) * components + k];
    return g;
}

ControlGrid read_control_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_control_csv(is);
}

}  // namespace qoc
