#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace qoc {

// Vector-valued control on a uniform time grid over [0, T], piecewise-linear
// between nodes. This is the optimization variable everywhere.
class ControlGrid {
public:
    ControlGrid() = default;
    ControlGrid(double horizon, int segments, int components);

    static ControlGrid from_function(double horizon, int segments, int components,
                                     const std::function<void(double t, double* values)>& f);

    double horizon() const { return horizon_; }
    int segments() const { return segments_; }
    int num_nodes() const { return segments_ + 1; }
    int components() const { return components_; }
    double node_time(int m) const { return horizon_ * m / segments_; }
    double dt() const { return horizon_ / segments_; }

    double& value(int node, int comp) { return v_[static_cast<size_t>(node) * components_ + comp]; }
    const double& value(int node, int comp) const {
        return v_[static_cast<size_t>(node) * components_ + comp];
    }
    std::vector<double>& data() { return v_; }
    const std::vector<double>& data() const { return v_; }

    // Linear interpolation, exact at nodes; t must lie in [0, T].
    void interpolate(double t, double* out) const;
    std::vector<double> interpolate(double t) const;

    double max_abs_diff(const ControlGrid& other) const;
    bool all_finite() const;

private:
    double horizon_ = 0.0;
    int segments_ = 0;
    int components_ = 0;
    std::vector<double> v_;
};

// Per-component time-dependent bounds lo_k(t) <= u_k(t) <= hi_k(t).
class BoxConstraint {
public:
    struct ComponentBounds {
        std::function<double(double)> lo, hi;
    };

    BoxConstraint() = default;
    explicit BoxConstraint(std::vector<ComponentBounds> comps) : comps_(std::move(comps)) {}

    static BoxConstraint constant(int components, double lo, double hi);
    static BoxConstraint per_component(const std::vector<std::pair<double, double>>& bounds);
    // symmetric sinc-envelope bounds +-u_max(t) on every component
    static BoxConstraint symmetric_sinc(int components, double horizon, double c_max, int q);

    int components() const { return static_cast<int>(comps_.size()); }
    double lo(int comp, double t) const { return comps_[comp].lo(t); }
    double hi(int comp, double t) const { return comps_[comp].hi(t); }

    double max_violation(const ControlGrid& g) const;
    bool contains(const ControlGrid& g, double tol = 0.0) const { return max_violation(g) <= tol; }

private:
    std::vector<ComponentBounds> comps_;
};

// Nodewise clamp of every component into the box; idempotent.
ControlGrid project(const ControlGrid& g, const BoxConstraint& box);

// Envelope / shape functions of the constrained problems.
double sinc(double y);
// u_max(t) = C * sinc(2^q pi (t/T - 1/2)^q); zero at t = 0, T and maximal (= C) at T/2.
double sinc_envelope(double t, double horizon, double c_max, int q);
// S(t) = exp(C_S (t/T - 1/2)^2) >= 1
double shape_s(double t, double horizon, double c_s);

// sum_k |u_k(0)| + |u_k(T)|: switch-on/off violation metric
double bv_metric(const ControlGrid& g);

struct ShapeParams {
    double c_max_u = 0.0;  // envelope amplitude (when a sinc box is used)
    int q = 3;             // envelope sharpness, odd
    double c_s = 25.0;     // shape-function curvature
    double p_u = 0.0;      // weight of the S(t)||u||^2 running cost
    double p_n = 0.0;      // weight of the linear incoherent running cost
};

// CSV with columns t, u_1..u_K; 17 significant digits.
void write_control_csv(const ControlGrid& g, std::ostream& os);
void write_control_csv(const ControlGrid& g, const std::string& path);
ControlGrid read_control_csv(std::istream& is);
ControlGrid read_control_csv(const std::string& path);

}  // namespace qoc
