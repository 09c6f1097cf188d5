#include "qoc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qoc {

ComplexMatrix::ComplexMatrix(int n, std::initializer_list<Complex> entries) : ComplexMatrix(n) {
    if (static_cast<int>(entries.size()) != n * n)
        throw std::invalid_argument("ComplexMatrix: entry count does not match dimension");
    std::copy(entries.begin(), entries.end(), a_.begin());
}

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

static void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("matrix dimension mismatch");
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& b) {
    require_same_dim(*this, b);
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += b.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& b) {
    require_same_dim(*this, b);
    for (size_t i = 0; i < a_.size(); ++i) a_[i] -= b.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& v : a_) v *= s;
    return *this;
}

void ComplexMatrix::add_scaled(Complex s, const ComplexMatrix& b) {
    require_same_dim(*this, b);
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += s * b.a_[i];
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
}

bool ComplexMatrix::all_finite() const {
    for (const auto& v : a_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

ComplexMatrix ComplexMatrix::daggered() const {
    ComplexMatrix r(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
}

ComplexMatrix ComplexMatrix::transposed() const {
    ComplexMatrix r(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r(i, j) = (*this)(j, i);
    return r;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b);
    const int n = a.dim();
    ComplexMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{0.0, 0.0}) continue;
            for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator-(ComplexMatrix a) { return a *= Complex{-1.0, 0.0}; }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int na = a.dim(), nb = b.dim();
    ComplexMatrix r(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{0.0, 0.0}) continue;
            for (int k = 0; k < nb; ++k)
                for (int l = 0; l < nb; ++l) r(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return r;
}

ComplexMatrix dagger(const ComplexMatrix& a) { return a.daggered(); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b + b * a;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b);
    Complex s = 0.0;
    const int n = a.dim();
    // Tr(a^dagger b) = sum_ij conj(a_ij) b_ij
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += std::conj(a(i, j)) * b(i, j);
    return s;
}

double hs_dist2(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b);
    double s = 0.0;
    const int n = a.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += std::norm(a(i, j) - b(i, j));
    return s;
}

double hermiticity_defect(const ComplexMatrix& a) { return (a - a.daggered()).frobenius_norm(); }

double unitarity_defect(const ComplexMatrix& a) {
    return (a.daggered() * a - ComplexMatrix::identity(a.dim())).frobenius_norm();
}

EigenDecomposition eigh(const ComplexMatrix& a) {
    const int n = a.dim();
    const double scale = std::max(1.0, a.frobenius_norm());
    if (hermiticity_defect(a) > 1e-8 * scale)
        throw std::invalid_argument("eigh: input is not Hermitian");

    // Work on the symmetrized copy so tiny drift does not leak into results.
    ComplexMatrix b(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(b(p, q));
        if (std::sqrt(off) <= 1e-15 * scale) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex bpq = b(p, q);
                const double apq = std::abs(bpq);
                if (apq <= 1e-300) continue;
                const double phi = std::arg(bpq);
                const double app = b(p, p).real();
                const double aqq = b(q, q).real();
                const double tau = (aqq - app) / (2.0 * apq);
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const Complex s = t * c * Complex{std::cos(phi), std::sin(phi)};

                // b <- G^dagger b G with G restricted to the (p,q) plane:
                // G_pp = c, G_qp = -conj(s) e^{...} folded into s's phase, G_pq = s, G_qq = c.
                for (int k = 0; k < n; ++k) {
                    const Complex bkp = b(k, p), bkq = b(k, q);
                    b(k, p) = c * bkp - std::conj(s) * bkq;
                    b(k, q) = s * bkp + c * bkq;
                }
                for (int k = 0; k < n; ++k) {
                    const Complex bpk = b(p, k), bqk = b(q, k);
                    b(p, k) = c * bpk - s * bqk;
                    b(q, k) = std::conj(s) * bpk + c * bqk;
                }
                for (int k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - std::conj(s) * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    EigenDecomposition dec;
    dec.values.resize(n);
    for (int i = 0; i < n; ++i) dec.values[i] = b(i, i).real();

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return dec.values[i] < dec.values[j]; });
    std::vector<double> sorted(n);
    ComplexMatrix vs(n);
    for (int j = 0; j < n; ++j) {
        sorted[j] = dec.values[order[j]];
        for (int i = 0; i < n; ++i) vs(i, j) = v(i, order[j]);
    }
    dec.values = std::move(sorted);
    dec.vectors = std::move(vs);
    return dec;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) { return eigh(a).values; }

ComplexMatrix exp_hermitian(const ComplexMatrix& h, Complex z) {
    const auto dec = eigh(h);
    const int n = h.dim();
    ComplexMatrix r(n);
    for (int k = 0; k < n; ++k) {
        const Complex ek = std::exp(z * dec.values[k]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                r(i, j) += dec.vectors(i, k) * ek * std::conj(dec.vectors(j, k));
    }
    return r;
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m, double tol) : m_(std::move(m)) {
    if (unitarity_defect(m_) > tol)
        throw std::invalid_argument("UnitaryMatrix: unitarity defect exceeds tolerance");
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double herm_tol, double trace_tol, double eig_floor)
    : m_(std::move(m)) {
    if (hermiticity_defect(m_) > herm_tol)
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (std::abs(m_.trace() - Complex{1.0, 0.0}) > trace_tol)
        throw std::invalid_argument("DensityMatrix: trace differs from 1");
    for (double lam : hermitian_eigenvalues(m_))
        if (lam < eig_floor)
            throw std::invalid_argument("DensityMatrix: negative eigenvalue");
}

static double entropy_of_eigenvalues(const std::vector<double>& lams) {
    double s = 0.0;
    for (double lam : lams) {
        if (lam <= 0.0) continue;  // 0*log0 := 0, tiny negatives clipped
        s -= lam * std::log(lam);
    }
    return s;
}

double von_neumann_entropy(const ComplexMatrix& rho, double herm_tol) {
    if (hermiticity_defect(rho) > herm_tol)
        throw std::invalid_argument("von_neumann_entropy: input is not Hermitian");
    ComplexMatrix sym = rho;
    const int n = rho.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sym(i, j) = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
    return entropy_of_eigenvalues(hermitian_eigenvalues(sym));
}

double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.matrix()); }

double linear_entropy(const ComplexMatrix& rho, double herm_tol) {
    if (hermiticity_defect(rho) > herm_tol)
        throw std::invalid_argument("linear_entropy: input is not Hermitian");
    return 1.0 - (rho * rho).trace().real();
}

double linear_entropy(const DensityMatrix& rho) { return linear_entropy(rho.matrix()); }

ComplexMatrix pauli_x() { return ComplexMatrix(2, {0, 1, 1, 0}); }
ComplexMatrix pauli_y() { return ComplexMatrix(2, {0, Complex{0, -1}, Complex{0, 1}, 0}); }
ComplexMatrix pauli_z() { return ComplexMatrix(2, {1, 0, 0, -1}); }

}  // namespace qoc
