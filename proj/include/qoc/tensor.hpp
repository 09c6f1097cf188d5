#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace qoc {

using Complex = std::complex<double>;

// Dense square complex matrix, row-major storage. Sizes in this project are
// tiny (N <= 16), so everything is value-semantic and unoptimized on purpose.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n) {}
    ComplexMatrix(int n, std::initializer_list<Complex> entries);

    static ComplexMatrix zero(int n) { return ComplexMatrix(n); }
    static ComplexMatrix identity(int n);

    int dim() const { return n_; }
    Complex& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    const Complex& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
    std::vector<Complex>& data() { return a_; }
    const std::vector<Complex>& data() const { return a_; }

    ComplexMatrix& operator+=(const ComplexMatrix& b);
    ComplexMatrix& operator-=(const ComplexMatrix& b);
    ComplexMatrix& operator*=(Complex s);
    // this += s * b, used in integrator stage combinations
    void add_scaled(Complex s, const ComplexMatrix& b);

    Complex trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;

    ComplexMatrix daggered() const;
    ComplexMatrix transposed() const;

private:
    int n_ = 0;
    std::vector<Complex> a_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator-(ComplexMatrix a);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix dagger(const ComplexMatrix& a);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

// Tr(a^dagger b); reduces to Tr(ab) for Hermitian a.
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
// ||a - b||_F^2 = Tr((a-b)^dagger (a-b)); equals Tr((a-b)^2) for Hermitian arguments.
double hs_dist2(const ComplexMatrix& a, const ComplexMatrix& b);

double hermiticity_defect(const ComplexMatrix& a);   // ||a - a^dagger||_F
double unitarity_defect(const ComplexMatrix& a);     // ||a^dagger a - I||_F

// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
// Eigenvalues ascending, eigenvectors as columns of `vectors` (a = V diag(values) V^dagger).
struct EigenDecomposition {
    std::vector<double> values;
    ComplexMatrix vectors;
};
EigenDecomposition eigh(const ComplexMatrix& a);
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

// V diag(exp(z*lambda)) V^dagger for Hermitian h; exp_hermitian(h, {0,-1}) is the
// unitary exp(-i h).
ComplexMatrix exp_hermitian(const ComplexMatrix& h, Complex z);

// Role wrappers. Invariants are checked at construction, not re-checked on use:
// intermediate integrator states may drift within tolerance and are validated
// separately by the propagation post-conditions.
class UnitaryMatrix {
public:
    explicit UnitaryMatrix(ComplexMatrix m, double tol = 1e-8);
    const ComplexMatrix& matrix() const { return m_; }
    int dim() const { return m_.dim(); }

private:
    ComplexMatrix m_;
};

class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m, double herm_tol = 1e-10, double trace_tol = 1e-10,
                           double eig_floor = -1e-8);
    const ComplexMatrix& matrix() const { return m_; }
    int dim() const { return m_.dim(); }

private:
    ComplexMatrix m_;
};

// -Tr(rho log rho), natural log, 0*log0 := 0. Accepts slightly drifted Hermitian
// input (symmetrized internally); throws if the defect is beyond tol.
double von_neumann_entropy(const ComplexMatrix& rho, double herm_tol = 1e-6);
double von_neumann_entropy(const DensityMatrix& rho);
// 1 - Tr(rho^2)
double linear_entropy(const ComplexMatrix& rho, double herm_tol = 1e-6);
double linear_entropy(const DensityMatrix& rho);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

}  // namespace qoc
