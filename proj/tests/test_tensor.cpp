#include <cmath>
#include <random>

#include "doctest.h"
#include "qoc/problems.hpp"
#include "qoc/tensor.hpp"

using namespace qoc;

namespace {

ComplexMatrix random_hermitian(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    ComplexMatrix h(n);
    for (int i = 0; i < n; ++i) {
        h(i, i) = g(rng);
        for (int j = i + 1; j < n; ++j) {
            const Complex z{g(rng), g(rng)};
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    }
    return h;
}

}  // namespace

TEST_CASE("kron basics") {
    const auto i2 = ComplexMatrix::identity(2);
    CHECK((kron(i2, i2) - ComplexMatrix::identity(4)).frobenius_norm() == 0.0);

    const auto zi = kron(pauli_z(), i2);
    CHECK(zi(0, 0) == Complex{1, 0});
    CHECK(zi(1, 1) == Complex{1, 0});
    CHECK(zi(2, 2) == Complex{-1, 0});
    CHECK(zi(3, 3) == Complex{-1, 0});

    // X (x) X is the 4x4 anti-diagonal of ones
    const auto xx = kron(pauli_x(), pauli_x());
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(xx(i, j) == (i + j == 3 ? Complex{1, 0} : Complex{0, 0}));
}

TEST_CASE("hs inner product and distance") {
    const auto i2 = ComplexMatrix::identity(2);
    CHECK(hs_inner(i2, i2) == Complex{2, 0});
    CHECK(hs_inner(ComplexMatrix::identity(4), ComplexMatrix::identity(4)) == Complex{4, 0});
    CHECK(std::abs(hs_inner(pauli_x(), pauli_z())) == 0.0);

    const auto rw = werner_state(1.0);  // pure projector at p = 1
    CHECK(hs_inner(rw, rw).real() == doctest::Approx(1.0).epsilon(1e-12));

    ComplexMatrix a(2, {1, 0, 0, 0}), b(2, {0, 0, 0, 1});
    CHECK(hs_dist2(a, a) == 0.0);
    CHECK(hs_dist2(a, b) == doctest::Approx(2.0));

    ComplexMatrix c(3, {0, 0, 0, 0, 0.5, 0, 0, 0, 0.5});
    ComplexMatrix d(3, {0.5, 0, 0, 0, 0.25, 0, 0, 0, 0.25});
    CHECK(hs_dist2(c, d) == doctest::Approx(0.375));

    SUBCASE("dimension mismatch throws") {
        CHECK_THROWS_AS(hs_inner(a, c), std::invalid_argument);
        CHECK_THROWS_AS(hs_dist2(a, c), std::invalid_argument);
    }
}

TEST_CASE("commutators and dagger") {
    CHECK(commutator(pauli_x(), pauli_x()).frobenius_norm() == 0.0);
    CHECK(anticommutator(pauli_x(), pauli_z()).frobenius_norm() == 0.0);

    // [X, Z] = -2iY
    ComplexMatrix expect = pauli_y();
    expect *= Complex{0, -2};
    CHECK((commutator(pauli_x(), pauli_z()) - expect).frobenius_norm() < 1e-15);

    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    ComplexMatrix m(3);
    for (auto& v : m.data()) v = Complex{g(rng), g(rng)};
    CHECK((dagger(dagger(m)) - m).frobenius_norm() == 0.0);
}

TEST_CASE("hs_inner properties on random matrices") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 20; ++rep) {
        ComplexMatrix m(4);
        for (auto& v : m.data()) v = Complex{g(rng), g(rng)};
        const Complex self = hs_inner(m, m);
        CHECK(self.real() >= 0.0);
        CHECK(std::abs(self.imag()) <= 1e-12 * self.real());

        const auto a = random_hermitian(4, rng);
        const auto b = random_hermitian(4, rng);
        CHECK(std::abs(hs_inner(a, b).imag()) <= 1e-12 * (1.0 + std::abs(hs_inner(a, b).real())));
    }
}

TEST_CASE("jacobi eigendecomposition reconstructs the matrix") {
    std::mt19937_64 rng(3);
    for (int n : {2, 3, 4, 8}) {
        const auto a = random_hermitian(n, rng, 2.0);
        const auto dec = eigh(a);
        CHECK(unitarity_defect(dec.vectors) < 1e-12);
        ComplexMatrix recon(n);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    recon(i, j) += dec.vectors(i, k) * dec.values[k] * std::conj(dec.vectors(j, k));
        CHECK((recon - a).frobenius_norm() < 1e-11 * std::max(1.0, a.frobenius_norm()));
        for (size_t k = 1; k < dec.values.size(); ++k) CHECK(dec.values[k - 1] <= dec.values[k]);
    }
    CHECK_THROWS_AS(eigh(ComplexMatrix(2, {0, 1, 0, 0})), std::invalid_argument);
}

TEST_CASE("entropies") {
    // Werner state eigenvalues: (1-p)/4 three times, (1+3p)/4 once
    const double s_w = von_neumann_entropy(werner_state(0.1));
    CHECK(s_w == doctest::Approx(1.372).epsilon(1e-3));

    ComplexMatrix pure(2, {1, 0, 0, 0});
    CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0).epsilon(1e-14));

    ComplexMatrix mixed = ComplexMatrix::identity(4);
    mixed *= Complex{0.25, 0.0};
    CHECK(linear_entropy(mixed) == doctest::Approx(0.75));
    CHECK(von_neumann_entropy(mixed) == doctest::Approx(std::log(4.0)));

    CHECK_THROWS_AS(von_neumann_entropy(ComplexMatrix(2, {0, 1, 0, 0})), std::invalid_argument);
}

TEST_CASE("entropy is invariant under unitary conjugation") {
    std::mt19937_64 rng(13);
    const auto rho = werner_state(0.3);
    for (int rep = 0; rep < 5; ++rep) {
        const auto h = random_hermitian(4, rng);
        const auto u = exp_hermitian(h, Complex{0, -1});
        CHECK(unitarity_defect(u) < 1e-12);
        const auto conj_rho = u * rho * dagger(u);
        CHECK(std::abs(von_neumann_entropy(conj_rho) - von_neumann_entropy(rho)) <= 1e-10);
    }
}

TEST_CASE("linear entropy vanishes exactly on pure projectors") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 10; ++rep) {
        // random pure state projector
        std::vector<Complex> psi(3);
        double norm = 0.0;
        for (auto& c : psi) {
            c = Complex{g(rng), g(rng)};
            norm += std::norm(c);
        }
        ComplexMatrix proj(3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) proj(i, j) = psi[i] * std::conj(psi[j]) / norm;
        const double idem = (proj * proj - proj).frobenius_norm();
        CHECK(idem <= 1e-10);
        CHECK(std::abs(linear_entropy(proj)) <= 1e-10);

        // and is strictly positive on a visibly mixed state
        ComplexMatrix mixed = proj;
        mixed *= Complex{0.7, 0.0};
        mixed.add_scaled(Complex{0.1, 0.0}, ComplexMatrix::identity(3));
        CHECK(linear_entropy(mixed) > 1e-3);
    }
}

TEST_CASE("role wrappers validate invariants") {
    CHECK_NOTHROW(UnitaryMatrix(hadamard_gate()));
    CHECK_THROWS_AS(UnitaryMatrix(ComplexMatrix(2, {1, 1, 0, 1})), std::invalid_argument);

    CHECK_NOTHROW(DensityMatrix(werner_state(0.5)));
    ComplexMatrix bad_trace = werner_state(0.5);
    bad_trace *= Complex{1.5, 0.0};
    CHECK_THROWS_AS(DensityMatrix{bad_trace}, std::invalid_argument);
    ComplexMatrix negative(2, {1.5, 0, 0, -0.5});
    CHECK_THROWS_AS(DensityMatrix{negative}, std::invalid_argument);
}
