#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdom/errors.hpp"
#include "qdom/matrix.hpp"
#include "qdom/rng.hpp"
#include "qdom/wstar.hpp"

#include <cmath>

using namespace qdom;
using namespace qdom::mat;

namespace {

Matrix pauli_x() {
    Matrix m(2, 2);
    m.at(0, 1) = 1;
    m.at(1, 0) = 1;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m.at(0, 0) = 1;
    m.at(1, 1) = -1;
    return m;
}

Matrix plus_projector() {
    Matrix m(2, 2);
    m.at(0, 0) = m.at(0, 1) = m.at(1, 0) = m.at(1, 1) = 0.5;
    return m;
}

Matrix reconstruct(const EigenDecomposition& dec) {
    const std::size_t n = dec.eigenvalues.size();
    Matrix rec(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                rec.at(i, j) += dec.eigenvalues[k] * dec.vectors.at(i, k) *
                                std::conj(dec.vectors.at(j, k));
    return rec;
}

}  // namespace

TEST_CASE("eigensolver on known spectra") {
    const auto id2 = hermitian_eigen(Matrix::identity(2));
    CHECK(id2.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id2.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));

    const auto x = hermitian_eigen(pauli_x());
    CHECK(x.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(x.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));

    Matrix diag(2, 2);
    diag.at(0, 0) = 0.75;
    diag.at(1, 1) = 0.25;
    const auto d = hermitian_eigen(diag);
    CHECK(d.eigenvalues[0] == doctest::Approx(0.25));
    CHECK(d.eigenvalues[1] == doctest::Approx(0.75));
}

TEST_CASE("eigensolver reconstruction and orthonormality, random hermitians") {
    Rng rng(101);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.range(0, 15));
        const Matrix h = wstar::random_hermitian(rng, n, 3.0);
        const auto dec = hermitian_eigen(h, 1e-9);
        const double scale = std::max(1.0, operator_norm(h));
        CHECK(operator_norm(reconstruct(dec) - h) <= 1e-10 * scale);
        CHECK(operator_norm(dec.vectors.adjoint() * dec.vectors - Matrix::identity(n)) <= 1e-10);
        for (std::size_t k = 0; k + 1 < n; ++k)
            CHECK(dec.eigenvalues[k] <= dec.eigenvalues[k + 1]);
    }
}

TEST_CASE("eigensolver rejects non-hermitian input") {
    Matrix m(2, 2);
    m.at(0, 1) = 1;  // nilpotent
    CHECK_THROWS_AS(hermitian_eigen(m, 1e-9), DomainError);
}

TEST_CASE("self-adjointness with quadratic-form cross-check") {
    CHECK(is_selfadjoint(pauli_z()).selfadjoint);
    CHECK(is_selfadjoint(Matrix::zero(2, 2)).selfadjoint);
    const auto z = is_selfadjoint(pauli_z());
    CHECK(z.max_imag_quadratic <= 1e-12);

    Matrix ix = pauli_x();
    ix *= Complex(0, 1);  // anti-hermitian
    const auto v = is_selfadjoint(ix);
    CHECK_FALSE(v.selfadjoint);
    CHECK(v.asymmetry_norm == doctest::Approx(2.0));
    REQUIRE(v.witness.size() == 2);
    // the witness vector really sees a complex quadratic form
    const auto mx = apply_vec(ix, v.witness);
    CHECK(std::abs(std::imag(vec_inner(v.witness, mx))) > 1e-3);
}

TEST_CASE("positivity and square roots") {
    const auto plus = is_positive(plus_projector());
    CHECK(plus.positive);
    CHECK(plus.min_eigenvalue == doctest::Approx(0.0).epsilon(1e-10));

    CHECK_FALSE(is_positive(pauli_z()).positive);

    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.range(0, 5));
        const Matrix y = wstar::random_matrix(rng, n);
        const Matrix m = y.adjoint() * y;
        const auto v = is_positive(m);
        CHECK(v.positive);
        REQUIRE(v.root.has_value());
        CHECK(frobenius_norm(*v.root * *v.root - m) <= 1e-9 * std::max(1.0, frobenius_norm(m)));
    }
}

TEST_CASE("loewner order on matrices") {
    CHECK(loewner_leq(Matrix::zero(2, 2), Matrix::identity(2)));
    Matrix p0(2, 2);
    p0.at(0, 0) = 1;
    CHECK(loewner_leq(p0, Matrix::identity(2)));
    CHECK_FALSE(loewner_leq(p0, plus_projector()));  // difference has a negative eigenvalue
    CHECK_THROWS_AS(loewner_leq(pauli_x() * Complex(0, 1), Matrix::identity(2)), DomainError);
}

TEST_CASE("loewner order is a partial order up to tolerance") {
    Rng rng(23);
    const double tol = 1e-9;
    for (int t = 0; t < 15; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.range(0, 2));
        const Matrix a = wstar::random_hermitian(rng, n);
        const Matrix b = a + wstar::random_psd(rng, n, 0.3);
        const Matrix c = b + wstar::random_psd(rng, n, 0.3);
        CHECK(loewner_leq(a, a, tol));
        CHECK(loewner_leq(a, b, tol));
        CHECK(loewner_leq(b, c, tol));
        CHECK(loewner_leq(a, c, tol));
        if (loewner_leq(b, a, tol)) CHECK(operator_norm(a - b) <= 10 * tol);
    }
}

TEST_CASE("positivity equivalence via sampled quadratic forms") {
    Rng rng(37);
    for (int t = 0; t < 25; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.range(0, 3));
        const Matrix m = rng.coin() ? wstar::random_psd(rng, n) : wstar::random_hermitian(rng, n);
        const auto verdict = is_positive(m, 1e-9);
        bool sampled_nonneg = is_selfadjoint(m, 1e-9).selfadjoint;
        double min_form = 0;
        for (int k = 0; k < 64 && sampled_nonneg; ++k) {
            std::vector<Complex> x(n);
            for (auto& z : x) z = rng.cgauss();
            const double nx = vec_norm(x);
            for (auto& z : x) z /= nx;
            min_form = std::min(min_form, std::real(vec_inner(x, apply_vec(m, x))));
        }
        if (verdict.positive) CHECK(min_form >= -1e-9);
        // sampled forms can miss a negative direction, so only one-sided
        if (min_form < -1e-9) CHECK_FALSE(verdict.positive);
    }
}

TEST_CASE("operator norm") {
    CHECK(operator_norm(Matrix::identity(3)) == doctest::Approx(1.0));
    Matrix two = Matrix::identity(3);
    two *= Complex(2, 0);
    CHECK(operator_norm(two) == doctest::Approx(2.0));
    CHECK(operator_norm(pauli_x()) == doctest::Approx(1.0));
}

TEST_CASE("x <= ||x|| 1 for positive x") {
    Rng rng(41);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.range(0, 4));
        const Matrix x = wstar::random_psd(rng, n);
        Matrix bound = Matrix::identity(n);
        bound *= Complex(operator_norm(x), 0);
        CHECK(loewner_leq(x, bound, 1e-8));
    }
}

TEST_CASE("cauchy-schwarz on random vectors") {
    Rng rng(43);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.range(0, 7));
        std::vector<Complex> x(n), y(n);
        for (auto& z : x) z = rng.cgauss();
        for (auto& z : y) z = rng.cgauss();
        CHECK(vec_norm(x) * vec_norm(y) - std::abs(vec_inner(x, y)) >= -1e-12);
    }
}

TEST_CASE("self-adjoint and general decompositions") {
    const auto parts = decompose_selfadjoint(pauli_z());
    Matrix p0(2, 2), p1(2, 2);
    p0.at(0, 0) = 1;
    p1.at(1, 1) = 1;
    CHECK(frobenius_norm(parts.pos - p0) <= 1e-12);
    CHECK(frobenius_norm(parts.neg - p1) <= 1e-12);

    const auto psd_parts = decompose_selfadjoint(plus_projector());
    CHECK(frobenius_norm(psd_parts.neg) <= 1e-12);

    Rng rng(47);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.range(0, 4));
        const Matrix m = wstar::random_matrix(rng, n, 2.0);
        const auto four = decompose_general(m);
        Matrix rec = four[0] - four[1];
        Matrix imag = four[2] - four[3];
        imag *= Complex(0, 1);
        rec += imag;
        CHECK(frobenius_norm(rec - m) <= 1e-10 * std::max(1.0, frobenius_norm(m)));
        const double nm = operator_norm(m);
        for (const auto& p : four) {
            CHECK(is_positive(p, 1e-8).positive);
            CHECK(operator_norm(p) <= nm + 1e-8);
        }
    }
}

TEST_CASE("matrix text format") {
    Rng rng(53);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.range(0, 5));
        Matrix m(n, n);
        for (auto& z : m.data()) z = Complex(rng.gauss() * 1e3, rng.gauss() * 1e-3);
        CHECK(parse_text(to_text(m)) == m);  // bit-exact decimal round-trip
    }
    CHECK_THROWS_AS(parse_text("dim 2\n1+0i\n"), ParseError);
    CHECK_THROWS_AS(parse_text("dim 2\n1+0i 2+0i 3+0i\n1+0i 2+0i\n"), ParseError);
    CHECK_THROWS_AS(parse_text("dim 0\n"), ParseError);
    CHECK_THROWS_AS(parse_text("dim 1\nnope\n"), ParseError);
    CHECK_FALSE(parse_complex("1+2").has_value());
    CHECK(parse_complex("-1.5e-3+2i").has_value());
    CHECK(*parse_complex("2i") == Complex(0, 2));
    CHECK(*parse_complex("7") == Complex(7, 0));
    CHECK(*parse_complex("1-1i") == Complex(1, -1));
}
