#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qdom::mat {

using Complex = std::complex<double>;

// Dense row-major complex matrix. Operators and effects are square; the
// rectangular case exists for stacked linear systems and transfer matrices.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n);
    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    std::size_t dim() const;  // throws unless square

    Complex& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<Complex>& data() const { return data_; }
    std::vector<Complex>& data() { return data_; }

    bool all_finite() const;

    Matrix adjoint() const;
    Matrix transpose() const;
    Matrix conj() const;
    Complex trace() const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(Complex s);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
    friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
    Matrix operator-() const;
    friend Matrix operator*(const Matrix& a, const Matrix& b);

    bool operator==(const Matrix& o) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Complex> data_;
};

Matrix kron(const Matrix& a, const Matrix& b);

// <a,b> = sum conj(a_ij) b_ij; the Frobenius inner product.
Complex frobenius_inner(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);

// Matrix-unit e_i e_j^T in dimension n.
Matrix matrix_unit(std::size_t n, std::size_t i, std::size_t j);

std::vector<Complex> apply_vec(const Matrix& m, const std::vector<Complex>& v);
Complex vec_inner(const std::vector<Complex>& a, const std::vector<Complex>& b);
double vec_norm(const std::vector<Complex>& a);

// --- Hermitian eigenstructure -------------------------------------------

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    Matrix vectors;                   // unitary; column k pairs with eigenvalues[k]
};

// Cyclic complex Jacobi rotations. Input must be Hermitian within `tol`
// (asymmetry measured in operator norm); fails after 100 sweeps if the
// off-diagonal mass does not fall below 1e-14 * max(1, ||m||_F).
EigenDecomposition hermitian_eigen(const Matrix& m, double tol = 1e-9);

struct SelfAdjointVerdict {
    bool selfadjoint;
    double asymmetry_norm;          // ||m - m*|| (operator norm)
    double max_imag_quadratic;      // max |Im <mx,x>| over sampled unit vectors
    std::vector<Complex> witness;   // vector with Im <mx,x> != 0 when not selfadjoint
};

// ||m - m*|| <= tol, cross-checked against the quadratic-form criterion
// <mx,x> real for all x (sampled unit vectors, deterministic seed).
SelfAdjointVerdict is_selfadjoint(const Matrix& m, double tol = 1e-9);

struct PositiveVerdict {
    bool positive;
    double min_eigenvalue;
    std::optional<Matrix> root;  // y with y*y ~ m, present when positive
};

// Hermitian within tol and min eigenvalue >= -tol; on success also returns
// the PSD square root realizing m = y*y.
PositiveVerdict is_positive(const Matrix& m, double tol = 1e-9);

// Loewner order: a <= b iff b - a is positive semidefinite.
// Throws std::invalid_argument when an operand is not Hermitian within tol.
bool loewner_leq(const Matrix& a, const Matrix& b, double tol = 1e-9);

// Largest singular value, via the max eigenvalue of m* m.
double operator_norm(const Matrix& m);

struct SelfAdjointParts {
    Matrix pos;  // x+
    Matrix neg;  // x-
};

// Spectral split x = x+ - x- with x+, x- PSD and ||x+-|| <= ||x||.
SelfAdjointParts decompose_selfadjoint(const Matrix& m, double tol = 1e-9);

// x = p[0] - p[1] + i p[2] - i p[3], each p[k] PSD with ||p[k]|| <= ||x||.
std::array<Matrix, 4> decompose_general(const Matrix& m);

// PSD square root via eigendecomposition (negative dust clipped at 0).
Matrix psd_sqrt(const Matrix& m, double tol = 1e-9);

// --- text format ----------------------------------------------------------
//
//   dim n
//   a+bi a+bi ... (n entries per row, n rows)
//
// Written at 17 significant digits so the decimal round-trip is bit-exact.

std::string format_complex(Complex z);
std::optional<Complex> parse_complex(std::string_view token);

std::string to_text(const Matrix& m);
void write_text(std::ostream& out, const Matrix& m);

// Reads one `dim n` block from the stream. Throws qdom parse errors with a
// line location on malformed input; returns nullopt at clean end-of-stream.
std::optional<Matrix> read_text(std::istream& in, std::size_t* line_counter = nullptr);

Matrix parse_text(const std::string& text);  // exactly one matrix

}  // namespace qdom::mat
