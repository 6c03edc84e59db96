#include "qdom/matrix.hpp"

#include "qdom/errors.hpp"
#include "qdom/rng.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace qdom::mat {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

std::size_t Matrix::dim() const {
    if (!square()) throw DomainError("square matrix required");
    return rows_;
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](Complex z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

Matrix Matrix::adjoint() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = std::conj(at(i, j));
    return r;
}

Matrix Matrix::transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

Matrix Matrix::conj() const {
    Matrix r(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data()[k] = std::conj(data_[k]);
    return r;
}

Complex Matrix::trace() const {
    Complex t = 0;
    for (std::size_t i = 0; i < dim(); ++i) t += at(i, i);
    return t;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("matrix shape mismatch in +");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("matrix shape mismatch in -");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
}

Matrix Matrix::operator-() const {
    Matrix r = *this;
    for (auto& z : r.data()) z = -z;
    return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DomainError("matrix shape mismatch in *");
    Matrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a.at(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) r.at(i, j) += aik * b.at(k, j);
        }
    return r;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
    return r;
}

Complex frobenius_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DomainError("matrix shape mismatch in inner product");
    Complex s = 0;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        s += std::conj(a.data()[k]) * b.data()[k];
    return s;
}

double frobenius_norm(const Matrix& a) {
    double s = 0;
    for (const auto& z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

double max_abs(const Matrix& a) {
    double m = 0;
    for (const auto& z : a.data()) m = std::max(m, std::abs(z));
    return m;
}

Matrix matrix_unit(std::size_t n, std::size_t i, std::size_t j) {
    Matrix m(n, n);
    m.at(i, j) = 1.0;
    return m;
}

std::vector<Complex> apply_vec(const Matrix& m, const std::vector<Complex>& v) {
    if (m.cols() != v.size()) throw DomainError("matrix/vector shape mismatch");
    std::vector<Complex> r(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Complex s = 0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m.at(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

Complex vec_inner(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    Complex s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
}

double vec_norm(const std::vector<Complex>& a) {
    double s = 0;
    for (const auto& z : a) s += std::norm(z);
    return std::sqrt(s);
}

// --- eigensolver ------------------------------------------------------------

namespace {

double offdiag_frobenius(const Matrix& a) {
    double s = 0;
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) s += std::norm(a.at(i, j));
    return std::sqrt(s);
}

// Cyclic sweeps without the Hermitian precondition; callers pass matrices
// that are Hermitian by construction (m*m, i(m-m*), symmetrized input).
EigenDecomposition jacobi_unchecked(Matrix a) {
    const std::size_t n = a.dim();
    // Symmetrize so rounding dust cannot leak imaginary parts onto the diagonal.
    {
        const Matrix adj = a.adjoint();
        for (std::size_t k = 0; k < a.data().size(); ++k)
            a.data()[k] = 0.5 * (a.data()[k] + adj.data()[k]);
    }
    Matrix v = Matrix::identity(n);

    const double stop = 1e-14 * std::max(1.0, frobenius_norm(a));
    constexpr int kMaxSweeps = 100;
    bool converged = n < 2 || offdiag_frobenius(a) <= stop;

    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a.at(p, q);
                const double abs_apq = std::abs(apq);
                if (abs_apq == 0.0) continue;
                const double app = a.at(p, p).real();
                const double aqq = a.at(q, q).real();

                // Phase alpha carries the complex part; the rotation angle is
                // the classical Jacobi choice on (app, aqq, |apq|), inner root.
                const Complex alpha = apq / abs_apq;
                const double tau = (aqq - app) / (2.0 * abs_apq);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Columns: col_p' = c*col_p - s*conj(alpha)*col_q,
                //          col_q' = s*alpha*col_p + c*col_q  (A <- J^H A J).
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex aip = a.at(i, p);
                    const Complex aiq = a.at(i, q);
                    a.at(i, p) = c * aip - s * std::conj(alpha) * aiq;
                    a.at(i, q) = s * alpha * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const Complex apj = a.at(p, j);
                    const Complex aqj = a.at(q, j);
                    a.at(p, j) = c * apj - s * alpha * aqj;
                    a.at(q, j) = s * std::conj(alpha) * apj + c * aqj;
                }
                // Cut numeric dust on the annihilated pair and keep the
                // diagonal exactly real.
                a.at(p, q) = 0.0;
                a.at(q, p) = 0.0;
                a.at(p, p) = Complex(a.at(p, p).real(), 0.0);
                a.at(q, q) = Complex(a.at(q, q).real(), 0.0);

                for (std::size_t i = 0; i < n; ++i) {
                    const Complex vip = v.at(i, p);
                    const Complex viq = v.at(i, q);
                    v.at(i, p) = c * vip - s * std::conj(alpha) * viq;
                    v.at(i, q) = s * alpha * vip + c * viq;
                }
            }
        }
        converged = offdiag_frobenius(a) <= stop;
    }
    if (!converged)
        throw NumericError("hermitian_eigen: no convergence after 100 sweeps, off-diagonal " +
                           std::to_string(offdiag_frobenius(a)));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a.at(x, x).real() < a.at(y, y).real();
    });

    EigenDecomposition dec;
    dec.eigenvalues.resize(n);
    dec.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        dec.eigenvalues[k] = a.at(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) dec.vectors.at(i, k) = v.at(i, order[k]);
    }
    return dec;
}

}  // namespace

EigenDecomposition hermitian_eigen(const Matrix& m, double tol) {
    if (!m.all_finite()) throw DomainError("matrix has non-finite entries");
    const auto sa = is_selfadjoint(m, tol);
    if (!sa.selfadjoint)
        throw DomainError("hermitian_eigen: input not Hermitian, asymmetry norm " +
                          std::to_string(sa.asymmetry_norm));
    return jacobi_unchecked(m);
}

SelfAdjointVerdict is_selfadjoint(const Matrix& m, double tol) {
    const std::size_t n = m.dim();
    SelfAdjointVerdict verdict{};
    // i(m - m*) is Hermitian entry-exactly, and its spectral radius equals
    // the operator norm of m - m*.
    Matrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h.at(i, j) = Complex(0, 1) * (m.at(i, j) - std::conj(m.at(j, i)));
    double asym = 0.0;
    if (max_abs(h) > 0.0) {
        const auto dec = jacobi_unchecked(h);
        asym = std::max(std::abs(dec.eigenvalues.front()), std::abs(dec.eigenvalues.back()));
    }
    verdict.asymmetry_norm = asym;
    verdict.selfadjoint = asym <= tol;

    // Quadratic-form cross-check: <mx,x> is real for all x iff m = m*.
    Rng rng(0xC0FFEEu ^ (n << 8));
    double worst = 0.0;
    std::vector<Complex> worst_vec;
    for (int k = 0; k < 32; ++k) {
        std::vector<Complex> x(n);
        for (auto& z : x) z = rng.cgauss();
        const double nx = vec_norm(x);
        if (nx == 0.0) continue;
        for (auto& z : x) z /= nx;
        const double im = std::abs(std::imag(vec_inner(x, apply_vec(m, x))));
        if (im > worst) {
            worst = im;
            worst_vec = x;
        }
    }
    verdict.max_imag_quadratic = worst;
    if (!verdict.selfadjoint) verdict.witness = std::move(worst_vec);
    return verdict;
}

PositiveVerdict is_positive(const Matrix& m, double tol) {
    PositiveVerdict v{};
    const auto sa = is_selfadjoint(m, tol);
    if (!sa.selfadjoint) {
        v.positive = false;
        v.min_eigenvalue = -sa.asymmetry_norm;
        return v;
    }
    const auto dec = jacobi_unchecked(m);
    v.min_eigenvalue = dec.eigenvalues.empty() ? 0.0 : dec.eigenvalues.front();
    v.positive = v.min_eigenvalue >= -tol;
    if (v.positive) {
        const std::size_t n = m.dim();
        Matrix root(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            const double s = std::sqrt(std::max(0.0, dec.eigenvalues[k]));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    root.at(i, j) += s * dec.vectors.at(i, k) * std::conj(dec.vectors.at(j, k));
        }
        v.root = std::move(root);
    }
    return v;
}

bool loewner_leq(const Matrix& a, const Matrix& b, double tol) {
    if (!is_selfadjoint(a, tol).selfadjoint || !is_selfadjoint(b, tol).selfadjoint)
        throw DomainError("loewner_leq: operands must be Hermitian");
    return is_positive(b - a, tol).positive;
}

double operator_norm(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    const Matrix g = m.adjoint() * m;  // Hermitian PSD by construction
    const auto dec = jacobi_unchecked(g);
    return std::sqrt(std::max(0.0, dec.eigenvalues.back()));
}

SelfAdjointParts decompose_selfadjoint(const Matrix& m, double tol) {
    const auto dec = hermitian_eigen(m, tol);
    const std::size_t n = m.dim();
    SelfAdjointParts parts{Matrix(n, n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = dec.eigenvalues[k];
        Matrix& target = lam >= 0 ? parts.pos : parts.neg;
        const double mag = std::abs(lam);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                target.at(i, j) += mag * dec.vectors.at(i, k) * std::conj(dec.vectors.at(j, k));
    }
    return parts;
}

std::array<Matrix, 4> decompose_general(const Matrix& m) {
    const std::size_t n = m.dim();
    const Matrix adj = m.adjoint();
    Matrix re(n, n), im(n, n);
    for (std::size_t k = 0; k < m.data().size(); ++k) {
        re.data()[k] = 0.5 * (m.data()[k] + adj.data()[k]);
        im.data()[k] = Complex(0, -0.5) * (m.data()[k] - adj.data()[k]);
    }
    const auto re_parts = decompose_selfadjoint(re, 1e-6);
    const auto im_parts = decompose_selfadjoint(im, 1e-6);
    return {re_parts.pos, re_parts.neg, im_parts.pos, im_parts.neg};
}

Matrix psd_sqrt(const Matrix& m, double tol) {
    auto v = is_positive(m, tol);
    if (!v.positive) throw DomainError("psd_sqrt: matrix not positive semidefinite");
    return std::move(*v.root);
}

// --- text format ------------------------------------------------------------

std::string format_complex(Complex z) {
    std::ostringstream out;
    out.precision(17);
    out << z.real();
    if (std::signbit(z.imag()) == 0) out << "+";
    out << z.imag() << "i";
    return out.str();
}

std::optional<Complex> parse_complex(std::string_view token) {
    if (token.empty()) return std::nullopt;
    const bool has_i = token.back() == 'i';
    std::string body(has_i ? token.substr(0, token.size() - 1) : token);
    if (body.empty()) return has_i ? std::optional<Complex>(Complex(0, 1)) : std::nullopt;

    // Split at the sign that separates real and imaginary parts: the last
    // '+'/'-' that is not a leading sign and not part of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        const char c = body[k];
        if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }

    const auto to_dbl = [](const std::string& s) -> std::optional<double> {
        if (s.empty()) return std::nullopt;
        if (s == "+") return 1.0;
        if (s == "-") return -1.0;
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) return std::nullopt;
            return v;
        } catch (...) {
            return std::nullopt;
        }
    };

    if (!has_i) {
        const auto re = to_dbl(body);
        if (!re) return std::nullopt;
        return Complex(*re, 0.0);
    }
    if (split == std::string::npos) {
        const auto im = to_dbl(body);
        if (!im) return std::nullopt;
        return Complex(0.0, *im);
    }
    const auto re = to_dbl(body.substr(0, split));
    const auto im = to_dbl(body.substr(split));
    if (!re || !im) return std::nullopt;
    return Complex(*re, *im);
}

void write_text(std::ostream& out, const Matrix& m) {
    if (m.square())
        out << "dim " << m.rows() << "\n";
    else
        out << "dim " << m.rows() << " " << m.cols() << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << " ";
            out << format_complex(m.at(i, j));
        }
        out << "\n";
    }
}

std::string to_text(const Matrix& m) {
    std::ostringstream out;
    write_text(out, m);
    return out.str();
}

std::optional<Matrix> read_text(std::istream& in, std::size_t* line_counter) {
    std::size_t local = 0;
    std::size_t& line = line_counter ? *line_counter : local;
    std::string row;
    // Skip blank lines and comments between blocks.
    std::string header;
    while (std::getline(in, header)) {
        ++line;
        const auto first = header.find_first_not_of(" \t\r");
        if (first == std::string::npos || header[first] == '#') continue;
        break;
    }
    if (!in && header.empty()) return std::nullopt;

    std::istringstream hs(header);
    std::string kw;
    std::size_t rows_n = 0, cols_n = 0;
    if (!(hs >> kw >> rows_n) || kw != "dim" || rows_n == 0)
        throw ParseError("expected 'dim n' header, got '" + header + "'", line);
    if (!(hs >> cols_n)) cols_n = rows_n;  // square unless `dim r c`
    if (cols_n == 0) throw ParseError("zero column count", line);

    Matrix m(rows_n, cols_n);
    for (std::size_t i = 0; i < rows_n; ++i) {
        if (!std::getline(in, row)) throw ParseError("unexpected end of matrix block", line);
        ++line;
        std::istringstream rs(row);
        std::string tok;
        for (std::size_t j = 0; j < cols_n; ++j) {
            if (!(rs >> tok)) throw ParseError("row has fewer than " + std::to_string(cols_n) + " entries", line);
            const auto z = parse_complex(tok);
            if (!z) throw ParseError("bad complex entry '" + tok + "'", line);
            m.at(i, j) = *z;
        }
        std::string extra;
        if (rs >> extra) throw ParseError("row has more than " + std::to_string(cols_n) + " entries", line);
    }
    return m;
}

Matrix parse_text(const std::string& text) {
    std::istringstream in(text);
    auto m = read_text(in);
    if (!m) throw ParseError("no matrix block found");
    return *m;
}

}  // namespace qdom::mat
