#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "abvar/core.hpp"

namespace abvar {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, T(0)) {}
    Matrix(std::initializer_list<std::initializer_list<long>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& r : init) {
            ABVAR_ASSERT(r.size() == cols_, "ragged initializer");
            for (long v : r) a_.emplace_back(v);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    }
    void set_row(std::size_t i, const std::vector<T>& v) {
        ABVAR_ASSERT(v.size() == cols_, "row length");
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
    }
    void append_row(const std::vector<T>& v) {
        if (rows_ == 0 && cols_ == 0) cols_ = v.size();
        ABVAR_ASSERT(v.size() == cols_, "row length");
        a_.insert(a_.end(), v.begin(), v.end());
        ++rows_;
    }
    void swap_rows(std::size_t i, std::size_t k) {
        if (i == k) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
    }
    void swap_cols(std::size_t i, std::size_t k) {
        if (i == k) return;
        for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, k));
    }
    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
    Matrix submatrix_rows(std::size_t begin, std::size_t end) const {
        Matrix s(end - begin, cols_);
        for (std::size_t i = begin; i < end; ++i)
            for (std::size_t j = 0; j < cols_; ++j) s(i - begin, j) = (*this)(i, j);
        return s;
    }
    bool is_zero() const {
        for (const auto& x : a_)
            if (x != 0) return false;
        return true;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        ABVAR_ASSERT(a.cols_ == b.rows_, "matrix product shape");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& x = a(i, k);
                if (x == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
            }
        return c;
    }
    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        ABVAR_ASSERT(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix sum shape");
        Matrix c = a;
        for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] += b.a_[i];
        return c;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        ABVAR_ASSERT(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix difference shape");
        Matrix c = a;
        for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
        return c;
    }
    friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
        os << "[";
        for (std::size_t i = 0; i < m.rows_; ++i) {
            os << (i ? ", [" : "[");
            for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? ", " : "") << m(i, j);
            os << "]";
        }
        return os << "]";
    }

    const std::vector<T>& data() const { return a_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

RatMatrix to_rat(const IntMatrix& m);

/// Row-vector times matrix.
RatVec vec_mul(const RatVec& v, const RatMatrix& m);
IntVec vec_mul(const IntVec& v, const IntMatrix& m);

struct HnfResult {
    IntMatrix H;  // same shape as input; zero rows last
    IntMatrix U;  // unimodular, H = U * m
};

/// Row Hermite normal form: upper echelon, positive pivots, entries above
/// each pivot reduced into [0, pivot). Zero rows are moved to the bottom.
HnfResult hnf(const IntMatrix& m);

/// Nonzero rows of the Hermite normal form of the row lattice of m. When
/// `modulus` is nonzero the lattice is taken to be rowspace(m) + modulus*Z^n,
/// which must be full rank; intermediate entries stay bounded by modulus.
IntMatrix hnf_basis(const IntMatrix& m, const Int& modulus = 0);

struct SnfResult {
    IntMatrix D;  // diagonal, d_1 | d_2 | ..., nonnegative
    IntMatrix U;  // unimodular rows
    IntMatrix V;  // unimodular columns; D = U * m * V
};

SnfResult snf(const IntMatrix& m);

/// Diagonal of the Smith form only.
std::vector<Int> elementary_divisors(const IntMatrix& m);

/// LLL with delta = 3/4 for the row basis under the bilinear form `gram`
/// (x . gram . y^T). Dependent rows are discarded. Throws NonPositiveDefinite
/// if gram is not positive definite on the span.
IntMatrix lll_reduce(const IntMatrix& basis, const RatMatrix& gram);

/// Exact rational Cholesky test (LDL^T with all pivots positive).
bool is_positive_definite(const RatMatrix& gram);

/// All nonzero integer vectors x (up to sign: first nonzero entry positive)
/// with x . gram . x^T <= bound. Gram must be positive definite. Stops and
/// returns std::nullopt when more than `limit` vectors are found.
std::optional<std::vector<IntVec>> short_vectors(const RatMatrix& gram, const Rat& bound,
                                                 std::size_t limit = 200000);

Rat determinant(const RatMatrix& m);
Int determinant(const IntMatrix& m);
std::size_t rank(const RatMatrix& m);
/// Inverse of a square nonsingular rational matrix.
RatMatrix inverse(const RatMatrix& m);
/// Basis (rows) of the left kernel {x : x * m = 0}.
RatMatrix left_kernel(const RatMatrix& m);
/// Solve x * m = b for a row vector x; nullopt when inconsistent.
std::optional<RatVec> solve_left(const RatMatrix& m, const RatVec& b);

/// Row-reduced echelon form over F_p of an integer matrix; returns the
/// basis (rows, entries in [0,p)) of the left kernel {x : x*m = 0 mod p}.
IntMatrix left_kernel_mod(const IntMatrix& m, const Int& p);
/// Rank over F_p.
std::size_t rank_mod(const IntMatrix& m, const Int& p);

/// Characteristic polynomial coefficients (low to high, monic) of a square
/// rational matrix.
RatVec charpoly(const RatMatrix& m);

}  // namespace abvar
