#pragma once

// Exact integer and rational linear algebra shared by every module.
//
// Lattice vectors and small integer matrices are stored as 64-bit integers with
// checked arithmetic; anything that can grow (determinants, eliminations) runs
// through 128-bit fraction-free elimination and falls back to GMP integers on
// overflow. Quadratic forms use GMP rationals throughout.

#include <cstdint>
#include <gmpxx.h>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace agtop {

using Integer = mpz_class;
using Rational = mpq_class;
using Vec = std::vector<std::int64_t>;

struct OverflowError : std::overflow_error {
    using std::overflow_error::overflow_error;
};

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t to_int64(const Integer& x);

/// Row-major dense integer matrix.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0) {}

    static IntMatrix identity(int n);
    static IntMatrix from_columns(int rows, std::span<const Vec> columns);
    static IntMatrix from_rows(std::span<const Vec> rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    std::int64_t& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    std::int64_t operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    Vec row(int i) const;
    Vec column(int j) const;
    IntMatrix transpose() const;
    IntMatrix block(int row0, int col0, int nrows, int ncols) const;

    Vec operator*(const Vec& v) const;
    IntMatrix operator*(const IntMatrix& other) const;
    bool operator==(const IntMatrix& other) const = default;

    std::string str() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::int64_t> a_;
};

std::int64_t gcd_of(const Vec& v);
bool is_primitive(const Vec& v);
bool is_zero(const Vec& v);
/// Flips the sign so the first nonzero entry is positive.
Vec sign_normalized(Vec v);
Vec primitive_part(const Vec& v);
std::int64_t dot(const Vec& a, const Vec& b);

/// Upper-triangular coordinates (i <= j) of the rank-one form v v^t.
Vec sym_coords(const Vec& v);
inline int sym_dim(int g) { return g * (g + 1) / 2; }

int rank(const IntMatrix& m);
/// Rank of the given vectors, treated as rows.
int rank_of(std::span<const Vec> rows);
Integer determinant(const IntMatrix& m);
int determinant_sign(const IntMatrix& m);

/// U * M = H with U unimodular and H in row echelon form. `rank` nonzero rows.
struct Echelon {
    IntMatrix transform;
    IntMatrix reduced;
    int rank = 0;
    std::vector<int> pivot_columns;
};
Echelon unimodular_echelon(const IntMatrix& m);

/// Z-basis (as rows) of the integer left kernel {y : y^t M = 0}; saturated by construction.
IntMatrix integer_left_kernel(const IntMatrix& m);

/// Inverse of a matrix with determinant +-1.
std::optional<IntMatrix> unimodular_inverse(const IntMatrix& m);

/// Dense rational matrix helpers used by the quadratic-form code.
using RatMatrix = std::vector<std::vector<Rational>>;
int rational_rank(RatMatrix m);
/// Basis of the right nullspace {x : M x = 0}, scaled to primitive integer vectors.
std::vector<Vec> integer_nullspace(const IntMatrix& m);

std::string to_string(const Vec& v);

} // namespace agtop
