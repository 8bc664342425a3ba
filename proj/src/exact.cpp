#include "agtop/exact.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace agtop {

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out))
        throw OverflowError("64-bit overflow in addition");
    return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out))
        throw OverflowError("64-bit overflow in multiplication");
    return out;
}

std::int64_t to_int64(const Integer& x)
{
    if (!x.fits_slong_p())
        throw OverflowError("integer does not fit in 64 bits: " + x.get_str());
    return x.get_si();
}

IntMatrix IntMatrix::identity(int n)
{
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_columns(int rows, std::span<const Vec> columns)
{
    IntMatrix m(rows, static_cast<int>(columns.size()));
    for (int j = 0; j < m.cols(); ++j) {
        if (static_cast<int>(columns[j].size()) != rows)
            throw std::invalid_argument("column length mismatch");
        for (int i = 0; i < rows; ++i)
            m(i, j) = columns[j][i];
    }
    return m;
}

IntMatrix IntMatrix::from_rows(std::span<const Vec> rows)
{
    if (rows.empty())
        return {};
    IntMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows(); ++i) {
        if (static_cast<int>(rows[i].size()) != m.cols())
            throw std::invalid_argument("row length mismatch");
        for (int j = 0; j < m.cols(); ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

Vec IntMatrix::row(int i) const
{
    return Vec(a_.begin() + static_cast<std::ptrdiff_t>(i) * cols_, a_.begin() + static_cast<std::ptrdiff_t>(i + 1) * cols_);
}

Vec IntMatrix::column(int j) const
{
    Vec v(rows_);
    for (int i = 0; i < rows_; ++i)
        v[i] = (*this)(i, j);
    return v;
}

IntMatrix IntMatrix::transpose() const
{
    IntMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix IntMatrix::block(int row0, int col0, int nrows, int ncols) const
{
    IntMatrix b(nrows, ncols);
    for (int i = 0; i < nrows; ++i)
        for (int j = 0; j < ncols; ++j)
            b(i, j) = (*this)(row0 + i, col0 + j);
    return b;
}

Vec IntMatrix::operator*(const Vec& v) const
{
    if (static_cast<int>(v.size()) != cols_)
        throw std::invalid_argument("matrix-vector size mismatch");
    Vec out(rows_, 0);
    for (int i = 0; i < rows_; ++i) {
        std::int64_t s = 0;
        for (int j = 0; j < cols_; ++j) {
            const std::int64_t x = (*this)(i, j);
            if (x != 0 && v[j] != 0)
                s = checked_add(s, checked_mul(x, v[j]));
        }
        out[i] = s;
    }
    return out;
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const
{
    if (cols_ != other.rows_)
        throw std::invalid_argument("matrix product size mismatch");
    IntMatrix p(rows_, other.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const std::int64_t x = (*this)(i, k);
            if (x == 0)
                continue;
            for (int j = 0; j < other.cols_; ++j)
                if (other(k, j) != 0)
                    p(i, j) = checked_add(p(i, j), checked_mul(x, other(k, j)));
        }
    return p;
}

std::string IntMatrix::str() const
{
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < cols_; ++j)
            os << (j ? " " : "") << (*this)(i, j);
    }
    os << ']';
    return os.str();
}

std::int64_t gcd_of(const Vec& v)
{
    std::int64_t g = 0;
    for (auto x : v)
        g = std::gcd(g, x);
    return g;
}

bool is_primitive(const Vec& v) { return gcd_of(v) == 1; }

bool is_zero(const Vec& v)
{
    return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

Vec sign_normalized(Vec v)
{
    for (auto x : v) {
        if (x == 0)
            continue;
        if (x < 0)
            for (auto& y : v)
                y = -y;
        break;
    }
    return v;
}

Vec primitive_part(const Vec& v)
{
    const std::int64_t g = gcd_of(v);
    if (g <= 1)
        return v;
    Vec out(v);
    for (auto& x : out)
        x /= g;
    return out;
}

std::int64_t dot(const Vec& a, const Vec& b)
{
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s = checked_add(s, checked_mul(a[i], b[i]));
    return s;
}

Vec sym_coords(const Vec& v)
{
    const int g = static_cast<int>(v.size());
    Vec out;
    out.reserve(sym_dim(g));
    for (int i = 0; i < g; ++i)
        for (int j = i; j < g; ++j)
            out.push_back(checked_mul(v[i], v[j]));
    return out;
}

namespace {

using i128 = __int128;

struct I128Policy {
    using T = i128;
    // out = (a*b - c*d) / prev, exact.
    static bool step(T a, T b, T c, T d, T prev, T& out)
    {
        T x, y, z;
        if (__builtin_mul_overflow(a, b, &x) || __builtin_mul_overflow(c, d, &y) || __builtin_sub_overflow(x, y, &z))
            return false;
        out = z / prev;
        return true;
    }
    static bool is_zero(T x) { return x == 0; }
    static T one() { return 1; }
};

struct MpzPolicy {
    using T = Integer;
    static bool step(const T& a, const T& b, const T& c, const T& d, const T& prev, T& out)
    {
        out = a * b - c * d;
        mpz_divexact(out.get_mpz_t(), out.get_mpz_t(), prev.get_mpz_t());
        return true;
    }
    static bool is_zero(const T& x) { return sgn(x) == 0; }
    static T one() { return 1; }
};

struct BareissOutcome {
    int rank = 0;
    int swap_sign = 1;
    bool full_square = false;
};

// Fraction-free elimination; entries after step k are (k+1)-minors of the input.
template <class P>
std::optional<BareissOutcome> bareiss(std::vector<typename P::T>& a, int rows, int cols, typename P::T& last_pivot)
{
    using T = typename P::T;
    BareissOutcome out;
    T prev = P::one();
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = r;
        while (p < rows && P::is_zero(a[static_cast<std::size_t>(p) * cols + c]))
            ++p;
        if (p == rows)
            continue;
        if (p != r) {
            for (int j = 0; j < cols; ++j)
                std::swap(a[static_cast<std::size_t>(p) * cols + j], a[static_cast<std::size_t>(r) * cols + j]);
            out.swap_sign = -out.swap_sign;
        }
        const T piv = a[static_cast<std::size_t>(r) * cols + c];
        for (int i = r + 1; i < rows; ++i) {
            const T lead = a[static_cast<std::size_t>(i) * cols + c];
            for (int j = c + 1; j < cols; ++j) {
                T v;
                if (!P::step(piv, a[static_cast<std::size_t>(i) * cols + j], lead, a[static_cast<std::size_t>(r) * cols + j], prev, v))
                    return std::nullopt;
                a[static_cast<std::size_t>(i) * cols + j] = v;
            }
            a[static_cast<std::size_t>(i) * cols + c] = T(0);
        }
        prev = piv;
        ++r;
    }
    out.rank = r;
    last_pivot = prev;
    out.full_square = (rows == cols && r == rows);
    return out;
}

template <class P>
std::vector<typename P::T> load(const IntMatrix& m)
{
    std::vector<typename P::T> a(static_cast<std::size_t>(m.rows()) * m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            a[static_cast<std::size_t>(i) * m.cols() + j] = typename P::T(static_cast<long>(m(i, j)));
    return a;
}

} // namespace

int rank(const IntMatrix& m)
{
    if (m.rows() == 0 || m.cols() == 0)
        return 0;
    {
        auto a = load<I128Policy>(m);
        i128 last;
        if (auto res = bareiss<I128Policy>(a, m.rows(), m.cols(), last))
            return res->rank;
    }
    auto a = load<MpzPolicy>(m);
    Integer last;
    return bareiss<MpzPolicy>(a, m.rows(), m.cols(), last)->rank;
}

int rank_of(std::span<const Vec> rows)
{
    if (rows.empty())
        return 0;
    return rank(IntMatrix::from_rows(rows));
}

Integer determinant(const IntMatrix& m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("determinant of non-square matrix");
    if (m.rows() == 0)
        return 1;
    {
        auto a = load<I128Policy>(m);
        i128 last;
        if (auto res = bareiss<I128Policy>(a, m.rows(), m.cols(), last)) {
            if (!res->full_square)
                return 0;
            // i128 -> mpz via two 64-bit halves
            const bool neg = last < 0;
            unsigned __int128 u = neg ? static_cast<unsigned __int128>(-last) : static_cast<unsigned __int128>(last);
            Integer hi(static_cast<unsigned long>(u >> 64));
            Integer lo(static_cast<unsigned long>(u & 0xFFFFFFFFFFFFFFFFULL));
            Integer v = (hi << 64) + lo;
            if (neg)
                v = -v;
            return res->swap_sign * v;
        }
    }
    auto a = load<MpzPolicy>(m);
    Integer last;
    auto res = bareiss<MpzPolicy>(a, m.rows(), m.cols(), last);
    if (!res->full_square)
        return 0;
    return res->swap_sign * last;
}

int determinant_sign(const IntMatrix& m) { return sgn(determinant(m)); }

Echelon unimodular_echelon(const IntMatrix& m)
{
    const int rows = m.rows(), cols = m.cols();
    std::vector<std::vector<Integer>> a(rows, std::vector<Integer>(cols));
    std::vector<std::vector<Integer>> u(rows, std::vector<Integer>(rows));
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j)
            a[i][j] = static_cast<long>(m(i, j));
        u[i][i] = 1;
    }
    Echelon e;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        for (int i = r + 1; i < rows; ++i) {
            if (sgn(a[i][c]) == 0)
                continue;
            if (sgn(a[r][c]) == 0) {
                std::swap(a[r], a[i]);
                std::swap(u[r], u[i]);
                continue;
            }
            Integer g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a[r][c].get_mpz_t(), a[i][c].get_mpz_t());
            const Integer p = a[r][c] / g, q = a[i][c] / g;
            // [[s, t], [-q, p]] has determinant s*p + t*q = 1.
            auto combine = [&](std::vector<Integer>& x, std::vector<Integer>& y) {
                for (std::size_t k = 0; k < x.size(); ++k) {
                    Integer nx = s * x[k] + t * y[k];
                    Integer ny = p * y[k] - q * x[k];
                    x[k] = std::move(nx);
                    y[k] = std::move(ny);
                }
            };
            combine(a[r], a[i]);
            combine(u[r], u[i]);
        }
        if (sgn(a[r][c]) == 0)
            continue;
        if (sgn(a[r][c]) < 0) {
            for (auto& x : a[r])
                x = -x;
            for (auto& x : u[r])
                x = -x;
        }
        // keep entries above the pivot reduced so the transform stays small
        for (int i = 0; i < r; ++i) {
            if (sgn(a[i][c]) == 0)
                continue;
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[r][c].get_mpz_t());
            for (int k = 0; k < cols; ++k)
                a[i][k] -= q * a[r][k];
            for (int k = 0; k < rows; ++k)
                u[i][k] -= q * u[r][k];
        }
        e.pivot_columns.push_back(c);
        ++r;
    }
    e.rank = r;
    e.transform = IntMatrix(rows, rows);
    e.reduced = IntMatrix(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < rows; ++j)
            e.transform(i, j) = to_int64(u[i][j]);
        for (int j = 0; j < cols; ++j)
            e.reduced(i, j) = to_int64(a[i][j]);
    }
    return e;
}

IntMatrix integer_left_kernel(const IntMatrix& m)
{
    const Echelon e = unimodular_echelon(m);
    return e.transform.block(e.rank, 0, m.rows() - e.rank, m.rows());
}

std::optional<IntMatrix> unimodular_inverse(const IntMatrix& m)
{
    const int n = m.rows();
    if (n != m.cols())
        return std::nullopt;
    const Integer det = determinant(m);
    if (abs(det) != 1)
        return std::nullopt;
    RatMatrix a(n, std::vector<Rational>(2 * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            a[i][j] = static_cast<long>(m(i, j));
        a[i][n + i] = 1;
    }
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (sgn(a[p][c]) == 0)
            ++p;
        std::swap(a[p], a[c]);
        const Rational piv = a[c][c];
        for (auto& x : a[c])
            x /= piv;
        for (int i = 0; i < n; ++i) {
            if (i == c || sgn(a[i][c]) == 0)
                continue;
            const Rational f = a[i][c];
            for (int j = 0; j < 2 * n; ++j)
                a[i][j] -= f * a[c][j];
        }
    }
    IntMatrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Rational& x = a[i][n + j];
            if (x.get_den() != 1)
                return std::nullopt;
            inv(i, j) = to_int64(x.get_num());
        }
    return inv;
}

int rational_rank(RatMatrix m)
{
    const int rows = static_cast<int>(m.size());
    if (rows == 0)
        return 0;
    const int cols = static_cast<int>(m[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = r;
        while (p < rows && sgn(m[p][c]) == 0)
            ++p;
        if (p == rows)
            continue;
        std::swap(m[p], m[r]);
        for (int i = r + 1; i < rows; ++i) {
            if (sgn(m[i][c]) == 0)
                continue;
            const Rational f = m[i][c] / m[r][c];
            for (int j = c; j < cols; ++j)
                m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

std::vector<Vec> integer_nullspace(const IntMatrix& m)
{
    const int rows = m.rows(), cols = m.cols();
    RatMatrix a(rows, std::vector<Rational>(cols));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            a[i][j] = static_cast<long>(m(i, j));
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = r;
        while (p < rows && sgn(a[p][c]) == 0)
            ++p;
        if (p == rows)
            continue;
        std::swap(a[p], a[r]);
        const Rational piv = a[r][c];
        for (auto& x : a[r])
            x /= piv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || sgn(a[i][c]) == 0)
                continue;
            const Rational f = a[i][c];
            for (int j = c; j < cols; ++j)
                a[i][j] -= f * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    std::vector<Vec> basis;
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivots)
        is_pivot[c] = true;
    for (int f = 0; f < cols; ++f) {
        if (is_pivot[f])
            continue;
        std::vector<Rational> x(cols);
        x[f] = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k)
            x[pivots[k]] = -a[k][f];
        Integer lcm = 1;
        for (const auto& q : x)
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
        Vec v(cols);
        for (int j = 0; j < cols; ++j) {
            Rational s = x[j] * lcm;
            v[j] = to_int64(s.get_num());
        }
        basis.push_back(primitive_part(v));
    }
    return basis;
}

std::string to_string(const Vec& v)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

} // namespace agtop
