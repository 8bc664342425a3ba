#pragma once

// Slow, literal reference implementations used to check the library.

#include "agtop/cone.hpp"
#include "agtop/exact.hpp"
#include "agtop/quadform.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace oracle {

using agtop::Integer;
using agtop::Rational;
using agtop::Vec;
using QMat = std::vector<std::vector<Rational>>;

inline QMat to_q(const std::vector<Vec>& rows)
{
    QMat m;
    for (const auto& r : rows) {
        std::vector<Rational> q;
        for (auto x : r)
            q.emplace_back(static_cast<long>(x));
        m.push_back(std::move(q));
    }
    return m;
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<int> rref(QMat& m)
{
    std::vector<int> piv;
    if (m.empty())
        return piv;
    const int rows = static_cast<int>(m.size()), cols = static_cast<int>(m[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (m[i][c] != 0) {
                p = i;
                break;
            }
        if (p < 0)
            continue;
        std::swap(m[r], m[p]);
        const Rational inv = 1 / m[r][c];
        for (auto& x : m[r])
            x *= inv;
        for (int i = 0; i < rows; ++i)
            if (i != r && m[i][c] != 0) {
                const Rational f = m[i][c];
                for (int j = 0; j < cols; ++j)
                    m[i][j] -= f * m[r][j];
            }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

inline int rank(const std::vector<Vec>& rows)
{
    QMat m = to_q(rows);
    return static_cast<int>(rref(m).size());
}

/// Right nullspace of a rational matrix with `cols` columns.
inline std::vector<std::vector<Rational>> nullspace(QMat m, int cols)
{
    const auto piv = rref(m);
    std::vector<std::vector<Rational>> out;
    std::set<int> pset(piv.begin(), piv.end());
    for (int f = 0; f < cols; ++f) {
        if (pset.count(f))
            continue;
        std::vector<Rational> x(cols, 0);
        x[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i)
            x[piv[i]] = -m[i][f];
        out.push_back(std::move(x));
    }
    return out;
}

/// Leibniz expansion.
inline Integer determinant(const std::vector<Vec>& rows)
{
    const int n = static_cast<int>(rows.size());
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    Integer total = 0;
    do {
        int inv = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                inv += p[i] > p[j];
        Integer term = inv % 2 ? -1 : 1;
        for (int i = 0; i < n; ++i)
            term *= static_cast<long>(rows[i][p[i]]);
        total += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

/// All nonzero vectors in [-b, b]^g.
inline std::vector<Vec> box(int g, int b)
{
    std::vector<Vec> out;
    Vec x(g, -b);
    while (true) {
        if (!agtop::is_zero(x))
            out.push_back(x);
        int i = 0;
        while (i < g && x[i] == b)
            x[i++] = -b;
        if (i == g)
            break;
        ++x[i];
    }
    return out;
}

/// Minimal vectors by scanning a box; valid when the box contains every vector of value <= the minimum.
inline agtop::MinimalVectorSet minimal_vectors(const agtop::QuadraticForm& q, int b)
{
    agtop::MinimalVectorSet out;
    bool first = true;
    std::set<Vec> found;
    for (const auto& x : box(q.g(), b)) {
        const Rational v = q.value(x);
        if (first || v < out.minimum) {
            out.minimum = v;
            found.clear();
            first = false;
        }
        if (v == out.minimum)
            found.insert(agtop::sign_normalized(x));
    }
    out.vectors.assign(found.begin(), found.end());
    return out;
}

/// Facets of the cone spanned by `forms` (rows in R^N): generator subsets cut out by a supporting
/// hyperplane of the linear span with the rest strictly on one side, found from every (d-1)-subset.
inline std::set<agtop::Mask> facets(const std::vector<Vec>& forms)
{
    const int n = static_cast<int>(forms.size());
    const int d = rank(forms);
    std::set<agtop::Mask> out;
    if (d <= 1) {
        if (d == 1)
            out.insert(0);
        return out;
    }
    // basis of the span, as a subset of the generators
    std::vector<Vec> basis;
    for (const auto& f : forms) {
        basis.push_back(f);
        if (rank(basis) < static_cast<int>(basis.size()))
            basis.pop_back();
    }
    auto gram_row = [&](const Vec& f) {
        std::vector<Rational> r;
        for (const auto& b : basis)
            r.emplace_back(static_cast<long>(agtop::dot(f, b)));
        return r;
    };
    std::vector<int> idx(d - 1);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        std::vector<Vec> sub;
        for (int i : idx)
            sub.push_back(forms[i]);
        if (rank(sub) == d - 1) {
            QMat m;
            for (const auto& f : sub)
                m.push_back(gram_row(f));
            const auto ns = nullspace(m, d);
            if (ns.size() == 1) {
                const auto& c = ns[0];  // normal = sum c_k basis_k
                int side = 0;
                bool ok = true;
                agtop::Mask mask = 0;
                for (int j = 0; j < n && ok; ++j) {
                    const auto gr = gram_row(forms[j]);
                    Rational s = 0;
                    for (int k = 0; k < d; ++k)
                        s += c[k] * gr[k];
                    const int sg = sgn(s);
                    if (sg == 0) {
                        mask |= agtop::Mask{1} << j;
                    } else if (side == 0) {
                        side = sg;
                    } else if (sg != side) {
                        ok = false;
                    }
                }
                if (ok)
                    out.insert(mask);
            }
        }
        int i = d - 2;
        while (i >= 0 && idx[i] == n - (d - 1) + i)
            --i;
        if (i < 0)
            break;
        ++idx[i];
        for (int j = i + 1; j < d - 1; ++j)
            idx[j] = idx[j - 1] + 1;
    }
    return out;
}

/// Literal coloop test for g <= 3: look for w_2, ..., w_g in [-b, b]^g such that (v, w) is a basis of Z^g
/// and every other element has zero v-coordinate in it. The v-coordinate of u is det(u, w) / det(v, w).
inline bool is_coloop(const std::vector<Vec>& s, int k, int b)
{
    const int g = static_cast<int>(s[k].size());
    if (g == 1)
        return s.size() == 1 && std::abs(s[k][0]) == 1;
    if (g > 3)
        throw std::invalid_argument("oracle::is_coloop: g <= 3 only");
    // plain cofactor expansion; entries are tiny for g <= 3
    auto det_with = [&](const Vec& u, const Vec& a, const Vec* c) -> std::int64_t {
        if (g == 2)
            return u[0] * a[1] - u[1] * a[0];
        const Vec& d = *c;
        return u[0] * (a[1] * d[2] - a[2] * d[1]) - u[1] * (a[0] * d[2] - a[2] * d[0]) +
               u[2] * (a[0] * d[1] - a[1] * d[0]);
    };
    auto test = [&](const Vec& a, const Vec* c) {
        if (std::abs(det_with(s[k], a, c)) != 1)
            return false;
        for (std::size_t j = 0; j < s.size(); ++j)
            if (static_cast<int>(j) != k && det_with(s[j], a, c) != 0)
                return false;
        return true;
    };
    const auto cand = box(g, b);
    for (std::size_t a = 0; a < cand.size(); ++a) {
        if (g == 2) {
            if (test(cand[a], nullptr))
                return true;
            continue;
        }
        for (std::size_t c = a + 1; c < cand.size(); ++c)
            if (test(cand[a], &cand[c]))
                return true;
    }
    return false;
}

inline agtop::IntMatrix random_unimodular(int n, std::mt19937_64& rng)
{
    agtop::IntMatrix a = agtop::IntMatrix::identity(n);
    std::uniform_int_distribution<int> pick(0, n - 1), coef(-2, 2);
    for (int step = 0; step < 10 && n > 1; ++step) {
        const int i = pick(rng), j = pick(rng);
        if (i == j)
            continue;
        const int c = coef(rng);
        for (int col = 0; col < n; ++col)
            a(i, col) += c * a(j, col);
    }
    return a;
}

} // namespace oracle
