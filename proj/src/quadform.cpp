#include "agtop/quadform.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

namespace agtop {

QuadraticForm::QuadraticForm(RatMatrix entries) : a_(std::move(entries))
{
    const std::size_t g = a_.size();
    for (const auto& row : a_)
        if (row.size() != g)
            throw std::invalid_argument("form matrix is not square");
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (a_[i][j] != a_[j][i])
                throw std::invalid_argument("form matrix is not symmetric");
}

QuadraticForm QuadraticForm::identity(int g)
{
    RatMatrix a(g, std::vector<Rational>(g));
    for (int i = 0; i < g; ++i)
        a[i][i] = 1;
    return QuadraticForm(std::move(a));
}

FormClass QuadraticForm::classify() const
{
    // Symmetric elimination: a zero pivot must have an all-zero row for psd.
    RatMatrix a = a_;
    const int n = g();
    bool definite = true;
    for (int k = 0; k < n; ++k) {
        const int s = sgn(a[k][k]);
        if (s < 0)
            return FormClass::Other;
        if (s == 0) {
            definite = false;
            for (int j = k + 1; j < n; ++j)
                if (sgn(a[k][j]) != 0)
                    return FormClass::Other;
            continue;
        }
        for (int i = k + 1; i < n; ++i) {
            if (sgn(a[i][k]) == 0)
                continue;
            const Rational f = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j)
                a[i][j] -= f * a[k][j];
        }
    }
    // Kernels of rational matrices always have rational bases.
    return definite ? FormClass::PositiveDefinite : FormClass::RationalKernelPsd;
}

Rational QuadraticForm::value(const Vec& x) const
{
    Rational s = 0;
    const int n = g();
    for (int i = 0; i < n; ++i) {
        if (x[i] == 0)
            continue;
        Rational row = 0;
        for (int j = 0; j < n; ++j)
            if (x[j] != 0)
                row += a_[i][j] * static_cast<long>(x[j]);
        s += row * static_cast<long>(x[i]);
    }
    return s;
}

QuadraticForm QuadraticForm::scaled(const Rational& s) const
{
    RatMatrix a = a_;
    for (auto& row : a)
        for (auto& x : row)
            x *= s;
    return QuadraticForm(std::move(a));
}

QuadraticForm QuadraticForm::plus(const Rational& t, const QuadraticForm& r) const
{
    RatMatrix a = a_;
    for (int i = 0; i < g(); ++i)
        for (int j = 0; j < g(); ++j)
            a[i][j] += t * r.a_[i][j];
    return QuadraticForm(std::move(a));
}

QuadraticForm QuadraticForm::conjugated(const IntMatrix& h) const
{
    const int n = g();
    RatMatrix t(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (h(i, k) != 0)
                    t[i][j] += static_cast<long>(h(i, k)) * a_[k][j];
    RatMatrix out(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (h(j, k) != 0)
                    out[i][j] += t[i][k] * static_cast<long>(h(j, k));
    return QuadraticForm(std::move(out));
}

std::string QuadraticForm::str() const
{
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < g(); ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < g(); ++j)
            os << (j ? " " : "") << a_[i][j].get_str();
    }
    os << ']';
    return os.str();
}

namespace {

// Q[x] = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2
struct Ldl {
    std::vector<Rational> d;
    RatMatrix mu;
};

Ldl decompose(const QuadraticForm& q)
{
    const int n = q.g();
    RatMatrix a = q.entries();
    Ldl l;
    l.d.resize(n);
    l.mu.assign(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i) {
        l.d[i] = a[i][i];
        for (int j = i + 1; j < n; ++j)
            l.mu[i][j] = a[i][j] / a[i][i];
        for (int r = i + 1; r < n; ++r)
            for (int c = i + 1; c < n; ++c)
                a[r][c] -= l.mu[i][r] * a[i][c];
    }
    return l;
}

class ShortVectors {
public:
    ShortVectors(const QuadraticForm& q) : q_(q), l_(decompose(q)), n_(q.g()), x_(n_, 0) {}

    MinimalVectorSet run()
    {
        bound_ = q_(0, 0);
        for (int i = 1; i < n_; ++i)
            bound_ = std::min(bound_, q_(i, i));
        top_ = bound_;
        descend(n_ - 1, top_);
        MinimalVectorSet out;
        out.minimum = bound_;
        std::set<Vec> uniq;
        for (auto& v : found_)
            uniq.insert(sign_normalized(v));
        out.vectors.assign(uniq.begin(), uniq.end());
        return out;
    }

private:
    void descend(int i, const Rational& budget)
    {
        Rational c = 0;
        for (int j = i + 1; j < n_; ++j)
            if (x_[j] != 0)
                c -= l_.mu[i][j] * static_cast<long>(x_[j]);
        Integer fl;
        mpz_fdiv_q(fl.get_mpz_t(), c.get_num_mpz_t(), c.get_den_mpz_t());
        const std::int64_t start = to_int64(fl);
        // walk both directions from floor(c) while d (x - c)^2 fits in the budget
        for (int dir : {0, 1}) {
            for (std::int64_t x = dir == 0 ? start : start + 1;; x += dir == 0 ? -1 : 1) {
                const Rational diff = Rational(static_cast<long>(x)) - c;
                const Rational used = l_.d[i] * diff * diff;
                if (used > budget)
                    break;
                x_[i] = x;
                const Rational rest = budget - used;
                if (i == 0)
                    record(top_ - rest);
                else
                    descend(i - 1, rest);
                x_[i] = 0;
            }
        }
    }

    void record(const Rational& val)
    {
        if (is_zero(x_))
            return;
        if (val < bound_) {
            bound_ = val;
            found_.clear();
        }
        if (val == bound_)
            found_.push_back(x_);
    }

    const QuadraticForm& q_;
    Ldl l_;
    int n_;
    Vec x_;
    Rational top_;
    Rational bound_;
    std::vector<Vec> found_;
};

} // namespace

MinimalVectorSet minimal_vectors(const QuadraticForm& q)
{
    if (!q.is_positive_definite())
        throw std::invalid_argument("minimal_vectors: form is not positive definite");
    return ShortVectors(q).run();
}

bool is_perfect(const QuadraticForm& q)
{
    const auto mv = minimal_vectors(q);
    std::vector<Vec> f;
    for (const auto& v : mv.vectors)
        f.push_back(sym_coords(v));
    return rank_of(f) == sym_dim(q.g());
}

PerfectCone cone_of_form(const QuadraticForm& q)
{
    return PerfectCone(q.g(), minimal_vectors(q).vectors);
}

QuadraticForm principal_form(int g)
{
    if (g < 1)
        throw std::invalid_argument("principal_form: g must be positive");
    RatMatrix a(g, std::vector<Rational>(g, Rational(1, 2)));
    for (int i = 0; i < g; ++i)
        a[i][i] = 1;
    for (auto& row : a)
        for (auto& x : row)
            x.canonicalize();
    return QuadraticForm(std::move(a));
}

QuadraticForm normalized(const QuadraticForm& q)
{
    const Rational m = minimal_vectors(q).minimum;
    return q.scaled(1 / m);
}

QuadraticForm form_from_sym(int g, const Vec& a)
{
    RatMatrix r(g, std::vector<Rational>(g));
    int k = 0;
    for (int i = 0; i < g; ++i)
        for (int j = i; j < g; ++j, ++k) {
            if (i == j)
                r[i][i] = static_cast<long>(a[k]);
            else {
                r[i][j] = Rational(static_cast<long>(a[k]), 2);
                r[i][j].canonicalize();
                r[j][i] = r[i][j];
            }
        }
    return QuadraticForm(std::move(r));
}

QuadraticForm voronoi_neighbor(const QuadraticForm& q0, Mask facet)
{
    const QuadraticForm q = normalized(q0);
    const int g = q.g();
    const int big_n = sym_dim(g);
    const PerfectCone sigma = cone_of_form(q);
    if (sigma.dimension() != big_n)
        throw std::invalid_argument("voronoi_neighbor: form is not perfect");
    const auto forms = sigma.forms();
    std::vector<Vec> on;
    for (int i = 0; i < sigma.size(); ++i)
        if (facet >> i & 1)
            on.push_back(forms[i]);
    if (on.empty() || rank_of(on) != big_n - 1)
        throw std::invalid_argument("voronoi_neighbor: mask is not a facet");
    Vec a = integer_nullspace(IntMatrix::from_rows(on)).at(0);
    int side = 0;
    for (int i = 0; i < sigma.size(); ++i) {
        if (facet >> i & 1)
            continue;
        const int s = dot(a, forms[i]) > 0 ? 1 : -1;
        if (dot(a, forms[i]) == 0 || (side != 0 && s != side))
            throw std::invalid_argument("voronoi_neighbor: mask is not a facet");
        side = s;
    }
    if (side < 0)
        for (auto& x : a)
            x = -x;
    const QuadraticForm r = form_from_sym(g, a);

    std::set<Vec> facet_vecs;
    for (int i = 0; i < sigma.size(); ++i)
        if (facet >> i & 1)
            facet_vecs.insert(sigma.generator(i));

    Rational t = 1;
    for (int iter = 0; iter < 10000; ++iter) {
        const QuadraticForm qt = q.plus(t, r);
        if (!qt.is_positive_definite()) {
            t /= 2;
            continue;
        }
        const auto mv = minimal_vectors(qt);
        if (mv.minimum < 1) {
            Rational best = t;
            for (const auto& w : mv.vectors) {
                const Rational rw = r.value(w);
                if (sgn(rw) >= 0)
                    continue;
                const Rational tw = (q.value(w) - 1) / (-rw);
                if (tw < best)
                    best = tw;
            }
            t = best;
            continue;
        }
        if (mv.minimum == 1) {
            bool fresh = false;
            for (const auto& w : mv.vectors)
                if (!facet_vecs.count(w))
                    fresh = true;
            if (fresh)
                return qt;
        }
        t *= 2;
    }
    throw std::runtime_error("voronoi_neighbor: line search did not terminate");
}

namespace {

bool next_line(std::istream& is, std::string& line, int& ln)
{
    while (std::getline(is, line)) {
        ++ln;
        if (auto p = line.find('#'); p != std::string::npos)
            line.erase(p);
        if (line.find_first_not_of(" \t\r") != std::string::npos)
            return true;
    }
    return false;
}

[[noreturn]] void fail(int ln, const std::string& what)
{
    throw std::runtime_error("catalog line " + std::to_string(ln) + ": " + what);
}

Rational parse_rational(const std::string& tok, int ln)
{
    static const std::regex re(R"(^-?\d+(/\d+)?$)");
    if (!std::regex_match(tok, re))
        fail(ln, "not an exact rational: '" + tok + "'");
    Rational r;
    if (r.set_str(tok, 10) != 0)
        fail(ln, "not an exact rational: '" + tok + "'");
    if (sgn(r.get_den()) == 0)
        fail(ln, "zero denominator in '" + tok + "'");
    r.canonicalize();
    return r;
}

} // namespace

FormCatalog load_form_catalog(std::istream& is)
{
    FormCatalog cat;
    std::string line;
    int ln = 0;
    if (!next_line(is, line, ln))
        return cat;
    {
        std::istringstream hs(line);
        std::string kw, rest;
        int g = 0;
        if (!(hs >> kw >> g) || kw != "g" || g < 1 || (hs >> rest))
            fail(ln, "expected 'g <int>' header");
        cat.g = g;
    }
    while (next_line(is, line, ln)) {
        std::istringstream fs(line);
        std::string kw, name, rest;
        if (!(fs >> kw >> name) || kw != "form" || (fs >> rest))
            fail(ln, "expected 'form <name>'");
        const int header_line = ln;
        RatMatrix a;
        for (int i = 0; i < cat.g; ++i) {
            if (!next_line(is, line, ln))
                fail(ln, "unexpected end of form '" + name + "'");
            std::istringstream rs(line);
            std::vector<Rational> row;
            std::string tok;
            while (rs >> tok)
                row.push_back(parse_rational(tok, ln));
            if (static_cast<int>(row.size()) != cat.g)
                fail(ln, "expected " + std::to_string(cat.g) + " entries");
            a.push_back(std::move(row));
        }
        QuadraticForm q;
        try {
            q = QuadraticForm(std::move(a));
        } catch (const std::invalid_argument& e) {
            fail(header_line, "form '" + name + "': " + e.what());
        }
        if (!q.is_positive_definite())
            fail(header_line, "form '" + name + "' is not positive definite");
        q = normalized(q);
        if (!is_perfect(q))
            fail(header_line, "form '" + name + "' is not perfect");
        cat.names.push_back(name);
        cat.forms.push_back(std::move(q));
    }
    return cat;
}

FormCatalog load_form_catalog_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open catalog " + path);
    return load_form_catalog(in);
}

void write_form_catalog(std::ostream& os, const FormCatalog& cat)
{
    os << "g " << cat.g << '\n';
    for (std::size_t k = 0; k < cat.forms.size(); ++k) {
        os << "form " << cat.names[k] << '\n';
        for (int i = 0; i < cat.g; ++i) {
            for (int j = 0; j < cat.g; ++j)
                os << (j ? " " : "") << cat.forms[k](i, j).get_str();
            os << '\n';
        }
    }
}

std::string bundled_catalog_dir() { return std::string(AGTOP_DATA_DIR) + "/catalogs"; }

std::string bundled_catalog_path(int g) { return bundled_catalog_dir() + "/g" + std::to_string(g) + ".txt"; }

std::vector<FormCatalog> load_catalogs(const std::string& dir, int g)
{
    std::vector<FormCatalog> cats(g + 1);
    for (int r = 1; r <= g; ++r) {
        cats[r] = load_form_catalog_file(dir + "/g" + std::to_string(r) + ".txt");
        if (cats[r].g != r)
            throw std::runtime_error(dir + "/g" + std::to_string(r) + ".txt declares g " + std::to_string(cats[r].g));
    }
    return cats;
}

} // namespace agtop
