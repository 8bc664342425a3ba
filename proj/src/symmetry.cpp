#include "agtop/symmetry.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

namespace agtop {

int ConeTransform::det() const { return determinant_sign(matrix); }

namespace {

IntMatrix adjugate(const IntMatrix& m)
{
    const int n = m.rows();
    IntMatrix adj(n, n);
    if (n == 1) {
        adj(0, 0) = 1;
        return adj;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            IntMatrix minor(n - 1, n - 1);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == j)
                    continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == i)
                        continue;
                    minor(rr, cc++) = m(r, c);
                }
                ++rr;
            }
            const Integer d = determinant(minor);
            adj(i, j) = to_int64((i + j) % 2 ? Integer(-d) : d);
        }
    return adj;
}

} // namespace

ConeInvariants cone_invariants(const PerfectCone& c)
{
    const int r = c.g();
    const int n = c.size();
    if (c.rank() != r)
        throw std::invalid_argument("cone_invariants: cone must have full rank");
    ConeInvariants inv;
    inv.h = IntMatrix(n, n);
    if (r > 0) {
        IntMatrix t(r, r);
        for (const auto& v : c.generators())
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j)
                    t(i, j) = checked_add(t(i, j), checked_mul(v[i], v[j]));
        const IntMatrix adj = adjugate(t);
        std::vector<Vec> av;
        for (const auto& v : c.generators())
            av.push_back(adj * v);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                inv.h(i, j) = dot(c.generator(i), av[j]);
    }
    inv.row_signature.resize(n);
    for (int i = 0; i < n; ++i) {
        auto& sig = inv.row_signature[i];
        sig.push_back(inv.h(i, i));
        std::vector<std::int64_t> rest;
        for (int j = 0; j < n; ++j)
            if (j != i)
                rest.push_back(std::abs(inv.h(i, j)));
        std::sort(rest.begin(), rest.end());
        sig.insert(sig.end(), rest.begin(), rest.end());
    }
    auto rows = inv.row_signature;
    std::sort(rows.begin(), rows.end());
    inv.fingerprint = {c.rank(), c.dimension(), n};
    for (const auto& s : rows)
        inv.fingerprint.insert(inv.fingerprint.end(), s.begin(), s.end());
    return inv;
}

namespace {

// Backtracking over signed images of a spanning set of generators of `a`.
class Search {
public:
    using Emit = std::function<bool(ConeTransform&&)>;

    Search(const PerfectCone& a, const ConeInvariants& ia, const PerfectCone& b, const ConeInvariants& ib, Emit emit)
        : a_(a), b_(b), ia_(ia), ib_(ib), emit_(std::move(emit)), r_(a.g()), n_(a.size())
    {
        for (int j = 0; j < n_; ++j)
            index_b_.emplace(b.generator(j), j);
        choose_basis();
        img_.assign(r_, -1);
        sgn_.assign(r_, 1);
        used_.assign(n_, false);
    }

    void run()
    {
        if (r_ == 0) {
            finish();
            return;
        }
        descend(0);
    }

private:
    void choose_basis()
    {
        std::vector<int> rarity(n_, 0);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (ib_.row_signature[j] == ia_.row_signature[i])
                    ++rarity[i];
        std::vector<int> idx(n_);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) { return rarity[x] < rarity[y]; });
        std::vector<Vec> chosen;
        // prefer generators linked to those already chosen, so signs propagate
        while (static_cast<int>(order_.size()) < r_) {
            int pick = -1;
            for (int pass = 0; pass < 2 && pick < 0; ++pass)
                for (int i : idx) {
                    if (std::find(order_.begin(), order_.end(), i) != order_.end())
                        continue;
                    bool linked = order_.empty();
                    for (int o : order_)
                        if (ia_.h(i, o) != 0)
                            linked = true;
                    if (pass == 0 && !linked)
                        continue;
                    chosen.push_back(a_.generator(i));
                    const bool indep = rank_of(chosen) == static_cast<int>(chosen.size());
                    chosen.pop_back();
                    if (indep) {
                        pick = i;
                        break;
                    }
                }
            chosen.push_back(a_.generator(pick));
            order_.push_back(pick);
        }
        candidates_.resize(r_);
        for (int k = 0; k < r_; ++k)
            for (int j = 0; j < n_; ++j)
                if (ib_.row_signature[j] == ia_.row_signature[order_[k]])
                    candidates_[k].push_back(j);
        std::vector<Vec> cols;
        for (int i : order_)
            cols.push_back(a_.generator(i));
        const IntMatrix p = IntMatrix::from_columns(r_, cols);
        basis_det_ = determinant(p);
        basis_adj_ = adjugate(p);
    }

    void descend(int k)
    {
        if (stop_)
            return;
        if (k == r_) {
            finish();
            return;
        }
        const int src = order_[k];
        for (int j : candidates_[k]) {
            if (used_[j])
                continue;
            for (int s : {1, -1}) {
                bool ok = true;
                for (int l = 0; l < k && ok; ++l)
                    ok = ib_.h(j, img_[l]) == s * sgn_[l] * ia_.h(src, order_[l]);
                if (!ok)
                    continue;
                img_[k] = j;
                sgn_[k] = s;
                used_[j] = true;
                descend(k + 1);
                used_[j] = false;
                if (stop_)
                    return;
            }
        }
    }

    void finish()
    {
        IntMatrix m(r_, r_);
        if (r_ > 0) {
            // m = Img * adj(P) / det(P)
            for (int i = 0; i < r_; ++i)
                for (int c = 0; c < r_; ++c) {
                    Integer acc = 0;
                    for (int k = 0; k < r_; ++k)
                        acc += Integer(static_cast<long>(sgn_[k] * b_.generator(img_[k])[i])) *
                               Integer(static_cast<long>(basis_adj_(k, c)));
                    if (!mpz_divisible_p(acc.get_mpz_t(), basis_det_.get_mpz_t()))
                        return;
                    acc /= basis_det_;
                    m(i, c) = to_int64(acc);
                }
            if (abs(determinant(m)) != 1)
                return;
        }
        ConeTransform t{m, std::vector<int>(n_), std::vector<int>(n_)};
        std::vector<bool> hit(n_, false);
        for (int i = 0; i < n_; ++i) {
            const Vec w = m * a_.generator(i);
            const Vec nw = sign_normalized(w);
            auto it = index_b_.find(nw);
            if (it == index_b_.end() || hit[it->second])
                return;
            hit[it->second] = true;
            t.perm[i] = it->second;
            t.sign[i] = nw == w ? 1 : -1;
        }
        if (!emit_(std::move(t)))
            stop_ = true;
    }

    const PerfectCone& a_;
    const PerfectCone& b_;
    const ConeInvariants& ia_;
    const ConeInvariants& ib_;
    Emit emit_;
    int r_, n_;
    std::map<Vec, int> index_b_;
    std::vector<int> order_;
    std::vector<std::vector<int>> candidates_;
    Integer basis_det_;
    IntMatrix basis_adj_;
    std::vector<int> img_, sgn_;
    std::vector<bool> used_;
    bool stop_ = false;
};

std::optional<ConeTransform> equivalent_full_rank(const PerfectCone& a, const ConeInvariants& ia, const PerfectCone& b,
                                                  const ConeInvariants& ib)
{
    if (ia.fingerprint != ib.fingerprint)
        return std::nullopt;
    std::optional<ConeTransform> found;
    Search(a, ia, b, ib, [&](ConeTransform&& t) {
        found = std::move(t);
        return false;
    }).run();
    return found;
}

IntMatrix block_lift(const IntMatrix& inner, int g)
{
    IntMatrix m = IntMatrix::identity(g);
    for (int i = 0; i < inner.rows(); ++i)
        for (int j = 0; j < inner.cols(); ++j)
            m(i, j) = inner(i, j);
    return m;
}

// Lifts a transform between reductions back to ambient g: Ab^{-1} diag(B, I) Aa.
ConeTransform lift(const ConeTransform& t, const IntMatrix& aa, const IntMatrix& ab, int g)
{
    const auto ab_inv = unimodular_inverse(ab);
    if (!ab_inv)
        throw std::logic_error("reducing transform is not unimodular");
    return {*ab_inv * block_lift(t.matrix, g) * aa, t.perm, t.sign};
}

} // namespace

std::optional<ConeTransform> equivalent(const PerfectCone& a, const PerfectCone& b)
{
    if (a.g() != b.g())
        throw std::invalid_argument("equivalent: ambient dimensions differ");
    if (a.size() != b.size() || a.rank() != b.rank() || a.dimension() != b.dimension())
        return std::nullopt;
    if (a.rank() == a.g())
        return equivalent_full_rank(a, cone_invariants(a), b, cone_invariants(b));
    const Reduction ra = reduce(a), rb = reduce(b);
    auto t = equivalent_full_rank(ra.cone, cone_invariants(ra.cone), rb.cone, cone_invariants(rb.cone));
    if (!t)
        return std::nullopt;
    return lift(*t, ra.transform, rb.transform, a.g());
}

std::vector<ConeTransform> automorphisms(const PerfectCone& c)
{
    const Reduction red = reduce_to_rank(c);
    const ConeInvariants inv = cone_invariants(red.cone);
    std::vector<ConeTransform> out;
    Search(red.cone, inv, red.cone, inv, [&](ConeTransform&& t) {
        out.push_back(std::move(t));
        return true;
    }).run();
    if (c.rank() < c.g())
        for (auto& t : out)
            t = lift(t, red.transform, red.transform, c.g());
    return out;
}

int Orientation::sign_of(std::span<const Vec> forms) const
{
    const int d = static_cast<int>(basis.size());
    if (static_cast<int>(forms.size()) != d)
        throw std::invalid_argument("orientation: wrong number of basis forms");
    IntMatrix m(d, d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
            m(k, l) = forms[k][rows[l]];
    const int s = determinant_sign(m);
    if (s == 0)
        throw std::logic_error("orientation: forms do not span");
    return s * base_sign;
}

Orientation reference_orientation(const PerfectCone& c, std::mt19937_64* rng)
{
    Orientation o;
    const auto forms = c.forms();
    std::vector<int> idx(c.size());
    std::iota(idx.begin(), idx.end(), 0);
    if (rng)
        std::shuffle(idx.begin(), idx.end(), *rng);
    std::vector<Vec> chosen;
    for (int i : idx) {
        if (static_cast<int>(o.basis.size()) == c.dimension())
            break;
        chosen.push_back(forms[i]);
        if (rank_of(chosen) == static_cast<int>(chosen.size()))
            o.basis.push_back(i);
        else
            chosen.pop_back();
    }
    std::sort(o.basis.begin(), o.basis.end());
    std::vector<Vec> basis_forms;
    for (int i : o.basis)
        basis_forms.push_back(forms[i]);
    o.rows = spanning_rows(basis_forms, c.dimension());
    o.base_sign = 1;
    o.base_sign = o.sign_of(basis_forms);
    if (rng && ((*rng)() & 1))
        o.base_sign = -o.base_sign;
    return o;
}

int orientation_sign(const PerfectCone& c, const Orientation& o, const ConeTransform& t)
{
    std::vector<Vec> imgs;
    for (int i : o.basis)
        imgs.push_back(sym_coords(c.generator(t.perm[i])));
    // compare the image of the oriented basis with the oriented basis itself
    std::vector<Vec> base;
    for (int i : o.basis)
        base.push_back(sym_coords(c.generator(i)));
    return o.sign_of(imgs) * o.sign_of(base);
}

int orientation_sign(const PerfectCone& c, const ConeTransform& t)
{
    return orientation_sign(c, reference_orientation(c), t);
}

bool is_alternating(const PerfectCone& c)
{
    const Orientation o = reference_orientation(c);
    for (const auto& t : automorphisms(c))
        if (orientation_sign(c, o, t) < 0)
            return false;
    return true;
}

Vec OrbitMatch::apply(const Vec& x) const
{
    Vec y = a * x;
    y.resize(b.cols());
    return b * y;
}

std::optional<OrbitMatch> OrbitRegistry::locate(const PerfectCone& c) const
{
    const Reduction red = reduce_to_rank(c);
    const ConeInvariants inv = cone_invariants(red.cone);
    auto it = buckets_.find(inv.fingerprint);
    if (it == buckets_.end())
        return std::nullopt;
    for (int o : it->second) {
        const Orbit& orb = orbits_[o];
        if (auto t = equivalent_full_rank(red.cone, inv, orb.rep, orb.inv))
            return OrbitMatch{o, red.transform, t->matrix, std::move(*t)};
    }
    return std::nullopt;
}

int OrbitRegistry::classify(const PerfectCone& c)
{
    bool created;
    return classify(c, created);
}

int OrbitRegistry::classify(const PerfectCone& c, bool& created)
{
    created = false;
    if (auto m = locate(c))
        return m->orbit;
    created = true;
    return insert(reduce_to_rank(c).cone);
}

int OrbitRegistry::insert(const PerfectCone& c)
{
    Orbit o;
    o.rep = c;
    o.rank = c.rank();
    o.dim = c.dimension();
    o.inv = cone_invariants(c);
    o.orientation = reference_orientation(c, seeded_ ? &rng_ : nullptr);
    const auto auts = automorphisms(c);
    o.stabilizer_size = auts.size();
    o.alternating = o.sl_alternating = true;
    for (const auto& t : auts) {
        const int d = t.det();
        if (d < 0)
            o.has_det_minus_one = true;
        if (orientation_sign(c, o.orientation, t) < 0) {
            o.alternating = false;
            if (d > 0)
                o.sl_alternating = false;
        }
    }
    const int idx = counters_[{o.rank, o.dim}]++;
    o.id = "r" + std::to_string(o.rank) + ".d" + std::to_string(o.dim) + "." + std::to_string(idx);
    buckets_[o.inv.fingerprint].push_back(size());
    orbits_.push_back(std::move(o));
    return size() - 1;
}

std::optional<int> OrbitRegistry::find_id(const std::string& id) const
{
    for (int i = 0; i < size(); ++i)
        if (orbits_[i].id == id)
            return i;
    return std::nullopt;
}

std::map<int, std::vector<int>> OrbitRegistry::by_dimension() const
{
    std::map<int, std::vector<int>> out;
    for (int i = 0; i < size(); ++i)
        out[orbits_[i].dim].push_back(i);
    return out;
}

void OrbitRegistry::write(std::ostream& os) const
{
    for (const auto& o : orbits_) {
        os << "orbit " << o.id << " dim=" << o.dim << '\n';
        write_cone(os, o.rep);
        os << "alt=" << o.alternating << " rank=" << o.rank << " sl_alt=" << o.sl_alternating
           << " det_neg=" << o.has_det_minus_one << " stab=" << o.stabilizer_size << '\n';
        os << "orient";
        for (int i : o.orientation.basis)
            os << ' ' << i;
        os << " sign=" << o.orientation.sign_of([&] {
            std::vector<Vec> f;
            for (int i : o.orientation.basis)
                f.push_back(sym_coords(o.rep.generator(i)));
            return f;
        }()) << '\n';
    }
}

OrbitRegistry classify_orbits(const std::vector<PerfectCone>& cones, std::uint64_t seed)
{
    OrbitRegistry reg(seed);
    for (const auto& c : cones) {
        if (!cones.empty() && c.g() != cones.front().g())
            throw std::invalid_argument("classify_orbits: mixed ambient dimensions");
        reg.classify(c);
    }
    return reg;
}

IntMatrix random_unimodular(int n, std::mt19937_64& rng, int steps)
{
    IntMatrix m = IntMatrix::identity(n);
    if (n == 0)
        return m;
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int s = 0; s < steps; ++s) {
        const int i = pick(rng), j = pick(rng);
        switch (rng() % 3) {
        case 0:
            if (i != j) {
                const int c = (rng() & 1) ? 1 : -1;
                for (int k = 0; k < n; ++k)
                    m(i, k) = checked_add(m(i, k), c * m(j, k));
            }
            break;
        case 1:
            for (int k = 0; k < n; ++k)
                std::swap(m(i, k), m(j, k));
            break;
        default:
            for (int k = 0; k < n; ++k)
                m(i, k) = -m(i, k);
        }
    }
    return m;
}

} // namespace agtop
