#pragma once

// Exact rational quadratic forms, minimal vectors, perfection and catalogs.

#include "agtop/cone.hpp"
#include "agtop/exact.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace agtop {

enum class FormClass { PositiveDefinite, RationalKernelPsd, Other };

class QuadraticForm {
public:
    QuadraticForm() = default;
    /// Throws unless the matrix is square and symmetric.
    explicit QuadraticForm(RatMatrix entries);

    static QuadraticForm identity(int g);

    int g() const { return static_cast<int>(a_.size()); }
    const Rational& operator()(int i, int j) const { return a_[i][j]; }
    const RatMatrix& entries() const { return a_; }

    FormClass classify() const;
    bool is_positive_definite() const { return classify() == FormClass::PositiveDefinite; }

    /// Q[x] = x^t Q x.
    Rational value(const Vec& x) const;
    QuadraticForm scaled(const Rational& s) const;
    QuadraticForm plus(const Rational& t, const QuadraticForm& r) const;
    /// h Q h^t.
    QuadraticForm conjugated(const IntMatrix& h) const;

    std::string str() const;
    bool operator==(const QuadraticForm& o) const { return a_ == o.a_; }

private:
    RatMatrix a_;
};

struct MinimalVectorSet {
    Rational minimum;
    /// One representative per +- pair (first nonzero entry positive), lexicographically sorted.
    std::vector<Vec> vectors;
};

MinimalVectorSet minimal_vectors(const QuadraticForm& q);
bool is_perfect(const QuadraticForm& q);
PerfectCone cone_of_form(const QuadraticForm& q);
QuadraticForm principal_form(int g);
/// Rescales so the minimum is 1.
QuadraticForm normalized(const QuadraticForm& q);

/// The form R with R[v] = a . sym_coords(v).
QuadraticForm form_from_sym(int g, const Vec& a);

/// Perfect neighbour across the facet of cone_of_form(q) selected by `facet`.
QuadraticForm voronoi_neighbor(const QuadraticForm& q, Mask facet);

struct FormCatalog {
    int g = 0;
    std::vector<std::string> names;
    std::vector<QuadraticForm> forms;
};

/// Parses the catalog text format; forms are validated and normalized to minimum 1.
FormCatalog load_form_catalog(std::istream& is);
FormCatalog load_form_catalog_file(const std::string& path);
void write_form_catalog(std::ostream& os, const FormCatalog& cat);
/// Path of the bundled catalog for ambient g.
std::string bundled_catalog_path(int g);
std::string bundled_catalog_dir();
/// Catalogs `dir`/g1.txt .. `dir`/g<g>.txt, indexed by dimension (entry 0 is empty).
std::vector<FormCatalog> load_catalogs(const std::string& dir, int g);

} // namespace agtop
