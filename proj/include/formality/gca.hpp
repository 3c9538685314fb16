#ifndef FORMALITY_GCA_HPP
#define FORMALITY_GCA_HPP

#include <algorithm>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "rational.hpp"

namespace formality {

struct Generator {
    std::string name;
    int degree = 0;

    bool operator==(const Generator& o) const { return name == o.name && degree == o.degree; }
};

class GeneratorSet {
public:
    GeneratorSet() = default;
    explicit GeneratorSet(std::vector<Generator> gens) : gens_(std::move(gens)) {
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            if (gens_[i].degree < 1)
                throw Error(ErrorCode::InvalidInput, "generator '" + gens_[i].name + "' must have degree >= 1");
            for (std::size_t j = 0; j < i; ++j)
                if (gens_[j].name == gens_[i].name)
                    throw Error(ErrorCode::InvalidInput, "duplicate generator name '" + gens_[i].name + "'");
        }
    }

    std::size_t size() const { return gens_.size(); }
    const Generator& operator[](std::size_t i) const { return gens_[i]; }
    const std::vector<Generator>& all() const { return gens_; }

    std::optional<std::size_t> index_of(const std::string& name) const {
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i].name == name) return i;
        return std::nullopt;
    }

    bool operator==(const GeneratorSet& o) const { return gens_ == o.gens_; }

private:
    std::vector<Generator> gens_;
};

// Sorted exponent vector over the generator list; odd generators square to
// zero so their exponents stay in {0, 1}.
struct Monomial {
    std::vector<int> exps;

    bool operator==(const Monomial& o) const { return exps == o.exps; }
    bool is_unit() const {
        return std::all_of(exps.begin(), exps.end(), [](int e) { return e == 0; });
    }
};

// Basis order: lexicographically larger exponent vector first, so that for
// three degree-1 generators x,y,z the degree-2 basis reads xy, xz, yz.
struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return a.exps > b.exps; }
};

inline int monomial_degree(const GeneratorSet& gens, const Monomial& m) {
    int d = 0;
    for (std::size_t i = 0; i < m.exps.size(); ++i) d += m.exps[i] * gens[i].degree;
    return d;
}

class Polynomial {
public:
    using Terms = std::map<Monomial, Rational, MonomialLess>;

    Polynomial() = default;

    static Polynomial unit(std::size_t num_gens) {
        Polynomial p;
        p.terms_[Monomial{std::vector<int>(num_gens, 0)}] = 1;
        return p;
    }

    static Polynomial single(Monomial m, Rational c) {
        Polynomial p;
        if (c != 0) p.terms_[std::move(m)] = std::move(c);
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }

    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Polynomial operator+(const Polynomial& o) const {
        Polynomial r = *this;
        r += o;
        return r;
    }
    Polynomial operator-(const Polynomial& o) const {
        Polynomial r = *this;
        r -= o;
        return r;
    }
    Polynomial operator*(const Rational& s) const {
        Polynomial r;
        if (s == 0) return r;
        for (const auto& [m, c] : terms_) r.terms_[m] = c * s;
        return r;
    }
    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

    // Degree of a homogeneous polynomial; nullopt for zero.
    std::optional<int> degree(const GeneratorSet& gens) const {
        std::optional<int> d;
        for (const auto& [m, c] : terms_) {
            int md = monomial_degree(gens, m);
            if (!d)
                d = md;
            else if (*d != md)
                throw Error(ErrorCode::InvalidInput, "polynomial is not homogeneous");
        }
        return d;
    }

private:
    Terms terms_;
};

// Graded-commutative product of monomials. The sign counts transpositions of
// odd generators while merging the two sorted factor sequences; a repeated odd
// generator kills the product.
inline std::optional<std::pair<Monomial, int>> multiply_monomials(const GeneratorSet& gens,
                                                                  const Monomial& a, const Monomial& b) {
    int sign = 1;
    Monomial r{std::vector<int>(gens.size(), 0)};
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens[i].degree % 2 != 0 && a.exps[i] + b.exps[i] > 1) return std::nullopt;
        r.exps[i] = a.exps[i] + b.exps[i];
    }
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens[i].degree % 2 == 0 || a.exps[i] == 0) continue;
        for (std::size_t j = 0; j < i; ++j)
            if (gens[j].degree % 2 != 0 && b.exps[j] != 0) sign = -sign;
    }
    return std::make_pair(std::move(r), sign);
}

inline Polynomial multiply_raw(const GeneratorSet& gens, const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms())
            if (auto prod = multiply_monomials(gens, ma, mb))
                r.add_term(prod->first, ca * cb * prod->second);
    return r;
}

inline std::size_t basis_size_cap() {
    static std::size_t cap = [] {
        if (const char* env = std::getenv("FORMALITY_MAX_BASIS")) {
            long v = std::atol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        }
        return static_cast<std::size_t>(1) << 22;
    }();
    return cap;
}

struct CohomologyData {
    int degree = 0;
    // Cocycle representatives as coordinate vectors in the degree basis,
    // picked as the first-pivot complement of the image inside the kernel.
    std::vector<Vector> representatives;

    std::size_t dim() const { return representatives.size(); }
};

// Finitely presented free graded-commutative dg algebra, truncated as a
// quotient: every component of degree above the bound is zero.
class Cdga {
public:
    Cdga() = default;

    Cdga(GeneratorSet gens, std::map<std::string, Polynomial> differential, int truncation)
        : gens_(std::move(gens)), diff_(std::move(differential)), truncation_(truncation),
          cache_(std::make_shared<Cache>()) {
        if (truncation_ < 1) throw Error(ErrorCode::TruncationTooSmall, "truncation must be >= 1");
        for (const auto& [name, p] : diff_) {
            auto idx = gens_.index_of(name);
            if (!idx) throw Error(ErrorCode::InvalidInput, "differential on unknown generator '" + name + "'");
            auto d = p.degree(gens_);
            if (d && *d != gens_[*idx].degree + 1)
                throw Error(ErrorCode::InvalidInput,
                            "differential of '" + name + "' is not homogeneous of degree " +
                                std::to_string(gens_[*idx].degree + 1));
        }
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            if (gens_[i].degree + 2 > truncation_) continue;
            if (!differential_poly(generator_differential(i)).is_zero())
                throw Error(ErrorCode::InvalidInput, "d^2 != 0 on generator '" + gens_[i].name + "'");
        }
    }

    const GeneratorSet& generators() const { return gens_; }
    int truncation() const { return truncation_; }
    const std::map<std::string, Polynomial>& differential_map() const { return diff_; }

    bool operator==(const Cdga& o) const {
        return gens_ == o.gens_ && diff_ == o.diff_ && truncation_ == o.truncation_;
    }

    Polynomial generator_poly(std::size_t i) const {
        Monomial m{std::vector<int>(gens_.size(), 0)};
        m.exps[i] = 1;
        return Polynomial::single(std::move(m), 1);
    }

    const Polynomial& generator_differential(std::size_t i) const {
        static const Polynomial kZero;
        auto it = diff_.find(gens_[i].name);
        return it == diff_.end() ? kZero : it->second;
    }

    Polynomial truncate(const Polynomial& p) const {
        Polynomial r;
        for (const auto& [m, c] : p.terms())
            if (monomial_degree(gens_, m) <= truncation_) r.add_term(m, c);
        return r;
    }

    Polynomial multiply(const Polynomial& a, const Polynomial& b) const {
        return truncate(multiply_raw(gens_, a, b));
    }

    // Degree +1 derivation extending the generator assignment.
    Polynomial differential_poly(const Polynomial& p) const {
        Polynomial r;
        for (const auto& [m, c] : p.terms()) r += differential_monomial(m) * c;
        return truncate(r);
    }

    const std::vector<Monomial>& basis(int degree) const {
        static const std::vector<Monomial> kEmpty;
        if (degree < 0 || degree > truncation_) return kEmpty;
        auto it = cache_->bases.find(degree);
        if (it != cache_->bases.end()) return it->second;
        std::vector<Monomial> out;
        Monomial scratch{std::vector<int>(gens_.size(), 0)};
        enumerate_basis(0, degree, scratch, out);
        return cache_->bases.emplace(degree, std::move(out)).first->second;
    }

    Vector coords(const Polynomial& p, int degree) const {
        const auto& idx = basis_index(degree);
        Vector v(idx.size());
        for (const auto& [m, c] : p.terms()) {
            if (monomial_degree(gens_, m) != degree)
                throw Error(ErrorCode::InvalidInput, "coords: monomial of wrong degree");
            v[idx.at(m)] = c;
        }
        return v;
    }

    Polynomial from_coords(const Vector& v, int degree) const {
        const auto& b = basis(degree);
        if (v.size() != b.size()) throw Error(ErrorCode::InvalidInput, "from_coords: length mismatch");
        Polynomial p;
        for (std::size_t i = 0; i < b.size(); ++i) p.add_term(b[i], v[i]);
        return p;
    }

    // Matrix of d: A^n -> A^{n+1} in the degree bases.
    const RationalMatrix& diff_matrix(int degree) const {
        auto it = cache_->diff_matrices.find(degree);
        if (it != cache_->diff_matrices.end()) return it->second;
        const auto& dom = basis(degree);
        const auto& cod = basis(degree + 1);
        RationalMatrix m(cod.size(), dom.size());
        for (std::size_t j = 0; j < dom.size(); ++j) {
            auto img = differential_poly(Polynomial::single(dom[j], 1));
            if (img.is_zero()) continue;
            auto col = coords(img, degree + 1);
            for (std::size_t i = 0; i < cod.size(); ++i) m.at(i, j) = col[i];
        }
        return cache_->diff_matrices.emplace(degree, std::move(m)).first->second;
    }

    const CohomologyData& cohomology(int degree) const {
        auto it = cache_->cohomology.find(degree);
        if (it != cache_->cohomology.end()) return it->second;
        CohomologyData data;
        data.degree = degree;
        if (degree >= 0 && degree <= truncation_) {
            auto kernel = kernel_basis(diff_matrix(degree));
            std::vector<Vector> image;
            if (degree >= 1)
                for (const auto& v : image_basis(diff_matrix(degree - 1)).vectors) image.push_back(v);
            auto chosen = complement_indices(basis(degree).size(), image, kernel.vectors);
            for (auto i : chosen) data.representatives.push_back(kernel.vectors[i]);
        }
        return cache_->cohomology.emplace(degree, std::move(data)).first->second;
    }

private:
    struct Cache {
        std::map<int, std::vector<Monomial>> bases;
        std::map<int, std::map<Monomial, int, MonomialLess>> basis_indices;
        std::map<int, RationalMatrix> diff_matrices;
        std::map<int, CohomologyData> cohomology;
    };

    void enumerate_basis(std::size_t gen, int remaining, Monomial& current,
                         std::vector<Monomial>& out) const {
        if (remaining == 0) {
            Monomial m = current;
            for (std::size_t i = gen; i < gens_.size(); ++i) m.exps[i] = 0;
            out.push_back(std::move(m));
            if (out.size() > basis_size_cap())
                throw Error(ErrorCode::TruncationExceeded, "basis enumeration exceeds FORMALITY_MAX_BASIS");
            return;
        }
        if (gen >= gens_.size()) return;
        int d = gens_[gen].degree;
        int max_exp = remaining / d;
        if (d % 2 != 0) max_exp = std::min(max_exp, 1);
        for (int e = max_exp; e >= 0; --e) {
            current.exps[gen] = e;
            enumerate_basis(gen + 1, remaining - e * d, current, out);
        }
        current.exps[gen] = 0;
    }

    const std::map<Monomial, int, MonomialLess>& basis_index(int degree) const {
        auto it = cache_->basis_indices.find(degree);
        if (it != cache_->basis_indices.end()) return it->second;
        std::map<Monomial, int, MonomialLess> idx;
        const auto& b = basis(degree);
        for (std::size_t i = 0; i < b.size(); ++i) idx[b[i]] = static_cast<int>(i);
        return cache_->basis_indices.emplace(degree, std::move(idx)).first->second;
    }

    Polynomial differential_monomial(const Monomial& m) const {
        // Peel the first factor g^e and apply d(ab) = (da)b + (-1)^{|a|} a(db).
        std::size_t g = 0;
        while (g < gens_.size() && m.exps[g] == 0) ++g;
        if (g == gens_.size()) return {};
        Monomial rest = m;
        rest.exps[g] = 0;
        Monomial head{std::vector<int>(gens_.size(), 0)};
        head.exps[g] = m.exps[g] - 1;

        const Polynomial& dg = generator_differential(g);
        Polynomial rest_poly = Polynomial::single(rest, 1);
        Polynomial result;
        if (!dg.is_zero()) {
            Polynomial da = multiply_raw(gens_, Polynomial::single(head, Rational(m.exps[g])), dg);
            result += multiply_raw(gens_, da, rest_poly);
        }
        Polynomial drest = differential_monomial(rest);
        if (!drest.is_zero()) {
            int head_degree = gens_[g].degree * m.exps[g];
            Monomial full_head{std::vector<int>(gens_.size(), 0)};
            full_head.exps[g] = m.exps[g];
            Polynomial tail = multiply_raw(gens_, Polynomial::single(full_head, 1), drest);
            result += (head_degree % 2 == 0) ? tail : tail * Rational(-1);
        }
        return result;
    }

    GeneratorSet gens_;
    std::map<std::string, Polynomial> diff_;
    int truncation_ = 1;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

inline std::string to_string(const GeneratorSet& gens, const Monomial& m) {
    std::string s;
    for (std::size_t i = 0; i < m.exps.size(); ++i) {
        if (m.exps[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += gens[i].name;
        if (m.exps[i] > 1) s += "^" + std::to_string(m.exps[i]);
    }
    return s.empty() ? "1" : s;
}

inline std::string to_string(const GeneratorSet& gens, const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string s;
    for (const auto& [m, c] : p.terms()) {
        Rational a = abs(c);
        if (s.empty())
            s += (c < 0) ? "-" : "";
        else
            s += (c < 0) ? " - " : " + ";
        std::string mono = to_string(gens, m);
        if (a == 1 && mono != "1")
            s += mono;
        else if (mono == "1")
            s += to_string(a);
        else
            s += to_string(a) + "*" + mono;
    }
    return s;
}

// Algebra chain map between (possibly differently truncated) cdgas, given on
// generators and extended multiplicatively.
class CdgaMorphism {
public:
    CdgaMorphism() = default;

    CdgaMorphism(Cdga source, Cdga target, std::map<std::string, Polynomial> images)
        : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
        for (std::size_t i = 0; i < source_.generators().size(); ++i) {
            const auto& g = source_.generators()[i];
            auto it = images_.find(g.name);
            const Polynomial img = it == images_.end() ? Polynomial{} : it->second;
            auto d = img.degree(target_.generators());
            if (d && *d != g.degree)
                throw Error(ErrorCode::NotChainMap,
                            "image of generator '" + g.name + "' has degree " + std::to_string(*d) +
                                ", expected " + std::to_string(g.degree));
            if (g.degree > target_.truncation() && d)
                throw Error(ErrorCode::NotChainMap,
                            "generator '" + g.name + "' exceeds the target truncation but has nonzero image");
        }
        for (std::size_t i = 0; i < source_.generators().size(); ++i) {
            const auto& g = source_.generators()[i];
            if (g.degree + 1 > source_.truncation()) continue;
            Polynomial lhs = apply(source_.generator_differential(i));
            Polynomial rhs = target_.differential_poly(apply(source_.generator_poly(i)));
            if (!(lhs == rhs))
                throw Error(ErrorCode::NotChainMap, "chain-map identity fails on generator '" + g.name + "'");
        }
    }

    static CdgaMorphism identity(const Cdga& a) {
        std::map<std::string, Polynomial> images;
        for (std::size_t i = 0; i < a.generators().size(); ++i)
            images[a.generators()[i].name] = a.generator_poly(i);
        return CdgaMorphism(a, a, std::move(images));
    }

    // The grading map g -> q^{|g|} g; a chain map whenever d = 0.
    static CdgaMorphism grading(const Cdga& a, const Rational& q) {
        std::map<std::string, Polynomial> images;
        for (std::size_t i = 0; i < a.generators().size(); ++i)
            images[a.generators()[i].name] =
                a.generator_poly(i) * rational_pow(q, a.generators()[i].degree);
        return CdgaMorphism(a, a, std::move(images));
    }

    const Cdga& source() const { return source_; }
    const Cdga& target() const { return target_; }
    const std::map<std::string, Polynomial>& images() const { return images_; }

    Polynomial image_of(std::size_t i) const {
        auto it = images_.find(source_.generators()[i].name);
        return it == images_.end() ? Polynomial{} : it->second;
    }

    Polynomial apply(const Polynomial& p) const {
        Polynomial out;
        for (const auto& [m, c] : p.terms()) out += apply_monomial(m) * c;
        return out;
    }

    RationalMatrix matrix(int degree) const {
        const auto& dom = source_.basis(degree);
        const auto& cod = target_.basis(degree);
        RationalMatrix m(cod.size(), dom.size());
        for (std::size_t j = 0; j < dom.size(); ++j) {
            auto img = apply(Polynomial::single(dom[j], 1));
            if (img.is_zero()) continue;
            auto col = target_.coords(img, degree);
            for (std::size_t i = 0; i < cod.size(); ++i) m.at(i, j) = col[i];
        }
        return m;
    }

    // H^n(f): columns are source representatives expressed in the target
    // representative basis after reduction modulo exact elements.
    RationalMatrix induced_on_cohomology(int degree) const {
        const auto& src = source_.cohomology(degree);
        const auto& tgt = target_.cohomology(degree);
        const auto& dmat = target_.diff_matrix(degree - 1);
        std::size_t nb = target_.basis(degree).size();
        std::vector<Vector> columns;
        for (const auto& rep : tgt.representatives) columns.push_back(rep);
        for (std::size_t j = 0; j < dmat.cols(); ++j) columns.push_back(dmat.column(j));
        RationalMatrix reduce = RationalMatrix::from_columns(nb, columns);
        RationalMatrix out(tgt.dim(), src.dim());
        for (std::size_t j = 0; j < src.dim(); ++j) {
            auto img = apply(source_.from_coords(src.representatives[j], degree));
            auto w = target_.coords(img, degree);
            auto sol = solve(reduce, w);
            if (!sol)
                throw Error(ErrorCode::NotChainMap, "image of a cocycle is not a cocycle in degree " +
                                                        std::to_string(degree));
            for (std::size_t i = 0; i < tgt.dim(); ++i) out.at(i, j) = (*sol)[i];
        }
        return out;
    }

    CdgaMorphism compose_with(const CdgaMorphism& g) const {
        if (!(g.target() == source_))
            throw Error(ErrorCode::InvalidInput, "composition: inner target differs from outer source");
        std::map<std::string, Polynomial> images;
        for (std::size_t i = 0; i < g.source().generators().size(); ++i)
            images[g.source().generators()[i].name] = apply(g.image_of(i));
        return CdgaMorphism(g.source(), target_, std::move(images));
    }

private:
    Polynomial apply_monomial(const Monomial& m) const {
        Polynomial acc = Polynomial::unit(target_.generators().size());
        for (std::size_t i = 0; i < m.exps.size(); ++i) {
            auto it = images_.find(source_.generators()[i].name);
            const Polynomial img = it == images_.end() ? Polynomial{} : it->second;
            for (int e = 0; e < m.exps[i]; ++e) {
                acc = target_.multiply(acc, img);
                if (acc.is_zero()) return acc;
            }
        }
        return acc;
    }

    Cdga source_;
    Cdga target_;
    std::map<std::string, Polynomial> images_;
};

} // namespace formality

#endif
