#ifndef FORMALITY_MINIMAL_MODEL_HPP
#define FORMALITY_MINIMAL_MODEL_HPP

#include <map>
#include <string>
#include <vector>

#include "gca.hpp"

namespace formality {

// True iff every generator differential lies in the decomposable part, i.e.
// no monomial of any d(g) is a single generator.
inline bool verify_minimal(const Cdga& m) {
    for (std::size_t i = 0; i < m.generators().size(); ++i) {
        for (const auto& [mono, c] : m.generator_differential(i).terms()) {
            int factors = 0;
            for (int e : mono.exps) factors += e;
            if (factors < 2) return false;
        }
    }
    return true;
}

struct ModelLogEntry {
    std::string name;
    int degree = 0;
    enum class Kind { Cohomology, Obstruction } kind = Kind::Cohomology;
};

struct MinimalModel {
    Cdga model;
    CdgaMorphism quasi_iso; // model -> source
    std::vector<ModelLogEntry> log;
    bool input_already_minimal = false;
};

// Multiplicative extension of a generator assignment; tolerates partial
// assignments as long as the argument only involves assigned generators.
inline Polynomial apply_images(const Cdga& src, const Cdga& tgt,
                               const std::map<std::string, Polynomial>& images, const Polynomial& p) {
    Polynomial out;
    for (const auto& [m, c] : p.terms()) {
        Polynomial acc = Polynomial::unit(tgt.generators().size());
        for (std::size_t i = 0; i < m.exps.size() && !acc.is_zero(); ++i) {
            if (m.exps[i] == 0) continue;
            auto it = images.find(src.generators()[i].name);
            const Polynomial img = it == images.end() ? Polynomial{} : it->second;
            for (int e = 0; e < m.exps[i]; ++e) acc = tgt.multiply(acc, img);
        }
        out += acc * c;
    }
    return out;
}

// Degree -1 extension of a generator assignment by the (f, g)-derivation rule
//   h(x u) = h(x) g(u) + (-1)^{|x|} f(x) h(u),
// peeling one generator factor at a time.
inline Polynomial apply_homotopy(const Cdga& src, const Cdga& tgt,
                                 const std::map<std::string, Polynomial>& h,
                                 const std::map<std::string, Polynomial>& f_images,
                                 const std::map<std::string, Polynomial>& g_images, const Monomial& m) {
    std::size_t g = 0;
    while (g < m.exps.size() && m.exps[g] == 0) ++g;
    if (g == m.exps.size()) return {}; // h(1) = 0
    const auto& gen = src.generators()[g];
    Monomial rest = m;
    rest.exps[g] -= 1;

    auto lookup = [&](const std::map<std::string, Polynomial>& images) {
        auto it = images.find(gen.name);
        return it == images.end() ? Polynomial{} : it->second;
    };

    Polynomial rest_g = apply_images(src, tgt, g_images, Polynomial::single(rest, 1));
    Polynomial out = tgt.multiply(lookup(h), rest_g);
    Polynomial rest_h = apply_homotopy(src, tgt, h, f_images, g_images, rest);
    if (!rest_h.is_zero()) {
        Polynomial tail = tgt.multiply(lookup(f_images), rest_h);
        out += (gen.degree % 2 == 0) ? tail : tail * Rational(-1);
    }
    return out;
}

inline Polynomial apply_homotopy(const Cdga& src, const Cdga& tgt,
                                 const std::map<std::string, Polynomial>& h,
                                 const std::map<std::string, Polynomial>& f_images,
                                 const std::map<std::string, Polynomial>& g_images, const Polynomial& p) {
    Polynomial out;
    for (const auto& [m, c] : p.terms()) out += apply_homotopy(src, tgt, h, f_images, g_images, m) * c;
    return out;
}

namespace detail {

struct ModelState {
    std::vector<Generator> gens;
    std::map<std::string, Polynomial> diff;   // in model coordinates
    std::map<std::string, Polynomial> images; // p: model -> source
    int truncation;

    Cdga algebra() const { return Cdga(GeneratorSet(gens), pad(diff), truncation); }

    CdgaMorphism morphism(const Cdga& model, const Cdga& source) const {
        return CdgaMorphism(model, source, images);
    }

private:
    // Differentials were recorded over shorter generator lists; pad the
    // exponent vectors to the current length.
    std::map<std::string, Polynomial> pad(const std::map<std::string, Polynomial>& in) const {
        std::map<std::string, Polynomial> out;
        for (const auto& [name, p] : in) {
            Polynomial q;
            for (const auto& [m, c] : p.terms()) {
                Monomial mm = m;
                mm.exps.resize(gens.size(), 0);
                q.add_term(mm, c);
            }
            out[name] = q;
        }
        return out;
    }
};

} // namespace detail

// Inductive construction of the minimal Sullivan model of a simply connected
// cdga, certified through degree N-1. In each degree n the construction first
// adjoins closed generators hitting coker H^n(p), then generators whose
// differentials kill ker H^{n+1}(p).
inline MinimalModel construct_minimal_model(const Cdga& a, int N) {
    if (N < 2) throw Error(ErrorCode::TruncationTooSmall, "minimal model needs truncation >= 2");
    if (a.cohomology(0).dim() != 1)
        throw Error(ErrorCode::NotSimplyConnected, "H^0 is not one-dimensional");
    if (a.cohomology(1).dim() != 0)
        throw Error(ErrorCode::NotSimplyConnected, "H^1 does not vanish");

    detail::ModelState state;
    state.truncation = N;
    std::vector<ModelLogEntry> log;

    for (int n = 2; n <= N - 1; ++n) {
        int fresh = 0;
        // Surjectivity in degree n.
        {
            Cdga model = state.algebra();
            CdgaMorphism p = state.morphism(model, a);
            auto induced = p.induced_on_cohomology(n);
            const auto& ha = a.cohomology(n);
            std::vector<Vector> image_cols;
            for (std::size_t j = 0; j < induced.cols(); ++j) image_cols.push_back(induced.column(j));
            std::vector<Vector> unit_vectors;
            for (std::size_t i = 0; i < ha.dim(); ++i) {
                Vector e(ha.dim());
                e[i] = 1;
                unit_vectors.push_back(std::move(e));
            }
            for (auto idx : complement_indices(ha.dim(), image_cols, unit_vectors)) {
                std::string name = "g" + std::to_string(n) + "_" + std::to_string(fresh++);
                state.gens.push_back({name, n});
                state.images[name] = a.from_coords(ha.representatives[idx], n);
                log.push_back({name, n, ModelLogEntry::Kind::Cohomology});
            }
        }
        // Injectivity in degree n+1, visible only inside the certified window.
        if (n + 1 <= N - 1) {
            Cdga model = state.algebra();
            CdgaMorphism p = state.morphism(model, a);
            auto induced = p.induced_on_cohomology(n + 1);
            const auto& hm = model.cohomology(n + 1);
            for (const auto& kv : kernel_basis(induced).vectors) {
                // Cycle representative of the kernel class, in model coordinates.
                Vector cycle(model.basis(n + 1).size());
                for (std::size_t j = 0; j < kv.size(); ++j)
                    for (std::size_t i = 0; i < cycle.size(); ++i)
                        cycle[i] += kv[j] * hm.representatives[j][i];
                Polynomial z = model.from_coords(cycle, n + 1);
                Polynomial pz = p.apply(z);
                auto u = solve(a.diff_matrix(n), a.coords(pz, n + 1));
                if (!u)
                    throw Error(ErrorCode::LiftObstructed,
                                "kernel class has no primitive in the source, degree " + std::to_string(n));
                std::string name = "g" + std::to_string(n) + "_" + std::to_string(fresh++);
                state.gens.push_back({name, n});
                // z lives over the previous generator list; pad happens inside
                // algebra(), so store as-is.
                state.diff[name] = z;
                state.images[name] = a.from_coords(*u, n);
                log.push_back({name, n, ModelLogEntry::Kind::Obstruction});
            }
        }
    }

    MinimalModel mm;
    mm.model = state.algebra();
    mm.quasi_iso = state.morphism(mm.model, a);
    mm.log = std::move(log);

    if (!verify_minimal(mm.model))
        throw Error(ErrorCode::LiftObstructed, "constructed model fails the minimality check");
    for (int n = 1; n <= N - 1; ++n) {
        auto induced = mm.quasi_iso.induced_on_cohomology(n);
        if (induced.rows() != induced.cols() || rank(induced) != induced.rows())
            throw Error(ErrorCode::LiftObstructed,
                        "constructed model is not a quasi-isomorphism in degree " + std::to_string(n));
    }
    return mm;
}

// Wraps an already-minimal algebra as its own model along the identity.
inline MinimalModel identity_model(const Cdga& a) {
    if (!verify_minimal(a))
        throw Error(ErrorCode::InvalidInput, "identity_model requires a minimal algebra");
    MinimalModel mm;
    mm.model = a;
    mm.quasi_iso = CdgaMorphism::identity(a);
    mm.input_already_minimal = true;
    return mm;
}

struct LiftResult {
    CdgaMorphism sigma_tilde;                   // model -> model
    std::map<std::string, Polynomial> homotopy; // model generator -> source polynomial of degree |g|-1
};

// Lifts a chain self-map sigma of the source along p: returns sigma_tilde on
// the model together with h satisfying sigma∘p - p∘sigma_tilde = d h + h d,
// solved degreewise through the deterministic solve convention.
inline LiftResult lift_endomorphism(const MinimalModel& mm, const CdgaMorphism& sigma) {
    const Cdga& model = mm.model;
    const Cdga& a = mm.quasi_iso.target();
    if (!(sigma.source() == a) || !(sigma.target() == a))
        throw Error(ErrorCode::InvalidInput, "lift_endomorphism: sigma must be a chain self-map of the source");

    if (mm.input_already_minimal) {
        std::map<std::string, Polynomial> images = sigma.images();
        return {CdgaMorphism(model, model, std::move(images)), {}};
    }

    CdgaMorphism sigma_p = sigma.compose_with(mm.quasi_iso); // model -> a

    // Generators in adjoin order; differentials only involve earlier ones.
    std::map<std::string, Polynomial> tilde_images;  // model -> model
    std::map<std::string, Polynomial> p_tilde_images; // p∘sigma_tilde on generators, model -> a
    std::map<std::string, Polynomial> homotopy;

    const auto& f_images = sigma_p.images();

    for (std::size_t gi = 0; gi < model.generators().size(); ++gi) {
        const auto& gen = model.generators()[gi];
        int n = gen.degree;
        const Polynomial& dg = model.generator_differential(gi);

        Polynomial tilde_dg = apply_images(model, model, tilde_images, dg);
        Polynomial h_dg = apply_homotopy(model, a, homotopy, f_images, p_tilde_images, dg);
        Polynomial target_rhs = sigma_p.apply(model.generator_poly(gi)) + h_dg;

        std::size_t dim_s = model.basis(n).size();
        std::size_t dim_t = a.basis(n - 1).size();
        const auto& dM = model.diff_matrix(n);        // M^n -> M^{n+1}
        const auto& dA = a.diff_matrix(n - 1);        // A^{n-1} -> A^n
        RationalMatrix pmat = mm.quasi_iso.matrix(n); // M^n -> A^n
        std::size_t rows1 = dM.rows(), rows2 = pmat.rows();
        RationalMatrix system(rows1 + rows2, dim_s + dim_t);
        for (std::size_t i = 0; i < rows1; ++i)
            for (std::size_t j = 0; j < dim_s; ++j) system.at(i, j) = dM.at(i, j);
        for (std::size_t i = 0; i < rows2; ++i) {
            for (std::size_t j = 0; j < dim_s; ++j) system.at(rows1 + i, j) = pmat.at(i, j);
            for (std::size_t j = 0; j < dim_t; ++j) system.at(rows1 + i, dim_s + j) = -dA.at(i, j);
        }
        Vector rhs(rows1 + rows2);
        Vector r1 = model.coords(tilde_dg, n + 1);
        Vector r2 = a.coords(target_rhs, n);
        for (std::size_t i = 0; i < rows1; ++i) rhs[i] = r1[i];
        for (std::size_t i = 0; i < rows2; ++i) rhs[rows1 + i] = r2[i];

        auto sol = solve(system, rhs);
        if (!sol)
            throw Error(ErrorCode::LiftObstructed,
                        "no lift for generator '" + gen.name + "'; consider raising the truncation");
        Vector s(sol->begin(), sol->begin() + dim_s);
        Vector t(sol->begin() + dim_s, sol->end());
        tilde_images[gen.name] = model.from_coords(s, n);
        p_tilde_images[gen.name] = mm.quasi_iso.apply(tilde_images[gen.name]);
        homotopy[gen.name] = a.from_coords(t, n - 1);
    }

    return {CdgaMorphism(model, model, std::move(tilde_images)), std::move(homotopy)};
}

} // namespace formality

#endif
