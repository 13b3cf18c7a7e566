#include "relhom/injective.hpp"

namespace relhom {

RingMap RingMap::identity(const Ring& r) {
    RingMap m;
    m.kind_ = Kind::Identity;
    m.src_ = r;
    m.dst_ = r;
    return m;
}

RingMap RingMap::quotient(const Ring& src, const Ring& dst, std::vector<Elem> kernel_gens) {
    RingMap m;
    m.src_ = src;
    m.dst_ = dst;
    m.kernel_ = std::move(kernel_gens);
    if (src.kind() == RingKind::IntegersMod && dst.kind() == RingKind::IntegersMod) {
        if (src.modulus() % dst.modulus() != 0)
            throw PreconditionError("unsupported ring map: modulus must divide");
        m.kind_ = Kind::QuotientInt;
    } else if (src.kind() == RingKind::QuotientPoly && dst.kind() == RingKind::QuotientPoly) {
        if (src.characteristic_prime() != dst.characteristic_prime())
            throw PreconditionError("unsupported ring map: characteristic mismatch");
        std::vector<int64_t> q, r;
        fppoly::divmod(src.poly_modulus(), dst.poly_modulus(), src.characteristic_prime(), q, r);
        if (!r.empty()) throw PreconditionError("unsupported ring map: modulus must divide");
        m.kind_ = Kind::QuotientPolyMap;
    } else {
        throw PreconditionError("unsupported ring map");
    }
    return m;
}

RingMap RingMap::projection(const Ring& product, int factor) {
    if (product.kind() != RingKind::Product) throw PreconditionError("projection needs a product ring");
    RingMap m;
    m.kind_ = Kind::Projection;
    m.src_ = product;
    m.dst_ = product.factors()[factor];
    m.factor_ = factor;
    // Kernel: the idempotents of the other factors.
    for (size_t c = 0; c < product.factors().size(); ++c) {
        if (static_cast<int>(c) == factor) continue;
        Elem e = product.zero();
        e.parts[c] = product.factors()[c].one();
        m.kernel_.push_back(std::move(e));
    }
    return m;
}

Elem RingMap::push(const Elem& x) const {
    switch (kind_) {
        case Kind::Identity: return x;
        case Kind::QuotientInt:
        case Kind::QuotientPolyMap: return dst_.canon(x);
        case Kind::Projection: return x.parts[factor_];
    }
    return x;
}

Elem RingMap::lift(const Elem& y) const {
    switch (kind_) {
        case Kind::Identity: return y;
        case Kind::QuotientInt:
        case Kind::QuotientPolyMap: return src_.canon(y);
        case Kind::Projection: {
            Elem e = src_.zero();
            e.parts[factor_] = y;
            return e;
        }
    }
    return y;
}

FPModule RingMap::restrict_module(const FPModule& m) const {
    if (kind_ == Kind::Identity) return m;
    const int g = m.generators();
    ExactMatrix rels(src_, g, m.relations().cols() + g * static_cast<int>(kernel_.size()));
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < m.relations().cols(); ++j)
            rels.set(i, j, lift(m.relations().at(i, j)));
    int at = m.relations().cols();
    for (const auto& u : kernel_)
        for (int i = 0; i < g; ++i, ++at) rels.set(i, at, u);
    return FPModule(src_, g, rels);
}

ModMorphism RingMap::restrict_morphism(const ModMorphism& f) const {
    if (kind_ == Kind::Identity) return f;
    FPModule rs = restrict_module(f.src());
    FPModule rd = restrict_module(f.dst());
    ExactMatrix mat(src_, rd.generators(), rs.generators());
    for (int i = 0; i < mat.rows(); ++i)
        for (int j = 0; j < mat.cols(); ++j) mat.set(i, j, lift(f.matrix().at(i, j)));
    return ModMorphism(rs, rd, mat, false);
}

FPModule RingMap::extend_module(const FPModule& m) const {
    if (kind_ == Kind::Identity) return m;
    ExactMatrix rels(dst_, m.generators(), m.relations().cols());
    for (int i = 0; i < m.generators(); ++i)
        for (int j = 0; j < m.relations().cols(); ++j)
            rels.set(i, j, push(m.relations().at(i, j)));
    return FPModule(dst_, m.generators(), rels);
}

ModMorphism RingMap::extend_morphism(const ModMorphism& f) const {
    if (kind_ == Kind::Identity) return f;
    FPModule es = extend_module(f.src());
    FPModule ed = extend_module(f.dst());
    ExactMatrix mat(dst_, ed.generators(), es.generators());
    for (int i = 0; i < mat.rows(); ++i)
        for (int j = 0; j < mat.cols(); ++j) mat.set(i, j, push(f.matrix().at(i, j)));
    return ModMorphism(es, ed, mat, false);
}

ModMorphism RingMap::unit(const FPModule& m) const {
    FPModule rlm = restrict_module(extend_module(m));
    return ModMorphism(m, rlm, ExactMatrix::identity(src_, m.generators()), false);
}

InjectiveClass InjectiveClass::from_generators(Ring ring, std::vector<FPModule> generators,
                                               std::string label) {
    InjectiveClass c;
    c.kind_ = Kind::Generators;
    c.ring_ = std::move(ring);
    c.generators_ = std::move(generators);
    c.label_ = std::move(label);
    if (c.generators_.empty())
        c.warning_ = "empty generator list: degenerate class {0}; every map is an I-mono";
    return c;
}

InjectiveClass InjectiveClass::all_objects(Ring ring) {
    InjectiveClass c;
    c.kind_ = Kind::AllObjects;
    c.ring_ = std::move(ring);
    c.label_ = "all-objects";
    return c;
}

InjectiveClass InjectiveClass::from_primes(const Ring& ring, const std::vector<PrimeIdeal>& primes,
                                           std::string label) {
    std::vector<FPModule> gens;
    std::string desc;
    for (const auto& p : primes) {
        gens.push_back(injective_hull(ring, p).hull);
        desc += (desc.empty() ? "" : ",") + p.ideal.show();
    }
    return from_generators(ring, std::move(gens),
                           label.empty() ? "E{" + desc + "}" : std::move(label));
}

InjectiveClass InjectiveClass::from_ideals(const Ring& ring, const std::vector<Ideal>& ideals,
                                           std::string label) {
    std::vector<FPModule> gens;
    std::string desc;
    for (const auto& ideal : ideals) {
        gens.push_back(injective_hull_of_quotient(ring, ideal).hull);
        desc += (desc.empty() ? "" : ",") + ideal.show();
    }
    return from_generators(ring, std::move(gens),
                           label.empty() ? "E{" + desc + "}" : std::move(label));
}

InjectiveClass InjectiveClass::induced_along(const RingMap& map, const InjectiveClass& cls) {
    if (!cls.ring().same_as(map.dst()))
        throw RingMismatchError("class induction: class must live over the map target");
    if (cls.kind() == Kind::AllObjects) {
        InjectiveClass c;
        c.kind_ = Kind::InducedAllObjects;
        c.ring_ = map.src();
        c.map_ = map;
        c.label_ = "induced(all-objects)";
        return c;
    }
    if (cls.kind() == Kind::InducedAllObjects)
        throw PreconditionError("cannot induce an already-induced class");
    std::vector<FPModule> gens;
    for (const auto& w : cls.generators()) gens.push_back(map.restrict_module(w));
    return from_generators(map.src(), std::move(gens), "induced(" + cls.label() + ")");
}

bool is_I_mono(const ModMorphism& f, const InjectiveClass& cls) {
    if (!f.ring().same_as(cls.ring())) throw RingMismatchError("is_I_mono");
    switch (cls.kind()) {
        case InjectiveClass::Kind::AllObjects:
            return retraction_of(f).has_value();
        case InjectiveClass::Kind::InducedAllObjects:
            return retraction_of(cls.map().extend_morphism(f)).has_value();
        case InjectiveClass::Kind::Generators: {
            for (const auto& w : cls.generators()) {
                HomModule from(f.dst(), w);
                HomModule to(f.src(), w);
                if (!is_epi(hom_precompose(from, to, f))) return false;
            }
            return true;
        }
    }
    return false;
}

EnvelopeResult evaluation_envelope(const FPModule& m, const InjectiveClass& cls) {
    if (!m.ring().same_as(cls.ring())) throw RingMismatchError("evaluation_envelope");
    switch (cls.kind()) {
        case InjectiveClass::Kind::AllObjects:
            return {m, ModMorphism::identity(m)};
        case InjectiveClass::Kind::InducedAllObjects:
            return {cls.map().restrict_module(cls.map().extend_module(m)), cls.map().unit(m)};
        case InjectiveClass::Kind::Generators: {
            std::vector<FPModule> summands;
            std::vector<ModMorphism> evals;
            long total = 0;
            for (const auto& w : cls.generators()) {
                HomModule hom(m, w);
                for (int k = 0; k < hom.module().generators(); ++k) {
                    summands.push_back(w);
                    evals.push_back(hom.generator_morphism(k));
                    total += w.generators();
                    if (total > caps().max_generators)
                        throw ResourceError("evaluation envelope grew past the generator cap");
                }
            }
            auto bp = biproduct(m.ring(), summands);
            ExactMatrix mat(m.ring(), bp.module.generators(), m.generators());
            for (size_t i = 0; i < evals.size(); ++i)
                mat = mat.add(bp.injections[i].matrix().mul(evals[i].matrix()));
            return {bp.module, ModMorphism(m, bp.module, mat, false)};
        }
    }
    throw Error("unreachable");
}

bool is_member(const FPModule& m, const InjectiveClass& cls) {
    auto env = evaluation_envelope(m, cls);
    return retraction_of(env.map).has_value();
}

std::optional<ModMorphism> extend_along_imono(const ModMorphism& mono, const ModMorphism& h) {
    if (mono.src().generators() != h.src().generators())
        throw ShapeError("extension: maps must share their source");
    const Ring& ring = mono.ring();
    const FPModule& b = mono.dst();
    const FPModule& w = h.dst();
    LinearSystem sys(ring);
    int ext = sys.add_unknown(w.generators(), b.generators());
    sys.add_constraint({{ext, ExactMatrix::identity(ring, w.generators()), mono.matrix()}},
                       h.matrix(), &w.relations());
    if (b.relations().cols() > 0)
        sys.add_constraint({{ext, ExactMatrix::identity(ring, w.generators()), b.relations()}},
                           ExactMatrix(ring, w.generators(), b.relations().cols()),
                           &w.relations());
    auto sol = sys.solve();
    if (!sol) return std::nullopt;
    return ModMorphism(b, w, (*sol)[0], false);
}

} // namespace relhom
