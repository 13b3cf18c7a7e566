#include "relhom/module.hpp"

#include <algorithm>
#include <sstream>

namespace relhom {

Caps& caps() {
    static Caps instance;
    return instance;
}

namespace {

// Drops generating columns that are zero or expressible from the remaining
// ones; keeps presentations small across repeated constructions.
ExactMatrix prune_generators(const ExactMatrix& gens, const ExactMatrix& ambient_relations,
                             const RelationLattice& ambient) {
    ExactMatrix reduced = ambient.reduce(gens);
    std::vector<int> keep;
    for (int j = 0; j < reduced.cols(); ++j)
        if (!reduced.col(j).is_zero()) keep.push_back(j);
    for (int idx = static_cast<int>(keep.size()) - 1; idx >= 0; --idx) {
        if (keep.size() <= 1) break;
        ExactMatrix span(reduced.ring(), reduced.rows(), static_cast<int>(keep.size()) - 1);
        int t = 0;
        for (size_t s = 0; s < keep.size(); ++s) {
            if (static_cast<int>(s) == idx) continue;
            for (int i = 0; i < reduced.rows(); ++i) span.set(i, t, reduced.at(i, keep[s]));
            ++t;
        }
        if (solve_matrix_equation(hstack(span, ambient_relations), reduced.col(keep[idx])))
            keep.erase(keep.begin() + idx);
    }
    ExactMatrix out(reduced.ring(), reduced.rows(), static_cast<int>(keep.size()));
    for (size_t t = 0; t < keep.size(); ++t)
        for (int i = 0; i < reduced.rows(); ++i)
            out.set(i, static_cast<int>(t), reduced.at(i, keep[t]));
    return out;
}

} // namespace

FPModule::FPModule(Ring ring, int generators, ExactMatrix relations)
    : ring_(std::move(ring)), gens_(generators), rels_(std::move(relations)) {
    if (rels_.rows() != gens_) throw ShapeError("relations must have one row per generator");
    if (!rels_.ring().same_as(ring_)) throw RingMismatchError("module relations");
    if (gens_ > caps().max_generators)
        throw ResourceError("module with " + std::to_string(gens_) + " generators (cap " +
                            std::to_string(caps().max_generators) + ")");
    lattice_ = RelationLattice(ring_, rels_);
}

FPModule FPModule::zero(const Ring& ring) { return FPModule(ring, 0, ExactMatrix(ring, 0, 0)); }

FPModule FPModule::free(const Ring& ring, int n) {
    return FPModule(ring, n, ExactMatrix(ring, n, 0));
}

FPModule FPModule::cyclic(const Ring& ring, const Elem& d) {
    ExactMatrix rel(ring, 1, 1);
    rel.set(0, 0, d);
    return FPModule(ring, 1, rel);
}

bool FPModule::is_zero_module() const {
    if (gens_ == 0) return true;
    auto inv = lattice_.invariants();
    return inv.torsion.empty() && inv.free_rank == 0;
}

std::vector<ExactMatrix> FPModule::elements() const {
    return lattice_.enumerate(caps().max_enumeration);
}

std::string FPModule::describe() const {
    auto inv = lattice_.invariants();
    if (inv.torsion.empty() && inv.free_rank == 0) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : inv.torsion) {
        os << (first ? "" : " + ") << t;
        first = false;
    }
    if (inv.free_rank > 0) {
        os << (first ? "" : " + ");
        if (ring_.kind() == RingKind::PolyOverPrime)
            os << "F" << ring_.characteristic_prime() << "[t]";
        else
            os << "Z";
        if (inv.free_rank > 1) os << "^" << inv.free_rank;
    }
    return os.str();
}

bool isomorphic(const FPModule& a, const FPModule& b) {
    if (!a.ring().same_as(b.ring())) return false;
    return a.invariants() == b.invariants();
}

ModMorphism::ModMorphism(FPModule src, FPModule dst, const ExactMatrix& mat, bool check)
    : src_(std::move(src)), dst_(std::move(dst)) {
    if (!src_.ring().same_as(dst_.ring())) throw RingMismatchError("morphism endpoints");
    if (mat.rows() != dst_.generators() || mat.cols() != src_.generators())
        throw ShapeError("morphism matrix is " + std::to_string(mat.rows()) + "x" +
                         std::to_string(mat.cols()) + ", expected " +
                         std::to_string(dst_.generators()) + "x" +
                         std::to_string(src_.generators()));
    mat_ = dst_.reduce(mat);
    if (check && src_.relations().cols() > 0) {
        // Well-definedness: the matrix must send relations into relations.
        if (!dst_.lattice().contains(mat_.mul(src_.relations())))
            throw PreconditionError("morphism does not respect relations");
    }
}

ModMorphism ModMorphism::identity(const FPModule& m) {
    return ModMorphism(m, m, ExactMatrix::identity(m.ring(), m.generators()), false);
}

ModMorphism ModMorphism::zero_map(FPModule src, FPModule dst) {
    ExactMatrix z(src.ring(), dst.generators(), src.generators());
    return ModMorphism(std::move(src), std::move(dst), z, false);
}

ExactMatrix ModMorphism::apply(const ExactMatrix& element) const {
    return dst_.reduce(mat_.mul(element));
}

ModMorphism ModMorphism::add(const ModMorphism& o) const {
    return ModMorphism(src_, dst_, mat_.add(o.mat_), false);
}

ModMorphism ModMorphism::sub(const ModMorphism& o) const {
    return ModMorphism(src_, dst_, mat_.sub(o.mat_), false);
}

ModMorphism ModMorphism::neg() const { return ModMorphism(src_, dst_, mat_.neg(), false); }

ModMorphism ModMorphism::scale(const Elem& s) const {
    return ModMorphism(src_, dst_, mat_.scale(s), false);
}

bool ModMorphism::operator==(const ModMorphism& o) const {
    return src_.generators() == o.src_.generators() && dst_.generators() == o.dst_.generators() &&
           mat_ == o.mat_;
}

ModMorphism compose(const ModMorphism& g, const ModMorphism& f) {
    if (g.src().generators() != f.dst().generators())
        throw ShapeError("composition of non-composable morphisms");
    return ModMorphism(f.src(), g.dst(), g.matrix().mul(f.matrix()), false);
}

KernelResult kernel(const ModMorphism& f) {
    const Ring& ring = f.ring();
    const auto& m = f.src();
    const auto& n = f.dst();
    // x with F x in the relation span of the target.
    ExactMatrix sols = nullspace(hstack(f.matrix(), n.relations()));
    ExactMatrix gens = sols.rows_range(0, m.generators());
    gens = prune_generators(gens, m.relations(), m.lattice());
    // Relations among those generators, modulo the source relations.
    ExactMatrix rel_sols = nullspace(hstack(gens, m.relations()));
    ExactMatrix rels = rel_sols.rows_range(0, gens.cols());
    FPModule ker(ring, gens.cols(), rels);
    return {ker, ModMorphism(ker, m, gens, false)};
}

CokernelResult cokernel(const ModMorphism& f) {
    const Ring& ring = f.ring();
    const auto& n = f.dst();
    FPModule coker(ring, n.generators(), hstack(f.matrix(), n.relations()));
    return {coker, ModMorphism(n, coker, ExactMatrix::identity(ring, n.generators()), false)};
}

ImageResult image(const ModMorphism& f) {
    const Ring& ring = f.ring();
    const auto& m = f.src();
    const auto& n = f.dst();
    ExactMatrix gens = prune_generators(f.matrix(), n.relations(), n.lattice());
    ExactMatrix rel_sols = nullspace(hstack(gens, n.relations()));
    FPModule img(ring, gens.cols(), rel_sols.rows_range(0, gens.cols()));
    ModMorphism incl(img, n, gens, false);
    // Coimage presentation of the projection: express each f(e_j) over gens.
    ExactMatrix proj;
    if (gens.cols() == 0) {
        proj = ExactMatrix(ring, 0, m.generators());
    } else {
        auto expr = solve_matrix_equation(hstack(gens, n.relations()), f.matrix());
        proj = expr->rows_range(0, gens.cols());
    }
    return {img, incl, ModMorphism(m, img, proj, false)};
}

BiproductResult biproduct(const Ring& ring, const std::vector<FPModule>& summands) {
    int gens = 0, rels = 0;
    for (const auto& s : summands) {
        if (!s.ring().same_as(ring)) throw RingMismatchError("biproduct");
        gens += s.generators();
        rels += s.relations().cols();
    }
    ExactMatrix rel(ring, gens, rels);
    int gr = 0, rc = 0;
    for (const auto& s : summands) {
        for (int i = 0; i < s.generators(); ++i)
            for (int j = 0; j < s.relations().cols(); ++j)
                rel.set(gr + i, rc + j, s.relations().at(i, j));
        gr += s.generators();
        rc += s.relations().cols();
    }
    FPModule total(ring, gens, rel);
    BiproductResult out{total, {}, {}};
    gr = 0;
    for (const auto& s : summands) {
        ExactMatrix inj(ring, gens, s.generators());
        ExactMatrix prj(ring, s.generators(), gens);
        for (int i = 0; i < s.generators(); ++i) {
            inj.set(gr + i, i, ring.one());
            prj.set(i, gr + i, ring.one());
        }
        out.injections.emplace_back(s, total, inj, false);
        out.projections.emplace_back(total, s, prj, false);
        gr += s.generators();
    }
    return out;
}

HomModule::HomModule(const FPModule& m, const FPModule& n) : m_(m), n_(n) {
    if (!m.ring().same_as(n.ring())) throw RingMismatchError("hom module");
    const Ring& ring = m.ring();
    const int gm = m.generators(), gn = n.generators(), km = m.relations().cols();
    // N^gm with the column-major generator layout (i, j) -> j*gn + i.
    std::vector<FPModule> copies(gm, n);
    power_ = gm == 0 ? FPModule::zero(ring) : biproduct(ring, copies).module;
    // Well-definedness map N^gm -> N^km, (x_ij) -> (sum_j relM(j,l) x_ij)_l.
    ExactMatrix phi(ring, gn * km, gn * gm);
    for (int l = 0; l < km; ++l)
        for (int j = 0; j < gm; ++j)
            for (int i = 0; i < gn; ++i)
                phi.set(l * gn + i, j * gn + i, m.relations().at(j, l));
    std::vector<FPModule> copies_k(km, n);
    FPModule target = km == 0 ? FPModule::zero(ring) : biproduct(ring, copies_k).module;
    ModMorphism wd(power_, target, phi, false);
    auto ker = kernel(wd);
    hom_ = ker.module;
    basis_ = ker.inclusion.matrix();
}

ModMorphism HomModule::decode(const ExactMatrix& coords) const {
    ExactMatrix v = power_.reduce(basis_.mul(coords));
    const int gm = m_.generators(), gn = n_.generators();
    ExactMatrix mat(m_.ring(), gn, gm);
    for (int j = 0; j < gm; ++j)
        for (int i = 0; i < gn; ++i) mat.set(i, j, v.at(j * gn + i, 0));
    return ModMorphism(m_, n_, mat, false);
}

ExactMatrix HomModule::encode(const ModMorphism& f) const {
    const int gm = m_.generators(), gn = n_.generators();
    ExactMatrix v(m_.ring(), gn * gm, 1);
    for (int j = 0; j < gm; ++j)
        for (int i = 0; i < gn; ++i) v.set(j * gn + i, 0, f.matrix().at(i, j));
    ExactMatrix sys = hstack(basis_, power_.relations());
    auto sol = solve_matrix_equation(sys, v);
    if (!sol) throw PreconditionError("morphism is not in the hom module (not well-defined?)");
    return hom_.reduce(sol->rows_range(0, hom_.generators()));
}

ModMorphism HomModule::generator_morphism(int k) const {
    ExactMatrix e(m_.ring(), hom_.generators(), 1);
    e.set(k, 0, m_.ring().one());
    return decode(e);
}

ModMorphism hom_precompose(const HomModule& from, const HomModule& to, const ModMorphism& f) {
    ExactMatrix mat(from.m_.ring(), to.hom_.generators(), from.hom_.generators());
    for (int k = 0; k < from.hom_.generators(); ++k) {
        auto col = to.encode(compose(from.generator_morphism(k), f));
        for (int i = 0; i < mat.rows(); ++i) mat.set(i, k, col.at(i, 0));
    }
    return ModMorphism(from.hom_, to.hom_, mat, false);
}

ModMorphism hom_postcompose(const HomModule& from, const HomModule& to, const ModMorphism& g) {
    ExactMatrix mat(from.m_.ring(), to.hom_.generators(), from.hom_.generators());
    for (int k = 0; k < from.hom_.generators(); ++k) {
        auto col = to.encode(compose(g, from.generator_morphism(k)));
        for (int i = 0; i < mat.rows(); ++i) mat.set(i, k, col.at(i, 0));
    }
    return ModMorphism(from.hom_, to.hom_, mat, false);
}

PushoutResult pushout(const ModMorphism& f, const ModMorphism& g) {
    if (f.src().generators() != g.src().generators())
        throw ShapeError("pushout needs a shared source");
    const Ring& ring = f.ring();
    auto sum = biproduct(ring, {f.dst(), g.dst()});
    ModMorphism h = compose(sum.injections[0], f).sub(compose(sum.injections[1], g));
    auto cok = cokernel(h);
    return {cok.module, compose(cok.projection, sum.injections[0]),
            compose(cok.projection, sum.injections[1])};
}

ModMorphism pushout_mediator(const PushoutResult& po, const ModMorphism& u, const ModMorphism& v) {
    ExactMatrix mat = hstack(u.matrix(), v.matrix());
    return ModMorphism(po.module, u.dst(), mat);
}

PullbackResult pullback(const ModMorphism& f, const ModMorphism& g) {
    if (f.dst().generators() != g.dst().generators())
        throw ShapeError("pullback needs a shared target");
    const Ring& ring = f.ring();
    auto sum = biproduct(ring, {f.src(), g.src()});
    ModMorphism h = compose(f, sum.projections[0]).sub(compose(g, sum.projections[1]));
    auto ker = kernel(h);
    return {ker.module, compose(sum.projections[0], ker.inclusion),
            compose(sum.projections[1], ker.inclusion)};
}

ModMorphism pullback_mediator(const PullbackResult& pb, const ModMorphism& u, const ModMorphism& v) {
    // (u, v): T -> B + C lands in the kernel presentation of the pullback.
    const Ring& ring = u.ring();
    ExactMatrix stacked = vstack(u.matrix(), v.matrix());
    // Express through the kernel inclusion generating set.
    ExactMatrix gens = vstack(pb.to_b.matrix(), pb.to_c.matrix());
    ExactMatrix rel(ring, gens.rows(), u.dst().relations().cols() + v.dst().relations().cols());
    for (int j = 0; j < u.dst().relations().cols(); ++j)
        for (int i = 0; i < u.dst().generators(); ++i)
            rel.set(i, j, u.dst().relations().at(i, j));
    for (int j = 0; j < v.dst().relations().cols(); ++j)
        for (int i = 0; i < v.dst().generators(); ++i)
            rel.set(u.dst().generators() + i, u.dst().relations().cols() + j,
                    v.dst().relations().at(i, j));
    auto sol = solve_matrix_equation(hstack(gens, rel), stacked);
    if (!sol) throw PreconditionError("pullback mediator does not exist");
    return ModMorphism(u.src(), pb.module, sol->rows_range(0, pb.module.generators()));
}

bool is_mono(const ModMorphism& f) { return kernel(f).module.is_zero_module(); }

bool is_epi(const ModMorphism& f) { return cokernel(f).module.is_zero_module(); }

std::optional<ModMorphism> section_of(const ModMorphism& f) {
    const Ring& ring = f.ring();
    const auto& m = f.src();
    const auto& n = f.dst();
    LinearSystem sys(ring);
    int s = sys.add_unknown(m.generators(), n.generators());
    // f * s = id_N modulo target relations.
    sys.add_constraint({{s, f.matrix(), ExactMatrix::identity(ring, n.generators())}},
                       ExactMatrix::identity(ring, n.generators()), &n.relations());
    // s must be a well-defined morphism N -> M.
    if (n.relations().cols() > 0)
        sys.add_constraint({{s, ExactMatrix::identity(ring, m.generators()), n.relations()}},
                           ExactMatrix(ring, m.generators(), n.relations().cols()),
                           &m.relations());
    auto sol = sys.solve();
    if (!sol) return std::nullopt;
    return ModMorphism(n, m, (*sol)[0], false);
}

std::optional<ModMorphism> retraction_of(const ModMorphism& f) {
    const Ring& ring = f.ring();
    const auto& m = f.src();
    const auto& n = f.dst();
    LinearSystem sys(ring);
    int r = sys.add_unknown(m.generators(), n.generators());
    // r * f = id_M modulo source relations.
    sys.add_constraint({{r, ExactMatrix::identity(ring, m.generators()), f.matrix()}},
                       ExactMatrix::identity(ring, m.generators()), &m.relations());
    if (n.relations().cols() > 0)
        sys.add_constraint({{r, ExactMatrix::identity(ring, m.generators()), n.relations()}},
                           ExactMatrix(ring, m.generators(), n.relations().cols()),
                           &m.relations());
    auto sol = sys.solve();
    if (!sol) return std::nullopt;
    return ModMorphism(n, m, (*sol)[0], false);
}

std::optional<ModMorphism> inverse_of(const ModMorphism& f) {
    if (!is_mono(f)) return std::nullopt;
    auto s = section_of(f);
    if (!s) return std::nullopt;
    // A section of a mono is two-sided.
    return s;
}

ModMorphism lift_through_inclusion(const KernelResult& ker, const ModMorphism& g) {
    const auto& m = ker.inclusion.dst();
    auto sol = solve_matrix_equation(hstack(ker.inclusion.matrix(), m.relations()), g.matrix());
    if (!sol) throw PreconditionError("morphism does not land in the kernel");
    return ModMorphism(g.src(), ker.module, sol->rows_range(0, ker.module.generators()));
}

ModMorphism drop_through_projection(const CokernelResult& coker, const ModMorphism& g) {
    // Generators of coker are the generators of dst(f).
    return ModMorphism(coker.module, g.dst(), g.matrix());
}

std::vector<Elem> annihilator_of_element(const FPModule& m, const ExactMatrix& x) {
    if (!m.ring().is_finite()) throw Error("annihilator enumeration needs a finite ring");
    std::vector<Elem> out;
    for (const auto& r : m.ring().all_elements())
        if (m.reduce(x.scale(r)).is_zero()) out.push_back(r);
    return out;
}

} // namespace relhom
