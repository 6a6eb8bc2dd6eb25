#include "ffk/csa.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <utility>

#include "ffk/errors.hpp"

namespace ffk {

namespace {

bool is_prime(std::int64_t n) {
    if (n < 2)
        return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

void require_same(const SymbolAlgebraPtr& a, const SymbolAlgebraPtr& b) {
    if (a.get() == b.get())
        return;
    if (!a || !b || a->ell != b->ell || !(a->a == b->a) || !(b->b == a->b) ||
        !FieldSpec::same(*a->spec, *b->spec))
        throw precondition_error("elements of different algebras");
}

// Arithmetic in K[u]/(u^ell - a): dense coefficient vectors of length ell.
using UPoly = std::vector<RationalFunction>;

UPoly uzero(const SymbolAlgebraPtr& alg) {
    return UPoly(static_cast<std::size_t>(alg->ell), RationalFunction::zero(alg->spec));
}

UPoly umul(const SymbolAlgebraPtr& alg, const UPoly& x, const UPoly& y) {
    std::int64_t ell = alg->ell;
    UPoly out = uzero(alg);
    for (std::int64_t i = 0; i < ell; ++i) {
        if (x[static_cast<std::size_t>(i)].is_zero())
            continue;
        for (std::int64_t j = 0; j < ell; ++j) {
            if (y[static_cast<std::size_t>(j)].is_zero())
                continue;
            RationalFunction term =
                x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
            std::int64_t e = i + j;
            if (e >= ell) {
                e -= ell;
                term = term * alg->a;
            }
            out[static_cast<std::size_t>(e)] = out[static_cast<std::size_t>(e)] + term;
        }
    }
    return out;
}

UPoly uadd(const UPoly& x, const UPoly& y) {
    UPoly out = x;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = out[i] + y[i];
    return out;
}

UPoly usub(const UPoly& x, const UPoly& y) {
    UPoly out = x;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = out[i] - y[i];
    return out;
}

// Matrix of left multiplication by x on the basis 1, v, ..., v^{ell-1},
// entries in K[u]/(u^ell - a). Row m, column k holds the v^m component
// of x * v^k.
std::vector<std::vector<UPoly>> left_matrix(const AlgebraElement& x) {
    const SymbolAlgebraPtr& alg = x.algebra();
    std::int64_t ell = alg->ell;
    std::vector<std::vector<UPoly>> M(
        static_cast<std::size_t>(ell),
        std::vector<UPoly>(static_cast<std::size_t>(ell), uzero(alg)));
    for (std::int64_t k = 0; k < ell; ++k) {
        for (std::int64_t j = 0; j < ell; ++j) {
            std::int64_t m = (j + k) % ell;
            bool wrap = j + k >= ell;
            UPoly& cell = M[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
            for (std::int64_t i = 0; i < ell; ++i) {
                const RationalFunction& c = x.coord(i, j);
                if (c.is_zero())
                    continue;
                // u^i v^{j+k} = zeta^{-(j+k) i} v^{j+k} u^i
                std::int64_t e = ((j + k) * i) % ell;
                RationalFunction term =
                    c * RationalFunction(Polynomial::from_coeffs(
                            alg->spec, {alg->zeta.pow((ell - e) % ell).index()}));
                if (wrap)
                    term = term * alg->b;
                cell[static_cast<std::size_t>(i)] =
                    cell[static_cast<std::size_t>(i)] + term;
            }
        }
    }
    return M;
}

// Determinant by cofactor expansion; division-free, valid over the
// quotient ring even when u^ell - a is reducible.
UPoly udet(const SymbolAlgebraPtr& alg, std::vector<std::vector<UPoly>> M) {
    std::size_t n = M.size();
    if (n == 1)
        return M[0][0];
    UPoly acc = uzero(alg);
    for (std::size_t r = 0; r < n; ++r) {
        bool zero = true;
        for (const auto& c : M[r][0])
            if (!c.is_zero()) {
                zero = false;
                break;
            }
        if (zero)
            continue;
        std::vector<std::vector<UPoly>> minor;
        minor.reserve(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r)
                continue;
            minor.emplace_back(M[i].begin() + 1, M[i].end());
        }
        UPoly term = umul(alg, M[r][0], udet(alg, std::move(minor)));
        acc = (r % 2 == 0) ? uadd(acc, term) : usub(acc, term);
    }
    return acc;
}

// The trace and determinant of the left-multiplication matrix land in K;
// the u-components above degree zero cancel identically.
RationalFunction base_part(const UPoly& x) {
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!x[i].is_zero())
            throw precondition_error("reduced invariant left the base field");
    return x[0];
}

bool place_less(const Place& x, const Place& y) {
    if (x.is_infinity() != y.is_infinity())
        return y.is_infinity();
    if (x.is_infinity())
        return false;
    if (x.pi().degree() != y.pi().degree())
        return x.pi().degree() < y.pi().degree();
    return x.pi().monic_index() < y.pi().monic_index();
}

// Finite places of the supports of a and b plus infinity, deduplicated,
// in canonical order. Invariants vanish everywhere else.
std::vector<Place> candidate_places(const SymbolAlgebraPtr& A) {
    std::vector<Place> out;
    for (const auto& [pl, v] : support(A->a))
        out.push_back(pl);
    for (const auto& [pl, v] : support(A->b)) {
        bool seen = false;
        for (const auto& p : out)
            if (p == pl) {
                seen = true;
                break;
            }
        if (!seen)
            out.push_back(pl);
    }
    bool has_inf = false;
    for (const auto& p : out)
        if (p.is_infinity())
            has_inf = true;
    if (!has_inf)
        out.push_back(Place::infinity(A->spec));
    std::sort(out.begin(), out.end(), place_less);
    return out;
}

RationalFunction place_uniformizer(const Place& p) {
    if (p.is_infinity())
        return RationalFunction(Polynomial::one(p.spec()), Polynomial::t(p.spec()));
    return RationalFunction(p.pi());
}

} // namespace

SymbolAlgebraPtr make_symbol_algebra(std::int64_t ell, const RationalFunction& a,
                                     const RationalFunction& b) {
    if (!FieldSpec::same(*a.spec(), *b.spec()))
        throw precondition_error("slots of a symbol algebra share the base field");
    if (!is_prime(ell))
        throw precondition_error("symbol algebra degree must be prime");
    if ((a.spec()->q() - 1) % ell != 0)
        throw unsupported_error("only tame symbol algebras: the degree must divide q-1");
    if (a.is_zero() || b.is_zero())
        throw precondition_error("symbol algebra slots must be nonzero");
    SymbolAlgebra A{a.spec(), ell, a, b, primitive_root_of_unity(a.spec(), ell)};
    return std::make_shared<const SymbolAlgebra>(std::move(A));
}

AlgebraElement::AlgebraElement(SymbolAlgebraPtr alg, std::vector<RationalFunction> coords)
    : alg_(std::move(alg)), coords_(std::move(coords)) {}

AlgebraElement AlgebraElement::zero(SymbolAlgebraPtr alg) {
    if (!alg)
        throw precondition_error("null algebra");
    std::vector<RationalFunction> c(static_cast<std::size_t>(alg->rank()),
                                    RationalFunction::zero(alg->spec));
    return {std::move(alg), std::move(c)};
}

AlgebraElement AlgebraElement::one(SymbolAlgebraPtr alg) {
    return constant(std::move(alg), RationalFunction::one(alg->spec));
}

AlgebraElement AlgebraElement::constant(SymbolAlgebraPtr alg, RationalFunction c) {
    AlgebraElement x = zero(std::move(alg));
    x.coords_[0] = std::move(c);
    return x;
}

AlgebraElement AlgebraElement::u(SymbolAlgebraPtr alg) {
    AlgebraElement x = zero(std::move(alg));
    x.coords_[static_cast<std::size_t>(x.alg_->ell)] = RationalFunction::one(x.alg_->spec);
    return x;
}

AlgebraElement AlgebraElement::v(SymbolAlgebraPtr alg) {
    AlgebraElement x = zero(std::move(alg));
    x.coords_[1] = RationalFunction::one(x.alg_->spec);
    return x;
}

AlgebraElement AlgebraElement::from_coords(SymbolAlgebraPtr alg,
                                           std::vector<RationalFunction> coords) {
    if (!alg)
        throw precondition_error("null algebra");
    if (static_cast<std::int64_t>(coords.size()) != alg->rank())
        throw precondition_error("coordinate count must be the algebra rank");
    for (const auto& c : coords)
        if (!FieldSpec::same(*c.spec(), *alg->spec))
            throw precondition_error("coordinate over a different base field");
    return {std::move(alg), std::move(coords)};
}

const RationalFunction& AlgebraElement::coord(std::int64_t i, std::int64_t j) const {
    if (i < 0 || i >= alg_->ell || j < 0 || j >= alg_->ell)
        throw precondition_error("coordinate index out of range");
    return coords_[static_cast<std::size_t>(i * alg_->ell + j)];
}

bool AlgebraElement::is_zero() const {
    for (const auto& c : coords_)
        if (!c.is_zero())
            return false;
    return true;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
    require_same(alg_, o.alg_);
    std::vector<RationalFunction> c = coords_;
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = c[i] + o.coords_[i];
    return {alg_, std::move(c)};
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
    return *this + (-o);
}

AlgebraElement AlgebraElement::operator-() const {
    std::vector<RationalFunction> c = coords_;
    for (auto& x : c)
        x = -x;
    return {alg_, std::move(c)};
}

AlgebraElement AlgebraElement::operator*(const RationalFunction& s) const {
    std::vector<RationalFunction> c = coords_;
    for (auto& x : c)
        x = x * s;
    return {alg_, std::move(c)};
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
    require_same(alg_, o.alg_);
    std::int64_t ell = alg_->ell;
    AlgebraElement out = zero(alg_);
    for (std::int64_t i1 = 0; i1 < ell; ++i1)
        for (std::int64_t j1 = 0; j1 < ell; ++j1) {
            const RationalFunction& c1 = coord(i1, j1);
            if (c1.is_zero())
                continue;
            for (std::int64_t i2 = 0; i2 < ell; ++i2)
                for (std::int64_t j2 = 0; j2 < ell; ++j2) {
                    const RationalFunction& c2 = o.coord(i2, j2);
                    if (c2.is_zero())
                        continue;
                    // v^{j1} u^{i2} = zeta^{j1 i2} u^{i2} v^{j1}
                    RationalFunction term =
                        c1 * c2 *
                        RationalFunction(Polynomial::from_coeffs(
                            alg_->spec,
                            {alg_->zeta.pow((j1 * i2) % ell).index()}));
                    std::int64_t i = i1 + i2, j = j1 + j2;
                    if (i >= ell) {
                        i -= ell;
                        term = term * alg_->a;
                    }
                    if (j >= ell) {
                        j -= ell;
                        term = term * alg_->b;
                    }
                    std::size_t at = static_cast<std::size_t>(i * ell + j);
                    out.coords_[at] = out.coords_[at] + term;
                }
        }
    return out;
}

bool AlgebraElement::operator==(const AlgebraElement& o) const {
    require_same(alg_, o.alg_);
    return coords_ == o.coords_;
}

AlgebraElement AlgebraElement::conj() const {
    if (alg_->ell != 2)
        throw precondition_error("the standard involution is quaternionic");
    AlgebraElement out = -*this;
    RationalFunction two = coords_[0] + coords_[0];
    out.coords_[0] = out.coords_[0] + two;
    return out;
}

AlgebraElement AlgebraElement::inverse() const {
    std::int64_t n = alg_->rank();
    // Solve (left multiplication by x) * y = 1 over K.
    std::vector<std::vector<RationalFunction>> A(
        static_cast<std::size_t>(n),
        std::vector<RationalFunction>(static_cast<std::size_t>(n + 1),
                                      RationalFunction::zero(alg_->spec)));
    for (std::int64_t col = 0; col < n; ++col) {
        AlgebraElement e = zero(alg_);
        e.coords_[static_cast<std::size_t>(col)] = RationalFunction::one(alg_->spec);
        AlgebraElement prod = *this * e;
        for (std::int64_t row = 0; row < n; ++row)
            A[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] =
                prod.coords_[static_cast<std::size_t>(row)];
    }
    A[0][static_cast<std::size_t>(n)] = RationalFunction::one(alg_->spec);

    for (std::int64_t col = 0; col < n; ++col) {
        std::int64_t piv = -1;
        for (std::int64_t row = col; row < n; ++row)
            if (!A[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)].is_zero()) {
                piv = row;
                break;
            }
        if (piv < 0)
            throw precondition_error("algebra element is not invertible");
        std::swap(A[static_cast<std::size_t>(col)], A[static_cast<std::size_t>(piv)]);
        RationalFunction inv =
            A[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)].inverse();
        for (std::int64_t k = col; k <= n; ++k)
            A[static_cast<std::size_t>(col)][static_cast<std::size_t>(k)] =
                A[static_cast<std::size_t>(col)][static_cast<std::size_t>(k)] * inv;
        for (std::int64_t row = 0; row < n; ++row) {
            if (row == col)
                continue;
            RationalFunction f =
                A[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
            if (f.is_zero())
                continue;
            for (std::int64_t k = col; k <= n; ++k)
                A[static_cast<std::size_t>(row)][static_cast<std::size_t>(k)] =
                    A[static_cast<std::size_t>(row)][static_cast<std::size_t>(k)] -
                    f * A[static_cast<std::size_t>(col)][static_cast<std::size_t>(k)];
        }
    }
    std::vector<RationalFunction> c;
    c.reserve(static_cast<std::size_t>(n));
    for (std::int64_t row = 0; row < n; ++row)
        c.push_back(A[static_cast<std::size_t>(row)][static_cast<std::size_t>(n)]);
    return {alg_, std::move(c)};
}

RationalFunction trd(const AlgebraElement& x) {
    const SymbolAlgebraPtr& alg = x.algebra();
    auto M = left_matrix(x);
    UPoly tr = uzero(alg);
    for (std::size_t k = 0; k < M.size(); ++k)
        tr = uadd(tr, M[k][k]);
    return base_part(tr);
}

RationalFunction nrd(const AlgebraElement& x) {
    const SymbolAlgebraPtr& alg = x.algebra();
    return base_part(udet(alg, left_matrix(x)));
}

Invariant local_invariant(const SymbolAlgebraPtr& A, const Place& v) {
    if (!A)
        throw precondition_error("null algebra");
    if (!FieldSpec::same(*A->spec, *v.spec()))
        throw precondition_error("place over a different base field");
    std::int64_t va = *valuation(A->a, v);
    std::int64_t vb = *valuation(A->b, v);
    RationalFunction s = A->a.pow(vb) * A->b.pow(-va);
    if ((va * vb) % 2 != 0)
        s = -s;
    Polynomial rep = residue(s, v);
    FieldElement down = v.is_infinity()
                            ? FieldElement::from_index(A->spec, rep.coeff_index(0))
                            : ResidueField(v.pi()).norm_to_base(rep);
    return {power_residue_dlog(down, A->ell), A->ell};
}

InvariantProfile invariant_profile(const SymbolAlgebraPtr& A) {
    InvariantProfile out;
    for (const auto& v : candidate_places(A)) {
        Invariant inv = local_invariant(A, v);
        if (inv.num != 0)
            out.entries.push_back({v, inv.num, inv.den});
    }
    return out;
}

std::vector<Place> ramified_places(const SymbolAlgebraPtr& A) {
    std::vector<Place> out;
    for (const auto& e : invariant_profile(A).entries)
        out.push_back(e.place);
    return out;
}

bool reciprocity_check(const SymbolAlgebraPtr& A) {
    std::int64_t total = 0;
    for (const auto& e : invariant_profile(A).entries)
        total += e.num;
    return total % A->ell == 0;
}

std::pair<SymbolAlgebraPtr, SymbolAlgebraPtr>
construct_sibling_pair(const Place& p, const Place& q1, const Place& q2,
                       std::int64_t ell) {
    const FieldSpecPtr& spec = p.spec();
    if (!FieldSpec::same(*spec, *q1.spec()) || !FieldSpec::same(*spec, *q2.spec()))
        throw precondition_error("places over different base fields");
    if (p == q1 || p == q2 || q1 == q2)
        throw precondition_error("sibling places must be pairwise distinct");
    if (!is_prime(ell))
        throw precondition_error("symbol algebra degree must be prime");
    if ((spec->q() - 1) % ell != 0)
        throw unsupported_error("only tame symbol algebras: the degree must divide q-1");

    RationalFunction g(Polynomial::from_coeffs(spec, {canonical_generator(spec).index()}));
    std::array<RationalFunction, 3> w = {place_uniformizer(p), place_uniformizer(q1),
                                         place_uniformizer(q2)};

    struct Candidate {
        std::array<std::int64_t, 4> e;
        RationalFunction value;
    };
    std::vector<Candidate> pool;
    for (std::int64_t e0 = 0; e0 < ell; ++e0)
        for (std::int64_t e1 = 0; e1 < ell; ++e1)
            for (std::int64_t e2 = 0; e2 < ell; ++e2)
                for (std::int64_t e3 = 0; e3 < ell; ++e3) {
                    RationalFunction val = g.pow(e0) * w[0].pow(e1) * w[1].pow(e2) *
                                           w[2].pow(e3);
                    if (val.is_one())
                        continue;
                    pool.push_back({{e0, e1, e2, e3}, std::move(val)});
                }
    auto weight = [](const Candidate& c) { return c.e[0] + c.e[1] + c.e[2] + c.e[3]; };
    std::sort(pool.begin(), pool.end(), [&](const Candidate& x, const Candidate& y) {
        if (weight(x) != weight(y))
            return weight(x) < weight(y);
        return x.e > y.e;
    });

    auto find = [&](const Place& other) -> SymbolAlgebraPtr {
        std::vector<Place> target = {p, other};
        std::sort(target.begin(), target.end(), place_less);
        std::int64_t max_w = 2 * 4 * (ell - 1);
        for (std::int64_t total = 0; total <= max_w; ++total)
            for (const auto& ca : pool) {
                if (weight(ca) > total)
                    break;
                for (const auto& cb : pool) {
                    if (weight(ca) + weight(cb) != total)
                        continue;
                    SymbolAlgebraPtr A = make_symbol_algebra(ell, ca.value, cb.value);
                    if (ramified_places(A) == target)
                        return A;
                }
            }
        throw unsupported_error("sibling search pool exhausted");
    };
    SymbolAlgebraPtr A = find(q1);
    SymbolAlgebraPtr B = find(q2);
    return {A, B};
}

std::vector<RationalFunction> sample_trace_of_norm_one(const SymbolAlgebraPtr& A,
                                                       std::int64_t count,
                                                       std::uint64_t seed) {
    if (!A)
        throw precondition_error("null algebra");
    if (A->ell != 2)
        throw precondition_error("norm-one sampling is quaternionic");
    std::mt19937_64 rng(seed);
    auto rand_poly = [&]() {
        std::vector<std::int32_t> c(3);
        for (auto& x : c)
            x = static_cast<std::int32_t>(rng() % A->spec->q());
        return Polynomial::from_coeffs(A->spec, std::move(c));
    };
    std::vector<RationalFunction> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        AlgebraElement y = AlgebraElement::zero(A);
        RationalFunction n = RationalFunction::zero(A->spec);
        for (int tries = 0; tries < 64; ++tries) {
            std::vector<RationalFunction> c;
            for (int k = 0; k < 4; ++k)
                c.emplace_back(rand_poly());
            y = AlgebraElement::from_coords(A, std::move(c));
            n = nrd(y);
            if (!n.is_zero())
                break;
        }
        if (n.is_zero())
            throw precondition_error("random norm-one draw failed");
        AlgebraElement x = y * y.conj().inverse();
        out.push_back(trd(x));
    }
    return out;
}

RationalFunction split_integral(const RationalFunction& x,
                                const std::vector<Place>& delta_a,
                                const std::vector<Place>& delta_b) {
    auto contains = [](const std::vector<Place>& set, const Place& p) {
        for (const auto& q : set)
            if (q == p)
                return true;
        return false;
    };
    for (const auto& p : delta_a)
        if (contains(delta_b, p)) {
            auto v = valuation(x, p);
            if (v && *v < 0)
                throw precondition_error(
                    "input has a pole on the shared ramification locus");
        }
    bool fine = true;
    for (const auto& p : delta_b) {
        auto v = valuation(x, p);
        if (v && *v < 0) {
            fine = false;
            break;
        }
    }
    if (fine)
        return x;
    std::vector<ApproxConstraint> cons;
    std::vector<Place> seen;
    for (const auto& p : delta_b)
        if (!contains(seen, p)) {
            seen.push_back(p);
            cons.push_back({p, RationalFunction::zero(x.spec()), 0});
        }
    for (const auto& p : delta_a)
        if (!contains(seen, p)) {
            seen.push_back(p);
            cons.push_back({p, x, 0});
        }
    return weak_approximation(cons);
}

} // namespace ffk
