#include "ffk/places.hpp"

#include <algorithm>

namespace ffk {

namespace {

__int128 checked_power(std::int64_t q, std::int64_t d) {
    __int128 acc = 1;
    for (std::int64_t i = 0; i < d; ++i) {
        acc *= q;
        if (acc > (static_cast<__int128>(1) << 124))
            throw unsupported_error("residue field too large");
    }
    return acc;
}

} // namespace

Place Place::infinity(FieldSpecPtr spec) {
    Place v;
    v.spec_ = std::move(spec);
    return v;
}

Place Place::finite(Polynomial pi) {
    if (!pi.is_monic() || !is_irreducible(pi))
        throw precondition_error("place requires a monic irreducible polynomial");
    Place v;
    v.spec_ = pi.spec();
    v.pi_ = std::move(pi);
    return v;
}

const Polynomial& Place::pi() const {
    if (!pi_) throw precondition_error("infinite place has no polynomial uniformizer");
    return *pi_;
}

__int128 Place::residue_size() const {
    return checked_power(spec_->q(), degree());
}

bool Place::operator==(const Place& o) const {
    if (!FieldSpec::same(*spec_, *o.spec_)) return false;
    if (is_infinity() != o.is_infinity()) return false;
    return is_infinity() || *pi_ == *o.pi_;
}

std::optional<std::int64_t> valuation(const RationalFunction& r, const Place& v) {
    if (r.is_zero()) return std::nullopt;
    if (v.is_infinity()) return r.den().degree() - r.num().degree();
    // num and den are coprime, so at most one of the two multiplicities is nonzero.
    std::int64_t vn = multiplicity(r.num(), v.pi());
    if (vn > 0) return vn;
    return -multiplicity(r.den(), v.pi());
}

Polynomial residue(const RationalFunction& r, const Place& v) {
    const auto& spec = r.spec();
    if (r.is_zero()) return Polynomial::zero(spec);
    if (v.is_infinity()) {
        std::int64_t val = r.den().degree() - r.num().degree();
        if (val < 0) throw precondition_error("residue at a place of negative valuation");
        if (val > 0) return Polynomial::zero(spec);
        // den is monic, so the ratio of leading coefficients is lc(num).
        return Polynomial::constant(r.num().leading());
    }
    const Polynomial& pi = v.pi();
    if ((r.den() % pi).is_zero())
        throw precondition_error("residue at a place of negative valuation");
    return (r.num() * invmod(r.den(), pi)) % pi;
}

std::vector<std::pair<Place, std::int64_t>> support(const RationalFunction& r) {
    if (r.is_zero()) throw precondition_error("support of zero");
    std::vector<std::pair<Place, std::int64_t>> out;
    auto fn = factor(r.num());
    auto fd = factor(r.den());
    for (const auto& [pi, m] : fn.factors) out.emplace_back(Place::finite(pi), m);
    for (const auto& [pi, m] : fd.factors) out.emplace_back(Place::finite(pi), -m);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        return a.first.pi().monic_index() < b.first.pi().monic_index();
    });
    std::int64_t at_inf = r.den().degree() - r.num().degree();
    if (at_inf != 0) out.emplace_back(Place::infinity(r.spec()), at_inf);
    return out;
}

ResidueField::ResidueField(Polynomial pi) : pi_(std::move(pi)) {
    if (!pi_.is_monic() || !is_irreducible(pi_))
        throw precondition_error("residue field requires a monic irreducible modulus");
}

__int128 ResidueField::size() const {
    return checked_power(spec()->q(), degree());
}

Polynomial ResidueField::pow(const Polynomial& a, __int128 n) const {
    if (n < 0) return powmod(inv(a), -n, pi_);
    return powmod(a, n, pi_);
}

Polynomial ResidueField::inv(const Polynomial& a) const {
    if (is_zero(a)) throw precondition_error("inverse of zero residue");
    return invmod(a, pi_);
}

FieldElement ResidueField::norm_to_base(const Polynomial& a) const {
    if (is_zero(a)) return FieldElement::zero(spec());
    __int128 exp = (size() - 1) / (spec()->q() - 1);
    Polynomial n = pow(a, exp);
    if (!n.is_constant()) throw precondition_error("norm did not land in the base field");
    return n.is_zero() ? FieldElement::zero(spec()) : n.leading();
}

SplitData split_type(const Place& v, std::int64_t n, const Polynomial& f) {
    const auto& spec = f.spec();
    if (n < 1 || (spec->q() - 1) % n != 0)
        throw precondition_error("step degree must divide q-1");
    if (!f.is_monic() || !is_irreducible(f))
        throw precondition_error("step polynomial must be monic irreducible");
    if (!FieldSpec::same(*spec, *v.spec())) throw precondition_error("mixed field specs");

    SplitData out;
    if (v.is_infinity()) {
        if (f.degree() % n != 0)
            throw precondition_error("step degree must divide deg f at infinity");
        out.ef.assign(n, {1, 1});
        return out;
    }
    if (v.pi() == f) {
        out.ef.push_back({n, 1});
        return out;
    }
    // Unramified: X^n - c over the residue field splits into n/d factors of
    // equal degree d, where d is the order of c^((Q-1)/n) in the n-th roots
    // of unity.
    ResidueField rf(v.pi());
    Polynomial c = rf.reduce(f);
    __int128 exp = (rf.size() - 1) / n;
    Polynomial chi = rf.pow(c, exp);
    std::int64_t d = 0;
    for (std::int64_t cand = 1; cand <= n; ++cand) {
        if (n % cand != 0) continue;
        if (rf.is_one(rf.pow(chi, cand))) {
            d = cand;
            break;
        }
    }
    out.ef.assign(n / d, {1, d});
    return out;
}

RationalFunction weak_approximation(const std::vector<ApproxConstraint>& constraints) {
    if (constraints.empty()) throw precondition_error("no approximation constraints");
    const auto& spec = constraints[0].target.spec();

    for (std::size_t i = 0; i < constraints.size(); ++i)
        for (std::size_t j = i + 1; j < constraints.size(); ++j)
            if (constraints[i].v == constraints[j].v)
                throw precondition_error("duplicate places in approximation constraints");

    const ApproxConstraint* at_inf = nullptr;
    std::vector<const ApproxConstraint*> finite;
    for (const auto& c : constraints) {
        if (!FieldSpec::same(*spec, *c.v.spec()))
            throw precondition_error("mixed field specs");
        if (c.v.is_infinity())
            at_inf = &c;
        else
            finite.push_back(&c);
    }

    // Common denominator absorbing each target's pole at its own place.
    Polynomial d_common = Polynomial::one(spec);
    std::vector<std::int64_t> k(finite.size());
    for (std::size_t i = 0; i < finite.size(); ++i) {
        std::int64_t val = valuation(finite[i]->target, finite[i]->v).value_or(0);
        std::int64_t e = std::max<std::int64_t>(0, -val);
        d_common = d_common * finite[i]->v.pi().pow(e);
        k[i] = finite[i]->m + e;
    }

    // Extra factor keeping the infinity constraint adjustable without touching
    // the finite residues: a monic polynomial coprime to every finite modulus.
    Polynomial g = Polynomial::one(spec);
    std::int64_t s = 0;
    std::int64_t log_pi_deg = 0;
    for (std::size_t i = 0; i < finite.size(); ++i)
        if (k[i] > 0) log_pi_deg += k[i] * finite[i]->v.pi().degree();
    if (at_inf) {
        for (std::int64_t deg = 1; g.is_one(); ++deg) {
            std::int64_t count = 1;
            for (std::int64_t i = 0; i < deg; ++i) count *= spec->q();
            for (std::int64_t m = 0; m < count && g.is_one(); ++m) {
                Polynomial cand = Polynomial::monic_by_index(spec, deg, m);
                bool ok = true;
                for (const auto* c : finite)
                    if (!gcd(cand, c->v.pi()).is_one()) ok = false;
                if (ok) g = cand;
            }
        }
        std::int64_t need = at_inf->m - 1 - d_common.degree() + log_pi_deg;
        if (need > 0) s = (need + g.degree() - 1) / g.degree();
    }
    Polynomial denom = d_common * g.pow(s);

    // CRT for z with z congruent to target * denom at each finite modulus.
    Polynomial big = Polynomial::one(spec);
    std::vector<Polynomial> mods;
    std::vector<Polynomial> rhos;
    for (std::size_t i = 0; i < finite.size(); ++i) {
        if (k[i] <= 0) continue;
        Polynomial mod = finite[i]->v.pi().pow(k[i]);
        RationalFunction scaled = finite[i]->target * RationalFunction(denom);
        Polynomial rho = scaled.is_zero()
                             ? Polynomial::zero(spec)
                             : (scaled.num() * invmod(scaled.den(), mod)) % mod;
        mods.push_back(mod);
        rhos.push_back(rho);
        big = big * mod;
    }
    Polynomial z = Polynomial::zero(spec);
    for (std::size_t i = 0; i < mods.size(); ++i) {
        Polynomial cof = Polynomial::exact_div(big, mods[i]);
        z = z + rhos[i] * cof * invmod(cof, mods[i]);
    }
    z = z % big;

    if (at_inf) {
        // z + h*big, with h the polynomial part of (target*denom - z)/big,
        // pushes the difference below degree deg(denom) - m.
        RationalFunction v = (at_inf->target * RationalFunction(denom) - RationalFunction(z)) /
                             RationalFunction(big);
        Polynomial h = v.is_zero() ? Polynomial::zero(spec) : v.num() / v.den();
        z = z + h * big;
    }
    return RationalFunction(z, denom);
}

} // namespace ffk
