#include "ffk/kochen.hpp"

#include <algorithm>
#include <random>

#include "ffk/errors.hpp"
#include "ffk/laurent.hpp"

namespace ffk {

namespace {

constexpr std::int64_t kMaxResidueSize = 1 << 20;
constexpr std::int64_t kMaxRootEnumeration = 1 << 16;
constexpr std::int64_t kMaxLiftPrecision = 1 << 10;

const TowerSpecPtr& require_field(const TowerElement& x) {
    if (!x.tower())
        throw precondition_error("uninitialized tower element");
    if (x.tower()->depth() > 1)
        throw unsupported_error("operator calculus covers depth at most one");
    return x.tower();
}

void require_match(const PlaceAbove& P, const KochenContext& ctx) {
    if (P.base != ctx.base)
        throw precondition_error("place does not lie above the context base");
}

// Roots of X^n = f mod pi in the residue field, ascending canonical order.
std::vector<Polynomial> split_roots(const Polynomial& pi, std::int64_t n,
                                    const Polynomial& f) {
    const FieldSpecPtr& spec = pi.spec();
    __int128 big = 1;
    for (std::int64_t i = 0; i < pi.degree(); ++i)
        big *= spec->q();
    if (big > kMaxRootEnumeration)
        throw unsupported_error("residue field too large for root enumeration");
    std::int64_t Q = static_cast<std::int64_t>(big);
    Polynomial fbar = f % pi;
    std::vector<Polynomial> roots;
    for (std::int64_t idx = 0; idx < Q; ++idx) {
        std::vector<std::int32_t> digits(static_cast<std::size_t>(pi.degree()));
        std::int64_t rest = idx;
        for (auto& d : digits) {
            d = static_cast<std::int32_t>(rest % spec->q());
            rest /= spec->q();
        }
        Polynomial z = Polynomial::from_coeffs(spec, std::move(digits));
        if (powmod(z, n, pi) == fbar)
            roots.push_back(z);
    }
    return roots;
}

// Unit part and pi-multiplicity of a nonzero polynomial.
std::pair<Polynomial, std::int64_t> strip_pi(const Polynomial& a, const Polynomial& pi) {
    std::int64_t m = multiplicity(a, pi);
    return {m == 0 ? a : Polynomial::exact_div(a, pi.pow(m)), m};
}

// v_p(sum_i a_i rho^i) where rho is the lift of the residue root with
// rho^n = f in the completion; exact by raising the working precision until
// the answer is below it.
std::int64_t split_valuation(const TowerElement& x, const Polynomial& pi,
                             const Polynomial& root) {
    const TowerSpecPtr& ts = x.tower();
    const FieldSpecPtr& spec = pi.spec();
    Place p = Place::finite(pi);
    const Polynomial& f = ts->levels[0];

    std::int64_t shift = 0;
    bool seen = false;
    for (std::int64_t i = 0; i < ts->n; ++i) {
        const RationalFunction& a = x.coeff(i);
        if (a.is_zero())
            continue;
        std::int64_t v = *valuation(a, p);
        if (!seen || v < shift) {
            shift = v;
            seen = true;
        }
    }

    for (std::int64_t N = 8; N <= kMaxLiftPrecision; N *= 2) {
        Polynomial PN = pi.pow(N);
        Polynomial rho = root;
        Polynomial fN = f % PN;
        FieldElement nval = FieldElement::from_int(spec, ts->n);
        for (std::int64_t it = 0, steps = 1; it < 64 && steps < 2 * N; ++it, steps *= 2) {
            Polynomial F = (powmod(rho, ts->n, PN) - fN) % PN;
            if (F.is_zero())
                break;
            Polynomial D = (powmod(rho, ts->n - 1, PN) * nval) % PN;
            rho = (rho - F * invmod(D, PN)) % PN;
        }
        if (!((powmod(rho, ts->n, PN) - fN) % PN).is_zero())
            throw unsupported_error("root lifting failed to converge");

        Polynomial S = Polynomial::zero(spec);
        for (std::int64_t i = 0; i < ts->n; ++i) {
            const RationalFunction& a = x.coeff(i);
            if (a.is_zero())
                continue;
            auto [nu, alpha] = strip_pi(a.num(), pi);
            auto [de, delta] = strip_pi(a.den(), pi);
            std::int64_t extra = alpha - delta - shift;
            Polynomial rep = (nu % PN) * invmod(de % PN, PN) % PN;
            if (extra > 0)
                rep = extra >= N ? Polynomial::zero(spec) : (rep * pi.pow(extra)) % PN;
            S = (S + rep * powmod(rho, i, PN)) % PN;
        }
        if (S.is_zero())
            continue;
        return multiplicity(S, pi) + shift;
    }
    throw unsupported_error("valuation precision not reached");
}

std::int64_t infinity_valuation(const TowerElement& x, std::int64_t index) {
    std::int64_t attempt = 2;
    for (std::int64_t f = 0; f < x.rank(); ++f) {
        const RationalFunction& c = x.coeff(f);
        if (!c.is_zero())
            attempt = std::max(attempt,
                               2 * (1 + std::max(c.num().degree(), c.den().degree())));
    }
    for (int tries = 0; tries < 8; ++tries) {
        try {
            auto conj = conjugates(x, attempt);
            const LaurentSeries& s = conj[static_cast<std::size_t>(index)];
            if (s.is_zero())
                throw unsupported_error("embedding vanished through the window");
            return s.order();
        } catch (const unsupported_error&) {
            attempt *= 2;
        }
    }
    throw unsupported_error("valuation precision not reached at infinity");
}

} // namespace

KochenContext KochenContext::make(const Place& p) {
    __int128 rs = p.residue_size();
    if (rs > kMaxResidueSize)
        throw unsupported_error("residue field too large for the operator");
    RationalFunction unif =
        p.is_infinity()
            ? RationalFunction(Polynomial::one(p.spec()), Polynomial::t(p.spec()))
            : RationalFunction(p.pi());
    return KochenContext{p, std::move(unif), static_cast<std::int64_t>(rs)};
}

std::vector<PlaceAbove> places_above(const TowerSpecPtr& L, const Place& p) {
    if (!L)
        throw precondition_error("null tower spec");
    if (L->depth() > 1)
        throw unsupported_error("places above are computed for depth at most one");
    if (!FieldSpec::same(*L->field, *p.spec()))
        throw precondition_error("place belongs to a different base field");

    std::vector<PlaceAbove> out;
    if (L->depth() == 0) {
        out.push_back({L, p, 1, 1, 0, 1});
        return out;
    }
    SplitData sd = split_type(p, L->n, L->levels[0]);
    std::int64_t count = static_cast<std::int64_t>(sd.ef.size());
    for (std::int64_t i = 0; i < count; ++i)
        out.push_back({L, p, sd.ef[static_cast<std::size_t>(i)].first,
                       sd.ef[static_cast<std::size_t>(i)].second, i, count});
    return out;
}

std::optional<std::int64_t> valuation_above(const TowerElement& x, const PlaceAbove& P) {
    const TowerSpecPtr& ts = require_field(x);
    if (!P.field || !TowerSpec::same(*ts, *P.field))
        throw precondition_error("element does not belong to the place's field");
    if (x.is_zero())
        return std::nullopt;

    if (ts->depth() == 0)
        return valuation(x.coeff(0), P.base);

    const Polynomial& f = ts->levels[0];
    const std::int64_t n = ts->n;

    if (P.base.is_infinity())
        return infinity_valuation(x, P.index);

    if (P.base == Place::finite(f)) {
        // v(u) = 1 and the exponents separate terms mod n, so the min is exact
        std::int64_t best = 0;
        bool seen = false;
        for (std::int64_t i = 0; i < n; ++i) {
            const RationalFunction& a = x.coeff(i);
            if (a.is_zero())
                continue;
            std::int64_t v = n * (*valuation(a, P.base)) + i;
            if (!seen || v < best) {
                best = v;
                seen = true;
            }
        }
        return best;
    }

    if (P.res_deg == n) {
        // inert: the generator is a unit whose residue powers stay independent
        std::int64_t best = 0;
        bool seen = false;
        for (std::int64_t i = 0; i < n; ++i) {
            const RationalFunction& a = x.coeff(i);
            if (a.is_zero())
                continue;
            std::int64_t v = *valuation(a, P.base);
            if (!seen || v < best) {
                best = v;
                seen = true;
            }
        }
        return best;
    }
    if (P.res_deg == 1) {
        auto roots = split_roots(P.base.pi(), n, f);
        if (static_cast<std::int64_t>(roots.size()) != P.count)
            throw precondition_error("split place index inconsistent with root count");
        return split_valuation(x, P.base.pi(), roots[static_cast<std::size_t>(P.index)]);
    }
    throw unsupported_error("intermediate residue degrees are not supported");
}

std::optional<TowerElement> beta(const TowerElement& a, const KochenContext& ctx) {
    const TowerSpecPtr& ts = require_field(a);
    TowerElement w = a.pow(ctx.residue_size) - a;
    TowerElement s = w * w - TowerElement::one(ts);
    if (s.is_zero())
        return std::nullopt;
    return w / s;
}

std::optional<TowerElement> gamma(const TowerElement& a, const KochenContext& ctx) {
    auto b = beta(a, ctx);
    if (!b)
        return std::nullopt;
    return *b * ctx.uniformizer.inverse();
}

std::optional<RationalFunction> beta(const RationalFunction& a, const KochenContext& ctx) {
    RationalFunction w = a.pow(ctx.residue_size) - a;
    RationalFunction s = w * w - RationalFunction::one(a.spec());
    if (s.is_zero())
        return std::nullopt;
    return w / s;
}

std::optional<RationalFunction> gamma(const RationalFunction& a, const KochenContext& ctx) {
    auto b = beta(a, ctx);
    if (!b)
        return std::nullopt;
    return *b / ctx.uniformizer;
}

ValuationCase classify_beta(const TowerElement& a, const PlaceAbove& P,
                            const KochenContext& ctx) {
    require_match(P, ctx);
    auto v = valuation_above(a, P);
    if (!v)
        return {ValuationTag::Pos, std::nullopt}; // a = 0, beta(a) = 0
    if (*v > 0)
        return {ValuationTag::Pos, *v};
    if (*v < 0)
        return {ValuationTag::Neg, -ctx.residue_size * *v};

    const TowerSpecPtr& ts = require_field(a);
    TowerElement w = a.pow(ctx.residue_size) - a;
    // w^2 = 1 iff w = +-1; cheaper than forming w^2.
    if (w == TowerElement::one(ts) || w == -TowerElement::one(ts))
        throw precondition_error("input is a pole of the operator");
    auto vw = valuation_above(w, P);
    if (!vw)
        return {ValuationTag::ZeroHigher, std::nullopt}; // beta(a) = 0
    if (*vw > 0)
        return {ValuationTag::ZeroHigher, *vw};
    return {ValuationTag::ZeroUnit, std::nullopt};
}

bool is_one_one_place(const PlaceAbove& P) { return P.ram == 1 && P.res_deg == 1; }

TowerElement witness_non_11(const PlaceAbove& P, const KochenContext& ctx) {
    require_match(P, ctx);
    if (is_one_one_place(P))
        throw precondition_error("place already has trivial ramification and residue degree");
    if (!P.field || P.field->depth() != 1)
        throw precondition_error("witness requires a single radical step");
    TowerElement u = TowerElement::u(P.field, 1);
    TowerElement cand = u;
    for (int j = 1; j <= 8; ++j) {
        if (beta(cand, ctx).has_value())
            return cand;
        cand = u + TowerElement::constant(P.field, ctx.uniformizer.pow(j));
    }
    throw unsupported_error("could not avoid operator poles near the generator");
}

bool holomorphy_membership(const TowerElement& x, const Place& p) {
    const TowerSpecPtr& ts = require_field(x);
    for (const PlaceAbove& P : places_above(ts, p)) {
        if (!is_one_one_place(P))
            continue;
        auto v = valuation_above(x, P);
        if (v && *v < 0)
            return false;
    }
    return true;
}

GammaSampleReport gamma_integrality_sample(const TowerSpecPtr& L, const Place& p,
                                           std::int64_t count, std::uint64_t seed) {
    if (!L)
        throw precondition_error("null tower spec");
    KochenContext ctx = KochenContext::make(p);
    std::vector<PlaceAbove> ones;
    for (const PlaceAbove& P : places_above(L, p))
        if (is_one_one_place(P))
            ones.push_back(P);

    GammaSampleReport rep;
    rep.samples = count;
    std::mt19937_64 rng(seed);
    auto rand_poly = [&](std::int64_t maxdeg) {
        std::vector<std::int32_t> idx(static_cast<std::size_t>(maxdeg + 1));
        for (auto& c : idx)
            c = static_cast<std::int32_t>(rng() % L->field->q());
        return Polynomial::from_coeffs(L->field, std::move(idx));
    };
    for (std::int64_t s = 0; s < count; ++s) {
        std::vector<RationalFunction> coeffs;
        for (std::int64_t i = 0; i < L->rank(); ++i) {
            Polynomial num = rand_poly(2);
            Polynomial den = rand_poly(2);
            while (den.is_zero())
                den = rand_poly(2);
            coeffs.emplace_back(num, den);
        }
        TowerElement a = TowerElement::from_coeffs(L, std::move(coeffs));
        auto g = gamma(a, ctx);
        if (!g)
            continue;
        for (const PlaceAbove& P : ones) {
            auto v = valuation_above(*g, P);
            if (v && *v < 0)
                rep.violations.push_back({a, P.index, *v});
        }
    }
    return rep;
}

KochenTriple kochen_representation(const TowerElement& r, const KochenContext& ctx) {
    const TowerSpecPtr& ts = require_field(r);
    std::vector<PlaceAbove> places = places_above(ts, ctx.base);

    bool all_integral = true;
    const PlaceAbove* bad = nullptr;
    for (const PlaceAbove& P : places) {
        auto v = valuation_above(r, P);
        if (v && *v < 0) {
            all_integral = false;
            if (is_one_one_place(P))
                throw precondition_error(
                    "input is not integral at a (1,1)-place above the base");
            bad = &P;
        }
    }
    TowerElement one = TowerElement::one(ts);
    TowerElement zero = TowerElement::zero(ts);
    if (all_integral)
        return {r, one, zero};

    if (bad->ram > 1)
        throw unsupported_error(
            "no integral representation exists over a ramified base place: "
            "operator values are uniformly positive there");

    // single totally inert place: t_p gamma(z) = beta(z) is a unit up to
    // a nonnegative shift k, and y = -beta(z)^{-1} + t_p^(m+k) clears the
    // pole of order m while staying integral
    const PlaceAbove& P = *bad;
    std::int64_t m = -*valuation_above(r, P);
    TowerElement z = witness_non_11(P, ctx);
    TowerElement b = *beta(z, ctx);
    auto vb = valuation_above(b, P);
    if (!vb || *vb > 0)
        throw unsupported_error("witness value is not a bounded unit");
    std::int64_t k = -*vb;

    TowerElement y = -(b.inverse()) + TowerElement::constant(ts, ctx.uniformizer.pow(m + k));
    TowerElement denom = one + b * y;
    if (denom.is_zero())
        throw unsupported_error("degenerate denominator in representation");
    TowerElement x = r * denom;

    auto vx = valuation_above(x, P);
    auto vy = valuation_above(y, P);
    if ((vx && *vx < 0) || (vy && *vy < 0))
        throw unsupported_error("representation failed its integrality certificate");
    return {x, y, z};
}

} // namespace ffk
