#include "ffk/tower.hpp"

#include <algorithm>
#include <map>

#include "ffk/errors.hpp"

namespace ffk {

namespace {

constexpr std::int64_t kMaxRank = 1 << 16;
constexpr std::int64_t kMaxEnumeration = 1 << 22;

void validate_base(const FieldSpecPtr& field, std::int64_t n) {
    if (!field)
        throw precondition_error("tower requires a field spec");
    if (n < 1)
        throw precondition_error("tower degree must be positive");
    if (n % field->p() == 0)
        throw precondition_error("tower degree must be coprime to the characteristic");
    if ((field->q() - 1) % n != 0)
        throw precondition_error("tower degree must divide q - 1");
}

void validate_level(const Polynomial& f, std::int64_t n, bool require_degree) {
    if (!f.is_monic() || f.degree() < 1 || !is_irreducible(f))
        throw precondition_error("tower level must be monic irreducible");
    if (require_degree && f.degree() % n != 0)
        throw precondition_error("tower level degree must be divisible by the tower degree");
}

// Exponent tuple (j_1, ..., j_M) of a flat index, j_1 most significant.
std::vector<std::int64_t> digits_of(std::int64_t flat, std::int64_t n, std::int64_t depth) {
    std::vector<std::int64_t> d(static_cast<std::size_t>(depth));
    for (std::int64_t i = depth - 1; i >= 0; --i) {
        d[static_cast<std::size_t>(i)] = flat % n;
        flat /= n;
    }
    return d;
}

const TowerSpecPtr& require_tower(const TowerElement& x) {
    if (!x.tower())
        throw precondition_error("uninitialized tower element");
    return x.tower();
}

void require_same(const TowerElement& a, const TowerElement& b) {
    if (!a.tower() || !b.tower() || !TowerSpec::same(*a.tower(), *b.tower()))
        throw precondition_error("tower elements belong to different towers");
}

} // namespace

std::int64_t TowerSpec::rank() const {
    std::int64_t r = 1;
    for (std::int64_t i = 0; i < depth(); ++i) {
        r *= n;
        if (r > kMaxRank)
            throw unsupported_error("tower rank exceeds supported bound");
    }
    return r;
}

bool TowerSpec::same(const TowerSpec& a, const TowerSpec& b) {
    if (!FieldSpec::same(*a.field, *b.field) || a.n != b.n || a.levels.size() != b.levels.size())
        return false;
    for (std::size_t i = 0; i < a.levels.size(); ++i)
        if (a.levels[i] != b.levels[i])
            return false;
    return true;
}

TowerSpecPtr make_tower_spec(const FieldSpecPtr& field, std::int64_t n,
                             std::vector<Polynomial> levels) {
    validate_base(field, n);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        validate_level(levels[i], n, true);
        if (i > 0) {
            const Polynomial& prev = levels[i - 1];
            const Polynomial& cur = levels[i];
            bool ascending = prev.degree() < cur.degree() ||
                             (prev.degree() == cur.degree() &&
                              prev.monic_index() < cur.monic_index());
            if (!ascending)
                throw precondition_error("tower levels must be distinct and in canonical order");
        }
    }
    auto ts = std::make_shared<TowerSpec>();
    ts->field = field;
    ts->n = n;
    ts->levels = std::move(levels);
    ts->zeta = primitive_root_of_unity(field, n);
    ts->rank(); // bound check
    return ts;
}

TowerSpecPtr make_kummer_step(const FieldSpecPtr& field, std::int64_t n, Polynomial f) {
    validate_base(field, n);
    validate_level(f, n, false);
    auto ts = std::make_shared<TowerSpec>();
    ts->field = field;
    ts->n = n;
    ts->levels = {std::move(f)};
    ts->zeta = primitive_root_of_unity(field, n);
    return ts;
}

TowerElement TowerElement::zero(const TowerSpecPtr& ts) {
    if (!ts)
        throw precondition_error("null tower spec");
    TowerElement x;
    x.ts_ = ts;
    x.c_.assign(static_cast<std::size_t>(ts->rank()), RationalFunction::zero(ts->field));
    return x;
}

TowerElement TowerElement::one(const TowerSpecPtr& ts) {
    TowerElement x = zero(ts);
    x.c_[0] = RationalFunction::one(ts->field);
    return x;
}

TowerElement TowerElement::constant(const TowerSpecPtr& ts, const RationalFunction& c) {
    TowerElement x = zero(ts);
    x.c_[0] = c;
    return x;
}

TowerElement TowerElement::u(const TowerSpecPtr& ts, std::int64_t level) {
    TowerElement x = zero(ts);
    if (level < 1 || level > ts->depth())
        throw precondition_error("tower level index out of range");
    std::int64_t flat = 1;
    for (std::int64_t i = level; i < ts->depth(); ++i)
        flat *= ts->n;
    x.c_[static_cast<std::size_t>(flat)] = RationalFunction::one(ts->field);
    return x;
}

TowerElement TowerElement::from_coeffs(const TowerSpecPtr& ts, std::vector<RationalFunction> c) {
    if (!ts)
        throw precondition_error("null tower spec");
    if (static_cast<std::int64_t>(c.size()) != ts->rank())
        throw precondition_error("coefficient count does not match tower rank");
    for (const auto& r : c)
        if (!r.spec() || !FieldSpec::same(*r.spec(), *ts->field))
            throw precondition_error("coefficient field does not match tower field");
    TowerElement x;
    x.ts_ = ts;
    x.c_ = std::move(c);
    return x;
}

const RationalFunction& TowerElement::coeff(std::int64_t flat) const {
    require_tower(*this);
    if (flat < 0 || flat >= rank())
        throw precondition_error("tower coefficient index out of range");
    return c_[static_cast<std::size_t>(flat)];
}

const RationalFunction& TowerElement::coeff(const std::vector<std::int64_t>& exps) const {
    require_tower(*this);
    if (static_cast<std::int64_t>(exps.size()) != ts_->depth())
        throw precondition_error("exponent tuple length does not match tower depth");
    std::int64_t flat = 0;
    for (std::int64_t e : exps) {
        if (e < 0 || e >= ts_->n)
            throw precondition_error("exponent out of range");
        flat = flat * ts_->n + e;
    }
    return c_[static_cast<std::size_t>(flat)];
}

bool TowerElement::is_zero() const {
    for (const auto& r : c_)
        if (!r.is_zero())
            return false;
    return true;
}

bool TowerElement::is_integral() const {
    require_tower(*this);
    for (const auto& r : c_)
        if (!r.is_polynomial())
            return false;
    return true;
}

TowerElement TowerElement::operator+(const TowerElement& o) const {
    require_same(*this, o);
    TowerElement r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i)
        r.c_[i] = c_[i] + o.c_[i];
    return r;
}

TowerElement TowerElement::operator-(const TowerElement& o) const {
    require_same(*this, o);
    TowerElement r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i)
        r.c_[i] = c_[i] - o.c_[i];
    return r;
}

TowerElement TowerElement::operator-() const {
    require_tower(*this);
    TowerElement r = *this;
    for (auto& x : r.c_)
        x = -x;
    return r;
}

TowerElement TowerElement::operator*(const RationalFunction& c) const {
    require_tower(*this);
    TowerElement r = *this;
    for (auto& x : r.c_)
        x = x * c;
    return r;
}

namespace {

// Coordinates scaled onto one shared denominator.
struct Cleared {
    Polynomial den;
    std::vector<Polynomial> num;
};

Cleared clear_denominators(const std::vector<RationalFunction>& c, const FieldSpecPtr& spec) {
    Cleared out{Polynomial::one(spec), {}};
    for (const auto& x : c)
        if (!x.is_zero())
            out.den = out.den * Polynomial::exact_div(x.den(), gcd(out.den, x.den()));
    out.num.assign(c.size(), Polynomial::zero(spec));
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!c[i].is_zero())
            out.num[i] = c[i].num() * Polynomial::exact_div(out.den, c[i].den());
    return out;
}

std::vector<std::vector<std::int64_t>> digit_table(std::int64_t N, std::int64_t n,
                                                   std::int64_t depth) {
    std::vector<std::vector<std::int64_t>> dig(static_cast<std::size_t>(N));
    for (std::int64_t f = 0; f < N; ++f)
        dig[static_cast<std::size_t>(f)] = digits_of(f, n, depth);
    return dig;
}

// Product of two polynomial coordinate vectors; a digit overflow at level i
// folds back through levels[i].
std::vector<Polynomial> convolve_coords(const TowerSpec& ts,
                                        const std::vector<std::vector<std::int64_t>>& dig,
                                        const std::vector<Polynomial>& X,
                                        const std::vector<Polynomial>& Y) {
    const std::int64_t n = ts.n;
    const std::int64_t depth = ts.depth();
    const std::int64_t N = static_cast<std::int64_t>(X.size());
    std::vector<Polynomial> acc(X.size(), Polynomial::zero(ts.field));
    for (std::int64_t fa = 0; fa < N; ++fa) {
        if (X[static_cast<std::size_t>(fa)].is_zero())
            continue;
        for (std::int64_t fb = 0; fb < N; ++fb) {
            if (Y[static_cast<std::size_t>(fb)].is_zero())
                continue;
            std::int64_t g = 0;
            Polynomial carry;
            bool has_carry = false;
            for (std::int64_t i = 0; i < depth; ++i) {
                std::int64_t e = dig[static_cast<std::size_t>(fa)][static_cast<std::size_t>(i)] +
                                 dig[static_cast<std::size_t>(fb)][static_cast<std::size_t>(i)];
                if (e >= n) {
                    e -= n;
                    carry = has_carry ? carry * ts.levels[static_cast<std::size_t>(i)]
                                      : ts.levels[static_cast<std::size_t>(i)];
                    has_carry = true;
                }
                g = g * n + e;
            }
            Polynomial term =
                X[static_cast<std::size_t>(fa)] * Y[static_cast<std::size_t>(fb)];
            if (has_carry)
                term = term * carry;
            auto& slot = acc[static_cast<std::size_t>(g)];
            slot = slot + term;
        }
    }
    return acc;
}

} // namespace

TowerElement TowerElement::operator*(const TowerElement& o) const {
    require_same(*this, o);
    // Clear denominators once per operand, convolve polynomial coordinates,
    // and reduce once per output slot; repeated rational gcds dominate the
    // naive accumulation.
    Cleared x = clear_denominators(c_, ts_->field);
    Cleared y = clear_denominators(o.c_, ts_->field);
    std::vector<Polynomial> acc =
        convolve_coords(*ts_, digit_table(rank(), ts_->n, ts_->depth()), x.num, y.num);
    Polynomial D = x.den * y.den;
    TowerElement r = zero(ts_);
    for (std::size_t g = 0; g < acc.size(); ++g)
        if (!acc[g].is_zero())
            r.c_[g] = RationalFunction(acc[g], D);
    return r;
}

bool TowerElement::operator==(const TowerElement& o) const {
    if (!ts_ || !o.ts_ || !TowerSpec::same(*ts_, *o.ts_))
        return false;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != o.c_[i])
            return false;
    return true;
}

TowerElement TowerElement::operator/(const TowerElement& o) const {
    require_same(*this, o);
    const std::int64_t N = rank();
    const FieldSpecPtr& spec = ts_->field;
    // Write o = S / ds and *this = W / dw with polynomial coordinates; the
    // quotient solves (mult-by-S) x' = W, scaled by ds / dw at the end.
    // Forward elimination is fraction-free (Bareiss), and by Cramer's rule
    // each solution entry is y_i / det with y_i a polynomial and det the
    // final pivot, so the back-substitution divides exactly and stays
    // polynomial; one reduction per output coordinate.
    Cleared s = clear_denominators(o.c_, spec);
    Cleared w = clear_denominators(c_, spec);
    auto dig = digit_table(N, ts_->n, ts_->depth());
    std::vector<std::vector<Polynomial>> P(
        static_cast<std::size_t>(N),
        std::vector<Polynomial>(static_cast<std::size_t>(N + 1), Polynomial::zero(spec)));
    for (std::int64_t j = 0; j < N; ++j) {
        std::vector<Polynomial> basis(static_cast<std::size_t>(N), Polynomial::zero(spec));
        basis[static_cast<std::size_t>(j)] = Polynomial::one(spec);
        std::vector<Polynomial> col = convolve_coords(*ts_, dig, s.num, basis);
        for (std::int64_t i = 0; i < N; ++i)
            P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                std::move(col[static_cast<std::size_t>(i)]);
    }
    for (std::int64_t i = 0; i < N; ++i)
        P[static_cast<std::size_t>(i)][static_cast<std::size_t>(N)] =
            std::move(w.num[static_cast<std::size_t>(i)]);

    Polynomial prev = Polynomial::one(spec);
    for (std::int64_t k = 0; k < N; ++k) {
        std::int64_t piv = -1;
        for (std::int64_t row = k; row < N; ++row)
            if (!P[static_cast<std::size_t>(row)][static_cast<std::size_t>(k)].is_zero()) {
                piv = row;
                break;
            }
        if (piv < 0)
            throw precondition_error("tower element is not invertible");
        std::swap(P[static_cast<std::size_t>(k)], P[static_cast<std::size_t>(piv)]);
        for (std::int64_t i = k + 1; i < N; ++i) {
            for (std::int64_t j = k + 1; j <= N; ++j)
                P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Polynomial::exact_div(
                    P[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] *
                            P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                        P[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                            P[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)],
                    prev);
            P[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = Polynomial::zero(spec);
        }
        prev = P[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
    }
    const Polynomial& det = P[static_cast<std::size_t>(N - 1)][static_cast<std::size_t>(N - 1)];

    std::vector<Polynomial> y(static_cast<std::size_t>(N), Polynomial::zero(spec));
    for (std::int64_t i = N - 1; i >= 0; --i) {
        Polynomial t = P[static_cast<std::size_t>(i)][static_cast<std::size_t>(N)] * det;
        for (std::int64_t j = i + 1; j < N; ++j) {
            const Polynomial& pij = P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (pij.is_zero() || y[static_cast<std::size_t>(j)].is_zero())
                continue;
            t = t - pij * y[static_cast<std::size_t>(j)];
        }
        if (!t.is_zero())
            y[static_cast<std::size_t>(i)] =
                Polynomial::exact_div(t, P[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]);
    }

    TowerElement r = zero(ts_);
    Polynomial den = det * w.den;
    for (std::int64_t i = 0; i < N; ++i)
        if (!y[static_cast<std::size_t>(i)].is_zero())
            r.c_[static_cast<std::size_t>(i)] =
                RationalFunction(y[static_cast<std::size_t>(i)] * s.den, den);
    return r;
}

TowerElement TowerElement::inverse() const {
    require_tower(*this);
    return one(ts_) / *this;
}

TowerElement TowerElement::pow(__int128 k) const {
    require_tower(*this);
    if (k < 0)
        return inverse().pow(-k);
    const std::int64_t N = rank();
    const FieldSpecPtr& spec = ts_->field;
    auto dig = digit_table(N, ts_->n, ts_->depth());
    // Square-and-multiply on cleared coordinates; reduction happens once per
    // coordinate when the result is assembled.
    Cleared base = clear_denominators(c_, spec);
    Cleared acc{Polynomial::one(spec),
                std::vector<Polynomial>(static_cast<std::size_t>(N), Polynomial::zero(spec))};
    acc.num[0] = Polynomial::one(spec);
    while (k > 0) {
        if (k & 1) {
            acc.num = convolve_coords(*ts_, dig, acc.num, base.num);
            acc.den = acc.den * base.den;
        }
        k >>= 1;
        if (k > 0) {
            base.num = convolve_coords(*ts_, dig, base.num, base.num);
            base.den = base.den * base.den;
        }
    }
    TowerElement r = zero(ts_);
    for (std::size_t g = 0; g < acc.num.size(); ++g)
        if (!acc.num[g].is_zero())
            r.c_[g] = RationalFunction(acc.num[g], acc.den);
    return r;
}

std::vector<LaurentSeries> conjugates(const TowerElement& x, std::int64_t prec) {
    const TowerSpecPtr& ts = require_tower(x);
    if (prec < 1)
        throw precondition_error("conjugate precision must be positive");
    const std::int64_t n = ts->n;
    const std::int64_t depth = ts->depth();
    const std::int64_t N = x.rank();
    for (const auto& p : ts->levels)
        if (p.degree() % n != 0)
            throw precondition_error("level degree not divisible by tower degree");

    // root powers per level, then one series per basis monomial
    std::vector<std::vector<LaurentSeries>> pows(static_cast<std::size_t>(depth));
    for (std::int64_t i = 0; i < depth; ++i) {
        auto& row = pows[static_cast<std::size_t>(i)];
        row.reserve(static_cast<std::size_t>(n));
        row.push_back(LaurentSeries::one(ts->field));
        if (n > 1) {
            LaurentSeries root = hensel_nth_root(ts->levels[static_cast<std::size_t>(i)], n, prec);
            for (std::int64_t e = 1; e < n; ++e)
                row.push_back(row.back() * root);
        }
    }
    std::vector<LaurentSeries> term(static_cast<std::size_t>(N));
    std::vector<bool> live(static_cast<std::size_t>(N), false);
    for (std::int64_t f = 0; f < N; ++f) {
        const RationalFunction& c = x.coeff(f);
        if (c.is_zero())
            continue;
        LaurentSeries s = LaurentSeries::from_rational(c, prec);
        auto dig = digits_of(f, n, depth);
        for (std::int64_t i = 0; i < depth; ++i)
            if (dig[static_cast<std::size_t>(i)] > 0)
                s = s * pows[static_cast<std::size_t>(i)][static_cast<std::size_t>(dig[static_cast<std::size_t>(i)])];
        term[static_cast<std::size_t>(f)] = s;
        live[static_cast<std::size_t>(f)] = true;
    }

    std::vector<LaurentSeries> out;
    out.reserve(static_cast<std::size_t>(N));
    for (std::int64_t J = 0; J < N; ++J) {
        auto jd = digits_of(J, n, depth);
        LaurentSeries acc = LaurentSeries::zero(ts->field);
        for (std::int64_t f = 0; f < N; ++f) {
            if (!live[static_cast<std::size_t>(f)])
                continue;
            auto ed = digits_of(f, n, depth);
            std::int64_t twist = 0;
            for (std::int64_t i = 0; i < depth; ++i)
                twist += jd[static_cast<std::size_t>(i)] * ed[static_cast<std::size_t>(i)];
            acc = acc + term[static_cast<std::size_t>(f)] * ts->zeta.pow(twist);
        }
        out.push_back(acc);
    }
    return out;
}

AbsInfinity norm_max(const TowerElement& x, std::int64_t prec) {
    const TowerSpecPtr& ts = require_tower(x);
    if (x.is_zero())
        throw precondition_error("norm of zero is not defined");
    std::int64_t attempt = prec;
    if (attempt <= 0) {
        std::int64_t maxdeg = 0;
        for (std::int64_t f = 0; f < x.rank(); ++f) {
            const RationalFunction& c = x.coeff(f);
            if (c.is_zero())
                continue;
            maxdeg = std::max(maxdeg, std::max(c.num().degree(), c.den().degree()));
        }
        attempt = 2 * (1 + maxdeg);
    }
    for (int tries = 0; tries < 8; ++tries) {
        try {
            std::vector<LaurentSeries> conj = conjugates(x, attempt);
            std::int64_t best = 0;
            bool seen = false;
            for (const auto& s : conj) {
                if (s.is_zero())
                    throw precondition_error("conjugate of a nonzero element vanished");
                std::int64_t e = -s.order();
                if (!seen || e > best) {
                    best = e;
                    seen = true;
                }
            }
            return {ts->field->q(), best};
        } catch (const unsupported_error&) {
            attempt *= 2;
        }
    }
    throw unsupported_error("norm precision not reached after retries");
}

IntegralBasisReport verify_integral_basis(const Polynomial& p, std::int64_t n) {
    if (!p.spec())
        throw precondition_error("integral basis check requires a field spec");
    if (n < 1)
        throw precondition_error("degree must be positive");
    if (n % p.spec()->p() == 0)
        throw precondition_error("degree must be coprime to the characteristic");
    if (!p.is_monic() || p.degree() < 1 || !is_irreducible(p))
        throw precondition_error("level must be monic irreducible");

    IntegralBasisReport rep;
    rep.disc = discriminant(XPoly::binomial(n, p), p.spec());
    if (rep.disc.is_zero())
        throw precondition_error("discriminant vanished");
    std::int64_t m = multiplicity(rep.disc, p);
    Polynomial cofactor = Polynomial::exact_div(rep.disc, p.pow(m));
    if (m != n - 1 || !cofactor.is_constant())
        throw precondition_error("integral basis certification failed");
    rep.valuations.emplace_back(Place::finite(p), n - 1);
    return rep;
}

bool comaximality_report(const TowerSpecPtr& ts) {
    if (!ts)
        throw precondition_error("null tower spec");
    std::vector<Place> seen;
    for (const auto& p : ts->levels) {
        IntegralBasisReport rep = verify_integral_basis(p, ts->n);
        for (const auto& [pl, v] : rep.valuations) {
            if (v == 0)
                continue;
            for (const auto& other : seen)
                if (other == pl)
                    return false;
            seen.push_back(pl);
        }
    }
    return true;
}

std::int64_t q_power_exponent(const FieldSpecPtr& spec, std::int64_t N) {
    if (!spec)
        throw precondition_error("null field spec");
    if (N < 1)
        throw precondition_error("bound must be a positive power of q");
    __int128 v = 1;
    std::int64_t k = 0;
    while (v < N) {
        v *= spec->q();
        ++k;
    }
    if (v != N)
        throw precondition_error("bound is not a power of q");
    return k;
}

std::vector<Polynomial> effective_level_bound(const FieldSpecPtr& spec, std::int64_t n,
                                              std::int64_t N) {
    validate_base(spec, n);
    std::int64_t k = q_power_exponent(spec, N);
    return enumerate_Pn_plus(spec, n, k);
}

namespace {

// Count of the recursion at (remaining depth m, degree bound k), capped.
__int128 bounded_count(const TowerSpecPtr& ts, std::int64_t m, std::int64_t k) {
    if (k < 0)
        return 1;
    if (m == 0) {
        __int128 c = 1;
        for (std::int64_t i = 0; i <= k; ++i) {
            c *= ts->field->q();
            if (c > kMaxEnumeration)
                return kMaxEnumeration + 1;
        }
        return c;
    }
    std::int64_t d = ts->levels[static_cast<std::size_t>(m - 1)].degree() / ts->n;
    __int128 total = 1;
    for (std::int64_t i = 0; i < ts->n; ++i) {
        total *= bounded_count(ts, m - 1, k - i * d);
        if (total > kMaxEnumeration)
            return kMaxEnumeration + 1;
    }
    return total;
}

using CoeffVec = std::vector<RationalFunction>;

const std::vector<CoeffVec>& bounded_level(
    const TowerSpecPtr& ts, std::int64_t m, std::int64_t k,
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<CoeffVec>>& memo) {
    auto key = std::make_pair(m, k < 0 ? std::int64_t{-1} : k);
    auto it = memo.find(key);
    if (it != memo.end())
        return it->second;

    std::vector<CoeffVec> out;
    if (m == 0) {
        if (k < 0) {
            out.push_back({RationalFunction::zero(ts->field)});
        } else {
            std::int64_t total = 1;
            for (std::int64_t i = 0; i <= k; ++i)
                total *= ts->field->q();
            out.reserve(static_cast<std::size_t>(total));
            for (std::int64_t v = 0; v < total; ++v) {
                std::vector<std::int32_t> digits(static_cast<std::size_t>(k + 1));
                std::int64_t rest = v;
                for (std::int64_t i = 0; i <= k; ++i) {
                    digits[static_cast<std::size_t>(i)] =
                        static_cast<std::int32_t>(rest % ts->field->q());
                    rest /= ts->field->q();
                }
                out.push_back({RationalFunction(Polynomial::from_coeffs(ts->field, digits))});
            }
        }
    } else if (k < 0) {
        std::int64_t width = 1;
        for (std::int64_t i = 0; i < m; ++i)
            width *= ts->n;
        out.push_back(CoeffVec(static_cast<std::size_t>(width),
                               RationalFunction::zero(ts->field)));
    } else {
        std::int64_t d = ts->levels[static_cast<std::size_t>(m - 1)].degree() / ts->n;
        std::vector<const std::vector<CoeffVec>*> subs;
        subs.reserve(static_cast<std::size_t>(ts->n));
        for (std::int64_t i = 0; i < ts->n; ++i)
            subs.push_back(&bounded_level(ts, m - 1, k - i * d, memo));
        std::int64_t total = 1;
        for (const auto* s : subs)
            total *= static_cast<std::int64_t>(s->size());
        std::size_t width = subs[0]->front().size() * static_cast<std::size_t>(ts->n);
        out.reserve(static_cast<std::size_t>(total));
        // odometer over (s_0, ..., s_{n-1}), s_0 slowest
        for (std::int64_t idx = 0; idx < total; ++idx) {
            std::int64_t rest = idx;
            std::vector<std::int64_t> pick(static_cast<std::size_t>(ts->n));
            for (std::int64_t i = ts->n - 1; i >= 0; --i) {
                std::int64_t sz = static_cast<std::int64_t>(subs[static_cast<std::size_t>(i)]->size());
                pick[static_cast<std::size_t>(i)] = rest % sz;
                rest /= sz;
            }
            CoeffVec combined(width, RationalFunction::zero(ts->field));
            for (std::int64_t i = 0; i < ts->n; ++i) {
                const CoeffVec& a =
                    (*subs[static_cast<std::size_t>(i)])[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
                for (std::size_t pidx = 0; pidx < a.size(); ++pidx)
                    combined[pidx * static_cast<std::size_t>(ts->n) + static_cast<std::size_t>(i)] = a[pidx];
            }
            out.push_back(std::move(combined));
        }
    }
    auto [pos, inserted] = memo.emplace(key, std::move(out));
    (void)inserted;
    return pos->second;
}

} // namespace

std::vector<TowerElement> enumerate_bounded(const TowerSpecPtr& ts, std::int64_t N) {
    if (!ts)
        throw precondition_error("null tower spec");
    for (const auto& p : ts->levels)
        if (p.degree() % ts->n != 0)
            throw precondition_error("level degree not divisible by tower degree");
    std::int64_t k = q_power_exponent(ts->field, N);
    if (bounded_count(ts, ts->depth(), k) > kMaxEnumeration)
        throw unsupported_error("enumeration size exceeds supported bound");

    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<CoeffVec>> memo;
    const auto& vecs = bounded_level(ts, ts->depth(), k, memo);
    std::vector<TowerElement> out;
    out.reserve(vecs.size());
    for (const auto& v : vecs)
        out.push_back(TowerElement::from_coeffs(ts, v));
    return out;
}

} // namespace ffk
