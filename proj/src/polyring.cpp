#include "ffk/polyring.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace ffk {

namespace {
void check_spec(const FieldSpecPtr& a, const FieldSpecPtr& b) {
    if (!a || !b || !FieldSpec::same(*a, *b))
        throw precondition_error("mixed field specs");
}
} // namespace

void Polynomial::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Polynomial Polynomial::one(const FieldSpecPtr& spec) {
    Polynomial r(spec);
    r.c_ = {1};
    return r;
}

Polynomial Polynomial::t(const FieldSpecPtr& spec) {
    Polynomial r(spec);
    r.c_ = {0, 1};
    return r;
}

Polynomial Polynomial::constant(const FieldElement& c) {
    Polynomial r(c.spec());
    if (!c.is_zero()) r.c_ = {c.index()};
    return r;
}

Polynomial Polynomial::from_coeffs(const FieldSpecPtr& spec, std::vector<std::int32_t> idx) {
    Polynomial r(spec);
    r.c_ = std::move(idx);
    for (auto v : r.c_)
        if (v < 0 || v >= spec->q()) throw precondition_error("coefficient index out of range");
    r.trim();
    return r;
}

Polynomial Polynomial::monomial(const FieldSpecPtr& spec, std::int64_t deg, const FieldElement& c) {
    Polynomial r(spec);
    if (c.is_zero()) return r;
    r.c_.assign(deg + 1, 0);
    r.c_.back() = c.index();
    return r;
}

Polynomial Polynomial::monic_by_index(const FieldSpecPtr& spec, std::int64_t deg,
                                      std::int64_t index) {
    Polynomial r(spec);
    r.c_.assign(deg + 1, 0);
    const std::int64_t q = spec->q();
    for (std::int64_t i = 0; i < deg; ++i) {
        r.c_[i] = static_cast<std::int32_t>(index % q);
        index /= q;
    }
    if (index != 0) throw precondition_error("monic index out of range");
    r.c_[deg] = 1;
    return r;
}

std::int64_t Polynomial::monic_index() const {
    if (!is_monic()) throw precondition_error("monic_index of non-monic polynomial");
    const std::int64_t q = spec_->q();
    std::int64_t idx = 0;
    for (std::int64_t i = degree() - 1; i >= 0; --i) idx = idx * q + c_[i];
    return idx;
}

FieldElement Polynomial::coeff(std::int64_t i) const {
    return FieldElement(spec_, coeff_index(i));
}

FieldElement Polynomial::leading() const {
    if (is_zero()) return FieldElement::zero(spec_);
    return FieldElement(spec_, c_.back());
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    check_spec(spec_, o.spec_);
    Polynomial r(spec_);
    r.c_.resize(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.c_.size(); ++i)
        r.c_[i] = spec_->add_idx(i < c_.size() ? c_[i] : 0, i < o.c_.size() ? o.c_[i] : 0);
    r.trim();
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    check_spec(spec_, o.spec_);
    Polynomial r(spec_);
    r.c_.resize(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.c_.size(); ++i)
        r.c_[i] = spec_->sub_idx(i < c_.size() ? c_[i] : 0, i < o.c_.size() ? o.c_[i] : 0);
    r.trim();
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    check_spec(spec_, o.spec_);
    Polynomial r(spec_);
    if (is_zero() || o.is_zero()) return r;
    r.c_.assign(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) {
            if (o.c_[j] == 0) continue;
            r.c_[i + j] = spec_->add_idx(r.c_[i + j], spec_->mul_idx(c_[i], o.c_[j]));
        }
    }
    r.trim();
    return r;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(spec_);
    r.c_.resize(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = spec_->neg_idx(c_[i]);
    return r;
}

Polynomial Polynomial::operator*(const FieldElement& c) const {
    check_spec(spec_, c.spec());
    Polynomial r(spec_);
    if (c.is_zero() || is_zero()) return r;
    r.c_.resize(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = spec_->mul_idx(c_[i], c.index());
    r.trim();
    return r;
}

bool Polynomial::operator==(const Polynomial& o) const {
    check_spec(spec_, o.spec_);
    return c_ == o.c_;
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& a, const Polynomial& b) {
    check_spec(a.spec_, b.spec_);
    if (b.is_zero()) throw precondition_error("polynomial division by zero");
    Polynomial q(a.spec_), r = a;
    if (a.degree() < b.degree()) return {q, r};
    const auto& spec = a.spec_;
    q.c_.assign(a.degree() - b.degree() + 1, 0);
    const std::int32_t lead_inv = spec->inv_idx(b.c_.back());
    while (!r.is_zero() && r.degree() >= b.degree()) {
        std::int64_t shift = r.degree() - b.degree();
        std::int32_t scale = spec->mul_idx(r.c_.back(), lead_inv);
        q.c_[shift] = scale;
        for (std::size_t i = 0; i < b.c_.size(); ++i) {
            r.c_[shift + i] =
                spec->sub_idx(r.c_[shift + i], spec->mul_idx(scale, b.c_[i]));
        }
        r.trim();
    }
    q.trim();
    return {q, r};
}

Polynomial Polynomial::exact_div(const Polynomial& a, const Polynomial& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw precondition_error("non-exact polynomial division");
    return q;
}

Polynomial Polynomial::derivative() const {
    Polynomial r(spec_);
    if (degree() < 1) return r;
    r.c_.resize(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) {
        auto m = FieldElement::from_int(spec_, static_cast<std::int64_t>(i));
        r.c_[i - 1] = spec_->mul_idx(c_[i], m.index());
    }
    r.trim();
    return r;
}

Polynomial Polynomial::monic() const {
    if (is_zero() || is_monic()) return *this;
    return *this * leading().inverse();
}

Polynomial Polynomial::pow(std::int64_t n) const {
    if (n < 0) throw precondition_error("negative polynomial power");
    Polynomial r = one(spec_), base = *this;
    while (n > 0) {
        if (n & 1) r = r * base;
        if (n >>= 1) base = base * base;
    }
    return r;
}

FieldElement Polynomial::eval(const FieldElement& x) const {
    FieldElement acc = FieldElement::zero(spec_ ? spec_ : x.spec());
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + FieldElement(spec_, c_[i]);
    return acc;
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
    Polynomial x = a, y = b;
    while (!y.is_zero()) {
        Polynomial r = x % y;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

ExtGcd extended_gcd(const Polynomial& a, const Polynomial& b) {
    const auto& spec = a.spec();
    Polynomial r0 = a, r1 = b;
    Polynomial s0 = Polynomial::one(spec), s1 = Polynomial::zero(spec);
    Polynomial t0 = Polynomial::zero(spec), t1 = Polynomial::one(spec);
    while (!r1.is_zero()) {
        auto [q, r2] = Polynomial::divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r2);
        Polynomial s2 = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        Polynomial t2 = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (!r0.is_zero() && !r0.is_monic()) {
        FieldElement inv = r0.leading().inverse();
        r0 = r0 * inv;
        s0 = s0 * inv;
        t0 = t0 * inv;
    }
    return {r0, s0, t0};
}

Polynomial powmod(const Polynomial& base, __int128 n, const Polynomial& mod) {
    if (n < 0) throw precondition_error("negative modular exponent");
    Polynomial r = Polynomial::one(base.spec());
    Polynomial b = base % mod;
    while (n > 0) {
        if (n & 1) r = (r * b) % mod;
        b = (b * b) % mod;
        n >>= 1;
    }
    return r;
}

Polynomial invmod(const Polynomial& a, const Polynomial& m) {
    auto eg = extended_gcd(a % m, m);
    if (!eg.g.is_one()) throw precondition_error("element not invertible modulo m");
    return eg.s % m;
}

std::int64_t multiplicity(const Polynomial& f, const Polynomial& pi) {
    if (f.is_zero()) throw precondition_error("multiplicity in zero polynomial");
    std::int64_t m = 0;
    Polynomial r = f;
    while (true) {
        auto [q, rem] = Polynomial::divmod(r, pi);
        if (!rem.is_zero()) return m;
        r = std::move(q);
        ++m;
    }
}

namespace {

// h(g) mod f by Horner.
Polynomial compose_mod(const Polynomial& h, const Polynomial& g, const Polynomial& f) {
    Polynomial acc = Polynomial::zero(f.spec());
    for (std::int64_t i = h.degree(); i >= 0; --i) {
        acc = (acc * g + Polynomial::constant(h.coeff(i))) % f;
    }
    return acc;
}

} // namespace

bool is_irreducible(const Polynomial& f) {
    if (f.degree() < 1) return false;
    if (f.degree() == 1) return true;
    const auto& spec = f.spec();
    Polynomial fm = f.monic();
    const std::int64_t d = fm.degree();
    Polynomial x = Polynomial::t(spec);
    std::vector<Polynomial> frob(d + 1);
    frob[0] = x;
    frob[1] = powmod(x, spec->q(), fm);
    for (std::int64_t k = 2; k <= d; ++k) frob[k] = compose_mod(frob[k - 1], frob[1], fm);
    if (!(frob[d] == x % fm)) return false;
    for (std::int64_t r : prime_factors(d)) {
        if (!gcd(frob[d / r] - x, fm).is_one()) return false;
    }
    return true;
}

std::vector<Polynomial> enumerate_irreducibles(const FieldSpecPtr& spec,
                                               std::int64_t max_degree) {
    if (max_degree < 1) return {};
    double size = 1;
    for (std::int64_t i = 0; i < max_degree; ++i) size *= static_cast<double>(spec->q());
    if (size > static_cast<double>(1 << 24))
        throw unsupported_error("irreducible enumeration range too large");

    std::vector<Polynomial> out;
    std::vector<std::vector<Polynomial>> by_degree(max_degree + 1);
    for (std::int64_t d = 1; d <= max_degree; ++d) {
        std::int64_t count = 1;
        for (std::int64_t i = 0; i < d; ++i) count *= spec->q();
        std::vector<bool> composite(count, false);
        for (std::int64_t a = 1; 2 * a <= d; ++a) {
            const std::int64_t b = d - a;
            std::int64_t cof = 1;
            for (std::int64_t i = 0; i < b; ++i) cof *= spec->q();
            for (const auto& g : by_degree[a]) {
                for (std::int64_t hidx = 0; hidx < cof; ++hidx) {
                    Polynomial h = Polynomial::monic_by_index(spec, b, hidx);
                    composite[(g * h).monic_index()] = true;
                }
            }
        }
        for (std::int64_t m = 0; m < count; ++m) {
            if (!composite[m]) by_degree[d].push_back(Polynomial::monic_by_index(spec, d, m));
        }
        for (const auto& f : by_degree[d]) out.push_back(f);
    }
    return out;
}

std::vector<Polynomial> enumerate_Pn_plus(const FieldSpecPtr& spec, std::int64_t n,
                                          std::int64_t max_degree) {
    if (n < 1) throw precondition_error("exponent must be positive");
    if (n % spec->p() == 0) throw precondition_error("exponent must be coprime to p");
    std::vector<Polynomial> out;
    for (const auto& f : enumerate_irreducibles(spec, max_degree)) {
        if (f.degree() % n == 0) out.push_back(f);
    }
    return out;
}

namespace {

// Inverse Frobenius: c -> c^(p^(e-1)); h(t^p) -> h.
Polynomial pth_root_poly(const Polynomial& f) {
    const auto& spec = f.spec();
    const std::int64_t p = spec->p();
    std::int64_t root_exp = 1;
    for (std::int64_t i = 0; i + 1 < spec->e(); ++i) root_exp *= p;
    std::vector<std::int32_t> idx(f.degree() / p + 1, 0);
    for (std::int64_t i = 0; i <= f.degree(); ++i) {
        if (f.coeff_index(i) == 0) continue;
        if (i % p != 0) throw precondition_error("polynomial is not a p-th power");
        idx[i / p] = f.coeff(i).pow(root_exp).index();
    }
    return Polynomial::from_coeffs(spec, std::move(idx));
}

void squarefree_rec(const Polynomial& f, std::int64_t scale,
                    std::vector<std::pair<Polynomial, std::int64_t>>& out) {
    if (f.is_one()) return;
    Polynomial fp = f.derivative();
    if (fp.is_zero()) {
        squarefree_rec(pth_root_poly(f), scale * f.spec()->p(), out);
        return;
    }
    Polynomial g = gcd(f, fp);
    Polynomial w = Polynomial::exact_div(f, g);
    std::int64_t i = 1;
    while (!w.is_one()) {
        Polynomial y = gcd(w, g);
        Polynomial z = Polynomial::exact_div(w, y);
        if (z.degree() > 0) out.emplace_back(z, i * scale);
        w = std::move(y);
        g = Polynomial::exact_div(g, w);
        ++i;
    }
    if (!g.is_one()) squarefree_rec(g, scale, out);
}

__int128 subfield_order(std::int64_t q, std::int64_t d) {
    __int128 acc = 1;
    for (std::int64_t i = 0; i < d; ++i) {
        acc *= q;
        if (acc > (static_cast<__int128>(1) << 124))
            throw unsupported_error("residue field too large for equal-degree splitting");
    }
    return acc;
}

void equal_degree_split(const Polynomial& g, std::int64_t d, std::mt19937_64& rng,
                        std::vector<Polynomial>& out) {
    if (g.degree() == d) {
        out.push_back(g.monic());
        return;
    }
    const auto& spec = g.spec();
    const __int128 exp = (subfield_order(spec->q(), d) - 1) / 2;
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<std::int32_t> idx(g.degree());
        for (auto& v : idx) v = static_cast<std::int32_t>(rng() % spec->q());
        Polynomial r = Polynomial::from_coeffs(spec, std::move(idx));
        if (r.degree() < 1) continue;
        Polynomial w = gcd(r, g);
        if (w.degree() == 0 || w.degree() == g.degree()) {
            Polynomial s = powmod(r, exp, g) - Polynomial::one(spec);
            w = gcd(s, g);
        }
        if (w.degree() > 0 && w.degree() < g.degree()) {
            equal_degree_split(w, d, rng, out);
            equal_degree_split(Polynomial::exact_div(g, w), d, rng, out);
            return;
        }
    }
    throw precondition_error("equal-degree splitting did not converge");
}

void ddf_factor(const Polynomial& z, std::mt19937_64& rng, std::vector<Polynomial>& out) {
    const auto& spec = z.spec();
    Polynomial u = z;
    Polynomial h = Polynomial::t(spec) % u;
    std::int64_t d = 0;
    while (2 * (d + 1) <= u.degree()) {
        ++d;
        h = powmod(h, spec->q(), u);
        Polynomial g = gcd(h - Polynomial::t(spec), u);
        if (g.degree() > 0) {
            equal_degree_split(g, d, rng, out);
            u = Polynomial::exact_div(u, g);
            h = h % u;
        }
    }
    if (u.degree() > 0) out.push_back(u);
}

} // namespace

FactorList factor(const Polynomial& f) {
    if (f.is_zero()) throw precondition_error("factorization of zero");
    FactorList result;
    result.unit = f.leading();
    Polynomial fm = f.monic();
    if (fm.degree() < 1) return result;

    std::vector<std::pair<Polynomial, std::int64_t>> square_parts;
    squarefree_rec(fm, 1, square_parts);

    std::mt19937_64 rng(0x5eedf00dULL);
    for (const auto& [part, mult] : square_parts) {
        std::vector<Polynomial> irr;
        ddf_factor(part, rng, irr);
        std::sort(irr.begin(), irr.end(), [](const Polynomial& a, const Polynomial& b) {
            if (a.degree() != b.degree()) return a.degree() < b.degree();
            return a.monic_index() < b.monic_index();
        });
        for (const auto& pi : irr) result.factors.emplace_back(pi, mult);
    }
    std::sort(result.factors.begin(), result.factors.end(),
              [](const auto& a, const auto& b) {
                  if (a.first.degree() != b.first.degree())
                      return a.first.degree() < b.first.degree();
                  return a.first.monic_index() < b.first.monic_index();
              });
    return result;
}

RationalFunction::RationalFunction(Polynomial num)
    : num_(std::move(num)), den_(Polynomial::one(num_.spec())) {}

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    normalize();
}

void RationalFunction::normalize() {
    check_spec(num_.spec(), den_.spec());
    if (den_.is_zero()) throw precondition_error("rational function with zero denominator");
    if (num_.is_zero()) {
        den_ = Polynomial::one(num_.spec());
        return;
    }
    Polynomial g = gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = Polynomial::exact_div(num_, g);
        den_ = Polynomial::exact_div(den_, g);
    }
    if (!den_.is_monic()) {
        FieldElement inv = den_.leading().inverse();
        num_ = num_ * inv;
        den_ = den_ * inv;
    }
}

RationalFunction RationalFunction::zero(const FieldSpecPtr& spec) {
    return RationalFunction(Polynomial::zero(spec));
}
RationalFunction RationalFunction::one(const FieldSpecPtr& spec) {
    return RationalFunction(Polynomial::one(spec));
}
RationalFunction RationalFunction::t(const FieldSpecPtr& spec) {
    return RationalFunction(Polynomial::t(spec));
}
RationalFunction RationalFunction::constant(const FieldElement& c) {
    return RationalFunction(Polynomial::constant(c));
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
    return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
    return RationalFunction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}
RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    return RationalFunction(num_ * o.num_, den_ * o.den_);
}
RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
    if (o.is_zero()) throw precondition_error("division by zero rational function");
    return RationalFunction(num_ * o.den_, den_ * o.num_);
}
RationalFunction RationalFunction::operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
}
RationalFunction RationalFunction::inverse() const {
    if (is_zero()) throw precondition_error("inverse of zero rational function");
    return RationalFunction(den_, num_);
}
RationalFunction RationalFunction::pow(std::int64_t n) const {
    if (n < 0) return inverse().pow(-n);
    RationalFunction r = one(spec()), base = *this;
    while (n > 0) {
        if (n & 1) r = r * base;
        if (n >>= 1) base = base * base;
    }
    return r;
}
bool RationalFunction::operator==(const RationalFunction& o) const {
    return num_ == o.num_ && den_ == o.den_;
}

XPoly::XPoly(std::vector<Polynomial> coeffs) : c_(std::move(coeffs)) {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

XPoly XPoly::binomial(std::int64_t n, const Polynomial& p) {
    if (n < 1) throw precondition_error("binomial exponent must be positive");
    std::vector<Polynomial> c(n + 1, Polynomial::zero(p.spec()));
    c[0] = -p;
    c[n] = Polynomial::one(p.spec());
    return XPoly(std::move(c));
}

Polynomial XPoly::coeff(std::int64_t i) const {
    if (i < 0 || i > degree()) {
        if (c_.empty()) throw precondition_error("coefficient of zero X-polynomial");
        return Polynomial::zero(c_[0].spec());
    }
    return c_[i];
}

XPoly XPoly::derivative() const {
    if (c_.size() <= 1) return XPoly();
    std::vector<Polynomial> d(c_.size() - 1, Polynomial());
    const auto& spec = c_[0].spec();
    for (std::size_t i = 1; i < c_.size(); ++i) {
        d[i - 1] = c_[i] * FieldElement::from_int(spec, static_cast<std::int64_t>(i));
    }
    return XPoly(std::move(d));
}

Polynomial resultant(const XPoly& a, const XPoly& b, const FieldSpecPtr& spec) {
    const std::int64_t m = a.degree(), n = b.degree();
    if (m < 0 || n < 0) return Polynomial::zero(spec);
    if (m == 0 && n == 0) return Polynomial::one(spec);
    const std::int64_t size = m + n;
    std::vector<std::vector<Polynomial>> M(size,
                                           std::vector<Polynomial>(size, Polynomial::zero(spec)));
    for (std::int64_t r = 0; r < n; ++r)
        for (std::int64_t i = 0; i <= m; ++i) M[r][r + i] = a.coeff(m - i);
    for (std::int64_t r = 0; r < m; ++r)
        for (std::int64_t i = 0; i <= n; ++i) M[n + r][r + i] = b.coeff(n - i);

    // Bareiss fraction-free elimination; entries stay in F_q[t].
    bool negate = false;
    Polynomial prev = Polynomial::one(spec);
    for (std::int64_t k = 0; k + 1 < size; ++k) {
        if (M[k][k].is_zero()) {
            std::int64_t swap_row = -1;
            for (std::int64_t r = k + 1; r < size; ++r) {
                if (!M[r][k].is_zero()) {
                    swap_row = r;
                    break;
                }
            }
            if (swap_row < 0) return Polynomial::zero(spec);
            std::swap(M[k], M[swap_row]);
            negate = !negate;
        }
        for (std::int64_t i = k + 1; i < size; ++i) {
            for (std::int64_t j = k + 1; j < size; ++j) {
                M[i][j] = Polynomial::exact_div(M[k][k] * M[i][j] - M[i][k] * M[k][j], prev);
            }
            M[i][k] = Polynomial::zero(spec);
        }
        prev = M[k][k];
    }
    Polynomial det = M[size - 1][size - 1];
    return negate ? -det : det;
}

Polynomial discriminant(const XPoly& f, const FieldSpecPtr& spec) {
    const std::int64_t d = f.degree();
    if (d < 1) throw precondition_error("discriminant needs positive degree");
    Polynomial res = resultant(f, f.derivative(), spec);
    Polynomial disc = Polynomial::exact_div(res, f.coeff(d));
    if ((d * (d - 1) / 2) % 2 != 0) disc = -disc;
    return disc;
}

} // namespace ffk
