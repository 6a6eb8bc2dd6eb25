#include "ffk/ffield.hpp"

#include <algorithm>

namespace ffk {

namespace {

constexpr std::int64_t kMaxQ = 1 << 20;

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Dense F_p[s] arithmetic on digit vectors, low degree first.  Only used
// during FieldSpec construction; everything afterwards is table-driven.
using FpPoly = std::vector<std::int64_t>;

void fp_trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::int64_t p) {
    if (a.empty() || b.empty()) return {};
    FpPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    fp_trim(c);
    return c;
}

// Remainder of a by monic b.
FpPoly fp_rem(FpPoly a, const FpPoly& b, std::int64_t p) {
    fp_trim(a);
    while (a.size() >= b.size()) {
        std::int64_t c = a.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            a[shift + i] = ((a[shift + i] - c * b[i]) % p + p) % p;
        }
        fp_trim(a);
    }
    return a;
}

FpPoly fp_powmod(FpPoly base, std::int64_t n, const FpPoly& m, std::int64_t p) {
    FpPoly r{1};
    base = fp_rem(std::move(base), m, p);
    while (n > 0) {
        if (n & 1) r = fp_rem(fp_mul(r, base, p), m, p);
        base = fp_rem(fp_mul(base, base, p), m, p);
        n >>= 1;
    }
    return r;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, std::int64_t p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        // Make b monic before reducing.
        FpPoly bm = b;
        std::int64_t lc = bm.back();
        if (lc != 1) {
            std::int64_t inv = 1, base = lc, n = p - 2;
            while (n > 0) {
                if (n & 1) inv = inv * base % p;
                base = base * base % p;
                n >>= 1;
            }
            for (auto& c : bm) c = c * inv % p;
        }
        FpPoly r = fp_rem(a, bm, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

bool fp_irreducible(const FpPoly& f, std::int64_t p) {
    std::int64_t d = static_cast<std::int64_t>(f.size()) - 1;
    if (d < 1) return false;
    // x^(p^d) == x mod f, and gcd(x^(p^(d/r)) - x, f) = 1 for prime r | d.
    FpPoly x{0, 1};
    FpPoly fr = x;
    std::vector<FpPoly> frob(d + 1); // frob[k] = x^(p^k) mod f
    frob[0] = x;
    for (std::int64_t k = 1; k <= d; ++k) {
        fr = fp_powmod(fr, p, f, p);
        frob[k] = fr;
    }
    FpPoly top = frob[d];
    FpPoly diff = top;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = ((diff[1] - 1) % p + p) % p;
    fp_trim(diff);
    if (!diff.empty()) return false;
    for (std::int64_t r : prime_factors(d)) {
        FpPoly g = frob[d / r];
        g.resize(std::max<std::size_t>(g.size(), 2), 0);
        g[1] = ((g[1] - 1) % p + p) % p;
        fp_trim(g);
        FpPoly gg = fp_gcd(f, g, p);
        if (gg.size() != 1) return false;
    }
    return true;
}

} // namespace

std::vector<std::int64_t> prime_factors(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

FieldSpecPtr FieldSpec::make(std::int64_t p) {
    return make(p, 1, {0, 1});
}

FieldSpecPtr FieldSpec::make(std::int64_t p, std::int64_t e,
                             const std::vector<std::int64_t>& modulus) {
    if (p < 3 || !is_prime(p))
        throw unsupported_error("characteristic must be an odd prime");
    if (e < 1)
        throw precondition_error("extension degree must be positive");
    std::int64_t q = 1;
    for (std::int64_t i = 0; i < e; ++i) {
        q *= p;
        if (q > kMaxQ) throw unsupported_error("field size exceeds 2^20");
    }
    if (static_cast<std::int64_t>(modulus.size()) != e + 1)
        throw precondition_error("modulus degree must equal extension degree");
    for (auto c : modulus)
        if (c < 0 || c >= p) throw precondition_error("modulus coefficient out of range");
    if (modulus.back() != 1)
        throw precondition_error("modulus must be monic");
    if (e > 1 && !fp_irreducible(modulus, p))
        throw precondition_error("modulus is reducible");

    auto spec = std::shared_ptr<FieldSpec>(new FieldSpec());
    spec->p_ = p;
    spec->e_ = e;
    spec->q_ = q;
    spec->mod_ = modulus;
    spec->init_tables();
    return spec;
}

bool FieldSpec::same(const FieldSpec& a, const FieldSpec& b) {
    return &a == &b || (a.p_ == b.p_ && a.e_ == b.e_ && a.mod_ == b.mod_);
}

namespace {

std::vector<std::int64_t> idx_digits(std::int64_t idx, std::int64_t p, std::int64_t e) {
    std::vector<std::int64_t> d(e);
    for (std::int64_t i = 0; i < e; ++i) {
        d[i] = idx % p;
        idx /= p;
    }
    return d;
}

std::int64_t digits_idx(const std::vector<std::int64_t>& d, std::int64_t p) {
    std::int64_t idx = 0;
    for (std::size_t i = d.size(); i-- > 0;) idx = idx * p + (i < d.size() ? d[i] : 0);
    return idx;
}

} // namespace

void FieldSpec::init_tables() {
    // Slow multiplication on indices, used to find the generator and fill
    // the exp/log tables.
    auto slow_mul = [&](std::int64_t a, std::int64_t b) -> std::int64_t {
        if (e_ == 1) return a * b % p_;
        FpPoly pa = idx_digits(a, p_, e_);
        FpPoly pb = idx_digits(b, p_, e_);
        fp_trim(pa);
        fp_trim(pb);
        FpPoly pc = fp_rem(fp_mul(pa, pb, p_), mod_, p_);
        pc.resize(e_, 0);
        return digits_idx(pc, p_);
    };
    auto slow_pow = [&](std::int64_t a, std::int64_t n) -> std::int64_t {
        std::int64_t r = 1;
        while (n > 0) {
            if (n & 1) r = slow_mul(r, a);
            a = slow_mul(a, a);
            n >>= 1;
        }
        return r;
    };

    const std::int64_t order = q_ - 1;
    const auto factors = prime_factors(order);
    std::int64_t g = 0;
    for (std::int64_t cand = 2; cand < q_; ++cand) {
        bool ok = true;
        for (std::int64_t r : factors) {
            if (slow_pow(cand, order / r) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) {
            g = cand;
            break;
        }
    }
    if (g == 0 && q_ == 3) g = 2;
    gen_ = static_cast<std::int32_t>(g);

    exp_.assign(order, 0);
    log_.assign(q_, 0);
    std::int64_t acc = 1;
    for (std::int64_t k = 0; k < order; ++k) {
        exp_[k] = static_cast<std::int32_t>(acc);
        log_[acc] = static_cast<std::int32_t>(k);
        acc = slow_mul(acc, g);
    }

    // Dense operation tables keep the hot polynomial loops free of modular
    // arithmetic; larger fields fall back to the slow paths.
    if (q_ <= 256) {
        const std::size_t qs = static_cast<std::size_t>(q_);
        addt_.resize(qs * qs);
        subt_.resize(qs * qs);
        mult_.resize(qs * qs);
        for (std::int32_t a = 0; a < q_; ++a)
            for (std::int32_t b = 0; b < q_; ++b) {
                const std::size_t at =
                    static_cast<std::size_t>(a) * qs + static_cast<std::size_t>(b);
                addt_[at] = add_idx_slow(a, b);
                subt_[at] = add_idx_slow(a, neg_idx(b));
                mult_[at] = mul_idx_slow(a, b);
            }
    }
}

std::int32_t FieldSpec::add_idx_slow(std::int32_t a, std::int32_t b) const {
    if (e_ == 1) return static_cast<std::int32_t>((a + b) % p_);
    std::int64_t r = 0, mul = 1, x = a, y = b;
    for (std::int64_t i = 0; i < e_; ++i) {
        r += (x % p_ + y % p_) % p_ * mul;
        x /= p_;
        y /= p_;
        mul *= p_;
    }
    return static_cast<std::int32_t>(r);
}

std::int32_t FieldSpec::neg_idx(std::int32_t a) const {
    if (e_ == 1) return static_cast<std::int32_t>((p_ - a) % p_);
    std::int64_t r = 0, mul = 1, x = a;
    for (std::int64_t i = 0; i < e_; ++i) {
        r += (p_ - x % p_) % p_ * mul;
        x /= p_;
        mul *= p_;
    }
    return static_cast<std::int32_t>(r);
}

std::int32_t FieldSpec::mul_idx_slow(std::int32_t a, std::int32_t b) const {
    if (a == 0 || b == 0) return 0;
    std::int64_t k = log_[a] + log_[b];
    if (k >= q_ - 1) k -= q_ - 1;
    return exp_[k];
}

std::int32_t FieldSpec::inv_idx(std::int32_t a) const {
    if (a == 0) throw precondition_error("division by zero in F_q");
    std::int64_t k = (q_ - 1 - log_[a]) % (q_ - 1);
    return exp_[k];
}

std::int32_t FieldSpec::pow_idx(std::int32_t a, __int128 n) const {
    if (a == 0) {
        if (n == 0) return 1;
        if (n < 0) throw precondition_error("division by zero in F_q");
        return 0;
    }
    const std::int64_t order = q_ - 1;
    __int128 k = static_cast<__int128>(log_[a]) * (n % order);
    std::int64_t kk = static_cast<std::int64_t>(k % order);
    if (kk < 0) kk += order;
    return exp_[kk];
}

std::int32_t FieldSpec::log_of(std::int32_t a) const {
    if (a == 0) throw precondition_error("log of zero");
    return log_[a];
}

std::int32_t FieldSpec::exp_of(std::int64_t k) const {
    const std::int64_t order = q_ - 1;
    std::int64_t kk = k % order;
    if (kk < 0) kk += order;
    return exp_[kk];
}

FieldElement FieldElement::from_int(const FieldSpecPtr& spec, std::int64_t n) {
    std::int64_t r = n % spec->p();
    if (r < 0) r += spec->p();
    return {spec, static_cast<std::int32_t>(r)};
}

FieldElement FieldElement::from_index(const FieldSpecPtr& spec, std::int64_t idx) {
    if (idx < 0 || idx >= spec->q()) throw precondition_error("element index out of range");
    return {spec, static_cast<std::int32_t>(idx)};
}

std::vector<std::int64_t> FieldElement::digits() const {
    return idx_digits(idx_, spec_->p(), spec_->e());
}

namespace {
void check_same(const FieldElement& a, const FieldElement& b) {
    if (!a.spec() || !b.spec() || !FieldSpec::same(*a.spec(), *b.spec()))
        throw precondition_error("mixed field specs");
}
} // namespace

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same(*this, o);
    return {spec_, spec_->add_idx(idx_, o.idx_)};
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_same(*this, o);
    return {spec_, spec_->sub_idx(idx_, o.idx_)};
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same(*this, o);
    return {spec_, spec_->mul_idx(idx_, o.idx_)};
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
    check_same(*this, o);
    return {spec_, spec_->mul_idx(idx_, spec_->inv_idx(o.idx_))};
}

FieldElement FieldElement::operator-() const { return {spec_, spec_->neg_idx(idx_)}; }

FieldElement FieldElement::inverse() const { return {spec_, spec_->inv_idx(idx_)}; }

FieldElement FieldElement::pow(__int128 n) const { return {spec_, spec_->pow_idx(idx_, n)}; }

bool FieldElement::operator==(const FieldElement& o) const {
    check_same(*this, o);
    return idx_ == o.idx_;
}

FieldElement canonical_generator(const FieldSpecPtr& spec) {
    return {spec, spec->generator_index()};
}

std::int64_t multiplicative_order(const FieldElement& x) {
    if (x.is_zero()) throw precondition_error("order of zero");
    std::int64_t n = x.spec()->q() - 1;
    for (std::int64_t r : prime_factors(n)) {
        while (n % r == 0 && x.pow(n / r).is_one()) n /= r;
    }
    return n;
}

FieldElement primitive_root_of_unity(const FieldSpecPtr& spec, std::int64_t n) {
    if (n < 1) throw precondition_error("root-of-unity order must be positive");
    if ((spec->q() - 1) % n != 0)
        throw unsupported_error("no primitive root of unity of that order in this field");
    return canonical_generator(spec).pow((spec->q() - 1) / n);
}

std::int64_t power_residue_dlog(const FieldElement& x, std::int64_t ell) {
    if (x.is_zero()) throw precondition_error("power residue symbol of zero");
    const auto& spec = x.spec();
    if (ell < 2 || (spec->q() - 1) % ell != 0)
        throw unsupported_error("power residue degree must divide q-1");
    FieldElement y = x.pow((spec->q() - 1) / ell);
    FieldElement zeta = primitive_root_of_unity(spec, ell);
    FieldElement acc = FieldElement::one(spec);
    for (std::int64_t k = 0; k < ell; ++k) {
        if (acc == y) return k;
        acc = acc * zeta;
    }
    throw precondition_error("power residue symbol outside mu_ell");
}

} // namespace ffk
