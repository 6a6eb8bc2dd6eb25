#include "ffk/laurent.hpp"

#include <algorithm>

namespace ffk {

namespace {

std::int64_t sat_add(std::int64_t window, std::int64_t shift) {
    if (window >= LaurentSeries::kExactEnd / 2) return LaurentSeries::kExactEnd;
    return window + shift;
}

// Power series helpers on raw index vectors (coefficients of s^0..s^(n-1)).

std::vector<std::int32_t> ps_mul(const FieldSpecPtr& spec, const std::vector<std::int32_t>& a,
                                 const std::vector<std::int32_t>& b, std::int64_t prec) {
    std::vector<std::int32_t> c(prec, 0);
    const std::int64_t na = std::min<std::int64_t>(a.size(), prec);
    for (std::int64_t i = 0; i < na; ++i) {
        if (a[i] == 0) continue;
        const std::int64_t nb = std::min<std::int64_t>(b.size(), prec - i);
        for (std::int64_t j = 0; j < nb; ++j) {
            if (b[j] == 0) continue;
            c[i + j] = spec->add_idx(c[i + j], spec->mul_idx(a[i], b[j]));
        }
    }
    return c;
}

std::vector<std::int32_t> ps_pow(const FieldSpecPtr& spec, const std::vector<std::int32_t>& a,
                                 std::int64_t n, std::int64_t prec) {
    std::vector<std::int32_t> r(1, 1);
    std::vector<std::int32_t> base = a;
    while (n > 0) {
        if (n & 1) r = ps_mul(spec, r, base, prec);
        n >>= 1;
        if (n) base = ps_mul(spec, base, base, prec);
    }
    return r;
}

// Inverse of a unit power series (a[0] != 0) by Newton doubling.
std::vector<std::int32_t> ps_inv(const FieldSpecPtr& spec, const std::vector<std::int32_t>& a,
                                 std::int64_t prec) {
    std::vector<std::int32_t> y(1, spec->inv_idx(a[0]));
    std::int64_t cur = 1;
    while (cur < prec) {
        cur = std::min(cur * 2, prec);
        // y <- y(2 - a y) mod s^cur
        std::vector<std::int32_t> ay = ps_mul(spec, a, y, cur);
        for (auto& v : ay) v = spec->neg_idx(v);
        ay[0] = spec->add_idx(ay[0], spec->add_idx(1, 1));
        y = ps_mul(spec, y, ay, cur);
    }
    y.resize(prec, 0);
    return y;
}

} // namespace

void LaurentSeries::normalize() {
    std::size_t lead = 0;
    while (lead < coeff_.size() && coeff_[lead] == 0) ++lead;
    if (lead > 0) {
        coeff_.erase(coeff_.begin(), coeff_.begin() + lead);
        order_ += static_cast<std::int64_t>(lead);
    }
    if (is_exact()) {
        while (!coeff_.empty() && coeff_.back() == 0) coeff_.pop_back();
        if (coeff_.empty()) order_ = 0;
        return;
    }
    if (coeff_.empty() || window_end_ <= order_)
        throw unsupported_error("precision exhausted: no retained term is certain");
    coeff_.resize(window_end_ - order_, 0);
}

LaurentSeries LaurentSeries::zero(const FieldSpecPtr& spec) {
    LaurentSeries s;
    s.spec_ = spec;
    return s;
}

LaurentSeries LaurentSeries::one(const FieldSpecPtr& spec) {
    LaurentSeries s;
    s.spec_ = spec;
    s.coeff_ = {1};
    return s;
}

LaurentSeries LaurentSeries::t(const FieldSpecPtr& spec) {
    LaurentSeries s;
    s.spec_ = spec;
    s.order_ = -1;
    s.coeff_ = {1};
    return s;
}

LaurentSeries LaurentSeries::from_polynomial(const Polynomial& f) {
    LaurentSeries s;
    s.spec_ = f.spec();
    if (f.is_zero()) return s;
    s.order_ = -f.degree();
    s.coeff_.resize(f.degree() + 1);
    for (std::int64_t i = 0; i <= f.degree(); ++i) s.coeff_[i] = f.coeff_index(f.degree() - i);
    s.normalize();
    return s;
}

LaurentSeries LaurentSeries::from_rational(const RationalFunction& r, std::int64_t prec) {
    if (prec < 1) throw precondition_error("precision must be positive");
    if (r.is_zero()) return zero(r.spec());
    if (r.is_polynomial()) return from_polynomial(r.num());
    LaurentSeries num = from_polynomial(r.num());
    LaurentSeries den = from_polynomial(r.den());
    return num * den.truncate(den.order() + prec).inverse();
}

LaurentSeries LaurentSeries::from_terms(const FieldSpecPtr& spec, std::int64_t order,
                                        std::vector<std::int32_t> coeff_idx,
                                        std::int64_t window_end) {
    for (auto v : coeff_idx)
        if (v < 0 || v >= spec->q()) throw precondition_error("coefficient index out of range");
    LaurentSeries s;
    s.spec_ = spec;
    s.order_ = order;
    s.window_end_ = window_end;
    s.coeff_ = std::move(coeff_idx);
    if (!s.is_exact() && window_end - order < static_cast<std::int64_t>(s.coeff_.size()))
        throw precondition_error("coefficients extend beyond the window");
    bool all_zero = true;
    for (auto v : s.coeff_) all_zero &= v == 0;
    if (all_zero) {
        if (!s.is_exact())
            throw precondition_error("windowed value with no nonzero retained term");
        return zero(spec);
    }
    s.normalize();
    return s;
}

std::int64_t LaurentSeries::order() const {
    if (is_zero()) throw precondition_error("order of the zero series");
    return order_;
}

std::int64_t LaurentSeries::precision() const {
    if (is_exact()) return kExactEnd;
    return window_end_ - order_;
}

FieldElement LaurentSeries::coeff_at(std::int64_t e) const {
    if (is_zero()) return FieldElement::zero(spec_);
    if (!is_exact() && e >= window_end_)
        throw precondition_error("coefficient beyond the certain window");
    if (e < order_ || e >= order_ + static_cast<std::int64_t>(coeff_.size()))
        return FieldElement::zero(spec_);
    return FieldElement(spec_, coeff_[e - order_]);
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const {
    if (!FieldSpec::same(*spec_, *o.spec_)) throw precondition_error("mixed field specs");
    if (is_zero() || o.is_zero()) {
        // A truncated zero still bounds what the sum can certify.
        LaurentSeries r = is_zero() ? o : *this;
        std::int64_t w = std::min(window_end_, o.window_end_);
        if (w >= r.window_end_) return r;
        r.window_end_ = w;
        if (!r.is_zero()) r.normalize();
        return r;
    }
    LaurentSeries r;
    r.spec_ = spec_;
    r.order_ = std::min(order_, o.order_);
    r.window_end_ = std::min(window_end_, o.window_end_);
    std::int64_t len = std::max(order_ + static_cast<std::int64_t>(coeff_.size()),
                                o.order_ + static_cast<std::int64_t>(o.coeff_.size())) -
                       r.order_;
    if (!r.is_exact()) len = std::min(len, r.window_end_ - r.order_);
    r.coeff_.assign(len, 0);
    for (std::int64_t i = 0; i < len; ++i) {
        std::int64_t e = r.order_ + i;
        std::int32_t av =
            (e >= order_ && e - order_ < static_cast<std::int64_t>(coeff_.size()))
                ? coeff_[e - order_]
                : 0;
        std::int32_t bv =
            (e >= o.order_ && e - o.order_ < static_cast<std::int64_t>(o.coeff_.size()))
                ? o.coeff_[e - o.order_]
                : 0;
        r.coeff_[i] = spec_->add_idx(av, bv);
    }
    bool all_zero = true;
    for (auto v : r.coeff_) all_zero &= v == 0;
    if (all_zero && r.is_exact()) return zero(spec_);
    r.normalize();
    return r;
}

LaurentSeries LaurentSeries::operator-() const {
    LaurentSeries r = *this;
    for (auto& v : r.coeff_) v = spec_->neg_idx(v);
    return r;
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& o) const {
    return *this + (-o);
}

LaurentSeries LaurentSeries::operator*(const LaurentSeries& o) const {
    if (!FieldSpec::same(*spec_, *o.spec_)) throw precondition_error("mixed field specs");
    if (is_zero() || o.is_zero()) {
        // An exact zero factor kills everything; a truncated zero only
        // certifies the product through the shifted window.
        if ((is_zero() && is_exact()) || (o.is_zero() && o.is_exact())) return zero(spec_);
        std::int64_t va = is_zero() ? window_end_ : order_;
        std::int64_t vb = o.is_zero() ? o.window_end_ : o.order_;
        LaurentSeries r = zero(spec_);
        r.window_end_ = std::min(sat_add(window_end_, vb), sat_add(o.window_end_, va));
        return r;
    }
    LaurentSeries r;
    r.spec_ = spec_;
    r.order_ = order_ + o.order_;
    r.window_end_ = std::min(sat_add(window_end_, o.order_), sat_add(o.window_end_, order_));
    std::int64_t len;
    if (r.is_exact()) {
        len = static_cast<std::int64_t>(coeff_.size() + o.coeff_.size()) - 1;
    } else {
        len = r.window_end_ - r.order_;
    }
    r.coeff_.assign(len, 0);
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(coeff_.size()); ++i) {
        if (coeff_[i] == 0) continue;
        for (std::int64_t j = 0; j < static_cast<std::int64_t>(o.coeff_.size()); ++j) {
            if (o.coeff_[j] == 0 || i + j >= len) continue;
            r.coeff_[i + j] = spec_->add_idx(r.coeff_[i + j], spec_->mul_idx(coeff_[i], o.coeff_[j]));
        }
    }
    r.normalize();
    return r;
}

LaurentSeries LaurentSeries::operator*(const FieldElement& c) const {
    if (c.is_zero()) return zero(spec_);
    LaurentSeries r = *this;
    for (auto& v : r.coeff_) v = spec_->mul_idx(v, c.index());
    return r;
}

LaurentSeries LaurentSeries::inverse() const {
    if (is_zero()) throw precondition_error("inverse of the zero series");
    std::int64_t prec = is_exact() ? kDefaultPrecision : window_end_ - order_;
    std::vector<std::int32_t> unit(coeff_.begin(), coeff_.end());
    unit.resize(std::max<std::size_t>(unit.size(), prec), 0);
    std::vector<std::int32_t> inv = ps_inv(spec_, unit, prec);
    LaurentSeries r;
    r.spec_ = spec_;
    r.order_ = -order_;
    r.window_end_ = -order_ + prec;
    r.coeff_ = std::move(inv);
    r.normalize();
    return r;
}

LaurentSeries LaurentSeries::operator/(const LaurentSeries& o) const {
    return *this * o.inverse();
}

LaurentSeries LaurentSeries::pow(std::int64_t n) const {
    if (n < 0) return inverse().pow(-n);
    LaurentSeries r = one(spec_);
    LaurentSeries base = *this;
    while (n > 0) {
        if (n & 1) r = r * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return r;
}

LaurentSeries LaurentSeries::truncate(std::int64_t new_window_end) const {
    if (is_zero()) {
        LaurentSeries r = *this;
        r.window_end_ = std::min(window_end_, new_window_end);
        return r;
    }
    if (new_window_end >= window_end_) return *this;
    if (new_window_end <= order_)
        throw precondition_error("truncation would retain no terms");
    LaurentSeries r = *this;
    r.window_end_ = new_window_end;
    r.coeff_.resize(new_window_end - r.order_, 0);
    r.normalize();
    return r;
}

bool LaurentSeries::operator==(const LaurentSeries& o) const {
    if (!FieldSpec::same(*spec_, *o.spec_)) throw precondition_error("mixed field specs");
    if (is_zero() || o.is_zero()) return is_zero() == o.is_zero();
    return order_ == o.order_ && window_end_ == o.window_end_ && coeff_ == o.coeff_;
}

bool LaurentSeries::agrees_with(const LaurentSeries& o) const {
    if (!FieldSpec::same(*spec_, *o.spec_)) throw precondition_error("mixed field specs");
    std::int64_t end = std::min(window_end_, o.window_end_);
    std::int64_t start = std::min(is_zero() ? end : order_, o.is_zero() ? end : o.order_);
    if (end == kExactEnd) {
        // Both exact: representational equality.
        end = std::max(is_zero() ? start : order_ + static_cast<std::int64_t>(coeff_.size()),
                       o.is_zero() ? start : o.order_ + static_cast<std::int64_t>(o.coeff_.size()));
    }
    for (std::int64_t e = start; e < end; ++e) {
        if (coeff_at(e) != o.coeff_at(e)) return false;
    }
    return true;
}

AbsInfinity abs_infinity(const LaurentSeries& a) {
    if (a.is_zero()) throw precondition_error("absolute value of the zero series");
    return {a.spec()->q(), -a.order()};
}

LaurentSeries hensel_nth_root(const Polynomial& f, std::int64_t n, std::int64_t prec) {
    const auto& spec = f.spec();
    if (!f.is_monic()) throw precondition_error("n-th root requires a monic polynomial");
    if (n < 1) throw precondition_error("root exponent must be positive");
    if (n % spec->p() == 0) throw precondition_error("root exponent must be coprime to p");
    if (f.degree() % n != 0)
        throw precondition_error("degree not divisible by n: no root at infinity");
    if (prec < 1) throw precondition_error("precision must be positive");

    const std::int64_t d = f.degree();
    const std::int64_t m = d / n;
    // f = t^d F(s) with F(s) = 1 + c_{d-1} s + ... + c_0 s^d.
    std::vector<std::int32_t> big_f(std::max<std::int64_t>(d + 1, prec), 0);
    for (std::int64_t i = 0; i <= d; ++i) big_f[i] = f.coeff_index(d - i);

    // Newton for y = F^(-1/n): y <- y(1 + (1 - F y^n)/n), quadratic in the
    // s-adic metric, then U = F y^(n-1) is the root with U(0) = 1.
    const std::int32_t inv_n = FieldElement::from_int(spec, n).inverse().index();
    std::vector<std::int32_t> y(1, 1);
    std::int64_t cur = 1;
    while (cur < prec) {
        cur = std::min(cur * 2, prec);
        std::vector<std::int32_t> fyn = ps_mul(spec, big_f, ps_pow(spec, y, n, cur), cur);
        std::vector<std::int32_t> delta(cur, 0);
        for (std::int64_t i = 0; i < cur; ++i) {
            std::int32_t v = (i == 0) ? spec->sub_idx(1, fyn[0]) : spec->neg_idx(fyn[i]);
            delta[i] = spec->mul_idx(v, inv_n);
        }
        delta[0] = spec->add_idx(delta[0], 1); // 1 + (1 - F y^n)/n
        y = ps_mul(spec, y, delta, cur);
    }
    std::vector<std::int32_t> u = ps_mul(spec, big_f, ps_pow(spec, y, n - 1, prec), prec);
    return LaurentSeries::from_terms(spec, -m, std::move(u), -m + prec);
}

} // namespace ffk
