#pragma once

/*
 * Truncated Laurent series in s = 1/t over F_q, ordered by the valuation at
 * infinity: a series of order w starts with a nonzero coefficient at s^w, so
 * polynomials have negative order (-degree) and proper fractions positive
 * order.
 *
 * Every value carries a window [order, window_end) of guaranteed-correct
 * coefficients. Values with terminating expansions (polynomials, monomial
 * quotients) are marked exact via the kExactEnd sentinel and own their full
 * coefficient list; arithmetic propagates the tightest window that is still
 * certain. An operation whose result would retain no correct term at all
 * reports precision exhaustion instead of returning a guess.
 */

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "ffk/polyring.hpp"

namespace ffk {

class LaurentSeries {
public:
    static constexpr std::int64_t kExactEnd = std::numeric_limits<std::int64_t>::max() / 4;
    static constexpr std::int64_t kDefaultPrecision = 32;

    LaurentSeries() = default;

    static LaurentSeries zero(const FieldSpecPtr& spec);
    static LaurentSeries one(const FieldSpecPtr& spec);
    static LaurentSeries t(const FieldSpecPtr& spec); // s^-1, exact
    static LaurentSeries from_polynomial(const Polynomial& f); // exact
    // Expansion of num/den at infinity with prec retained terms.
    static LaurentSeries from_rational(const RationalFunction& r, std::int64_t prec);
    // order and ascending coefficient indices; window_end = kExactEnd marks an
    // exact value. Leading zeros are stripped.
    static LaurentSeries from_terms(const FieldSpecPtr& spec, std::int64_t order,
                                    std::vector<std::int32_t> coeff_idx,
                                    std::int64_t window_end);

    const FieldSpecPtr& spec() const { return spec_; }
    bool is_zero() const { return coeff_.empty(); }
    bool is_exact() const { return window_end_ == kExactEnd; }
    std::int64_t order() const; // requires nonzero
    std::int64_t window_end() const { return window_end_; }
    // Retained term count; kExactEnd for exact values.
    std::int64_t precision() const;
    // One past the last stored exponent (window_end for inexact values).
    std::int64_t coeff_end() const { return order_ + static_cast<std::int64_t>(coeff_.size()); }
    // Coefficient of s^e; e must lie below the window for inexact values.
    FieldElement coeff_at(std::int64_t e) const;

    LaurentSeries operator+(const LaurentSeries& o) const;
    LaurentSeries operator-(const LaurentSeries& o) const;
    LaurentSeries operator*(const LaurentSeries& o) const;
    LaurentSeries operator/(const LaurentSeries& o) const; // o nonzero
    LaurentSeries operator-() const;
    LaurentSeries operator*(const FieldElement& c) const;
    // Nonzero input; retains the input's precision (kDefaultPrecision terms
    // if the input is exact).
    LaurentSeries inverse() const;
    LaurentSeries pow(std::int64_t n) const; // negative inverts first
    // Shrink the window; exact values become windowed.
    LaurentSeries truncate(std::int64_t new_window_end) const;

    // Representational equality (same order, window, and coefficients).
    bool operator==(const LaurentSeries& o) const;
    bool operator!=(const LaurentSeries& o) const { return !(*this == o); }
    // Equality of every coefficient both windows retain.
    bool agrees_with(const LaurentSeries& o) const;

private:
    FieldSpecPtr spec_;
    std::int64_t order_ = 0;
    std::int64_t window_end_ = kExactEnd;
    std::vector<std::int32_t> coeff_; // indices from order_ upward
    void normalize();
};

// q^exponent with exponent = -order; exact pair (base, exponent).
struct AbsInfinity {
    std::int64_t base;
    std::int64_t exponent;
};
AbsInfinity abs_infinity(const LaurentSeries& a); // a nonzero

// The n-th root of a monic polynomial inside F_q((1/t)), normalized to
// leading coefficient 1: u = t^(deg f / n)(1 + ...) with u^n = f through
// prec retained terms. Requires n | deg f and gcd(n, p) = 1.
LaurentSeries hensel_nth_root(const Polynomial& f, std::int64_t n, std::int64_t prec);

} // namespace ffk
