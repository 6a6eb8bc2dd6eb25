#pragma once

/*
 * Radical towers K_M = K(u_1, ..., u_M) with u_i^n = p_i(t), the p_i distinct
 * monic irreducibles of degree divisible by n taken in canonical enumeration
 * order. Elements are stored on the product basis u_1^{j_1} ... u_M^{j_M},
 * 0 <= j_i < n, with rational-function coordinates; an element is integral
 * exactly when every coordinate is a polynomial.
 *
 * Embeddings into F_q((1/t)) send u_i to zeta^{j_i} times the leading-
 * coefficient-1 root of p_i; conjugates are ordered lexicographically in
 * (j_1, ..., j_M), matching ascending flat index (j_1 most significant).
 */

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "ffk/laurent.hpp"
#include "ffk/places.hpp"
#include "ffk/polyring.hpp"

namespace ffk {

struct TowerSpec {
    FieldSpecPtr field;
    std::int64_t n = 0;
    std::vector<Polynomial> levels;
    FieldElement zeta; // fixed primitive n-th root of unity

    std::int64_t depth() const { return static_cast<std::int64_t>(levels.size()); }
    std::int64_t rank() const; // n^depth

    static bool same(const TowerSpec& a, const TowerSpec& b);
};
using TowerSpecPtr = std::shared_ptr<const TowerSpec>;

// Full validation: n | q-1, gcd(n, p) = 1, every level monic irreducible of
// degree divisible by n, strictly ascending in (degree, canonical index).
TowerSpecPtr make_tower_spec(const FieldSpecPtr& field, std::int64_t n,
                             std::vector<Polynomial> levels);
// Single radical step u^n = f for any monic irreducible f; the extension is a
// field regardless of deg f, but embeddings at infinity require n | deg f.
TowerSpecPtr make_kummer_step(const FieldSpecPtr& field, std::int64_t n, Polynomial f);

class TowerElement {
public:
    TowerElement() = default;

    static TowerElement zero(const TowerSpecPtr& ts);
    static TowerElement one(const TowerSpecPtr& ts);
    static TowerElement constant(const TowerSpecPtr& ts, const RationalFunction& c);
    // The generator u_level, 1-based level index.
    static TowerElement u(const TowerSpecPtr& ts, std::int64_t level);
    // Coordinates in flat order (j_1 most significant).
    static TowerElement from_coeffs(const TowerSpecPtr& ts, std::vector<RationalFunction> c);

    const TowerSpecPtr& tower() const { return ts_; }
    std::int64_t rank() const { return static_cast<std::int64_t>(c_.size()); }
    const RationalFunction& coeff(std::int64_t flat) const;
    const RationalFunction& coeff(const std::vector<std::int64_t>& exps) const;
    bool is_zero() const;
    bool is_integral() const; // every coordinate a polynomial

    TowerElement operator+(const TowerElement& o) const;
    TowerElement operator-(const TowerElement& o) const;
    TowerElement operator*(const TowerElement& o) const;
    TowerElement operator/(const TowerElement& o) const; // o nonzero
    TowerElement operator-() const;
    TowerElement operator*(const RationalFunction& c) const;
    bool operator==(const TowerElement& o) const;
    bool operator!=(const TowerElement& o) const { return !(*this == o); }

    TowerElement inverse() const; // nonzero elements
    TowerElement pow(__int128 k) const; // negative inverts first

private:
    TowerSpecPtr ts_;
    std::vector<RationalFunction> c_;
};

// All n^depth embedding images of x at the requested retained precision,
// lexicographic in the sign tuple. Requires every level in P_n^+.
std::vector<LaurentSeries> conjugates(const TowerElement& x, std::int64_t prec);

// max over conjugates of the absolute value at infinity; exact. Starts from
// 2*(1 + max coordinate degree) retained terms and doubles on precision
// exhaustion. x must be nonzero.
AbsInfinity norm_max(const TowerElement& x, std::int64_t prec = 0);

struct IntegralBasisReport {
    Polynomial disc;                                        // disc(X^n - p)
    std::vector<std::pair<Place, std::int64_t>> valuations; // certified (place, valuation)
};
// Certifies disc(X^n - p) = unit * p^(n-1): valuation n-1 at (p), zero at
// every other finite place. Requires p in P_n^+.
IntegralBasisReport verify_integral_basis(const Polynomial& p, std::int64_t n);

// True when the level discriminant supports {(p_i)} are pairwise disjoint
// (checked, not assumed). Vacuously true below two levels.
bool comaximality_report(const TowerSpecPtr& ts);

// k with N = q^k; rejects other N.
std::int64_t q_power_exponent(const FieldSpecPtr& spec, std::int64_t N);

// All p in P_n^+ with q^deg(p) <= N, canonical order. N must be a power of q.
std::vector<Polynomial> effective_level_bound(const FieldSpecPtr& spec, std::int64_t n,
                                              std::int64_t N);

// The complete set of integral x in the tower with norm_max(x) <= N, by the
// coefficient-bound descent; deterministic order. N must be a power of q.
std::vector<TowerElement> enumerate_bounded(const TowerSpecPtr& ts, std::int64_t N);

} // namespace ffk
