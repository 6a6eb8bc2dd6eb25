#pragma once

/*
 * Dense univariate arithmetic over F_q[t] and the fraction field F_q(t).
 *
 * Monic polynomials of degree d are enumerated by canonical index in
 * [0, q^d): index sum c_i q^i maps to t^d + sum c_i t^i, so ascending index
 * orders coefficient tuples lexicographically with the highest-degree
 * coefficient compared first (field elements in canonical order).
 */

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ffk/ffield.hpp"

namespace ffk {

class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(FieldSpecPtr spec) : spec_(std::move(spec)) {}

    static Polynomial zero(const FieldSpecPtr& spec) { return Polynomial(spec); }
    static Polynomial one(const FieldSpecPtr& spec);
    static Polynomial t(const FieldSpecPtr& spec);
    static Polynomial constant(const FieldElement& c);
    static Polynomial from_coeffs(const FieldSpecPtr& spec, std::vector<std::int32_t> idx);
    static Polynomial monomial(const FieldSpecPtr& spec, std::int64_t deg, const FieldElement& c);
    // Monic polynomial of given degree with canonical index in [0, q^deg).
    static Polynomial monic_by_index(const FieldSpecPtr& spec, std::int64_t deg, std::int64_t index);

    const FieldSpecPtr& spec() const { return spec_; }
    std::int64_t degree() const { return static_cast<std::int64_t>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    bool is_constant() const { return c_.size() <= 1; }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    FieldElement coeff(std::int64_t i) const;
    std::int32_t coeff_index(std::int64_t i) const {
        return (i >= 0 && i < static_cast<std::int64_t>(c_.size())) ? c_[i] : 0;
    }
    FieldElement leading() const;
    std::int64_t monic_index() const; // inverse of monic_by_index

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial operator*(const FieldElement& c) const;
    bool operator==(const Polynomial& o) const;
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    // Quotient and remainder; o must be nonzero.
    static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);
    Polynomial operator/(const Polynomial& o) const { return divmod(*this, o).first; }
    Polynomial operator%(const Polynomial& o) const { return divmod(*this, o).second; }
    // Quotient asserting exact divisibility.
    static Polynomial exact_div(const Polynomial& a, const Polynomial& b);

    Polynomial derivative() const;
    Polynomial monic() const;
    Polynomial pow(std::int64_t n) const;
    FieldElement eval(const FieldElement& x) const;

private:
    FieldSpecPtr spec_;
    std::vector<std::int32_t> c_; // coefficient indices, low degree first, trimmed
    void trim();
    friend Polynomial powmod(const Polynomial&, __int128, const Polynomial&);
};

Polynomial gcd(const Polynomial& a, const Polynomial& b); // monic (or zero)
// g = gcd (monic), with g = s*a + t*b.
struct ExtGcd {
    Polynomial g, s, t;
};
ExtGcd extended_gcd(const Polynomial& a, const Polynomial& b);
Polynomial powmod(const Polynomial& base, __int128 n, const Polynomial& mod);
// Inverse of a modulo m; requires gcd(a, m) = 1.
Polynomial invmod(const Polynomial& a, const Polynomial& m);
std::int64_t multiplicity(const Polynomial& f, const Polynomial& pi);

// Rabin's test; constants are not irreducible.
bool is_irreducible(const Polynomial& f);

// All monic irreducibles of degree 1..max_degree, ordered by degree then
// canonical index (sieve over the full monic range).
std::vector<Polynomial> enumerate_irreducibles(const FieldSpecPtr& spec, std::int64_t max_degree);

// Monic irreducibles of degree divisible by n (and coprime to p), same order.
std::vector<Polynomial> enumerate_Pn_plus(const FieldSpecPtr& spec, std::int64_t n,
                                          std::int64_t max_degree);

struct FactorList {
    FieldElement unit;                                    // leading coefficient
    std::vector<std::pair<Polynomial, std::int64_t>> factors; // monic irreducible, multiplicity
};
// Complete factorization; deterministic (internal fixed-seed splitting).
FactorList factor(const Polynomial& f);

class RationalFunction {
public:
    RationalFunction() = default;
    explicit RationalFunction(Polynomial num);
    RationalFunction(Polynomial num, Polynomial den); // normalizes

    static RationalFunction zero(const FieldSpecPtr& spec);
    static RationalFunction one(const FieldSpecPtr& spec);
    static RationalFunction t(const FieldSpecPtr& spec);
    static RationalFunction constant(const FieldElement& c);

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    const FieldSpecPtr& spec() const { return num_.spec(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }

    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator/(const RationalFunction& o) const;
    RationalFunction operator-() const;
    RationalFunction inverse() const;
    RationalFunction pow(std::int64_t n) const; // negative allowed for nonzero
    bool operator==(const RationalFunction& o) const;
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

private:
    Polynomial num_, den_;
    void normalize();
};

// Polynomials in an auxiliary variable X with coefficients in F_q[t].
class XPoly {
public:
    XPoly() = default;
    explicit XPoly(std::vector<Polynomial> coeffs); // low X-degree first
    // X^n - p.
    static XPoly binomial(std::int64_t n, const Polynomial& p);

    std::int64_t degree() const { return static_cast<std::int64_t>(c_.size()) - 1; }
    Polynomial coeff(std::int64_t i) const;
    bool is_zero() const { return c_.empty(); }
    XPoly derivative() const;

private:
    std::vector<Polynomial> c_;
};

// Resultant of a and b via fraction-free elimination of the Sylvester matrix.
Polynomial resultant(const XPoly& a, const XPoly& b, const FieldSpecPtr& spec);
// (-1)^(d(d-1)/2) res(f, f') / lc(f) for nonconstant f.
Polynomial discriminant(const XPoly& f, const FieldSpecPtr& spec);

} // namespace ffk
