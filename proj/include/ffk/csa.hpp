#pragma once

/*
 * Symbol algebras of prime degree ell over K = F_q(t): the presentation
 * u^ell = a, v^ell = b, v*u = zeta*u*v with zeta a fixed primitive ell-th
 * root of unity in F_q. Reduced trace and norm come from the matrix of
 * left multiplication over the subring K[u]; local invariants come from
 * tame symbols. On top of those sit the sibling-pair search with
 * prescribed ramification and the integral splitting of a rational
 * function across two ramification sets.
 *
 * Only the tame case ell | q-1 is supported; that keeps zeta inside F_q
 * and every symbol computation inside residue fields.
 */

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "ffk/ffield.hpp"
#include "ffk/places.hpp"
#include "ffk/polyring.hpp"

namespace ffk {

struct SymbolAlgebra {
    FieldSpecPtr spec;
    std::int64_t ell = 0;  // prime divisor of q-1
    RationalFunction a, b; // both nonzero
    FieldElement zeta;     // primitive ell-th root of unity

    std::int64_t rank() const { return ell * ell; }
};

using SymbolAlgebraPtr = std::shared_ptr<const SymbolAlgebra>;

SymbolAlgebraPtr make_symbol_algebra(std::int64_t ell, const RationalFunction& a,
                                     const RationalFunction& b);

// Element in the basis u^i v^j with 0 <= i, j < ell; coordinate i*ell + j.
class AlgebraElement {
public:
    static AlgebraElement zero(SymbolAlgebraPtr alg);
    static AlgebraElement one(SymbolAlgebraPtr alg);
    static AlgebraElement constant(SymbolAlgebraPtr alg, RationalFunction c);
    static AlgebraElement u(SymbolAlgebraPtr alg);
    static AlgebraElement v(SymbolAlgebraPtr alg);
    static AlgebraElement from_coords(SymbolAlgebraPtr alg,
                                      std::vector<RationalFunction> coords);

    const SymbolAlgebraPtr& algebra() const { return alg_; }
    const RationalFunction& coord(std::int64_t i, std::int64_t j) const;
    const std::vector<RationalFunction>& coords() const { return coords_; }
    bool is_zero() const;

    AlgebraElement operator+(const AlgebraElement& o) const;
    AlgebraElement operator-(const AlgebraElement& o) const;
    AlgebraElement operator*(const AlgebraElement& o) const;
    AlgebraElement operator-() const;
    AlgebraElement operator*(const RationalFunction& c) const;
    bool operator==(const AlgebraElement& o) const;
    bool operator!=(const AlgebraElement& o) const { return !(*this == o); }

    // Standard quaternion involution; ell = 2 only.
    AlgebraElement conj() const;
    // Two-sided inverse; the reduced norm must not vanish.
    AlgebraElement inverse() const;

private:
    AlgebraElement(SymbolAlgebraPtr alg, std::vector<RationalFunction> coords);
    SymbolAlgebraPtr alg_;
    std::vector<RationalFunction> coords_;
};

// Reduced trace and norm through the ell x ell matrix of left multiplication
// on the basis 1, v, ..., v^{ell-1} over K[u]. For ell = 2 they equal
// 2*x0 and x0^2 - a*x1^2 - b*x2^2 + a*b*x3^2.
RationalFunction trd(const AlgebraElement& x);
RationalFunction nrd(const AlgebraElement& x);

// Value k/ell in (1/ell)Z/Z with 0 <= k < ell.
struct Invariant {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

// Local invariant at v: the tame symbol (-1)^{v(a)v(b)} a^{v(b)} b^{-v(a)}
// is a unit at v; k is the dlog against zeta of its residue normed down
// to F_q.
Invariant local_invariant(const SymbolAlgebraPtr& A, const Place& v);

struct InvariantEntry {
    Place place;
    std::int64_t num = 0;
    std::int64_t den = 1;
};

// Nonzero invariants only; finite places in (degree, index) order, then
// infinity.
struct InvariantProfile {
    std::vector<InvariantEntry> entries;
};

InvariantProfile invariant_profile(const SymbolAlgebraPtr& A);

// Support of the profile, same order.
std::vector<Place> ramified_places(const SymbolAlgebraPtr& A);

// The invariants sum to zero in Q/Z.
bool reciprocity_check(const SymbolAlgebraPtr& A);

// Degree-ell algebras A, B with ramified_places exactly {p, q1} and
// {p, q2}. Deterministic bounded search: both slots range over products
// g^{e0} * w_p^{e1} * w_{q1}^{e2} * w_{q2}^{e3} with exponents below ell,
// where g is the canonical generator and w is the uniformizer of a place,
// scanned by ascending total exponent weight. Throws when the pool has no
// matching pair.
std::pair<SymbolAlgebraPtr, SymbolAlgebraPtr>
construct_sibling_pair(const Place& p, const Place& q1, const Place& q2,
                       std::int64_t ell);

// Traces of the norm-one elements y * conj(y)^{-1} for seeded random y;
// ell = 2 only.
std::vector<RationalFunction> sample_trace_of_norm_one(const SymbolAlgebraPtr& A,
                                                       std::int64_t count,
                                                       std::uint64_t seed);

// y integral on delta_b with x - y integral on delta_a. x must be integral
// on the intersection; if x is integral on all of delta_b it is returned
// unchanged.
RationalFunction split_integral(const RationalFunction& x,
                                const std::vector<Place>& delta_a,
                                const std::vector<Place>& delta_b);

} // namespace ffk
