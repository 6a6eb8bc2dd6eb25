#pragma once

/*
 * Places of K = F_q(t): the finite place (pi) for each monic irreducible pi
 * and the place at infinity with uniformizer 1/t. Valuations, residues,
 * quotient-ring residue fields, weak approximation, and the splitting data
 * of a place in a degree-n radical step.
 */

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ffk/polyring.hpp"

namespace ffk {

class Place {
public:
    static Place infinity(FieldSpecPtr spec);
    static Place finite(Polynomial pi); // pi monic irreducible

    bool is_infinity() const { return !pi_.has_value(); }
    const Polynomial& pi() const; // finite places only
    std::int64_t degree() const { return pi_ ? pi_->degree() : 1; }
    const FieldSpecPtr& spec() const { return spec_; }
    // Residue field size q^degree; guarded against overflow.
    __int128 residue_size() const;

    bool operator==(const Place& o) const;
    bool operator!=(const Place& o) const { return !(*this == o); }

private:
    Place() = default;
    FieldSpecPtr spec_;
    std::optional<Polynomial> pi_;
};

// +infinity (r = 0) is nullopt.
std::optional<std::int64_t> valuation(const RationalFunction& r, const Place& v);

// Image of r in the residue field at v, represented as the reduced
// representative mod pi (a constant for the infinite place).
// Requires valuation(r, v) >= 0.
Polynomial residue(const RationalFunction& r, const Place& v);

// All places where r has nonzero valuation, finite places first in
// (degree, canonical index) order, the infinite place last. r must be nonzero.
std::vector<std::pair<Place, std::int64_t>> support(const RationalFunction& r);

// Arithmetic in F_q[t]/(pi) on reduced representatives.
class ResidueField {
public:
    explicit ResidueField(Polynomial pi); // monic irreducible

    const FieldSpecPtr& spec() const { return pi_.spec(); }
    const Polynomial& modulus() const { return pi_; }
    std::int64_t degree() const { return pi_.degree(); }
    __int128 size() const; // q^degree, guarded

    Polynomial reduce(const Polynomial& a) const { return a % pi_; }
    Polynomial mul(const Polynomial& a, const Polynomial& b) const { return (a * b) % pi_; }
    Polynomial pow(const Polynomial& a, __int128 n) const; // negative n inverts
    Polynomial inv(const Polynomial& a) const;             // a nonzero mod pi
    bool is_zero(const Polynomial& a) const { return reduce(a).is_zero(); }
    bool is_one(const Polynomial& a) const { return reduce(a).is_one(); }
    // Norm down to F_q: a^((size-1)/(q-1)) for nonzero a, 0 for 0.
    FieldElement norm_to_base(const Polynomial& a) const;

private:
    Polynomial pi_;
};

struct SplitData {
    // (ramification index, residue degree) per place above; sum of e*f = n.
    std::vector<std::pair<std::int64_t, std::int64_t>> ef;
};

// Splitting of v in the degree-n step adjoining an n-th root of f.
// Requires n | q-1 and f monic irreducible. At (f): totally ramified.
// At infinity (requires n | deg f): n places of degree 1. At any other
// finite place: unramified with residue degrees given by the factorization
// of X^n minus the residue of f.
SplitData split_type(const Place& v, std::int64_t n, const Polynomial& f);

struct ApproxConstraint {
    Place v;
    RationalFunction target;
    std::int64_t m;
};

// Returns y with valuation(y - target, v) >= m for every constraint.
// Deterministic: CRT over finite-place power moduli, then a 1/t-adic tail
// fix for an infinity constraint. Places must be pairwise distinct.
RationalFunction weak_approximation(const std::vector<ApproxConstraint>& constraints);

} // namespace ffk
