#pragma once

/*
 * Arithmetic in F_q, q = p^e with p an odd prime and q <= 2^20.
 *
 * Elements are stored as canonical indices: the representative polynomial
 * c_0 + c_1 s + ... + c_{e-1} s^{e-1} over F_p is packed as
 * sum c_i p^i.  The canonical order of elements is ascending index, which
 * compares the highest-degree coefficient of the representative first.
 * Multiplication uses exp/log tables built from the canonical generator
 * (the smallest element, in canonical order, generating the unit group).
 */

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ffk/errors.hpp"

namespace ffk {

class FieldSpec;
using FieldSpecPtr = std::shared_ptr<const FieldSpec>;

class FieldSpec : public std::enable_shared_from_this<FieldSpec> {
public:
    // Prime field F_p.
    static FieldSpecPtr make(std::int64_t p);
    // Extension field F_{p^e} = F_p[s]/(modulus); modulus has length e+1,
    // entries in [0,p), monic, irreducible over F_p.
    static FieldSpecPtr make(std::int64_t p, std::int64_t e,
                             const std::vector<std::int64_t>& modulus);

    std::int64_t p() const { return p_; }
    std::int64_t e() const { return e_; }
    std::int64_t q() const { return q_; }
    const std::vector<std::int64_t>& modulus() const { return mod_; }

    std::int32_t generator_index() const { return gen_; }

    // True when the two specs describe the same field presentation.
    static bool same(const FieldSpec& a, const FieldSpec& b);

    // Index arithmetic (used by FieldElement; exposed for table-driven loops).
    // Small fields answer from dense q*q tables; the slow paths cover any q.
    std::int32_t add_idx(std::int32_t a, std::int32_t b) const {
        if (!addt_.empty())
            return addt_[static_cast<std::size_t>(a) * static_cast<std::size_t>(q_) +
                         static_cast<std::size_t>(b)];
        return add_idx_slow(a, b);
    }
    std::int32_t sub_idx(std::int32_t a, std::int32_t b) const {
        if (!subt_.empty())
            return subt_[static_cast<std::size_t>(a) * static_cast<std::size_t>(q_) +
                         static_cast<std::size_t>(b)];
        return add_idx_slow(a, neg_idx(b));
    }
    std::int32_t neg_idx(std::int32_t a) const;
    std::int32_t mul_idx(std::int32_t a, std::int32_t b) const {
        if (!mult_.empty())
            return mult_[static_cast<std::size_t>(a) * static_cast<std::size_t>(q_) +
                         static_cast<std::size_t>(b)];
        return mul_idx_slow(a, b);
    }
    std::int32_t inv_idx(std::int32_t a) const;
    std::int32_t pow_idx(std::int32_t a, __int128 n) const;

    std::int32_t log_of(std::int32_t a) const; // a != 0
    std::int32_t exp_of(std::int64_t k) const; // generator^k

private:
    FieldSpec() = default;
    void init_tables();
    std::int32_t add_idx_slow(std::int32_t a, std::int32_t b) const;
    std::int32_t mul_idx_slow(std::int32_t a, std::int32_t b) const;

    std::int64_t p_ = 0, e_ = 1, q_ = 0;
    std::vector<std::int64_t> mod_;
    std::int32_t gen_ = 0;
    std::vector<std::int32_t> exp_, log_, addt_, subt_, mult_;
};

class FieldElement {
public:
    FieldElement() = default;
    FieldElement(FieldSpecPtr spec, std::int32_t idx) : spec_(std::move(spec)), idx_(idx) {}

    static FieldElement zero(const FieldSpecPtr& spec) { return {spec, 0}; }
    static FieldElement one(const FieldSpecPtr& spec) { return {spec, 1}; }
    // Embeds an integer (reduced mod p) as a constant.
    static FieldElement from_int(const FieldSpecPtr& spec, std::int64_t n);
    static FieldElement from_index(const FieldSpecPtr& spec, std::int64_t idx);

    const FieldSpecPtr& spec() const { return spec_; }
    std::int32_t index() const { return idx_; }
    bool is_zero() const { return idx_ == 0; }
    bool is_one() const { return idx_ == 1; }

    // Coefficients of the representative polynomial, length e.
    std::vector<std::int64_t> digits() const;

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement inverse() const;
    FieldElement pow(__int128 n) const;

    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

private:
    FieldSpecPtr spec_;
    std::int32_t idx_ = 0;
};

// Canonical generator of F_q^x as an element.
FieldElement canonical_generator(const FieldSpecPtr& spec);

// Multiplicative order of a nonzero element.
std::int64_t multiplicative_order(const FieldElement& x);

// Distinguished primitive n-th root of unity g^((q-1)/n); requires n | q-1.
FieldElement primitive_root_of_unity(const FieldSpecPtr& spec, std::int64_t n);

// k in [0, ell) with x^((q-1)/ell) = zeta_ell^k; requires x != 0, ell | q-1.
std::int64_t power_residue_dlog(const FieldElement& x, std::int64_t ell);

// Prime factors of n, ascending, without multiplicity.
std::vector<std::int64_t> prime_factors(std::int64_t n);

} // namespace ffk
