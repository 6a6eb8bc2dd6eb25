#pragma once

/*
 * The operator beta(x) = (x^Q - x)/((x^Q - x)^2 - 1) attached to a base place
 * with residue size Q, its scaled form gamma = beta / t_p, the valuation
 * calculus of both over a base field or a single radical step, membership in
 * the ring of functions integral at every (1,1)-place, and the constructive
 * representation r = x / (1 + t_p gamma(z) y).
 *
 * The base field K itself is modeled as a depth-zero tower (rank 1). Poles of
 * gamma are a value, not an error: operators return nullopt when
 * (x^Q - x)^2 = 1.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "ffk/places.hpp"
#include "ffk/polyring.hpp"
#include "ffk/tower.hpp"

namespace ffk {

struct KochenContext {
    Place base;
    RationalFunction uniformizer; // valuation 1 at base
    std::int64_t residue_size;    // Q = q^deg(base)

    static KochenContext make(const Place& p);
};

// A place of the step field above the context's base place, identified by
// (e, f) and a deterministic index. For an unramified base that splits
// completely the index enumerates residue roots in ascending canonical
// order; at infinity it is the embedding index.
struct PlaceAbove {
    TowerSpecPtr field;
    Place base;
    std::int64_t ram = 1;     // e
    std::int64_t res_deg = 1; // f
    std::int64_t index = 0;
    std::int64_t count = 1;
};

// All places of the step field above p, deterministic order. The step field
// must have depth <= 1.
std::vector<PlaceAbove> places_above(const TowerSpecPtr& L, const Place& p);

// Valuation of x at the given place; nullopt for x = 0. Exact: ramified and
// totally inert places use closed minimum formulas, a completely split base
// lifts the residue root to increasing precision until the answer is certain,
// and infinity reads the order of the matching embedding series.
// Intermediate residue degrees (1 < f < n) are not supported.
std::optional<std::int64_t> valuation_above(const TowerElement& x, const PlaceAbove& P);

// nullopt marks a pole: (a^Q - a)^2 = 1.
std::optional<TowerElement> beta(const TowerElement& a, const KochenContext& ctx);
std::optional<TowerElement> gamma(const TowerElement& a, const KochenContext& ctx);
std::optional<RationalFunction> beta(const RationalFunction& a, const KochenContext& ctx);
std::optional<RationalFunction> gamma(const RationalFunction& a, const KochenContext& ctx);

enum class ValuationTag { Pos, Neg, ZeroHigher, ZeroUnit };

struct ValuationCase {
    ValuationTag tag;
    // Exact valuation of beta(a) at the place for Pos / Neg / ZeroHigher
    // (nullopt there means beta(a) = 0); for ZeroUnit the valuation is only
    // bounded above by 0 and predicted stays nullopt.
    std::optional<std::int64_t> predicted;
};

// Which clause of the valuation lemma applies to a at P, with the predicted
// valuation of beta(a). a must not be a pole of gamma.
ValuationCase classify_beta(const TowerElement& a, const PlaceAbove& P,
                            const KochenContext& ctx);

bool is_one_one_place(const PlaceAbove& P);

// An element a, not a pole of gamma, with v_P(gamma(a)) < 0: a uniformizer
// when P is ramified, otherwise the step generator, whose residue generates
// the extended residue field. P must not be a (1,1)-place.
TowerElement witness_non_11(const PlaceAbove& P, const KochenContext& ctx);

// True iff v_P(x) >= 0 at every (1,1)-place P of x's field above p
// (vacuously true when there are none).
bool holomorphy_membership(const TowerElement& x, const Place& p);

struct GammaViolation {
    TowerElement input;
    std::int64_t place_index;
    std::int64_t valuation;
};

struct GammaSampleReport {
    std::int64_t samples = 0;
    std::vector<GammaViolation> violations;
};

// Draws count pseudorandom bounded-height elements, skips poles, and checks
// v_P(gamma(a)) >= 0 at every (1,1)-place above p. Deterministic in seed.
GammaSampleReport gamma_integrality_sample(const TowerSpecPtr& L, const Place& p,
                                           std::int64_t count, std::uint64_t seed);

struct KochenTriple {
    TowerElement x, y, z;
};

// Representation r = x / (1 + t_p gamma(z) y) with x, y integral at every
// place above the base and z not a pole. Requires r integral at every
// (1,1)-place above the base and depth <= 1. A ramified base place with
// negative input valuation admits no such triple under this calculus
// (beta values are always positive there) and reports unsupported.
KochenTriple kochen_representation(const TowerElement& r, const KochenContext& ctx);

} // namespace ffk
