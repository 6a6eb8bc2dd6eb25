#pragma once

/*
 * Text grammars and canonical printers for the serialized value kinds:
 * field specs, polynomials in t, rational functions, places, Laurent
 * series at infinity, tower elements, and symbol algebras. Parsers are
 * whitespace-insensitive recursive descent and throw parse_error on
 * malformed input; each printer emits the canonical spelling, which
 * reparses to an equal value.
 */

#include <string>

#include "ffk/csa.hpp"
#include "ffk/ffield.hpp"
#include "ffk/laurent.hpp"
#include "ffk/places.hpp"
#include "ffk/polyring.hpp"
#include "ffk/tower.hpp"

namespace ffk {

// `p=5` or `p=3,e=2,mod=s^2+1`; s is reserved for the defining modulus.
FieldSpecPtr parse_field_spec(const std::string& text);
std::string print_field_spec(const FieldSpecPtr& spec);

// Bare integer (reduced mod p) or, for extension fields, a sum of
// uint * s^k terms such as `1+2*s`.
FieldElement parse_field_element(const FieldSpecPtr& spec, const std::string& text);
std::string print_field_element(const FieldElement& x);

// Sums of terms `coeff`, `coeff*t^k`, `t^k`; extension-field coefficients
// are parenthesized: `(1+2*s)*t^3`.
Polynomial parse_polynomial(const FieldSpecPtr& spec, const std::string& text);
std::string print_polynomial(const Polynomial& f);

// `poly` or `poly/poly`; everything after the slash is the denominator.
RationalFunction parse_rational(const FieldSpecPtr& spec, const std::string& text);
std::string print_rational(const RationalFunction& r);

// `inf` or a monic irreducible polynomial.
Place parse_place(const FieldSpecPtr& spec, const std::string& text);
std::string print_place(const Place& v);

// `t + t^-1 + 2*t^-3 + O(t^-5)`; the O term carries the window end and is
// absent for exact series.
LaurentSeries parse_series(const FieldSpecPtr& spec, const std::string& text);
std::string print_series(const LaurentSeries& s);

// Sums of `value`, `value*mono`, `mono` with mono a product of u<k> powers
// and value a constant or a parenthesized rational: `(t+1) + 2*u1 + (t)*u1*u2`.
TowerElement parse_tower_element(const TowerSpecPtr& ts, const std::string& text);
std::string print_tower_element(const TowerElement& x);

// `(a | b; l=2)` with both slots in the rational grammar.
SymbolAlgebraPtr parse_algebra(const FieldSpecPtr& spec, const std::string& text);
std::string print_algebra(const SymbolAlgebraPtr& A);

} // namespace ffk
