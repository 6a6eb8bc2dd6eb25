#include "ffk/parse.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "ffk/errors.hpp"

namespace ffk {

namespace {

constexpr std::int64_t kMaxExponent = 1 << 20;

struct Cursor {
    const std::string& s;
    std::size_t i = 0;

    explicit Cursor(const std::string& text) : s(text) {}

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!consume(c))
            throw parse_error(std::string("expected '") + c + "' at offset " +
                              std::to_string(i) + " in \"" + s + "\"");
    }
    bool at_digit() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }
    std::int64_t uint() {
        if (!at_digit())
            throw parse_error("expected a number at offset " + std::to_string(i) +
                              " in \"" + s + "\"");
        std::int64_t v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            v = v * 10 + (s[i] - '0');
            if (v > (std::int64_t(1) << 60))
                throw parse_error("number too large in \"" + s + "\"");
            ++i;
        }
        return v;
    }
    void expect_end() {
        if (!eof())
            throw parse_error("trailing input at offset " + std::to_string(i) +
                              " in \"" + s + "\"");
    }
};

std::int64_t exponent_of(Cursor& cur, bool allow_negative) {
    if (!cur.consume('^'))
        return 1;
    bool neg = false;
    if (allow_negative && cur.consume('-'))
        neg = true;
    std::int64_t e = cur.uint();
    if (e > kMaxExponent)
        throw parse_error("exponent too large");
    return neg ? -e : e;
}

// uint [* s^k] | s^k sums; the extension generator is spelled s.
FieldElement element_impl(Cursor& cur, const FieldSpecPtr& spec) {
    FieldElement acc = FieldElement::zero(spec);
    FieldElement s_gen = FieldElement::from_index(spec, spec->e() > 1 ? spec->p() : 0);
    bool first = true;
    while (true) {
        bool neg = false;
        if (first) {
            if (cur.consume('-'))
                neg = true;
        } else {
            if (cur.consume('+')) {
            } else if (cur.consume('-')) {
                neg = true;
            } else {
                break;
            }
        }
        first = false;
        FieldElement c = FieldElement::one(spec);
        bool have_num = false;
        if (cur.at_digit()) {
            c = FieldElement::from_int(spec, cur.uint());
            have_num = true;
        }
        std::int64_t k = 0;
        if (cur.peek() == '*' || cur.peek() == 's') {
            if (have_num)
                cur.consume('*');
            if (cur.peek() != 's') {
                if (!have_num)
                    throw parse_error("expected a coefficient term");
                throw parse_error("expected s after '*'");
            }
            cur.expect('s');
            if (spec->e() == 1)
                throw parse_error("s is reserved for extension fields");
            k = exponent_of(cur, false);
        } else if (!have_num) {
            throw parse_error("expected a coefficient term");
        }
        FieldElement term = c * s_gen.pow(k);
        acc = neg ? acc - term : acc + term;
    }
    return acc;
}

// coeff := uint | ( element )
FieldElement coeff_impl(Cursor& cur, const FieldSpecPtr& spec) {
    if (cur.consume('(')) {
        FieldElement x = element_impl(cur, spec);
        cur.expect(')');
        return x;
    }
    return FieldElement::from_int(spec, cur.uint());
}

Polynomial poly_impl(Cursor& cur, const FieldSpecPtr& spec) {
    std::map<std::int64_t, FieldElement> terms;
    bool first = true;
    while (true) {
        bool neg = false;
        if (first) {
            if (cur.consume('-'))
                neg = true;
        } else {
            if (cur.consume('+')) {
            } else if (cur.consume('-')) {
                neg = true;
            } else {
                break;
            }
        }
        first = false;
        FieldElement c = FieldElement::one(spec);
        bool have_coeff = false;
        if (cur.at_digit() || cur.peek() == '(') {
            c = coeff_impl(cur, spec);
            have_coeff = true;
        }
        std::int64_t k = 0;
        if (cur.peek() == '*' || cur.peek() == 't') {
            if (have_coeff)
                cur.consume('*');
            if (cur.peek() != 't')
                throw parse_error("expected t after '*'");
            cur.expect('t');
            k = exponent_of(cur, false);
        } else if (!have_coeff) {
            throw parse_error("expected a polynomial term at offset " +
                              std::to_string(cur.i));
        }
        if (neg)
            c = -c;
        auto it = terms.find(k);
        if (it == terms.end())
            terms.emplace(k, c);
        else
            it->second = it->second + c;
    }
    std::int64_t deg = -1;
    for (const auto& [k, c] : terms)
        if (!c.is_zero() && k > deg)
            deg = k;
    std::vector<std::int32_t> idx(static_cast<std::size_t>(deg + 1), 0);
    for (const auto& [k, c] : terms)
        if (k <= deg)
            idx[static_cast<std::size_t>(k)] = c.index();
    return Polynomial::from_coeffs(spec, std::move(idx));
}

RationalFunction rational_impl(Cursor& cur, const FieldSpecPtr& spec) {
    Polynomial num = poly_impl(cur, spec);
    if (cur.consume('/')) {
        Polynomial den = poly_impl(cur, spec);
        return {num, den};
    }
    return RationalFunction(num);
}

std::string element_str(const FieldElement& x) {
    const auto& spec = x.spec();
    if (spec->e() == 1)
        return std::to_string(x.index());
    auto d = x.digits();
    bool tail = false;
    for (std::size_t k = 1; k < d.size(); ++k)
        if (d[k] != 0)
            tail = true;
    if (!tail)
        return std::to_string(d.empty() ? 0 : d[0]);
    std::string out = "(";
    bool first = true;
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (d[k] == 0)
            continue;
        if (!first)
            out += "+";
        first = false;
        if (k == 0) {
            out += std::to_string(d[k]);
        } else {
            if (d[k] != 1)
                out += std::to_string(d[k]) + "*";
            out += "s";
            if (k > 1)
                out += "^" + std::to_string(k);
        }
    }
    out += ")";
    return out;
}

std::string poly_str(const Polynomial& f) {
    if (f.is_zero())
        return "0";
    std::string out;
    for (std::int64_t k = f.degree(); k >= 0; --k) {
        FieldElement c = f.coeff(k);
        if (c.is_zero())
            continue;
        if (!out.empty())
            out += "+";
        if (k == 0) {
            out += element_str(c);
            continue;
        }
        if (!c.is_one())
            out += element_str(c) + "*";
        out += "t";
        if (k > 1)
            out += "^" + std::to_string(k);
    }
    return out;
}

} // namespace

FieldSpecPtr parse_field_spec(const std::string& text) {
    Cursor cur(text);
    std::int64_t p = -1, e = 1;
    std::vector<std::int64_t> mod;
    bool have_mod = false;
    bool first = true;
    while (!cur.eof()) {
        if (!first)
            cur.expect(',');
        first = false;
        char key = cur.peek();
        if (key == 'p') {
            cur.expect('p');
            cur.expect('=');
            p = cur.uint();
        } else if (key == 'e') {
            cur.expect('e');
            cur.expect('=');
            e = cur.uint();
        } else if (key == 'm') {
            cur.expect('m');
            cur.expect('o');
            cur.expect('d');
            cur.expect('=');
            // modulus in s with prime-field coefficients, e.g. s^2+1
            std::map<std::int64_t, std::int64_t> terms;
            bool tfirst = true;
            while (true) {
                bool neg = false;
                if (!tfirst) {
                    if (cur.consume('+')) {
                    } else if (cur.consume('-')) {
                        neg = true;
                    } else {
                        break;
                    }
                }
                tfirst = false;
                std::int64_t c = 1;
                bool have = false;
                if (cur.at_digit()) {
                    c = cur.uint();
                    have = true;
                }
                std::int64_t k = 0;
                if (cur.peek() == '*' || cur.peek() == 's') {
                    if (have)
                        cur.consume('*');
                    cur.expect('s');
                    k = exponent_of(cur, false);
                } else if (!have) {
                    throw parse_error("expected a modulus term");
                }
                terms[k] += neg ? -c : c;
            }
            std::int64_t deg = 0;
            for (const auto& [k, c] : terms)
                if (k > deg)
                    deg = k;
            mod.assign(static_cast<std::size_t>(deg + 1), 0);
            for (const auto& [k, c] : terms)
                mod[static_cast<std::size_t>(k)] = c;
            have_mod = true;
        } else {
            throw parse_error("unknown field spec key in \"" + text + "\"");
        }
    }
    if (p < 0)
        throw parse_error("field spec must set p");
    if (e == 1) {
        if (have_mod)
            throw parse_error("mod requires e > 1");
        return FieldSpec::make(p);
    }
    if (!have_mod)
        throw parse_error("extension field spec must set mod");
    for (auto& c : mod)
        c = ((c % p) + p) % p;
    return FieldSpec::make(p, e, mod);
}

std::string print_field_spec(const FieldSpecPtr& spec) {
    std::string out = "p=" + std::to_string(spec->p());
    if (spec->e() == 1)
        return out;
    out += ",e=" + std::to_string(spec->e()) + ",mod=";
    const auto& m = spec->modulus();
    bool first = true;
    for (std::int64_t k = static_cast<std::int64_t>(m.size()) - 1; k >= 0; --k) {
        std::int64_t c = m[static_cast<std::size_t>(k)];
        if (c == 0)
            continue;
        if (!first)
            out += "+";
        first = false;
        if (k == 0) {
            out += std::to_string(c);
            continue;
        }
        if (c != 1)
            out += std::to_string(c) + "*";
        out += "s";
        if (k > 1)
            out += "^" + std::to_string(k);
    }
    return out;
}

FieldElement parse_field_element(const FieldSpecPtr& spec, const std::string& text) {
    Cursor cur(text);
    FieldElement x = cur.consume('(') ? [&] {
        FieldElement inner = element_impl(cur, spec);
        cur.expect(')');
        return inner;
    }()
                                      : element_impl(cur, spec);
    cur.expect_end();
    return x;
}

std::string print_field_element(const FieldElement& x) { return element_str(x); }

Polynomial parse_polynomial(const FieldSpecPtr& spec, const std::string& text) {
    Cursor cur(text);
    Polynomial f = poly_impl(cur, spec);
    cur.expect_end();
    return f;
}

std::string print_polynomial(const Polynomial& f) { return poly_str(f); }

RationalFunction parse_rational(const FieldSpecPtr& spec, const std::string& text) {
    Cursor cur(text);
    RationalFunction r = rational_impl(cur, spec);
    cur.expect_end();
    return r;
}

std::string print_rational(const RationalFunction& r) {
    if (r.den().is_one())
        return poly_str(r.num());
    return poly_str(r.num()) + "/" + poly_str(r.den());
}

Place parse_place(const FieldSpecPtr& spec, const std::string& text) {
    Cursor cur(text);
    if (cur.peek() == 'i') {
        cur.expect('i');
        cur.expect('n');
        cur.expect('f');
        cur.expect_end();
        return Place::infinity(spec);
    }
    Polynomial pi = poly_impl(cur, spec);
    cur.expect_end();
    return Place::finite(pi);
}

std::string print_place(const Place& v) {
    return v.is_infinity() ? "inf" : poly_str(v.pi());
}

LaurentSeries parse_series(const FieldSpecPtr& spec, const std::string& text) {
    Cursor cur(text);
    std::map<std::int64_t, FieldElement> terms; // key: exponent of 1/t
    bool truncated = false;
    std::int64_t window = 0;
    bool first = true;
    while (true) {
        bool neg = false;
        if (first) {
            if (cur.consume('-'))
                neg = true;
        } else {
            if (cur.consume('+')) {
            } else if (cur.consume('-')) {
                neg = true;
            } else {
                break;
            }
        }
        first = false;
        if (cur.peek() == 'O') {
            cur.expect('O');
            cur.expect('(');
            cur.expect('t');
            std::int64_t k = exponent_of(cur, true);
            cur.expect(')');
            truncated = true;
            window = -k;
            break;
        }
        FieldElement c = FieldElement::one(spec);
        bool have = false;
        if (cur.at_digit() || cur.peek() == '(') {
            c = coeff_impl(cur, spec);
            have = true;
        }
        std::int64_t k = 0;
        if (cur.peek() == '*' || cur.peek() == 't') {
            if (have)
                cur.consume('*');
            if (cur.peek() != 't')
                throw parse_error("expected t after '*'");
            cur.expect('t');
            k = exponent_of(cur, true);
        } else if (!have) {
            throw parse_error("expected a series term");
        }
        if (neg)
            c = -c;
        std::int64_t e = -k;
        auto it = terms.find(e);
        if (it == terms.end())
            terms.emplace(e, c);
        else
            it->second = it->second + c;
    }
    cur.expect_end();
    std::int64_t order = 0;
    bool any = false;
    for (const auto& [e, c] : terms)
        if (!c.is_zero()) {
            if (!any || e < order)
                order = e;
            any = true;
        }
    if (!any)
        return truncated ? LaurentSeries::from_terms(spec, window, {}, window)
                         : LaurentSeries::zero(spec);
    std::int64_t end = truncated ? window : 0;
    std::int64_t top = order;
    for (const auto& [e, c] : terms)
        if (!c.is_zero() && e >= top)
            top = e;
    if (!truncated)
        end = top + 1;
    if (order >= end)
        throw parse_error("series term outside the O window");
    std::vector<std::int32_t> idx(static_cast<std::size_t>(end - order), 0);
    for (const auto& [e, c] : terms) {
        if (c.is_zero())
            continue;
        if (e >= end)
            throw parse_error("series term outside the O window");
        idx[static_cast<std::size_t>(e - order)] = c.index();
    }
    return LaurentSeries::from_terms(spec, order, std::move(idx),
                                     truncated ? window : LaurentSeries::kExactEnd);
}

std::string print_series(const LaurentSeries& s) {
    std::string out;
    if (s.is_zero()) {
        if (s.is_exact())
            return "0";
        return "O(t^" + std::to_string(-s.window_end()) + ")";
    }
    std::int64_t stop = s.coeff_end();
    for (std::int64_t e = s.order(); e < stop; ++e) {
        FieldElement c = s.coeff_at(e);
        if (c.is_zero())
            continue;
        if (!out.empty())
            out += " + ";
        std::int64_t k = -e;
        if (k == 0) {
            out += element_str(c);
            continue;
        }
        if (!c.is_one())
            out += element_str(c) + "*";
        out += "t";
        if (k != 1)
            out += "^" + std::to_string(k);
    }
    if (out.empty())
        out = "0";
    if (!s.is_exact())
        out += " + O(t^" + std::to_string(-s.window_end()) + ")";
    return out;
}

TowerElement parse_tower_element(const TowerSpecPtr& ts, const std::string& text) {
    Cursor cur(text);
    const FieldSpecPtr& spec = ts->field;
    TowerElement acc = TowerElement::zero(ts);
    bool first = true;
    while (true) {
        bool neg = false;
        if (first) {
            if (cur.consume('-'))
                neg = true;
        } else {
            if (cur.consume('+')) {
            } else if (cur.consume('-')) {
                neg = true;
            } else {
                break;
            }
        }
        first = false;
        RationalFunction value = RationalFunction::one(spec);
        bool have_value = false;
        if (cur.consume('(')) {
            value = rational_impl(cur, spec);
            cur.expect(')');
            have_value = true;
        } else if (cur.at_digit()) {
            value = RationalFunction(Polynomial::from_coeffs(
                spec, {FieldElement::from_int(spec, cur.uint()).index()}));
            have_value = true;
        }
        TowerElement term = TowerElement::constant(ts, value);
        bool have_mono = false;
        while (true) {
            if (cur.peek() == '*') {
                std::size_t save = cur.i;
                cur.consume('*');
                if (cur.peek() != 'u') {
                    cur.i = save;
                    break;
                }
            } else if (cur.peek() != 'u') {
                break;
            }
            cur.expect('u');
            std::int64_t level = cur.uint();
            if (level < 1 || level > ts->depth())
                throw parse_error("tower level out of range");
            std::int64_t k = exponent_of(cur, false);
            if (k > 64)
                throw parse_error("tower generator exponent too large");
            TowerElement gen = TowerElement::u(ts, level);
            for (std::int64_t j = 0; j < k; ++j)
                term = term * gen;
            have_mono = true;
        }
        if (!have_value && !have_mono)
            throw parse_error("expected a tower term at offset " + std::to_string(cur.i));
        acc = neg ? acc - term : acc + term;
    }
    cur.expect_end();
    return acc;
}

std::string print_tower_element(const TowerElement& x) {
    const TowerSpecPtr& ts = x.tower();
    if (x.is_zero())
        return "0";
    std::int64_t depth = ts->depth();
    std::string out;
    for (std::int64_t flat = 0; flat < ts->rank(); ++flat) {
        const RationalFunction& c = x.coeff(flat);
        if (c.is_zero())
            continue;
        std::vector<std::int64_t> exps(static_cast<std::size_t>(depth), 0);
        std::int64_t rest = flat;
        for (std::int64_t lev = depth - 1; lev >= 0; --lev) {
            exps[static_cast<std::size_t>(lev)] = rest % ts->n;
            rest /= ts->n;
        }
        std::string mono;
        for (std::int64_t lev = 0; lev < depth; ++lev) {
            std::int64_t e = exps[static_cast<std::size_t>(lev)];
            if (e == 0)
                continue;
            if (!mono.empty())
                mono += "*";
            mono += "u" + std::to_string(lev + 1);
            if (e > 1)
                mono += "^" + std::to_string(e);
        }
        std::string value;
        bool is_const = c.den().is_one() && c.num().is_constant();
        if (is_const)
            value = element_str(c.num().is_zero() ? FieldElement::zero(ts->field)
                                                  : c.num().coeff(0));
        else
            value = "(" + print_rational(c) + ")";
        std::string term;
        if (mono.empty())
            term = value;
        else if (is_const && c.num().is_one())
            term = mono;
        else
            term = value + "*" + mono;
        if (!out.empty())
            out += " + ";
        out += term;
    }
    return out;
}

SymbolAlgebraPtr parse_algebra(const FieldSpecPtr& spec, const std::string& text) {
    Cursor cur(text);
    cur.expect('(');
    RationalFunction a = rational_impl(cur, spec);
    cur.expect('|');
    RationalFunction b = rational_impl(cur, spec);
    cur.expect(';');
    cur.expect('l');
    cur.expect('=');
    std::int64_t ell = cur.uint();
    cur.expect(')');
    cur.expect_end();
    return make_symbol_algebra(ell, a, b);
}

std::string print_algebra(const SymbolAlgebraPtr& A) {
    return "(" + print_rational(A->a) + " | " + print_rational(A->b) +
           "; l=" + std::to_string(A->ell) + ")";
}

} // namespace ffk
