// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ffk/csa.hpp"
#include "ffk/errors.hpp"
#include "ffk/ffield.hpp"
#include "ffk/kochen.hpp"
#include "ffk/laurent.hpp"
#include "ffk/parse.hpp"
#include "ffk/places.hpp"
#include "ffk/polyring.hpp"
#include "ffk/tower.hpp"

using namespace ffk;

namespace {

struct Config {
    FieldSpecPtr spec;
    std::int64_t n;
};

std::vector<Config> root_configs() {
    return {{FieldSpec::make(5), 2},
            {FieldSpec::make(7), 2},
            {FieldSpec::make(7), 3},
            {FieldSpec::make(3, 2, {1, 0, 1}), 2}};
}

Polynomial rand_poly(std::mt19937_64& rng, const FieldSpecPtr& spec, std::int64_t deg) {
    std::vector<std::int32_t> idx(static_cast<std::size_t>(deg + 1));
    for (auto& c : idx) c = static_cast<std::int32_t>(rng() % spec->q());
    return Polynomial::from_coeffs(spec, std::move(idx));
}

RationalFunction rand_rat(std::mt19937_64& rng, const FieldSpecPtr& spec, std::int64_t deg) {
    Polynomial num = rand_poly(rng, spec, static_cast<std::int64_t>(rng() % (deg + 1)));
    Polynomial den = Polynomial::zero(spec);
    while (den.is_zero()) den = rand_poly(rng, spec, static_cast<std::int64_t>(rng() % (deg + 1)));
    return {num, den};
}

// ---- criterion 1: residual of the lifted root vanishes on the whole window

bool crit_hensel(std::string& detail) {
    std::int64_t roots = 0;
    for (const Config& cfg : root_configs()) {
        for (const Polynomial& p : enumerate_Pn_plus(cfg.spec, cfg.n, 6)) {
            LaurentSeries root = hensel_nth_root(p, cfg.n, 32);
            if (!root.pow(cfg.n).agrees_with(LaurentSeries::from_polynomial(p))) {
                detail = "residual nonzero for " + print_polynomial(p);
                return false;
            }
            ++roots;
        }
    }
    detail = "residual zero for all " + std::to_string(roots) + " roots at prec 32";
    return true;
}

// ---- criterion 2: the valuation lemma's predicted v(beta) matches direct computation

bool crit_valuation(std::string& detail) {
    const std::int64_t kSamples = 10000;
    std::int64_t checked = 0;
    for (const Config& cfg : root_configs()) {
        std::mt19937_64 rng(0xC2 + cfg.spec->q() * 31 + cfg.n);
        Place base = Place::finite(Polynomial::t(cfg.spec));
        Polynomial level = enumerate_Pn_plus(cfg.spec, cfg.n, cfg.n)[0];
        TowerSpecPtr step = make_kummer_step(cfg.spec, cfg.n, level);
        TowerSpecPtr flat = make_tower_spec(cfg.spec, cfg.n, {});
        KochenContext ctx = KochenContext::make(base);
        std::vector<PlaceAbove> step_places = places_above(step, base);
        std::vector<PlaceAbove> flat_places = places_above(flat, base);
        for (std::int64_t i = 0; i < kSamples; ++i) {
            bool in_step = i % 2 == 0;
            const TowerSpecPtr& ts = in_step ? step : flat;
            const auto& places = in_step ? step_places : flat_places;
            std::vector<RationalFunction> coords;
            for (std::int64_t j = 0; j < ts->rank(); ++j)
                coords.push_back(rng() % 3 == 0 ? RationalFunction::zero(cfg.spec)
                                                : rand_rat(rng, cfg.spec, 2));
            TowerElement a = TowerElement::from_coeffs(ts, std::move(coords));
            if (a.is_zero())
                continue;
            const PlaceAbove& P = places[i % places.size()];
            ValuationCase vc = classify_beta(a, P, ctx);
            std::optional<TowerElement> b = beta(a, ctx);
            if (!b) {
                detail = "unexpected operator pole";
                return false;
            }
            std::optional<std::int64_t> direct = valuation_above(*b, P);
            bool ok;
            if (vc.tag == ValuationTag::ZeroUnit)
                ok = direct.has_value() && *direct <= 0;
            else
                ok = direct == vc.predicted;
            if (!ok) {
                std::ostringstream os;
                os << "mismatch at q=" << cfg.spec->q() << " n=" << cfg.n << " sample " << i;
                detail = os.str();
                return false;
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " classifications match direct valuations";
    return true;
}

// ---- criteria 3 and 4: sampled levels p, discriminant exponent and splitting

std::vector<std::pair<Config, Polynomial>> sampled_levels() {
    std::vector<std::pair<Config, Polynomial>> out;
    for (const Config& cfg : root_configs()) {
        std::vector<Polynomial> pool = enumerate_Pn_plus(cfg.spec, cfg.n, 6);
        std::mt19937_64 rng(0x5A + cfg.spec->q() * 7 + cfg.n);
        for (int k = 0; k < 5; ++k)
            out.emplace_back(cfg, pool[rng() % pool.size()]);
    }
    return out;
}

bool crit_disc(std::string& detail) {
    auto samples = sampled_levels();
    for (const auto& [cfg, p] : samples) {
        IntegralBasisReport rep;
        try {
            rep = verify_integral_basis(p, cfg.n);
        } catch (const std::exception& e) {
            detail = "certification failed for " + print_polynomial(p) + ": " + e.what();
            return false;
        }
        if (rep.valuations.size() != 1 || rep.valuations[0].second != cfg.n - 1 ||
            rep.valuations[0].first != Place::finite(p)) {
            detail = "unexpected valuation record for " + print_polynomial(p);
            return false;
        }
        // independent read: the finite support of disc is exactly (p)
        auto supp = support(RationalFunction(rep.disc));
        for (const auto& [pl, v] : supp) {
            if (pl.is_infinity())
                continue;
            if (pl != Place::finite(p) || v != cfg.n - 1) {
                detail = "stray finite place in disc of " + print_polynomial(p);
                return false;
            }
        }
    }
    detail = "disc = unit * p^(n-1) for all " + std::to_string(samples.size()) + " samples";
    return true;
}

bool crit_split(std::string& detail) {
    auto samples = sampled_levels();
    for (const auto& [cfg, p] : samples) {
        SplitData at_inf = split_type(Place::infinity(cfg.spec), cfg.n, p);
        if (at_inf.ef.size() != static_cast<std::size_t>(cfg.n)) {
            detail = "infinity does not split completely over " + print_polynomial(p);
            return false;
        }
        for (const auto& [e, f] : at_inf.ef)
            if (e != 1 || f != 1) {
                detail = "nontrivial place above infinity for " + print_polynomial(p);
                return false;
            }
        SplitData at_p = split_type(Place::finite(p), cfg.n, p);
        if (at_p.ef.size() != 1 || at_p.ef[0].first != cfg.n || at_p.ef[0].second != 1) {
            detail = "(p) is not totally ramified for " + print_polynomial(p);
            return false;
        }
    }
    detail = "splitting as expected for all " + std::to_string(samples.size()) + " samples";
    return true;
}

// ---- criterion 5: recursive enumeration equals the coefficient-box brute force

void all_polys_upto(const FieldSpecPtr& spec, std::int64_t deg, std::vector<Polynomial>& out) {
    out.clear();
    if (deg < 0) {
        out.push_back(Polynomial::zero(spec));
        return;
    }
    std::int64_t q = spec->q();
    std::int64_t total = 1;
    for (std::int64_t i = 0; i <= deg; ++i) total *= q;
    for (std::int64_t code = 0; code < total; ++code) {
        std::vector<std::int32_t> idx(static_cast<std::size_t>(deg + 1));
        std::int64_t rest = code;
        for (auto& c : idx) {
            c = static_cast<std::int32_t>(rest % q);
            rest /= q;
        }
        out.push_back(Polynomial::from_coeffs(spec, std::move(idx)));
    }
}

bool box_matches(const TowerSpecPtr& ts, std::int64_t N, std::string& detail) {
    std::set<std::string> fast;
    for (const TowerElement& x : enumerate_bounded(ts, N))
        fast.insert(print_tower_element(x));

    std::int64_t k = 0;
    while ((std::int64_t)std::llround(std::pow((double)ts->field->q(), (double)k)) < N)
        ++k;
    std::int64_t depth = ts->depth();
    std::vector<std::int64_t> caps(static_cast<std::size_t>(ts->rank()), 0);
    for (std::int64_t flat = 0; flat < ts->rank(); ++flat) {
        std::int64_t rest = flat, weight = 0;
        for (std::int64_t lev = depth - 1; lev >= 0; --lev) {
            std::int64_t e = rest % ts->n;
            rest /= ts->n;
            weight += e * ts->levels[static_cast<std::size_t>(lev)].degree();
        }
        caps[static_cast<std::size_t>(flat)] = k - weight / ts->n - (weight % ts->n ? 1 : 0);
    }
    std::vector<std::vector<Polynomial>> choices(caps.size());
    for (std::size_t i = 0; i < caps.size(); ++i)
        all_polys_upto(ts->field, caps[i], choices[i]);

    std::set<std::string> brute;
    std::vector<std::size_t> pick(caps.size(), 0);
    while (true) {
        std::vector<RationalFunction> coords;
        for (std::size_t i = 0; i < pick.size(); ++i)
            coords.emplace_back(choices[i][pick[i]]);
        TowerElement x = TowerElement::from_coeffs(ts, std::move(coords));
        if (x.is_zero()) {
            brute.insert(print_tower_element(x));
        } else {
            AbsInfinity a = norm_max(x);
            if (a.exponent <= k)
                brute.insert(print_tower_element(x));
        }
        std::size_t lev = 0;
        while (lev < pick.size() && ++pick[lev] == choices[lev].size()) {
            pick[lev] = 0;
            ++lev;
        }
        if (lev == pick.size())
            break;
    }
    if (fast != brute) {
        std::ostringstream os;
        os << "set mismatch at N=" << N << ": recursive " << fast.size() << ", box "
           << brute.size();
        detail = os.str();
        return false;
    }
    detail += " N=" + std::to_string(N) + ":" + std::to_string(fast.size());
    return true;
}

bool crit_enumerate(std::string& detail) {
    auto f5 = FieldSpec::make(5);
    Polynomial l1 = parse_polynomial(f5, "t^2+2");
    Polynomial l2 = parse_polynomial(f5, "t^2+3");
    TowerSpecPtr one = make_tower_spec(f5, 2, {l1});
    TowerSpecPtr two = make_tower_spec(f5, 2, {l1, l2});
    std::string sizes = "cardinalities";
    for (std::int64_t N : {1, 5})
        if (!box_matches(one, N, sizes) || !box_matches(two, N, sizes)) {
            detail = sizes;
            return false;
        }
    if (!box_matches(one, 25, sizes)) {
        detail = sizes;
        return false;
    }
    if (enumerate_bounded(one, 5).size() != 125) {
        detail = "cardinality at N=5 is not 125";
        return false;
    }
    detail = sizes;
    return true;
}

// ---- criterion 6: the local invariants of random symbol algebras sum to zero

bool crit_reciprocity(std::string& detail) {
    struct Cfg { FieldSpecPtr spec; std::int64_t ell; };
    std::vector<Cfg> cfgs = {{FieldSpec::make(5), 2},
                             {FieldSpec::make(7), 2},
                             {FieldSpec::make(7), 3},
                             {FieldSpec::make(3, 2, {1, 0, 1}), 2}};
    std::int64_t checked = 0;
    for (const auto& cfg : cfgs) {
        std::mt19937_64 rng(0x6EC + cfg.spec->q() * 13 + cfg.ell);
        for (int i = 0; i < 1000; ++i) {
            RationalFunction a = rand_rat(rng, cfg.spec, 2);
            RationalFunction b = rand_rat(rng, cfg.spec, 2);
            if (a.is_zero() || b.is_zero())
                continue;
            SymbolAlgebraPtr A = make_symbol_algebra(cfg.ell, a, b);
            if (!reciprocity_check(A)) {
                detail = "invariants of (" + print_rational(a) + " | " + print_rational(b) +
                         "; l=" + std::to_string(cfg.ell) + ") do not sum to zero";
                return false;
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " random algebras sum to zero";
    return true;
}

// ---- criteria 7 and 8: sibling pairs and integral traces of norm-one elements

struct Sibling {
    SymbolAlgebraPtr A;
    std::vector<Place> delta;
};

bool build_siblings(std::vector<Sibling>& out, std::string& detail) {
    struct Triple { FieldSpecPtr spec; std::string p, q1, q2; };
    auto f5 = FieldSpec::make(5);
    auto f7 = FieldSpec::make(7);
    std::vector<Triple> triples = {
        {f5, "t", "inf", "t+1"},  {f5, "t", "t+1", "t+2"},  {f5, "t+1", "t+2", "t+3"},
        {f5, "t", "t+4", "inf"},  {f5, "t+2", "t", "t+3"},  {f7, "t", "inf", "t+1"},
        {f7, "t", "t+1", "t+2"},  {f7, "t+3", "t+5", "t+6"}, {f7, "t+1", "inf", "t+4"},
        {f7, "t+2", "t+6", "t"},
    };
    for (const auto& tr : triples) {
        Place p = parse_place(tr.spec, tr.p);
        Place q1 = parse_place(tr.spec, tr.q1);
        Place q2 = parse_place(tr.spec, tr.q2);
        auto [A, B] = construct_sibling_pair(p, q1, q2, 2);
        auto check = [&](const SymbolAlgebraPtr& alg, const Place& other) {
            std::vector<Place> got = ramified_places(alg);
            std::set<std::string> names;
            for (const auto& pl : got)
                names.insert(print_place(pl));
            std::set<std::string> want = {print_place(p), print_place(other)};
            return names == want;
        };
        if (!check(A, q1) || !check(B, q2)) {
            detail = "wrong ramification locus for triple (" + tr.p + ", " + tr.q1 + ", " +
                     tr.q2 + ")";
            return false;
        }
        out.push_back({A, ramified_places(A)});
        out.push_back({B, ramified_places(B)});
    }
    detail = std::to_string(triples.size()) + " triples produce correctly ramified pairs";
    return true;
}

bool crit_traces(const std::vector<Sibling>& siblings, std::string& detail) {
    std::int64_t checked = 0;
    for (std::size_t i = 0; i < siblings.size(); ++i) {
        std::vector<RationalFunction> traces =
            sample_trace_of_norm_one(siblings[i].A, 1000, 0xACE0 + i);
        for (const RationalFunction& r : traces)
            for (const Place& pl : siblings[i].delta) {
                auto v = valuation(r, pl);
                if (v && *v < 0) {
                    detail = "trace " + print_rational(r) + " has a pole at " + print_place(pl);
                    return false;
                }
            }
        checked += static_cast<std::int64_t>(traces.size());
    }
    detail = std::to_string(checked) + " traces integral on the ramification locus";
    return true;
}

// ---- criterion 9: holomorphy-ring elements admit the operator representation

bool crit_representation(std::string& detail) {
    auto f5 = FieldSpec::make(5);
    Place base = Place::finite(Polynomial::t(f5));
    KochenContext ctx = KochenContext::make(base);
    TowerSpecPtr flat = make_tower_spec(f5, 2, {});
    TowerSpecPtr inert = make_kummer_step(f5, 2, parse_polynomial(f5, "t^2+2"));
    std::vector<PlaceAbove> flat_places = places_above(flat, base);
    std::vector<PlaceAbove> inert_places = places_above(inert, base);
    RationalFunction t_p(Polynomial::t(f5));
    std::int64_t checked = 0;

    for (int which = 0; which < 2; ++which) {
        const TowerSpecPtr& ts = which == 0 ? flat : inert;
        const auto& places = which == 0 ? flat_places : inert_places;
        std::mt19937_64 rng(0x9E + which);
        for (int i = 0; i < 100; ++i) {
            std::vector<RationalFunction> coords;
            for (std::int64_t j = 0; j < ts->rank(); ++j) {
                RationalFunction c = rng() % 4 == 0 ? RationalFunction::zero(f5)
                                                    : rand_rat(rng, f5, 3);
                if (which == 0 && !c.is_zero()) {
                    // K itself: membership in the holomorphy ring means v_t >= 0
                    auto v = valuation(c, base);
                    if (v && *v < 0)
                        c = c * RationalFunction(Polynomial::t(f5).pow(-*v));
                }
                coords.push_back(std::move(c));
            }
            TowerElement r = TowerElement::from_coeffs(ts, std::move(coords));
            if (r.is_zero())
                r = TowerElement::one(ts);
            KochenTriple tr;
            try {
                tr = kochen_representation(r, ctx);
            } catch (const std::exception& e) {
                detail = std::string("representation failed: ") + e.what();
                return false;
            }
            std::optional<TowerElement> gz = gamma(tr.z, ctx);
            if (!gz) {
                detail = "z landed on an operator pole";
                return false;
            }
            TowerElement denom =
                TowerElement::one(ts) + *gz * TowerElement::constant(ts, t_p) * tr.y;
            if (!(r * denom == tr.x)) {
                detail = "identity fails at sample " + std::to_string(i);
                return false;
            }
            for (const PlaceAbove& P : places) {
                auto vx = valuation_above(tr.x, P);
                auto vy = valuation_above(tr.y, P);
                if ((vx && *vx < 0) || (vy && *vy < 0)) {
                    detail = "non-integral x or y at sample " + std::to_string(i);
                    return false;
                }
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " representations verified in K and the inert step";
    return true;
}

} // namespace

int main() {
    struct Row {
        int id;
        const char* name;
        double budget; // seconds; 0 = no bound pinned
        bool pass;
        std::string detail;
        double secs;
    };
    std::vector<Row> rows;
    std::vector<Sibling> siblings;

    auto timed = [&](int id, const char* name, double budget, auto&& fn) {
        Row row{id, name, budget, false, "", 0.0};
        auto start = std::chrono::steady_clock::now();
        try {
            row.pass = fn(row.detail);
        } catch (const std::exception& e) {
            row.pass = false;
            row.detail = std::string("exception: ") + e.what();
        }
        row.secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (row.pass && budget > 0 && row.secs > budget) {
            row.pass = false;
            row.detail += " [over budget]";
        }
        rows.push_back(std::move(row));
    };

    timed(1, "hensel residual", 10, crit_hensel);
    timed(2, "valuation calculus", 5, crit_valuation);
    timed(3, "discriminant exponent", 0, crit_disc);
    timed(4, "splitting at infinity", 0, crit_split);
    timed(5, "bounded-norm enumeration", 60, crit_enumerate);
    timed(6, "reciprocity", 30, crit_reciprocity);
    timed(7, "sibling pairs", 30,
          [&](std::string& d) { return build_siblings(siblings, d); });
    timed(8, "trace integrality", 0,
          [&](std::string& d) { return crit_traces(siblings, d); });
    timed(9, "operator representation", 30, crit_representation);

    bool all = true;
    for (const Row& row : rows) {
        std::ostringstream os;
        os.setf(std::ios::fixed);
        os.precision(1);
        os << "criterion " << row.id << " (" << row.name << "): "
           << (row.pass ? "PASS" : "FAIL") << " [" << row.secs << "s";
        if (row.budget > 0)
            os << " / " << row.budget << "s";
        os << "] " << row.detail;
        std::cout << os.str() << "\n";
        all = all && row.pass;
    }
    std::cout << "criterion 10 (non-effective bounds): INFO excluded by design; the "
                 "existence bound and undecidability conclusion have no computable "
                 "content and are covered by the property suites above\n";
    std::cout << (all ? "acceptance: PASS" : "acceptance: FAIL") << "\n";
    return all ? 0 : 1;
}
