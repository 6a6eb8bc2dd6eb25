#include "ffk/cli.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ffk/csa.hpp"
#include "ffk/errors.hpp"
#include "ffk/ffield.hpp"
#include "ffk/kochen.hpp"
#include "ffk/laurent.hpp"
#include "ffk/parse.hpp"
#include "ffk/places.hpp"
#include "ffk/polyring.hpp"
#include "ffk/tower.hpp"

namespace ffk {

namespace {

using nlohmann::json;

struct FieldFlags {
    std::int64_t p = 0;
    std::int64_t e = 1;
    std::string mod;
};

void add_field_flags(CLI::App* cmd, FieldFlags& ff) {
    cmd->add_option("--p", ff.p, "characteristic")->required();
    cmd->add_option("--e", ff.e, "extension degree over the prime field");
    cmd->add_option("--mod", ff.mod, "modulus in s for e > 1, e.g. s^2+1");
}

FieldSpecPtr build_spec(const FieldFlags& ff) {
    std::string text = "p=" + std::to_string(ff.p);
    if (ff.e != 1)
        text += ",e=" + std::to_string(ff.e);
    if (!ff.mod.empty())
        text += ",mod=" + ff.mod;
    return parse_field_spec(text);
}

std::vector<Polynomial> parse_levels(const FieldSpecPtr& spec, const std::string& csv) {
    std::vector<Polynomial> out;
    std::size_t start = 0;
    bool any = false;
    for (std::size_t i = 0; i <= csv.size(); ++i) {
        if (i < csv.size() && csv[i] != ',')
            continue;
        std::string part = csv.substr(start, i - start);
        start = i + 1;
        std::size_t a = part.find_first_not_of(" \t");
        if (a == std::string::npos) {
            if (any || i < csv.size())
                throw parse_error("empty entry in level list");
            continue;
        }
        out.push_back(parse_polynomial(spec, part));
        any = true;
    }
    return out;
}

// Element text in the ambient field: plain rational grammar at depth zero,
// tower grammar otherwise.
TowerElement parse_ambient(const TowerSpecPtr& ts, const std::string& text) {
    if (ts->depth() == 0)
        return TowerElement::constant(ts, parse_rational(ts->field, text));
    return parse_tower_element(ts, text);
}

std::string ambient_text(const TowerElement& x) {
    if (x.tower()->depth() == 0)
        return print_rational(x.coeff(0));
    return print_tower_element(x);
}

json series_json(const LaurentSeries& s) {
    json j;
    if (s.is_zero()) {
        j["order"] = nullptr;
        j["coeffs"] = json::array();
    } else {
        j["order"] = s.order();
        json c = json::array();
        for (std::int64_t e = s.order(); e < s.coeff_end(); ++e)
            c.push_back(s.coeff_at(e).index());
        j["coeffs"] = std::move(c);
    }
    if (s.is_exact())
        j["prec"] = nullptr;
    else
        j["prec"] = s.precision();
    return j;
}

json tower_json(const TowerElement& x) {
    const TowerSpecPtr& ts = x.tower();
    json j;
    j["n"] = ts->n;
    json levels = json::array();
    for (const auto& f : ts->levels)
        levels.push_back(print_polynomial(f));
    j["levels"] = std::move(levels);
    json coeffs = json::array();
    std::int64_t depth = ts->depth();
    for (std::int64_t flat = 0; flat < ts->rank(); ++flat) {
        if (x.coeff(flat).is_zero())
            continue;
        std::vector<std::int64_t> exps(static_cast<std::size_t>(depth), 0);
        std::int64_t rest = flat;
        for (std::int64_t lev = depth - 1; lev >= 0; --lev) {
            exps[static_cast<std::size_t>(lev)] = rest % ts->n;
            rest /= ts->n;
        }
        json entry;
        entry["exps"] = exps;
        entry["value"] = print_rational(x.coeff(flat));
        coeffs.push_back(std::move(entry));
    }
    j["coeffs"] = std::move(coeffs);
    return j;
}

const char* case_name(ValuationTag tag) {
    switch (tag) {
    case ValuationTag::Pos: return "pos";
    case ValuationTag::Neg: return "neg";
    case ValuationTag::ZeroHigher: return "zero-higher";
    case ValuationTag::ZeroUnit: return "zero-unit";
    }
    return "?";
}

void emit(std::ostream& out, bool as_json, const json& j, const std::string& text) {
    if (as_json)
        out << j.dump() << "\n";
    else
        out << text;
}

} // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact arithmetic over F_q(t): series, towers, the Kochen "
                 "operator, and symbol algebras",
                 "ffk"};
    app.require_subcommand(1);

    std::string format = "text";
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"text", "json"}))
            ->capture_default_str();
    };

    FieldFlags ff;
    std::int64_t prec = 32;
    std::int64_t n = 2;
    std::int64_t ell = 2;
    std::int64_t count = 100;
    std::int64_t bound = 1;
    std::int64_t max_degree = 0;
    std::uint64_t seed = 0;
    std::string poly_text, x_text, place_text, levels_text, a_text, b_text;
    std::string q1_text, q2_text;
    std::vector<std::string> at_texts, target_texts, delta_a_texts, delta_b_texts;
    std::vector<std::int64_t> min_vals;
    bool count_only = false;

    auto add_prec = [&](CLI::App* cmd) {
        cmd->add_option("--prec", prec, "retained series terms")
            ->envname("FFK_PREC_DEFAULT")
            ->capture_default_str();
    };

    CLI::App* c_info = app.add_subcommand("field-info", "describe the coefficient field");
    add_field_flags(c_info, ff);
    add_format(c_info);

    CLI::App* c_irr = app.add_subcommand(
        "irreducibles", "monic irreducibles of degree divisible by n, canonical order");
    add_field_flags(c_irr, ff);
    c_irr->add_option("--n", n, "degree divisor")->required();
    c_irr->add_option("--max-degree", max_degree, "largest degree listed")->required();
    add_format(c_irr);

    CLI::App* c_hensel = app.add_subcommand("hensel-root",
                                            "n-th root of a monic polynomial in F_q((1/t))");
    add_field_flags(c_hensel, ff);
    c_hensel->add_option("--poly", poly_text, "monic polynomial, n | degree")->required();
    c_hensel->add_option("--n", n, "root degree")->required();
    add_prec(c_hensel);
    add_format(c_hensel);

    CLI::App* c_val = app.add_subcommand("place-val", "valuation of a rational function");
    add_field_flags(c_val, ff);
    c_val->add_option("--place", place_text, "place: monic irreducible or inf")->required();
    c_val->add_option("--x", x_text, "rational function")->required();
    add_format(c_val);

    CLI::App* c_wa = app.add_subcommand(
        "weak-approx", "rational function matching targets to given orders at given places");
    add_field_flags(c_wa, ff);
    c_wa->add_option("--at", at_texts, "constraint place (repeatable)");
    c_wa->add_option("--target", target_texts, "constraint target (repeatable)");
    c_wa->add_option("--min", min_vals, "constraint minimum order (repeatable)");
    add_format(c_wa);

    CLI::App* c_split = app.add_subcommand("place-split",
                                           "splitting of a place under adjoining an n-th root");
    add_field_flags(c_split, ff);
    c_split->add_option("--place", place_text, "place: monic irreducible or inf")->required();
    c_split->add_option("--n", n, "root degree")->required();
    c_split->add_option("--f", poly_text, "monic irreducible whose root is adjoined")->required();
    add_format(c_split);

    auto add_step_flags = [&](CLI::App* cmd) {
        cmd->add_option("--n", n, "radical degree")->capture_default_str();
        cmd->add_option("--levels", levels_text, "comma-separated level polynomials");
    };

    CLI::App* c_keval = app.add_subcommand("kochen-eval",
                                           "operator values and the valuation case at each "
                                           "place above the base");
    add_field_flags(c_keval, ff);
    c_keval->add_option("--base", place_text, "base place")->required();
    c_keval->add_option("--x", x_text, "element of the field or step field")->required();
    add_step_flags(c_keval);
    add_format(c_keval);

    CLI::App* c_kcheck = app.add_subcommand("kochen-check",
                                            "sampled integrality of gamma at the one-one "
                                            "places above the base");
    add_field_flags(c_kcheck, ff);
    c_kcheck->add_option("--base", place_text, "base place")->required();
    c_kcheck->add_option("--count", count, "sample count")->capture_default_str();
    c_kcheck->add_option("--seed", seed, "sampling seed")->capture_default_str();
    add_step_flags(c_kcheck);
    add_format(c_kcheck);

    CLI::App* c_krep = app.add_subcommand("kochen-represent",
                                          "write r as x / (1 + t_p gamma(z) y) with x, y "
                                          "integral above the base");
    add_field_flags(c_krep, ff);
    c_krep->add_option("--base", place_text, "base place")->required();
    c_krep->add_option("--r", x_text, "element integral at the one-one places")->required();
    add_step_flags(c_krep);
    add_format(c_krep);

    CLI::App* c_tnorm = app.add_subcommand("tower-norm",
                                           "largest absolute value at infinity over the "
                                           "conjugates, as an exact power of q");
    add_field_flags(c_tnorm, ff);
    c_tnorm->add_option("--x", x_text, "tower element")->required();
    add_step_flags(c_tnorm);
    add_format(c_tnorm);

    CLI::App* c_tenum = app.add_subcommand("tower-enumerate",
                                           "all integral tower elements of norm at most N");
    add_field_flags(c_tenum, ff);
    c_tenum->add_option("--N", bound, "norm bound")->required();
    c_tenum->add_flag("--count-only", count_only, "print only the cardinality");
    add_step_flags(c_tenum);
    add_format(c_tenum);

    CLI::App* c_tdisc = app.add_subcommand("tower-disc",
                                           "discriminant of X^n - p with certified place "
                                           "valuations");
    add_field_flags(c_tdisc, ff);
    c_tdisc->add_option("--poly", poly_text, "monic irreducible p")->required();
    c_tdisc->add_option("--n", n, "radical degree")->required();
    add_format(c_tdisc);

    CLI::App* c_cinv = app.add_subcommand("csa-invariants",
                                          "local invariants of the symbol algebra (a, b)");
    add_field_flags(c_cinv, ff);
    c_cinv->add_option("--a", a_text, "first slot, nonzero rational")->required();
    c_cinv->add_option("--b", b_text, "second slot, nonzero rational")->required();
    c_cinv->add_option("--l", ell, "algebra degree, a prime dividing q-1")->required();
    add_format(c_cinv);

    CLI::App* c_cpair = app.add_subcommand("csa-pair",
                                           "degree-l algebras ramified exactly at {p, q1} "
                                           "and {p, q2}");
    add_field_flags(c_cpair, ff);
    c_cpair->add_option("--base", place_text, "shared ramified place")->required();
    c_cpair->add_option("--q1", q1_text, "second ramified place of A")->required();
    c_cpair->add_option("--q2", q2_text, "second ramified place of B")->required();
    c_cpair->add_option("--l", ell, "algebra degree, a prime dividing q-1")->required();
    add_format(c_cpair);

    CLI::App* c_csample = app.add_subcommand("csa-sample",
                                             "reduced traces of pseudorandom norm-one "
                                             "elements of a quaternion algebra");
    add_field_flags(c_csample, ff);
    c_csample->add_option("--a", a_text, "first slot, nonzero rational")->required();
    c_csample->add_option("--b", b_text, "second slot, nonzero rational")->required();
    c_csample->add_option("--l", ell, "algebra degree, must be 2")->required();
    c_csample->add_option("--count", count, "sample count")->capture_default_str();
    c_csample->add_option("--seed", seed, "sampling seed")->capture_default_str();
    add_format(c_csample);

    CLI::App* c_csplit = app.add_subcommand("csa-split",
                                            "split x into a part integral on one ramification "
                                            "locus given integrality on the overlap");
    add_field_flags(c_csplit, ff);
    c_csplit->add_option("--x", x_text, "rational function")->required();
    c_csplit->add_option("--delta-a", delta_a_texts, "place of the first locus (repeatable)");
    c_csplit->add_option("--delta-b", delta_b_texts, "place of the second locus (repeatable)");
    add_format(c_csplit);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(std::move(rev));
        bool as_json = format == "json";
        FieldSpecPtr spec = build_spec(ff);

        auto step_spec = [&]() {
            return make_tower_spec(spec, n, parse_levels(spec, levels_text));
        };

        if (*c_info) {
            json j;
            j["spec"] = print_field_spec(spec);
            j["p"] = spec->p();
            j["e"] = spec->e();
            j["q"] = spec->q();
            j["generator"] =
                print_field_element(FieldElement::from_index(spec, spec->generator_index()));
            std::string text = "spec = " + j["spec"].get<std::string>() + "\n" +
                               "p = " + std::to_string(spec->p()) + "\n" +
                               "e = " + std::to_string(spec->e()) + "\n" +
                               "q = " + std::to_string(spec->q()) + "\n" +
                               "generator = " + j["generator"].get<std::string>() + "\n";
            emit(out, as_json, j, text);
        } else if (*c_irr) {
            std::vector<Polynomial> polys = enumerate_Pn_plus(spec, n, max_degree);
            json arr = json::array();
            std::string text;
            for (const auto& f : polys) {
                std::string s = print_polynomial(f);
                arr.push_back(s);
                text += s + "\n";
            }
            emit(out, as_json, json{{"polys", std::move(arr)}}, text);
        } else if (*c_hensel) {
            LaurentSeries root = hensel_nth_root(parse_polynomial(spec, poly_text), n, prec);
            emit(out, as_json, series_json(root), print_series(root) + "\n");
        } else if (*c_val) {
            std::optional<std::int64_t> v =
                valuation(parse_rational(spec, x_text), parse_place(spec, place_text));
            json j;
            j["valuation"] = v ? json(*v) : json(nullptr);
            emit(out, as_json, j, (v ? std::to_string(*v) : "inf") + "\n");
        } else if (*c_wa) {
            if (at_texts.size() != target_texts.size() || at_texts.size() != min_vals.size())
                throw parse_error("each constraint needs --at, --target, and --min");
            if (at_texts.empty())
                throw parse_error("at least one constraint is required");
            std::vector<ApproxConstraint> cs;
            for (std::size_t i = 0; i < at_texts.size(); ++i)
                cs.push_back({parse_place(spec, at_texts[i]),
                              parse_rational(spec, target_texts[i]), min_vals[i]});
            RationalFunction y = weak_approximation(cs);
            emit(out, as_json, json{{"value", print_rational(y)}}, print_rational(y) + "\n");
        } else if (*c_split) {
            SplitData sd =
                split_type(parse_place(spec, place_text), n, parse_polynomial(spec, poly_text));
            json arr = json::array();
            std::string text;
            for (const auto& [e2, f2] : sd.ef) {
                arr.push_back(json::array({e2, f2}));
                if (!text.empty())
                    text += " ";
                text += "(" + std::to_string(e2) + "," + std::to_string(f2) + ")";
            }
            emit(out, as_json, json{{"ef", std::move(arr)}}, text + "\n");
        } else if (*c_keval) {
            TowerSpecPtr ts = step_spec();
            Place base = parse_place(spec, place_text);
            KochenContext ctx = KochenContext::make(base);
            TowerElement x = parse_ambient(ts, x_text);
            std::optional<TowerElement> b = beta(x, ctx);
            std::optional<TowerElement> g = gamma(x, ctx);
            json j;
            j["beta"] = b ? tower_json(*b) : json(nullptr);
            j["gamma"] = g ? tower_json(*g) : json(nullptr);
            json cases = json::array();
            std::string text = "beta = " + (b ? ambient_text(*b) : "pole") + "\n" +
                               "gamma = " + (g ? ambient_text(*g) : "pole") + "\n";
            if (b) {
                std::vector<PlaceAbove> above = places_above(ts, base);
                for (std::size_t i = 0; i < above.size(); ++i) {
                    ValuationCase vc = classify_beta(x, above[i], ctx);
                    json entry;
                    entry["place"] = i;
                    entry["e"] = above[i].ram;
                    entry["f"] = above[i].res_deg;
                    entry["tag"] = case_name(vc.tag);
                    entry["predicted"] = vc.predicted ? json(*vc.predicted) : json(nullptr);
                    cases.push_back(std::move(entry));
                    text += "place " + std::to_string(i) + " (e=" +
                            std::to_string(above[i].ram) + ", f=" +
                            std::to_string(above[i].res_deg) + "): " + case_name(vc.tag);
                    if (vc.tag == ValuationTag::ZeroUnit)
                        text += ", v(beta) <= 0";
                    else if (vc.predicted)
                        text += ", v(beta) = " + std::to_string(*vc.predicted);
                    else
                        text += ", v(beta) = inf";
                    text += "\n";
                }
            }
            j["cases"] = std::move(cases);
            emit(out, as_json, j, text);
        } else if (*c_kcheck) {
            TowerSpecPtr ts = step_spec();
            GammaSampleReport rep =
                gamma_integrality_sample(ts, parse_place(spec, place_text), count, seed);
            json vio = json::array();
            std::string text = "samples = " + std::to_string(rep.samples) + "\n" +
                               "violations = " + std::to_string(rep.violations.size()) + "\n";
            for (const auto& v : rep.violations) {
                json entry;
                entry["input"] = tower_json(v.input);
                entry["place"] = v.place_index;
                entry["valuation"] = v.valuation;
                vio.push_back(std::move(entry));
                text += "violation: input = " + ambient_text(v.input) + ", place = " +
                        std::to_string(v.place_index) + ", v = " +
                        std::to_string(v.valuation) + "\n";
            }
            json j;
            j["samples"] = rep.samples;
            j["violations"] = std::move(vio);
            emit(out, as_json, j, text);
        } else if (*c_krep) {
            TowerSpecPtr ts = step_spec();
            KochenContext ctx = KochenContext::make(parse_place(spec, place_text));
            KochenTriple triple = kochen_representation(parse_ambient(ts, x_text), ctx);
            json j;
            j["x"] = tower_json(triple.x);
            j["y"] = tower_json(triple.y);
            j["z"] = tower_json(triple.z);
            emit(out, as_json, j,
                 "x = " + ambient_text(triple.x) + "\n" + "y = " + ambient_text(triple.y) +
                     "\n" + "z = " + ambient_text(triple.z) + "\n");
        } else if (*c_tnorm) {
            TowerSpecPtr ts = step_spec();
            AbsInfinity a = norm_max(parse_ambient(ts, x_text));
            json j;
            j["base"] = a.base;
            j["exponent"] = a.exponent;
            emit(out, as_json, j,
                 std::to_string(a.base) + "^" + std::to_string(a.exponent) + "\n");
        } else if (*c_tenum) {
            TowerSpecPtr ts = step_spec();
            std::vector<TowerElement> xs = enumerate_bounded(ts, bound);
            json j;
            j["count"] = xs.size();
            std::string text;
            if (count_only) {
                text = std::to_string(xs.size()) + "\n";
            } else {
                json arr = json::array();
                for (const auto& x : xs) {
                    arr.push_back(tower_json(x));
                    text += ambient_text(x) + "\n";
                }
                j["elements"] = std::move(arr);
            }
            emit(out, as_json, j, text);
        } else if (*c_tdisc) {
            IntegralBasisReport rep = verify_integral_basis(parse_polynomial(spec, poly_text), n);
            json vals = json::array();
            std::string text = "disc = " + print_polynomial(rep.disc) + "\n";
            for (const auto& [pl, v] : rep.valuations) {
                json entry;
                entry["place"] = print_place(pl);
                entry["val"] = v;
                vals.push_back(std::move(entry));
                text += print_place(pl) + ": " + std::to_string(v) + "\n";
            }
            json j;
            j["disc"] = print_polynomial(rep.disc);
            j["valuations"] = std::move(vals);
            emit(out, as_json, j, text);
        } else if (*c_cinv) {
            SymbolAlgebraPtr A = make_symbol_algebra(ell, parse_rational(spec, a_text),
                                                     parse_rational(spec, b_text));
            InvariantProfile prof = invariant_profile(A);
            json arr = json::array();
            std::string text;
            for (const auto& entry : prof.entries) {
                json e2;
                e2["place"] = print_place(entry.place);
                e2["num"] = entry.num;
                e2["den"] = entry.den;
                arr.push_back(std::move(e2));
                text += print_place(entry.place) + ": " + std::to_string(entry.num) + "/" +
                        std::to_string(entry.den) + "\n";
            }
            emit(out, as_json, arr, text);
        } else if (*c_cpair) {
            auto [A, B] =
                construct_sibling_pair(parse_place(spec, place_text), parse_place(spec, q1_text),
                                       parse_place(spec, q2_text), ell);
            json j;
            j["A"] = print_algebra(A);
            j["B"] = print_algebra(B);
            emit(out, as_json, j,
                 "A = " + print_algebra(A) + "\n" + "B = " + print_algebra(B) + "\n");
        } else if (*c_csample) {
            SymbolAlgebraPtr A = make_symbol_algebra(ell, parse_rational(spec, a_text),
                                                     parse_rational(spec, b_text));
            std::vector<RationalFunction> traces = sample_trace_of_norm_one(A, count, seed);
            json arr = json::array();
            std::string text;
            for (const auto& r : traces) {
                arr.push_back(print_rational(r));
                text += print_rational(r) + "\n";
            }
            emit(out, as_json, json{{"traces", std::move(arr)}}, text);
        } else if (*c_csplit) {
            std::vector<Place> da, db;
            for (const auto& s : delta_a_texts)
                da.push_back(parse_place(spec, s));
            for (const auto& s : delta_b_texts)
                db.push_back(parse_place(spec, s));
            RationalFunction y = split_integral(parse_rational(spec, x_text), da, db);
            emit(out, as_json, json{{"value", print_rational(y)}}, print_rational(y) + "\n");
        }
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const parse_error& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const precondition_error& e) {
        err << e.what() << "\n";
        return 3;
    } catch (const unsupported_error& e) {
        err << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return 4;
    }
}

} // namespace ffk
