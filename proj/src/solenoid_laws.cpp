#include "hypsol/solenoid.hpp"

#include <functional>

namespace hypsol {

namespace {

struct LawSample {
    SolenoidPoint x;
    SolenoidPoint y;
    SolenoidPoint z;
    RatVec v;
    RatVec w;
};

struct Law {
    const char* name;
    const char* statement;
    std::function<std::optional<std::string>(const LawSample&, nlohmann::json&)> check;
};

std::optional<std::string> expect_equal(Tri r)
{
    if (r == Tri::Equal) {
        return std::nullopt;
    }
    return r == Tri::Different ? "sides differ" : "comparison undecided";
}

bool same_distance(const SigmaDistance& a, const SigmaDistance& b)
{
    if (a.index() != b.index()) {
        return false;
    }
    if (const auto* e = std::get_if<Exact>(&a)) {
        return e->value == std::get<Exact>(b).value;
    }
    if (const auto* i = std::get_if<Interval>(&a)) {
        const auto& j = std::get<Interval>(b);
        return i->lower == j.lower && i->upper == j.upper;
    }
    return true;
}

nlohmann::json run_laws(const MatrixHandle& A, std::size_t samples, std::uint64_t seed,
                        const std::vector<LawSample>& data, const std::vector<Law>& laws)
{
    nlohmann::json report;
    report["matrix"] = A->to_rows();
    report["samples"] = samples;
    report["seed"] = seed;
    report["identities"] = nlohmann::json::array();
    bool all = true;
    for (const auto& law : laws) {
        nlohmann::json entry{{"identity", law.name}, {"statement", law.statement}};
        std::size_t checks = 0;
        bool passed = true;
        for (const auto& s : data) {
            nlohmann::json witness;
            std::optional<std::string> failure;
            try {
                failure = law.check(s, witness);
            } catch (const DomainError& err) {
                failure = std::string("error: ") + err.what();
            }
            ++checks;
            if (failure) {
                witness["reason"] = *failure;
                entry["witness"] = witness;
                passed = false;
                break;
            }
        }
        entry["status"] = passed ? "pass" : "fail";
        entry["checks"] = checks;
        all = all && passed;
        report["identities"].push_back(entry);
    }
    report["all_passed"] = all;
    return report;
}

RatVec apply_rat(const IntMatrix& A, const RatVec& v)
{
    return A.apply(v);
}

}  // namespace

nlohmann::json to_json(const SigmaDistance& d)
{
    if (const auto* e = std::get_if<Exact>(&d)) {
        return {{"kind", "exact"}, {"value", to_string(e->value)}};
    }
    if (const auto* i = std::get_if<Interval>(&d)) {
        return {{"kind", "interval"}, {"lower", to_string(i->lower)}, {"upper", to_string(i->upper)}};
    }
    return {{"kind", "infinite"}};
}

nlohmann::json verify_solenoid_laws(const MatrixHandle& A, std::size_t samples, std::uint64_t seed, std::size_t depth)
{
    const std::size_t k = A->dim();
    const SolenoidPoint e = SolenoidPoint::identity(A);
    std::mt19937_64 rng(seed);
    std::vector<LawSample> data;
    data.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        SolenoidPoint x = random_point(A, rng);
        SolenoidPoint y = random_point(A, rng);
        SolenoidPoint z = random_point(A, rng);
        RatVec v = random_rational_vector(rng, k, 12, 3);
        RatVec w = random_rational_vector(rng, k, 12, 3);
        data.push_back(LawSample{std::move(x), std::move(y), std::move(z), std::move(v), std::move(w)});
    }
    const auto eq = [depth](const SolenoidPoint& a, const SolenoidPoint& b) { return compare(a, b, depth); };

    const std::vector<Law> laws{
        {"action.identity", "theta_0(x) = x",
         [&](const LawSample& s, nlohmann::json& w) {
             w["x"] = to_json(s.x);
             return expect_equal(eq(act(RatVec(k, Rational(0)), s.x), s.x));
         }},
        {"action.composition", "theta_v(theta_w(x)) = theta_{v+w}(x)",
         [&](const LawSample& s, nlohmann::json& w) {
             w["x"] = to_json(s.x);
             w["v"] = rational_vector_json(s.v);
             w["w"] = rational_vector_json(s.w);
             return expect_equal(eq(act(s.v, act(s.w, s.x)), act(s.v + s.w, s.x)));
         }},
        {"action.shift_equivariance", "shift(theta_v(x)) = theta_{Av}(shift(x))",
         [&](const LawSample& s, nlohmann::json& w) {
             w["x"] = to_json(s.x);
             w["v"] = rational_vector_json(s.v);
             return expect_equal(eq(shift(act(s.v, s.x)), act(apply_rat(*A, s.v), shift(s.x))));
         }},
        {"action.projection", "p_0(theta_v(x)) = p_0(x) + v mod 1",
         [&](const LawSample& s, nlohmann::json& w) -> std::optional<std::string> {
             w["x"] = to_json(s.x);
             w["v"] = rational_vector_json(s.v);
             if (!(coordinate(act(s.v, s.x), 0) == coordinate(s.x, 0) + s.v)) {
                 return "zeroth coordinates differ";
             }
             return std::nullopt;
         }},
        {"action.commutes_with_addition", "theta_v(x) + y = theta_v(x + y)",
         [&](const LawSample& s, nlohmann::json& w) {
             w["x"] = to_json(s.x);
             w["y"] = to_json(s.y);
             w["v"] = rational_vector_json(s.v);
             return expect_equal(eq(add(act(s.v, s.x), s.y), act(s.v, add(s.x, s.y))));
         }},
        {"group.identity_and_inverse", "x + e = x and x + (-x) = e",
         [&](const LawSample& s, nlohmann::json& w) -> std::optional<std::string> {
             w["x"] = to_json(s.x);
             if (auto f = expect_equal(eq(add(s.x, e), s.x))) {
                 return "x + e vs x: " + *f;
             }
             if (auto f = expect_equal(eq(add(s.x, neg(s.x)), e))) {
                 return "x + (-x) vs e: " + *f;
             }
             return std::nullopt;
         }},
        {"group.commutative_associative", "x + y = y + x and (x + y) + z = x + (y + z)",
         [&](const LawSample& s, nlohmann::json& w) -> std::optional<std::string> {
             w["x"] = to_json(s.x);
             w["y"] = to_json(s.y);
             w["z"] = to_json(s.z);
             if (auto f = expect_equal(eq(add(s.x, s.y), add(s.y, s.x)))) {
                 return "commutativity: " + *f;
             }
             if (auto f = expect_equal(eq(add(add(s.x, s.y), s.z), add(s.x, add(s.y, s.z))))) {
                 return "associativity: " + *f;
             }
             return std::nullopt;
         }},
        {"shift.automorphism", "shift(x + y) = shift(x) + shift(y) and unshift(shift(x)) = x",
         [&](const LawSample& s, nlohmann::json& w) -> std::optional<std::string> {
             w["x"] = to_json(s.x);
             w["y"] = to_json(s.y);
             if (auto f = expect_equal(eq(shift(add(s.x, s.y)), add(shift(s.x), shift(s.y))))) {
                 return "homomorphism: " + *f;
             }
             if (auto f = expect_equal(eq(unshift(shift(s.x)), s.x))) {
                 return "unshift(shift(x)) vs x: " + *f;
             }
             if (auto f = expect_equal(eq(shift(unshift(s.x)), s.x))) {
                 return "shift(unshift(x)) vs x: " + *f;
             }
             return std::nullopt;
         }},
        {"chain.coordinate_consistency", "coordinate(x, j) = A coordinate(x, j + 1) mod 1",
         [&](const LawSample& s, nlohmann::json& w) -> std::optional<std::string> {
             w["x"] = to_json(s.x);
             for (std::size_t j = 0; j < 8; ++j) {
                 if (!(coordinate(s.x, j) == apply(*A, coordinate(s.x, j + 1)))) {
                     w["j"] = j;
                     return "chain relation broken";
                 }
             }
             return std::nullopt;
         }},
    };
    return run_laws(A, samples, seed, data, laws);
}

nlohmann::json verify_metric_laws(const MatrixHandle& A, std::size_t pairs, std::uint64_t seed, std::size_t depth)
{
    const std::size_t k = A->dim();
    const SolenoidPoint e = SolenoidPoint::identity(A);
    std::mt19937_64 rng(seed);
    std::vector<LawSample> data;
    data.reserve(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
        SolenoidPoint x = random_point(A, rng);
        SolenoidPoint y = x;
        switch (i % 3) {
        case 0:
            y = random_point(A, rng);
            break;
        case 1: {
            // dyadic translation
            RatVec u(k);
            for (auto& c : u) {
                c = Rational(Integer(static_cast<long long>(rng() % 17) - 8),
                             Integer(1LL << (rng() % 6)));
            }
            y = act(u, x);
            break;
        }
        default: {
            // translate by an unshifted lattice translate of the identity
            RatVec n(k);
            for (auto& c : n) {
                c = Rational(static_cast<long long>(rng() % 7) - 3);
            }
            SolenoidPoint t = act(n, e);
            for (std::size_t m = rng() % 5; m > 0; --m) {
                t = unshift(t);
            }
            y = add(x, t);
            break;
        }
        }
        RatVec v = random_rational_vector(rng, k, 12, 3);
        data.push_back(LawSample{std::move(x), std::move(y), e, std::move(v), {}});
    }

    std::size_t resolved = 0;
    const std::vector<Law> laws{
        {"metric.translation_invariance", "d_Sigma(theta_v x, theta_v y) = d_Sigma(x, y)",
         [&](const LawSample& s, nlohmann::json& w) -> std::optional<std::string> {
             const SigmaDistance d = d_sigma(s.x, s.y, depth);
             const SigmaDistance dv = d_sigma(act(s.v, s.x), act(s.v, s.y), depth);
             if (!same_distance(d, dv)) {
                 w["x"] = to_json(s.x);
                 w["y"] = to_json(s.y);
                 w["v"] = rational_vector_json(s.v);
                 w["d"] = to_json(d);
                 w["d_translated"] = to_json(dv);
                 return "distance changed under translation";
             }
             return std::nullopt;
         }},
        {"metric.shift_halving", "d_Sigma(shift x, shift y) = d_Sigma(x, y) / 2 when resolved",
         [&](const LawSample& s, nlohmann::json& w) -> std::optional<std::string> {
             const SigmaDistance d = d_sigma(s.x, s.y, depth);
             const auto* ex = std::get_if<Exact>(&d);
             if (ex == nullptr) {
                 return std::nullopt;
             }
             ++resolved;
             const SigmaDistance ds = d_sigma(shift(s.x), shift(s.y), depth);
             if (!same_distance(ds, Exact{ex->value / 2})) {
                 w["x"] = to_json(s.x);
                 w["y"] = to_json(s.y);
                 w["d"] = to_json(d);
                 w["d_shifted"] = to_json(ds);
                 return "shifted distance is not half";
             }
             return std::nullopt;
         }},
    };
    nlohmann::json report = run_laws(A, pairs, seed, data, laws);
    report["resolved_pairs"] = resolved;
    return report;
}

}  // namespace hypsol
