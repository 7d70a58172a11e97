#include "hypsol/cover.hpp"

namespace hypsol {

CoverPoint::CoverPoint(SolenoidPoint fiber, RatVec v) : fiber_(std::move(fiber)), v_(std::move(v))
{
    if (v_.size() != fiber_.dim()) {
        throw DomainError("cover point vector has wrong dimension");
    }
    if (!coordinate(fiber_, 0).is_zero()) {
        throw DomainError("cover point fiber is not in Sigma: zeroth coordinate " + coordinate(fiber_, 0).to_string());
    }
}

CoverPoint CoverPoint::identity(const MatrixHandle& A)
{
    return CoverPoint(SolenoidPoint::identity(A), RatVec(A->dim(), Rational(0)));
}

CoverPoint cover_add(const CoverPoint& a, const CoverPoint& b)
{
    return CoverPoint(add(a.fiber(), b.fiber()), a.v() + b.v());
}

CoverPoint cover_neg(const CoverPoint& a)
{
    return CoverPoint(neg(a.fiber()), -a.v());
}

Tri cover_compare(const CoverPoint& a, const CoverPoint& b)
{
    if (a.v() != b.v()) {
        return Tri::Different;
    }
    return compare(a.fiber(), b.fiber());
}

CoverPoint sigma_bar(const CoverPoint& s)
{
    return CoverPoint(shift(s.fiber()), s.matrix()->apply(s.v()));
}

std::optional<CoverPoint> sigma_bar_preimage(const CoverPoint& s)
{
    if (!coordinate(s.fiber(), 1).is_zero()) {
        return std::nullopt;
    }
    return CoverPoint(unshift(s.fiber()), s.matrix()->apply_inverse(s.v()));
}

SolenoidPoint q_bar(const CoverPoint& s)
{
    return act(s.v(), s.fiber());
}

CoverPoint alpha(const MatrixHandle& A, const IntVec& n)
{
    const RatVec v = to_rational(n);
    return CoverPoint(act(-v, SolenoidPoint::identity(A)), v);
}

// ------------------------------------------------------------ S-tilde

TildeCoverPoint::TildeCoverPoint(CoverPoint point, unsigned level) : point_(std::move(point)), level_(level)
{
    while (level_ > 0) {
        auto pre = sigma_bar_preimage(point_);
        if (!pre) {
            break;
        }
        point_ = std::move(*pre);
        --level_;
    }
}

CoverPoint tilde_lift(const TildeCoverPoint& t, unsigned level, const SigmaBarFn& sb)
{
    if (level < t.level()) {
        throw DomainError("tilde_lift cannot lower the level");
    }
    CoverPoint p = t.point();
    for (unsigned i = t.level(); i < level; ++i) {
        p = sb(p);
    }
    return p;
}

TildeCoverPoint tilde_add(const TildeCoverPoint& a, const TildeCoverPoint& b, const SigmaBarFn& sb)
{
    const unsigned level = std::max(a.level(), b.level());
    return TildeCoverPoint(cover_add(tilde_lift(a, level, sb), tilde_lift(b, level, sb)), level);
}

Tri tilde_compare(const TildeCoverPoint& a, const TildeCoverPoint& b, const SigmaBarFn& sb)
{
    const unsigned level = std::max(a.level(), b.level());
    return cover_compare(tilde_lift(a, level, sb), tilde_lift(b, level, sb));
}

TildeCoverPoint sigma_tilde(const TildeCoverPoint& t, const SigmaBarFn& sb)
{
    return TildeCoverPoint(sb(t.point()), t.level());
}

TildeCoverPoint sigma_tilde_inverse(const TildeCoverPoint& t)
{
    return TildeCoverPoint(t.point(), t.level() + 1);
}

SolenoidPoint q_tilde(const TildeCoverPoint& t)
{
    SolenoidPoint x = q_bar(t.point());
    for (unsigned i = 0; i < t.level(); ++i) {
        x = unshift(x);
    }
    return x;
}

TildeCoverPoint alpha_tilde(const LimitElement& g)
{
    return TildeCoverPoint(alpha(g.matrix(), g.vec()), g.level());
}

nlohmann::json to_json(const CoverPoint& s)
{
    return {{"fiber", to_json(s.fiber())}, {"v", rational_vector_json(s.v())}};
}

nlohmann::json to_json(const TildeCoverPoint& t)
{
    return {{"point", to_json(t.point())}, {"level", t.level()}};
}

CoverPoint random_cover_point(const MatrixHandle& A, std::mt19937_64& rng)
{
    const std::size_t k = A->dim();
    const TorusPoint y(random_rational_vector(rng, k, 12, 1));
    const BackwardChain chain = periodic_chain_through(*A, y);
    RatVec o = -chain.cycle.front().coords();
    for (auto& x : o) {
        x += static_cast<long long>(rng() % 7) - 3;
    }
    return CoverPoint(SolenoidPoint(A, chain, o), random_rational_vector(rng, k, 12, 3));
}

// ------------------------------------------------------------ verifier

namespace {

IntVec random_int_vector(std::mt19937_64& rng, std::size_t k, int range)
{
    IntVec n(k);
    for (auto& x : n) {
        x = static_cast<long long>(rng() % static_cast<unsigned long long>(2 * range + 1)) - range;
    }
    return n;
}

nlohmann::json int_vector_json(const IntVec& n)
{
    auto out = nlohmann::json::array();
    for (const auto& x : n) {
        out.push_back(x.str());
    }
    return out;
}

nlohmann::json limit_json(const LimitElement& g)
{
    return {{"vec", int_vector_json(g.vec())}, {"level", g.level()}};
}

IntVec sum(const IntVec& a, const IntVec& b)
{
    IntVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] + b[i];
    }
    return out;
}

bool is_zero_int(const IntVec& n)
{
    for (const auto& x : n) {
        if (x != 0) {
            return false;
        }
    }
    return true;
}

IntVec integer_part(const RatVec& v)
{
    IntVec n;
    for (const auto& x : v) {
        n.push_back(floor(x));
    }
    return n;
}

struct Sample {
    CoverPoint s;
    CoverPoint kernel_candidate;  // (theta_{-n}(e), n + m)
    IntVec n;
    IntVec m;
    TildeCoverPoint t;
    TildeCoverPoint tilde_candidate;
    LimitElement g;
    LimitElement h;
};

// Equality outcome as a failure description, empty on success.
std::optional<std::string> expect_equal(Tri r)
{
    if (r == Tri::Equal) {
        return std::nullopt;
    }
    return r == Tri::Different ? "sides differ" : "equality undecided";
}

std::optional<std::string> expect_different(Tri r)
{
    if (r == Tri::Different) {
        return std::nullopt;
    }
    return r == Tri::Equal ? "sides coincide" : "inequality undecided";
}

struct Identity {
    const char* name;
    const char* statement;
    std::function<std::optional<std::string>(const Sample&, nlohmann::json&)> check;
};

}  // namespace

nlohmann::json verify_cover_identities(const MatrixHandle& A, std::size_t samples, std::uint64_t seed,
                                       const SigmaBarFn& sb)
{
    const std::size_t k = A->dim();
    const SolenoidPoint e = SolenoidPoint::identity(A);
    std::mt19937_64 rng(seed);

    std::vector<Sample> data;
    data.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        CoverPoint s = random_cover_point(A, rng);
        IntVec n = random_int_vector(rng, k, 4);
        IntVec m = random_int_vector(rng, k, 2);
        CoverPoint cand(act(-to_rational(n), e), to_rational(sum(n, m)));
        const unsigned level = static_cast<unsigned>(rng() % 4);
        TildeCoverPoint t(random_cover_point(A, rng), static_cast<unsigned>(rng() % 4));
        TildeCoverPoint tc(cand, level);
        LimitElement g(A, random_int_vector(rng, k, 5), static_cast<unsigned>(rng() % 4));
        LimitElement h(A, random_int_vector(rng, k, 5), static_cast<unsigned>(rng() % 4));
        data.push_back(Sample{std::move(s), std::move(cand), std::move(n), std::move(m), std::move(t), std::move(tc),
                              std::move(g), std::move(h)});
    }

    const auto sigma_t = [&](const TildeCoverPoint& t) { return sigma_tilde(t, sb); };
    const auto add_t = [&](const TildeCoverPoint& a, const TildeCoverPoint& b) { return tilde_add(a, b, sb); };
    const auto cmp_t = [&](const TildeCoverPoint& a, const TildeCoverPoint& b) { return tilde_compare(a, b, sb); };

    // q(c) = e must force c into the deck group image.
    const auto kernel_converse = [&](const CoverPoint& c, nlohmann::json& w) -> std::optional<std::string> {
        const Tri r = compare(q_bar(c), e);
        if (r == Tri::Unknown) {
            w["candidate"] = to_json(c);
            return "kernel membership undecided";
        }
        if (r == Tri::Different) {
            return std::nullopt;
        }
        if (!is_integral(c.v())) {
            w["candidate"] = to_json(c);
            return "q_bar(s) = e with non-integral v";
        }
        if (auto f = expect_equal(cover_compare(c, alpha(A, integer_part(c.v()))))) {
            w["candidate"] = to_json(c);
            return "q_bar(s) = e but s != alpha(v): " + *f;
        }
        return std::nullopt;
    };
    const auto tilde_kernel_converse = [&](const TildeCoverPoint& c, nlohmann::json& w) -> std::optional<std::string> {
        const Tri r = compare(q_tilde(c), e);
        if (r == Tri::Unknown) {
            w["candidate"] = to_json(c);
            return "kernel membership undecided";
        }
        if (r == Tri::Different) {
            return std::nullopt;
        }
        if (!is_integral(c.point().v())) {
            w["candidate"] = to_json(c);
            return "q_tilde(t) = e with non-integral v";
        }
        const LimitElement g(A, integer_part(c.point().v()), c.level());
        if (auto f = expect_equal(cmp_t(c, alpha_tilde(g)))) {
            w["candidate"] = to_json(c);
            return "q_tilde(t) = e but t != alpha_tilde([(v, l)]): " + *f;
        }
        return std::nullopt;
    };

    const std::vector<Identity> identities{
        {"bar.alpha_injective_homomorphism", "alpha is an injective homomorphism Z^k -> S-bar",
         [&](const Sample& x, nlohmann::json& w) -> std::optional<std::string> {
             w["n"] = int_vector_json(x.n);
             w["m"] = int_vector_json(x.m);
             if (auto f = expect_equal(cover_compare(alpha(A, sum(x.m, x.n)), cover_add(alpha(A, x.m), alpha(A, x.n))))) {
                 return "alpha(m+n) vs alpha(m)+alpha(n): " + *f;
             }
             if (!is_zero_int(x.n)) {
                 if (auto f = expect_different(cover_compare(alpha(A, x.n), CoverPoint::identity(A)))) {
                     return "alpha(n) vs identity for n != 0: " + *f;
                 }
             }
             return std::nullopt;
         }},
        {"bar.kernel_is_deck_group", "ker(q_bar) = alpha(Z^k)",
         [&](const Sample& x, nlohmann::json& w) -> std::optional<std::string> {
             w["n"] = int_vector_json(x.n);
             if (auto f = expect_equal(compare(q_bar(alpha(A, x.n)), e))) {
                 return "q_bar(alpha(n)) vs e: " + *f;
             }
             for (const CoverPoint* c : {&x.s, &x.kernel_candidate}) {
                 if (auto f = kernel_converse(*c, w)) {
                     return f;
                 }
             }
             return std::nullopt;
         }},
        {"bar.projection_intertwines_shift", "q_bar o sigma_bar = sigma_A o q_bar",
         [&](const Sample& x, nlohmann::json& w) -> std::optional<std::string> {
             w["s"] = to_json(x.s);
             if (auto f = expect_equal(compare(q_bar(sb(x.s)), shift(q_bar(x.s))))) {
                 return "q_bar(sigma_bar(s)) vs shift(q_bar(s)): " + *f;
             }
             return std::nullopt;
         }},
        {"bar.shift_twists_deck_group", "sigma_bar(s + alpha(n)) = sigma_bar(s) + alpha(A n)",
         [&](const Sample& x, nlohmann::json& w) -> std::optional<std::string> {
             w["s"] = to_json(x.s);
             w["n"] = int_vector_json(x.n);
             const auto lhs = sb(cover_add(x.s, alpha(A, x.n)));
             const auto rhs = cover_add(sb(x.s), alpha(A, A->apply(x.n)));
             if (auto f = expect_equal(cover_compare(lhs, rhs))) {
                 return *f;
             }
             return std::nullopt;
         }},
        {"tilde.alpha_injective_homomorphism", "alpha_tilde is an injective homomorphism Z^k[A^-1] -> S-tilde",
         [&](const Sample& x, nlohmann::json& w) -> std::optional<std::string> {
             w["g"] = limit_json(x.g);
             w["h"] = limit_json(x.h);
             const auto lhs = alpha_tilde(limit_add(x.g, x.h));
             const auto rhs = add_t(alpha_tilde(x.g), alpha_tilde(x.h));
             if (auto f = expect_equal(cmp_t(lhs, rhs))) {
                 return "alpha_tilde(g+h) vs alpha_tilde(g)+alpha_tilde(h): " + *f;
             }
             if (!is_zero_int(x.g.vec())) {
                 const TildeCoverPoint zero(CoverPoint::identity(A), 0);
                 if (auto f = expect_different(cmp_t(alpha_tilde(x.g), zero))) {
                     return "alpha_tilde(g) vs identity for g != 0: " + *f;
                 }
             }
             return std::nullopt;
         }},
        {"tilde.kernel_is_deck_group", "ker(q_tilde) = alpha_tilde(Z^k[A^-1])",
         [&](const Sample& x, nlohmann::json& w) -> std::optional<std::string> {
             w["g"] = limit_json(x.g);
             if (auto f = expect_equal(compare(q_tilde(alpha_tilde(x.g)), e))) {
                 return "q_tilde(alpha_tilde(g)) vs e: " + *f;
             }
             for (const TildeCoverPoint* c : {&x.t, &x.tilde_candidate}) {
                 if (auto f = tilde_kernel_converse(*c, w)) {
                     return f;
                 }
             }
             return std::nullopt;
         }},
        {"tilde.projection_intertwines_shift", "q_tilde o sigma_tilde = sigma_A o q_tilde",
         [&](const Sample& x, nlohmann::json& w) -> std::optional<std::string> {
             w["t"] = to_json(x.t);
             if (auto f = expect_equal(compare(q_tilde(sigma_t(x.t)), shift(q_tilde(x.t))))) {
                 return "q_tilde(sigma_tilde(t)) vs shift(q_tilde(t)): " + *f;
             }
             return std::nullopt;
         }},
        {"tilde.shift_twists_deck_group", "sigma_tilde(t + alpha_tilde(g)) = sigma_tilde(t) + alpha_tilde(tau_A(g))",
         [&](const Sample& x, nlohmann::json& w) -> std::optional<std::string> {
             w["t"] = to_json(x.t);
             w["g"] = limit_json(x.g);
             const auto lhs = sigma_t(add_t(x.t, alpha_tilde(x.g)));
             const auto rhs = add_t(sigma_t(x.t), alpha_tilde(limit_tau(x.g)));
             if (auto f = expect_equal(cmp_t(lhs, rhs))) {
                 return *f;
             }
             return std::nullopt;
         }},
    };

    nlohmann::json report;
    report["matrix"] = A->to_rows();
    report["samples"] = samples;
    report["seed"] = seed;
    report["identities"] = nlohmann::json::array();
    bool all = true;
    for (const auto& id : identities) {
        nlohmann::json entry{{"identity", id.name}, {"statement", id.statement}};
        std::size_t checks = 0;
        bool passed = true;
        for (const auto& x : data) {
            nlohmann::json witness;
            std::optional<std::string> failure;
            try {
                failure = id.check(x, witness);
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

}  // namespace hypsol
