#include "hypsol/cover.hpp"

#include <doctest.h>

#include <random>

using namespace hypsol;

namespace {

const MatrixHandle kTwo = make_matrix({{2}});
const MatrixHandle kCat = make_matrix({{2, 1}, {1, 1}});

TorusPoint t1(long long p, long long q = 1)
{
    return TorusPoint(RatVec{Rational(p, q)});
}

std::string status_of(const nlohmann::json& report, const std::string& name)
{
    for (const auto& id : report["identities"]) {
        if (id["identity"] == name) {
            return id["status"].get<std::string>();
        }
    }
    return "missing";
}

}  // namespace

TEST_CASE("sigma_bar examples")
{
    const CoverPoint e = CoverPoint::identity(kTwo);
    CHECK(cover_compare(sigma_bar(e), e) == Tri::Equal);
    const CoverPoint one(SolenoidPoint::identity(kTwo), RatVec{Rational(1)});
    const CoverPoint two(SolenoidPoint::identity(kTwo), RatVec{Rational(2)});
    CHECK(cover_compare(sigma_bar(one), two) == Tri::Equal);
}

TEST_CASE("sigma_bar is a homomorphism")
{
    std::mt19937_64 rng(1);
    for (const auto& A : {kTwo, kCat}) {
        for (int i = 0; i < 60; ++i) {
            const CoverPoint a = random_cover_point(A, rng);
            const CoverPoint b = random_cover_point(A, rng);
            CHECK(cover_compare(sigma_bar(cover_add(a, b)), cover_add(sigma_bar(a), sigma_bar(b))) == Tri::Equal);
        }
    }
}

TEST_CASE("alpha examples over A = [2]")
{
    CHECK(cover_compare(alpha(kTwo, {0}), CoverPoint::identity(kTwo)) == Tri::Equal);
    const CoverPoint a1 = alpha(kTwo, {1});
    CHECK(a1.v() == RatVec{Rational(1)});
    CHECK(coordinate(a1.fiber(), 0) == t1(0));
    CHECK(coordinate(a1.fiber(), 1) == t1(1, 2));
    CHECK(coordinate(a1.fiber(), 2) == t1(3, 4));
    CHECK(coordinate(a1.fiber(), 3) == t1(7, 8));
    CHECK(compare(q_bar(a1), SolenoidPoint::identity(kTwo)) == Tri::Equal);
}

TEST_CASE("alpha is additive")
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) {
        const Integer m(static_cast<long long>(rng() % 21) - 10);
        const Integer n(static_cast<long long>(rng() % 21) - 10);
        CHECK(cover_compare(alpha(kTwo, {m + n}), cover_add(alpha(kTwo, {m}), alpha(kTwo, {n}))) == Tri::Equal);
    }
}

TEST_CASE("q_bar intertwines sigma_bar with the shift")
{
    std::mt19937_64 rng(3);
    CHECK(compare(q_bar(CoverPoint::identity(kTwo)), SolenoidPoint::identity(kTwo)) == Tri::Equal);
    for (const auto& A : {kTwo, kCat}) {
        for (int i = 0; i < 60; ++i) {
            const CoverPoint s = random_cover_point(A, rng);
            CHECK(compare(q_bar(sigma_bar(s)), shift(q_bar(s))) == Tri::Equal);
        }
    }
}

TEST_CASE("the fiber of a cover point must lie over zero")
{
    const SolenoidPoint off = act(RatVec{Rational(1, 3)}, SolenoidPoint::identity(kTwo));
    CHECK_THROWS_AS(CoverPoint(off, RatVec{Rational(0)}), DomainError);
}

TEST_CASE("tilde cover examples")
{
    const LimitElement g(kTwo, {1}, 1);
    CHECK(compare(q_tilde(alpha_tilde(g)), SolenoidPoint::identity(kTwo)) == Tri::Equal);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const TildeCoverPoint t(random_cover_point(kTwo, rng), static_cast<unsigned>(rng() % 3));
        CHECK(compare(q_tilde(sigma_tilde(t)), shift(q_tilde(t))) == Tri::Equal);
        CHECK(tilde_compare(sigma_tilde_inverse(sigma_tilde(t)), t) == Tri::Equal);
        const LimitElement h(kTwo, {Integer(static_cast<long long>(rng() % 9) - 4)}, static_cast<unsigned>(rng() % 3));
        CHECK(tilde_compare(sigma_tilde(tilde_add(t, alpha_tilde(h))),
                            tilde_add(sigma_tilde(t), alpha_tilde(limit_tau(h)))) == Tri::Equal);
    }
}

TEST_CASE("tilde equality ignores level inflation")
{
    std::mt19937_64 rng(5);
    for (const auto& A : {kTwo, kCat}) {
        for (int i = 0; i < 30; ++i) {
            const CoverPoint s = random_cover_point(A, rng);
            const unsigned level = static_cast<unsigned>(rng() % 3);
            const TildeCoverPoint t(s, level);
            const TildeCoverPoint inflated(sigma_bar(sigma_bar(s)), level + 2);
            CHECK(tilde_compare(t, inflated) == Tri::Equal);
            CHECK(inflated.level() <= level);
            CHECK(tilde_lift(t, level + 3).v() == tilde_lift(inflated, level + 3).v());
        }
    }
}

TEST_CASE("all eight covering identities hold")
{
    for (const auto& A : {kTwo, kCat}) {
        const auto r = verify_cover_identities(A, 100, 17);
        CHECK(r["all_passed"].get<bool>());
        CHECK(r["identities"].size() == 8);
        for (const auto& id : r["identities"]) {
            CHECK(id["status"] == "pass");
            CHECK(id["checks"].get<std::size_t>() == 100);
        }
    }
}

TEST_CASE("dropping the A factor from sigma_bar is detected")
{
    const SigmaBarFn corrupted = [](const CoverPoint& s) { return CoverPoint(shift(s.fiber()), s.v()); };
    const auto r = verify_cover_identities(kTwo, 100, 17, corrupted);
    CHECK_FALSE(r["all_passed"].get<bool>());
    CHECK(status_of(r, "bar.projection_intertwines_shift") == "fail");
    for (const auto& id : r["identities"]) {
        if (id["status"] == "fail") {
            CHECK(id.contains("witness"));
            CHECK(id["witness"].contains("reason"));
        }
    }
}
