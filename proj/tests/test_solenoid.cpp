#include "hypsol/solenoid.hpp"

#include <doctest.h>

#include <random>

using namespace hypsol;

namespace {

const MatrixHandle kTwo = make_matrix({{2}});
const MatrixHandle kCat = make_matrix({{2, 1}, {1, 1}});

RatVec r1(long long p, long long q = 1)
{
    return {Rational(p, q)};
}

TorusPoint t1(long long p, long long q = 1)
{
    return TorusPoint(r1(p, q));
}

bool is_equal(const SolenoidPoint& a, const SolenoidPoint& b)
{
    return compare(a, b) == Tri::Equal;
}

// Direct evaluation of d_Sigma over A = [2]: forward part from iterating the
// zeroth coordinate of the difference, backward part summed to depth 60.
SigmaDistance direct_sigma_distance(const SolenoidPoint& x, const SolenoidPoint& y)
{
    const SolenoidPoint z = subtract(x, y);
    Rational total = 0;
    TorusPoint w = coordinate(z, 0);
    Rational pow2 = 1;
    int j = 0;
    while (!w.is_zero()) {
        if (j == 200) {
            return Infinite{};
        }
        total += pow2;
        pow2 *= 2;
        w = apply(*kTwo, w);
        ++j;
    }
    Rational back = Rational(1, 2);
    for (std::size_t i = 1; i <= 60; ++i) {
        if (!coordinate(z, i).is_zero()) {
            total += back;
        }
        back /= 2;
    }
    return Exact{total};
}

}  // namespace

TEST_CASE("coordinates of translates of the identity over A = [2]")
{
    const SolenoidPoint e = SolenoidPoint::identity(kTwo);
    const SolenoidPoint x = act(r1(1, 3), e);
    CHECK(coordinate(x, 2) == t1(1, 12));
    CHECK(coordinate(e, 5).is_zero());
    const SolenoidPoint one = act(r1(1), e);
    CHECK(coordinate(one, 0) == t1(0));
    CHECK(coordinate(one, 1) == t1(1, 2));
    CHECK(coordinate(one, 2) == t1(1, 4));
    CHECK(coordinate(one, 3) == t1(1, 8));
    CHECK(coordinate(shift(one), 1) == t1(0));
}

TEST_CASE("shift examples")
{
    const SolenoidPoint e = SolenoidPoint::identity(kTwo);
    CHECK(is_equal(shift(e), e));
    const SolenoidPoint s = shift(act(r1(1), e));
    CHECK(coordinate(s, 0) == t1(0));
    CHECK(coordinate(s, 1) == t1(0));
    CHECK(coordinate(s, 2) == t1(1, 2));
    CHECK(coordinate(s, 3) == t1(1, 4));
    CHECK(is_equal(s, act(r1(2), e)));
}

TEST_CASE("group examples")
{
    const SolenoidPoint e = SolenoidPoint::identity(kTwo);
    const SolenoidPoint one = act(r1(1), e);
    CHECK(is_equal(add(one, one), act(r1(2), e)));
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
        const SolenoidPoint x = random_point(kTwo, rng);
        CHECK(is_equal(add(x, e), x));
        CHECK(is_equal(add(x, neg(x)), e));
        CHECK(is_equal(act(RatVec{Rational(0)}, x), x));
        CHECK(is_equal(unshift(shift(x)), x));
    }
}

TEST_CASE("backward chains satisfy the chain relation")
{
    std::mt19937_64 rng(4);
    for (const auto& A : {kTwo, kCat, make_matrix({{0, 1, 0}, {0, 0, 1}, {1, 1, 0}}), make_matrix({{3}})}) {
        for (int i = 0; i < 40; ++i) {
            const SolenoidPoint x = random_point(A, rng);
            for (std::size_t j = 0; j < 12; ++j) {
                CHECK(coordinate(x, j) == apply(*A, coordinate(x, j + 1)));
            }
        }
    }
}

TEST_CASE("exact law suites pass on both reference matrices")
{
    for (const auto& A : {kTwo, kCat}) {
        const auto laws = verify_solenoid_laws(A, 150, 21);
        CHECK(laws["all_passed"].get<bool>());
        const auto metric = verify_metric_laws(A, 60, 21);
        CHECK(metric["all_passed"].get<bool>());
        CHECK(metric["resolved_pairs"].get<std::size_t>() > 0);
    }
    const auto three = verify_solenoid_laws(make_matrix({{0, 1, 0}, {0, 0, 1}, {1, 1, 0}}), 6, 5);
    CHECK(three["all_passed"].get<bool>());
}

TEST_CASE("d_sigma reference values")
{
    const SolenoidPoint e = SolenoidPoint::identity(kTwo);
    const auto d1 = d_sigma(e, act(r1(1), e), 64);
    REQUIRE(std::holds_alternative<Exact>(d1));
    CHECK(std::get<Exact>(d1).value == 1);
    CHECK(std::holds_alternative<Infinite>(d_sigma(e, act(r1(1, 3), e), 64)));
    const auto d0 = d_sigma(e, e, 64);
    REQUIRE(std::holds_alternative<Exact>(d0));
    CHECK(std::get<Exact>(d0).value == 0);
}

TEST_CASE("d_sigma matches direct summation over A = [2]")
{
    std::mt19937_64 rng(8);
    int exact = 0;
    for (int i = 0; i < 200; ++i) {
        const SolenoidPoint x = random_point(kTwo, rng);
        SolenoidPoint y = random_point(kTwo, rng);
        if (i % 2 == 0) {
            // a dyadic translate keeps the forward orbit finite
            y = act(r1(static_cast<long long>(rng() % 9) - 4, 1LL << (rng() % 5)), x);
        }
        const SigmaDistance lib = d_sigma(x, y, 64);
        const SigmaDistance ref = direct_sigma_distance(x, y);
        CHECK(lib.index() == ref.index());
        if (const auto* a = std::get_if<Exact>(&lib)) {
            const auto* b = std::get_if<Exact>(&ref);
            REQUIRE(b != nullptr);
            const Rational diff = a->value - b->value;
            CHECK(diff >= 0);
            CHECK(diff <= Rational(1, Integer(1) << 60));
            ++exact;
        }
    }
    CHECK(exact >= 100);
}

TEST_CASE("d_sigma is symmetric and halves under the shift")
{
    std::mt19937_64 rng(12);
    for (int i = 0; i < 100; ++i) {
        const SolenoidPoint x = random_point(kTwo, rng);
        const SolenoidPoint y = act(r1(static_cast<long long>(rng() % 7) - 3, 1LL << (rng() % 4)), x);
        const auto a = d_sigma(x, y, 64);
        const auto b = d_sigma(y, x, 64);
        REQUIRE(std::holds_alternative<Exact>(a));
        REQUIRE(std::holds_alternative<Exact>(b));
        CHECK(std::get<Exact>(a).value == std::get<Exact>(b).value);
        const auto s = d_sigma(shift(x), shift(y), 64);
        REQUIRE(std::holds_alternative<Exact>(s));
        CHECK(std::get<Exact>(s).value * 2 == std::get<Exact>(a).value);
    }
}

TEST_CASE("path vectors")
{
    const SolenoidPoint e = SolenoidPoint::identity(kTwo);
    std::mt19937_64 rng(14);
    for (int i = 0; i < 50; ++i) {
        const SolenoidPoint x = random_point(kTwo, rng);
        const RatVec v = random_rational_vector(rng, 1, 9, 3);
        const PathResult r = path_vector(x, act(v, x), 64);
        REQUIRE(std::holds_alternative<PathVector>(r));
        CHECK(std::get<PathVector>(r).v == v);
        const PathResult z = path_vector(x, x, 64);
        REQUIRE(std::holds_alternative<PathVector>(z));
        CHECK(is_zero(std::get<PathVector>(z).v));
    }
    // the period-two chain through 1/3 lies on a different path component
    const SolenoidPoint p2(kTwo, periodic_chain_through(*kTwo, t1(1, 3)), r1(0));
    CHECK(p2.period() == 2);
    CHECK(std::holds_alternative<NotSameComponent>(path_vector(e, p2, 40)));
}

TEST_CASE("path vectors for a unimodular matrix return the centered representative")
{
    std::mt19937_64 rng(15);
    for (int i = 0; i < 30; ++i) {
        const SolenoidPoint x = random_point(kCat, rng);
        const RatVec v = random_rational_vector(rng, 2, 6, 2);
        const PathResult r = path_vector(x, act(v, x), 64);
        REQUIRE(std::holds_alternative<PathVector>(r));
        const RatVec w = std::get<PathVector>(r).v;
        CHECK(is_integral(w - v));
        CHECK(is_equal(act(w, x), act(v, x)));
    }
}

TEST_CASE("chain distance upper bound")
{
    const SolenoidPoint e = SolenoidPoint::identity(kTwo);
    CHECK(chain_distance_upper(e, e) == 0.0);
    CHECK(chain_distance_upper(e, act(r1(1), e)) <= 1.0 + 1e-15);
    std::mt19937_64 rng(16);
    for (int i = 0; i < 50; ++i) {
        const SolenoidPoint x = random_point(kTwo, rng);
        const SolenoidPoint y = random_point(kTwo, rng);
        CHECK(chain_distance_upper(x, x) == 0.0);
        CHECK(chain_distance_upper(x, y) == doctest::Approx(chain_distance_upper(y, x)));
        CHECK(chain_distance_upper(x, y) >= 0.0);
    }
}

TEST_CASE("JSON round trip")
{
    std::mt19937_64 rng(17);
    for (const auto& A : {kTwo, kCat}) {
        for (int i = 0; i < 20; ++i) {
            const SolenoidPoint x = random_point(A, rng);
            const SolenoidPoint y = solenoid_point_from_json(to_json(x));
            CHECK(x.same_representation(y));
        }
    }
    CHECK(rational_vector_from_json(nlohmann::json::parse(R"(["3/4", 2])")) == RatVec{Rational(3, 4), Rational(2)});
}

TEST_CASE("mismatched matrices are rejected")
{
    const SolenoidPoint a = SolenoidPoint::identity(kTwo);
    const SolenoidPoint b = SolenoidPoint::identity(make_matrix({{3}}));
    CHECK_THROWS_AS(add(a, b), DomainError);
}
