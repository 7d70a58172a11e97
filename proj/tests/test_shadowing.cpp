#include "hypsol/shadowing.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hypsol;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

double to_d(const Real& x)
{
    return x.convert_to<double>();
}

ProductPoint random_ambient_point(const LinearToralSystem& lt, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RVec x;
    for (std::size_t i = 0; i < lt.A.dim(); ++i) {
        x.emplace_back(u(rng));
    }
    return lt.from_ambient(x);
}

// True orbit of x over |j| <= J.
PseudoOrbit true_orbit(const ProductHyperbolicSystem& sys, const ProductPoint& x, std::size_t J)
{
    PseudoOrbit p;
    p.points.resize(2 * J + 1);
    p.points[J] = x;
    for (std::size_t j = J + 1; j < p.points.size(); ++j) {
        p.points[j] = sys.step(p.points[j - 1]);
    }
    for (std::size_t j = J; j-- > 0;) {
        p.points[j] = sys.step_inverse(p.points[j + 1]);
    }
    return p;
}

}  // namespace

TEST_CASE("cat-map shadowing constant is sqrt 5")
{
    const auto lt = linear_toral_system(IntMatrix::from_rows({{2, 1}, {1, 1}}));
    const double factor = 1.0 / (lt.system.mu - 1.0) + lt.system.c / (1.0 - lt.system.lambda);
    CHECK(factor == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
    CHECK(lt.system.mu == doctest::Approx(kPhi * kPhi).epsilon(1e-12));
}

TEST_CASE("jittered cat-map orbits are shadowed within the bound")
{
    const auto lt = linear_toral_system(IntMatrix::from_rows({{2, 1}, {1, 1}}));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        const auto pseudo = jittered_orbit(lt.system, random_ambient_point(lt, rng), 50, 0.01, rng);
        const double gap = pseudo_orbit_gap(lt.system, pseudo);
        CHECK(gap <= 0.01 + 1e-15);
        const auto r = shadow(lt.system, pseudo);
        CHECK(r.converged);
        CHECK(r.achieved_sup <= std::sqrt(5.0) * 0.01 + 1e-6);
        CHECK(r.achieved_sup <= r.bound + 1e-12);
        CHECK(std::fabs(verify_shadow(lt.system, pseudo, r.point) - r.achieved_sup) < 1e-12);
    }
}

TEST_CASE("a true orbit shadows itself")
{
    const auto lt = linear_toral_system(IntMatrix::from_rows({{2, 1}, {1, 1}}));
    std::mt19937_64 rng(2);
    for (int i = 0; i < 10; ++i) {
        const ProductPoint x = random_ambient_point(lt, rng);
        const auto pseudo = jittered_orbit(lt.system, x, 50, 0.0, rng);
        const auto r = shadow(lt.system, pseudo);
        CHECK(to_d(lt.system.distance(r.point, x)) < 1e-10);
        CHECK(r.achieved_sup < 1e-10);
    }
    const auto sm = smale_cover_system();
    const ProductPoint y{{Real(0.3)}, {Real(0.1), Real(-0.2)}};
    const auto r = shadow(sm, true_orbit(sm, y, 30));
    CHECK(to_d(sm.distance(r.point, y)) < 1e-10);
}

TEST_CASE("offsetting along E+ is detected by verify_shadow")
{
    const auto lt = linear_toral_system(IntMatrix::from_rows({{2, 1}, {1, 1}}));
    std::mt19937_64 rng(3);
    const ProductPoint x = random_ambient_point(lt, rng);
    const std::size_t J = 10;
    const auto pseudo = true_orbit(lt.system, x, J);
    ProductPoint moved = x;
    moved.base[0] += Real(0.1);
    CHECK(verify_shadow(lt.system, pseudo, moved) >= std::pow(lt.system.mu, J) * 0.1 * (1 - 1e-9));
}

TEST_CASE("single jump between two true orbit segments")
{
    const auto lt = linear_toral_system(IntMatrix::from_rows({{2, 1}, {1, 1}}));
    std::mt19937_64 rng(4);
    const std::size_t J = 30;
    const ProductPoint x = random_ambient_point(lt, rng);
    PseudoOrbit p = true_orbit(lt.system, x, J);
    // after index 0 the orbit restarts from a point displaced by L
    const double L = 0.02;
    ProductPoint restart = lt.system.step(x);
    restart.base[0] += Real(L * 0.6);
    restart.fiber[0] -= Real(L * 0.4);
    const PseudoOrbit tail = true_orbit(lt.system, restart, J);
    for (std::size_t j = J + 1; j < p.points.size(); ++j) {
        p.points[j] = tail.points[j - 1];
    }
    const double gap = pseudo_orbit_gap(lt.system, p);
    CHECK(gap == doctest::Approx(L).epsilon(1e-9));
    const auto r = shadow(lt.system, p);
    for (double res : r.residuals) {
        CHECK(res <= gap * std::sqrt(5.0) + 1e-9);
    }
}

TEST_CASE("shadowing commutes with integer translations")
{
    const auto lt = linear_toral_system(IntMatrix::from_rows({{2, 1}, {1, 1}}));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 5; ++i) {
        const auto pseudo = jittered_orbit(lt.system, random_ambient_point(lt, rng), 40, 0.01, rng);
        const IntVec n{Integer(static_cast<long long>(rng() % 7) - 3), Integer(static_cast<long long>(rng() % 7) - 3)};
        // translating x_j by A^j n keeps the pseudo-orbit gap
        PseudoOrbit moved = pseudo;
        for (long j = -40; j <= 40; ++j) {
            IntVec m = n;
            if (j >= 0) {
                for (long s = 0; s < j; ++s) {
                    m = lt.A.apply(m);
                }
            } else {
                const IntMatrix inv = IntMatrix::from_rows({{1, -1}, {-1, 2}});
                for (long s = 0; s < -j; ++s) {
                    m = inv.apply(m);
                }
            }
            moved.points[static_cast<std::size_t>(j + 40)] =
                add(pseudo.points[static_cast<std::size_t>(j + 40)], lt.lattice_translation(m));
        }
        const auto r1 = shadow(lt.system, pseudo);
        const auto r2 = shadow(lt.system, moved);
        const ProductPoint expected = add(r1.point, lt.lattice_translation(n));
        CHECK(to_d(lt.system.distance(r2.point, expected)) < 1e-9);
    }
}

TEST_CASE("dyadic system agrees with a brute-force grid search")
{
    const auto sys = dyadic_cover_system();
    const std::size_t J = 10;
    // integer points: the identity orbit 0 before index 1, then 2^{j-1}
    PseudoOrbit p;
    for (long j = -static_cast<long>(J); j <= static_cast<long>(J); ++j) {
        p.points.push_back(ProductPoint{{Real(j >= 1 ? std::ldexp(1.0, static_cast<int>(j - 1)) : 0.0)}, {}});
    }
    CHECK(pseudo_orbit_gap(sys, p) == doctest::Approx(1.0));
    const auto r = shadow(sys, p);
    CHECK(r.bound == doctest::Approx(3.0));
    CHECK(to_d(r.point.base[0]) == doctest::Approx(0.5));
    // every grid point shadowing within the base-only bound gap / (mu - 1)
    const double base_bound = 1.0;
    double lo = 1e9;
    double hi = -1e9;
    const double step = 1e-6;
    for (double y = -1.5; y <= 1.5; y += step) {
        double sup = 0.0;
        for (long j = -static_cast<long>(J); j <= static_cast<long>(J) && sup <= base_bound; ++j) {
            const double target = j >= 1 ? std::ldexp(1.0, static_cast<int>(j - 1)) : 0.0;
            sup = std::max(sup, std::fabs(std::ldexp(y, static_cast<int>(j)) - target));
        }
        if (sup <= base_bound) {
            lo = std::min(lo, y);
            hi = std::max(hi, y);
        }
    }
    REQUIRE(lo <= hi);
    const double s = to_d(r.point.base[0]);
    CHECK(s >= lo - step);
    CHECK(s <= hi + step);
    CHECK(hi - lo <= 2 * std::ldexp(1.0, -static_cast<int>(J)) + 2 * step);
}

TEST_CASE("uniqueness epsilon closed form")
{
    const double lambda = 1 / (kPhi * kPhi);
    const double mu = kPhi * kPhi;
    const double eps = uniqueness_epsilon(1, 1, 1, lambda, mu, 10);
    CHECK(eps == doctest::Approx(2 * std::pow(kPhi, -20)).epsilon(1e-12));
    CHECK(uniqueness_epsilon(0.7, 2.0, 3.0, 0.5, 2.0, 0) == doctest::Approx(2.0 * 3.0 + 0.7));
    CHECK(uniqueness_epsilon(1, 1, 1, 1e-12, 1e12, 5) < 1e-50);
    CHECK_THROWS_AS(uniqueness_epsilon(1, 1, 1, 1.5, 2.0, 3), DomainError);
    CHECK_THROWS_AS(uniqueness_epsilon(1, 1, 1, 0.5, 0.9, 3), DomainError);
}

TEST_CASE("holonomy bounds for the built-in systems")
{
    const auto lt = linear_toral_system(IntMatrix::from_rows({{2, 1}, {1, 1}}));
    // oracle: E- coordinate of the unit square corners
    Eigen::Matrix2d basis;
    basis.col(0) = Eigen::Vector2d(1.0, (std::sqrt(5.0) - 1) / 2).normalized();
    basis.col(1) = Eigen::Vector2d(1.0, -(std::sqrt(5.0) + 1) / 2).normalized();
    const Eigen::Matrix2d inv = basis.inverse();
    double lo = 1e9;
    double hi = -1e9;
    for (double a : {0.0, 1.0}) {
        for (double b : {0.0, 1.0}) {
            const double m = inv.row(1).dot(Eigen::Vector2d(a, b));
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
    }
    CHECK(holonomy_bound_K(lt.system, 0.5) == doctest::Approx(std::max(0.5, hi - lo)).epsilon(1e-9));
    CHECK(holonomy_bound_K(lt.system, 0.0) > 0.0);
    CHECK(holonomy_bound_K(smale_cover_system(), 1.0) == doctest::Approx(2.0));
    CHECK(holonomy_bound_K(dyadic_cover_system(), 1.0) == 0.0);
}

TEST_CASE("candidates close along the window are within epsilon_N")
{
    const auto lt = linear_toral_system(IntMatrix::from_rows({{2, 1}, {1, 1}}));
    const auto& sys = lt.system;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (unsigned N : {4u, 8u, 12u}) {
        for (int i = 0; i < 50; ++i) {
            const ProductPoint x = random_ambient_point(lt, rng);
            // adversarial: push both components to their extremes
            const double C0 = 0.05;
            const double a = C0 * std::pow(sys.mu, -static_cast<double>(N)) * u(rng);
            const double b = C0 * std::pow(sys.lambda, static_cast<double>(N)) * u(rng);
            ProductPoint y = x;
            y.base[0] += Real(a);
            y.fiber[0] += Real(b);
            const auto ox = true_orbit(sys, x, N);
            const auto oy = true_orbit(sys, y, N);
            double C = 0.0;
            for (std::size_t j = 0; j < ox.points.size(); ++j) {
                C = std::max(C, to_d(sys.distance(ox.points[j], oy.points[j])));
            }
            const double K = holonomy_bound_K(sys, C);
            const double eps = uniqueness_epsilon(C, sys.c, K, sys.lambda, sys.mu, N);
            CHECK(to_d(sys.distance(x, y)) <= eps * (1 + 1e-9));
        }
    }
}

TEST_CASE("pseudo-orbit JSON round trip")
{
    const auto lt = linear_toral_system(IntMatrix::from_rows({{2, 1}, {1, 1}}));
    std::mt19937_64 rng(7);
    const auto pseudo = jittered_orbit(lt.system, random_ambient_point(lt, rng), 5, 0.01, rng);
    const auto back = pseudo_orbit_from_json(to_json(pseudo), 1, 1);
    REQUIRE(back.points.size() == pseudo.points.size());
    for (std::size_t j = 0; j < back.points.size(); ++j) {
        CHECK(to_d(lt.system.distance(back.points[j], pseudo.points[j])) < 1e-30);
    }
    CHECK_THROWS_AS(pseudo_orbit_from_json(nlohmann::json::parse("[[1]]"), 1, 1), DomainError);
}
