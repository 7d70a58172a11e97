#pragma once

// Global shadowing for skew products h(x, xi) = (h1(x), h2(x, xi)) on
// R^k x Fiber, with h1 expanding by mu and h2 contracting by c * lambda^j.
// Lifted toral orbits reach magnitudes near mu^J, so coordinates carry 50
// significant digits.

#include "hypsol/linalg_torus.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <json.hpp>

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace hypsol {

using Real = boost::multiprecision::cpp_bin_float_50;
using RVec = std::vector<Real>;

struct ProductPoint {
    RVec base;
    RVec fiber;
};

struct ProductHyperbolicSystem {
    std::string name;
    std::size_t base_dim = 0;
    std::size_t fiber_dim = 0;

    double mu = 2.0;      // rho(h1 x, h1 y) >= mu rho(x, y)
    double c = 1.0;       // d(h2^j xi, h2^j zeta) <= c lambda^j d(xi, zeta)
    double lambda = 0.5;

    std::function<RVec(const RVec&)> h1;
    std::function<RVec(const RVec&)> h1_inverse;
    std::function<RVec(const RVec& base, const RVec& fiber)> h2;
    std::function<RVec(const RVec& base, const RVec& fiber)> h2_inverse;

    std::function<Real(const RVec&, const RVec&)> rho;
    std::function<Real(const RVec& base, const RVec&, const RVec&)> fiber_metric;

    /// Diameter of a bounded fiber; empty when fibers are unbounded.
    std::optional<double> fiber_diameter;
    /// Diameter of the fiber projection of a compact fundamental domain,
    /// for unbounded fibers over a compact quotient.
    std::optional<double> quotient_fiber_diameter;

    ProductPoint step(const ProductPoint& x) const;
    ProductPoint step_inverse(const ProductPoint& x) const;
    /// rho on the base plus the fiber metric over the first point's base.
    Real distance(const ProductPoint& x, const ProductPoint& y) const;
};

/// Points x_{-J}, ..., x_J (odd count).
struct PseudoOrbit {
    std::vector<ProductPoint> points;

    std::size_t half_window() const { return (points.size() - 1) / 2; }
    const ProductPoint& at(long j) const { return points[static_cast<std::size_t>(j + static_cast<long>(half_window()))]; }
};

/// max_j d(h(x_j), x_{j+1}), recomputed from the points.
double pseudo_orbit_gap(const ProductHyperbolicSystem& sys, const PseudoOrbit& pseudo);

struct ShadowResult {
    ProductPoint point;           // shadow at index 0
    std::vector<ProductPoint> orbit;  // its orbit over the window
    std::vector<double> residuals;    // d(h^j(point), x_j), j = -J..J
    double achieved_sup = 0.0;
    double gap = 0.0;
    double bound = 0.0;           // gap * (1/(mu-1) + c/(1-lambda))
    double last_increment = 0.0;  // change against the window one step shorter
    std::size_t iterations = 0;
    bool converged = false;
};

/// Base coordinate from the top of the window pulled back by h1^{-1}, fiber
/// from the bottom of the window pushed forward by h2; the result is a true
/// orbit over the window.
ShadowResult shadow(const ProductHyperbolicSystem& sys, const PseudoOrbit& pseudo, double tol = 1e-12);

/// sup_{|j| <= J} d(h^j(candidate), x_j).
double verify_shadow(const ProductHyperbolicSystem& sys, const PseudoOrbit& pseudo, const ProductPoint& candidate);

/// epsilon_N = c K lambda^N + mu^{-N} C.
double uniqueness_epsilon(double C, double c, double K, double lambda, double mu, unsigned N);

/// Bound on the fiber distance between points within C of each other:
/// the fiber diameter for bounded fibers, else max(C, quotient diameter).
double holonomy_bound_K(const ProductHyperbolicSystem& sys, double C);

// ---------------------------------------------------------------- built-ins

/// Lift of a hyperbolic toral automorphism to R^k in adapted coordinates:
/// base = E+ coordinates, fiber = E- coordinates.
struct LinearToralSystem {
    HyperbolicSplitting split;
    ProductHyperbolicSystem system;
    IntMatrix A;

    ProductPoint from_ambient(const RVec& x) const;
    RVec to_ambient(const ProductPoint& p) const;
    /// Adapted coordinates of the integer vector n (an isometry of the lift).
    ProductPoint lattice_translation(const IntVec& n) const;
};

LinearToralSystem linear_toral_system(const IntMatrix& A);

/// x -> 2x on R, no fiber.
ProductHyperbolicSystem dyadic_cover_system();

/// (t, z) -> (2t, lambda_c z + c_off e^{2 pi i t}) on R x C, fiber the unit disk.
ProductHyperbolicSystem smale_cover_system(double lambda_c = 0.25, double c_off = 0.5);

ProductPoint add(const ProductPoint& a, const ProductPoint& b);

/// The true orbit of x over [-J, J] with every step moved by at most L
/// (random direction, length uniform in [0, L] in the sum metric); the
/// perturbation at index 0 is zero.
PseudoOrbit jittered_orbit(const ProductHyperbolicSystem& sys, const ProductPoint& x, std::size_t J, double L,
                           std::mt19937_64& rng);

nlohmann::json to_json(const ProductPoint& p);
ProductPoint product_point_from_json(const nlohmann::json& j, std::size_t base_dim, std::size_t fiber_dim);
nlohmann::json to_json(const PseudoOrbit& p);
PseudoOrbit pseudo_orbit_from_json(const nlohmann::json& j, std::size_t base_dim, std::size_t fiber_dim);
nlohmann::json to_json(const ShadowResult& r);

std::string to_decimal(const Real& x);

}  // namespace hypsol
