#pragma once

// Conjugacies built by shadowing: the Smale solid-torus attractor against
// the dyadic solenoid shift, and C^0-small perturbations of hyperbolic toral
// automorphisms against their linear models.

#include "hypsol/solenoid.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace hypsol {

/// (t, z) -> (2t mod 1, lambda_c z + c_off e^{2 pi i t}) on S^1 x unit disk.
struct SmaleSystem {
    double lambda_c = 0.25;
    double c_off = 0.5;

    /// Throws unless 0 < lambda_c < 1/2, lambda_c < c_off and lambda_c + c_off <= 1.
    void validate() const;
};

struct SmalePoint {
    double t = 0.0;  // in [0, 1)
    std::complex<double> z;
};

SmalePoint smale_step(const SmaleSystem& sys, const SmalePoint& p);
/// Jacobian in the real coordinates (t, Re z, Im z).
Eigen::Matrix3d smale_tangent(const SmaleSystem& sys, const SmalePoint& p);

/// Circle distance in t plus Euclidean distance in z.
double smale_distance(const SmalePoint& a, const SmalePoint& b);

/// f^depth of the fiber center over coordinate(xi, depth), using the exact
/// angles coordinate(xi, i) along the way. Error at most 2 lambda_c^depth.
SmalePoint solenoid_to_attractor(const SmaleSystem& sys, const SolenoidPoint& xi, std::size_t depth);

/// Period-two point of f over t = 1/3, from solving f^2(z) = z on that fiber.
SmalePoint smale_period_two_point(const SmaleSystem& sys);

/// g = A + p on the lift of T^k, with p Z^k-periodic.
struct TorusPerturbation {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> p;
    double sup_norm = 0.0;     // sup |p|, Euclidean
    double lipschitz = 0.0;    // Lipschitz constant of p, Euclidean
};

TorusPerturbation zero_perturbation(std::size_t k);
/// eps (sin 2 pi y, 0) / 2 pi on T^2.
TorusPerturbation sine_shear_perturbation(double eps);

/// g(x) on the torus, coordinates reduced to [0,1).
Eigen::VectorXd perturbed_step(const IntMatrix& A, const TorusPerturbation& g, const Eigen::VectorXd& x);

/// Distance on T^k (coordinatewise nearest lift, Euclidean).
double torus_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct ToralConjugacyParams {
    std::size_t window = 60;
    double tol = 1e-13;
    std::size_t max_iterations = 200;
    /// Largest allowed contraction factor Lip(p) (1/(mu-1) + 1/(1-lambda)) cond(P).
    double contraction_budget = 0.5;
};

/// h(x) with h o A = g o h, from the shadow of the A-orbit of x over
/// |j| <= window under g. Requires |det A| = 1 so the exact orbit runs
/// both ways. Throws when the perturbation exceeds the rate budget.
Eigen::VectorXd perturbed_anosov_conjugacy(const IntMatrix& A, const TorusPerturbation& g, const TorusPoint& x,
                                           const ToralConjugacyParams& params = {});

/// The rate-budget factor for (A, g); the conjugacy is refused at or above
/// params.contraction_budget.
double conjugacy_contraction_factor(const IntMatrix& A, const TorusPerturbation& g);

/// Intertwining check: residual_i = distance(h(sigma x_i), f(h(x_i))).
struct ConjugacyMap {
    std::string source;
    std::string target;
    std::size_t depth = 0;
    double tolerance = 0.0;
    std::function<std::vector<double>(const std::vector<double>&)> target_map;
    std::function<double(const std::vector<double>&, const std::vector<double>&)> distance;
};

/// Report: {source, target, depth, tolerance, samples, max_residual,
/// mean_residual, passed, injectivity: {pairs, min_image_distance, collisions}}.
nlohmann::json verify_conjugacy(const ConjugacyMap& h, const std::vector<std::vector<double>>& h_of_x,
                                const std::vector<std::vector<double>>& h_of_sigma_x);

/// Smale conjugacy on random exact solenoid points.
nlohmann::json smale_conjugacy_report(const SmaleSystem& sys, std::size_t depth, std::size_t samples,
                                      std::uint64_t seed, double tolerance);

/// Toral conjugacy on random rational points; the identity map when eps = 0.
nlohmann::json toral_conjugacy_report(const IntMatrix& A, const TorusPerturbation& g, std::size_t samples,
                                      std::uint64_t seed, double tolerance, const ToralConjugacyParams& params = {});

}  // namespace hypsol
