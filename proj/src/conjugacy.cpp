#include "hypsol/conjugacy.hpp"

#include "hypsol/random.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>

namespace hypsol {

namespace {

constexpr double kTwoPi = 2.0 * boost::math::constants::pi<double>();

double wrap(double t)
{
    t -= std::floor(t);
    return t >= 1.0 ? 0.0 : t;
}

double circle_gap(double a, double b)
{
    const double d = wrap(a - b);
    return std::min(d, 1.0 - d);
}

}  // namespace

// ------------------------------------------------------------------- Smale

void SmaleSystem::validate() const
{
    if (!(lambda_c > 0.0 && lambda_c < 0.5)) {
        throw DomainError("Smale system: lambda_c must lie in (0, 1/2)");
    }
    if (!(lambda_c < c_off)) {
        throw DomainError("Smale system: image disks overlap unless lambda_c < c_off");
    }
    if (lambda_c + c_off > 1.0) {
        throw DomainError("Smale system: lambda_c + c_off must not exceed 1");
    }
}

SmalePoint smale_step(const SmaleSystem& sys, const SmalePoint& p)
{
    if (std::abs(p.z) > 1.0 + 1e-12) {
        throw DomainError("smale_step: point outside the solid torus, |z| = " + std::to_string(std::abs(p.z)));
    }
    return SmalePoint{wrap(2.0 * p.t), sys.lambda_c * p.z + sys.c_off * std::polar(1.0, kTwoPi * p.t)};
}

Eigen::Matrix3d smale_tangent(const SmaleSystem& sys, const SmalePoint& p)
{
    Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
    J(0, 0) = 2.0;
    J(1, 0) = -kTwoPi * sys.c_off * std::sin(kTwoPi * p.t);
    J(2, 0) = kTwoPi * sys.c_off * std::cos(kTwoPi * p.t);
    J(1, 1) = sys.lambda_c;
    J(2, 2) = sys.lambda_c;
    return J;
}

double smale_distance(const SmalePoint& a, const SmalePoint& b)
{
    return circle_gap(a.t, b.t) + std::abs(a.z - b.z);
}

SmalePoint solenoid_to_attractor(const SmaleSystem& sys, const SolenoidPoint& xi, std::size_t depth)
{
    if (!(*xi.matrix() == IntMatrix::from_rows({{2}}))) {
        throw DomainError("solenoid_to_attractor: expected the matrix [[2]], got " + xi.matrix()->to_string());
    }
    if (depth < 1) {
        throw DomainError("solenoid_to_attractor: depth must be at least 1");
    }
    // angles a_i = coordinate i, exactly; f(a_i, z) = (a_{i-1}, ...)
    std::vector<double> angle(depth + 1);
    RatVec w = xi.offset();
    for (std::size_t i = 0; i <= depth; ++i) {
        if (i > 0) {
            w = xi.matrix()->apply_inverse(w);
        }
        angle[i] = (xi.cycle()[i % xi.period()] + w).coords()[0].convert_to<double>();
    }
    std::complex<double> z = 0.0;
    for (std::size_t i = depth; i >= 1; --i) {
        z = sys.lambda_c * z + sys.c_off * std::polar(1.0, kTwoPi * angle[i]);
    }
    return SmalePoint{angle[0], z};
}

SmalePoint smale_period_two_point(const SmaleSystem& sys)
{
    const double l = sys.lambda_c;
    const std::complex<double> a = std::polar(1.0, kTwoPi / 3.0);
    const std::complex<double> b = std::polar(1.0, 2.0 * kTwoPi / 3.0);
    return SmalePoint{1.0 / 3.0, (l * sys.c_off * a + sys.c_off * b) / (1.0 - l * l)};
}

// ------------------------------------------------------------------- toral

TorusPerturbation zero_perturbation(std::size_t k)
{
    return TorusPerturbation{[k](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k)); },
                             0.0, 0.0};
}

TorusPerturbation sine_shear_perturbation(double eps)
{
    return TorusPerturbation{[eps](const Eigen::VectorXd& x) {
                                 Eigen::VectorXd out = Eigen::VectorXd::Zero(2);
                                 out(0) = eps * std::sin(kTwoPi * x(1)) / kTwoPi;
                                 return out;
                             },
                             std::fabs(eps) / kTwoPi, std::fabs(eps)};
}

Eigen::VectorXd perturbed_step(const IntMatrix& A, const TorusPerturbation& g, const Eigen::VectorXd& x)
{
    Eigen::VectorXd y = A.to_eigen() * x + g.p(x);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        y(i) = wrap(y(i));
    }
    return y;
}

double torus_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double d = circle_gap(a(i), b(i));
        s += d * d;
    }
    return std::sqrt(s);
}

double conjugacy_contraction_factor(const IntMatrix& A, const TorusPerturbation& g)
{
    const auto s = splitting(A);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(s.basis);
    const auto sv = svd.singularValues();
    const double cond = sv(0) / sv(sv.size() - 1);
    const double rate = (s.dim_plus() > 0 ? 1.0 / (s.mu - 1.0) : 0.0) +
                        (s.dim_minus() > 0 ? 1.0 / (1.0 - s.lambda) : 0.0);
    return g.lipschitz * rate * cond;
}

Eigen::VectorXd perturbed_anosov_conjugacy(const IntMatrix& A, const TorusPerturbation& g, const TorusPoint& x,
                                           const ToralConjugacyParams& params)
{
    if (boost::multiprecision::abs(A.det()) != 1) {
        throw DomainError("perturbed_anosov_conjugacy: needs |det A| = 1, got det " + A.det().str());
    }
    const double factor = conjugacy_contraction_factor(A, g);
    if (factor >= params.contraction_budget) {
        const double required = g.lipschitz * params.contraction_budget / factor;
        throw DomainError("perturbed_anosov_conjugacy: perturbation too large; Lipschitz constant " +
                          std::to_string(g.lipschitz) + " must be below " + std::to_string(required));
    }
    const auto s = splitting(A);
    const auto J = static_cast<long>(params.window);
    const std::size_t n = static_cast<std::size_t>(2 * J + 1);
    const auto k = static_cast<Eigen::Index>(A.dim());
    const auto dp = static_cast<Eigen::Index>(s.dim_plus());
    const auto dm = static_cast<Eigen::Index>(s.dim_minus());

    // exact orbit x_j = A^j x, j = -J..J
    std::vector<Eigen::VectorXd> orbit(n);
    {
        std::vector<Integer> inv(A.dim() * A.dim());
        for (std::size_t i = 0; i < A.dim(); ++i) {
            for (std::size_t j = 0; j < A.dim(); ++j) {
                inv[i * A.dim() + j] = A.det() * A.adjugate()(i, j);
            }
        }
        const IntMatrix A_inv(A.dim(), std::move(inv));
        auto as_double = [k](const TorusPoint& p) {
            Eigen::VectorXd v(k);
            for (Eigen::Index i = 0; i < k; ++i) {
                v(i) = p.coords()[static_cast<std::size_t>(i)].convert_to<double>();
            }
            return v;
        };
        TorusPoint f = x;
        TorusPoint b = x;
        orbit[static_cast<std::size_t>(J)] = as_double(x);
        for (long j = 1; j <= J; ++j) {
            f = apply(A, f);
            b = apply(A_inv, b);
            orbit[static_cast<std::size_t>(J + j)] = as_double(f);
            orbit[static_cast<std::size_t>(J - j)] = as_double(b);
        }
    }

    // u_{j+1} = A u_j + p(x_j + u_j) in adapted coordinates: the E+ part is
    // solved backward from the top of the window, the E- part forward.
    const Eigen::MatrixXd& P = s.basis;
    const Eigen::MatrixXd& Pinv = s.basis_inverse;
    const Eigen::MatrixXd plus_inv = dp > 0 ? Eigen::MatrixXd(s.block_plus.inverse()) : Eigen::MatrixXd();
    std::vector<Eigen::VectorXd> u(n, Eigen::VectorXd::Zero(k));
    for (std::size_t it = 0; it < params.max_iterations; ++it) {
        std::vector<Eigen::VectorXd> q(n);
        for (std::size_t j = 0; j < n; ++j) {
            q[j] = Pinv * g.p(orbit[j] + P * u[j]);
        }
        std::vector<Eigen::VectorXd> next(n, Eigen::VectorXd::Zero(k));
        for (std::size_t j = n - 1; j-- > 0;) {
            if (dp > 0) {
                next[j].head(dp) = plus_inv * (next[j + 1].head(dp) - q[j].head(dp));
            }
        }
        for (std::size_t j = 0; j + 1 < n; ++j) {
            if (dm > 0) {
                next[j + 1].tail(dm) = s.block_minus * next[j].tail(dm) + q[j].tail(dm);
            }
        }
        double change = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            change = std::max(change, (next[j] - u[j]).cwiseAbs().maxCoeff());
        }
        u = std::move(next);
        if (change < params.tol) {
            break;
        }
    }
    Eigen::VectorXd h = orbit[static_cast<std::size_t>(J)] + P * u[static_cast<std::size_t>(J)];
    for (Eigen::Index i = 0; i < k; ++i) {
        h(i) = wrap(h(i));
    }
    return h;
}

// ----------------------------------------------------------------- reports

nlohmann::json verify_conjugacy(const ConjugacyMap& h, const std::vector<std::vector<double>>& h_of_x,
                                const std::vector<std::vector<double>>& h_of_sigma_x)
{
    if (h_of_x.size() != h_of_sigma_x.size()) {
        throw DomainError("verify_conjugacy: sample lists differ in length");
    }
    double max_res = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < h_of_x.size(); ++i) {
        const double r = h.distance(h_of_sigma_x[i], h.target_map(h_of_x[i]));
        max_res = std::max(max_res, r);
        total += r;
    }
    const std::size_t m = std::min<std::size_t>(h_of_x.size(), 200);
    double min_image = std::numeric_limits<double>::infinity();
    std::size_t collisions = 0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = h.distance(h_of_x[i], h_of_x[j]);
            min_image = std::min(min_image, d);
            collisions += d < 1e-12 ? 1 : 0;
            ++pairs;
        }
    }
    const bool passed = max_res <= h.tolerance;
    return {{"source", h.source},
            {"target", h.target},
            {"depth", h.depth},
            {"tolerance", h.tolerance},
            {"samples", h_of_x.size()},
            {"max_residual", max_res},
            {"mean_residual", h_of_x.empty() ? 0.0 : total / static_cast<double>(h_of_x.size())},
            {"passed", passed},
            {"flagged", !passed},
            {"injectivity",
             {{"pairs", pairs}, {"min_image_distance", pairs ? min_image : 0.0}, {"collisions", collisions}}}};
}

nlohmann::json smale_conjugacy_report(const SmaleSystem& sys, std::size_t depth, std::size_t samples,
                                      std::uint64_t seed, double tolerance)
{
    sys.validate();
    const auto A = make_matrix({{2}});
    std::mt19937_64 rng(seed);
    auto as_vec = [](const SmalePoint& p) { return std::vector<double>{p.t, p.z.real(), p.z.imag()}; };
    auto from_vec = [](const std::vector<double>& v) { return SmalePoint{v[0], {v[1], v[2]}}; };
    std::vector<std::vector<double>> hx;
    std::vector<std::vector<double>> hsx;
    // distinct samples for the injectivity proxy
    std::vector<SolenoidPoint> pts;
    while (pts.size() < samples) {
        SolenoidPoint xi = random_point(A, rng, 30, 3);
        bool fresh = true;
        for (std::size_t i = 0; i < pts.size() && i < 200 && fresh; ++i) {
            fresh = compare(pts[i], xi) == Tri::Different;
        }
        if (fresh) {
            pts.push_back(std::move(xi));
        }
    }
    for (const auto& xi : pts) {
        hx.push_back(as_vec(solenoid_to_attractor(sys, xi, depth)));
        hsx.push_back(as_vec(solenoid_to_attractor(sys, shift(xi), depth)));
    }
    ConjugacyMap h;
    h.source = "dyadic solenoid shift";
    h.target = "Smale solid-torus map";
    h.depth = depth;
    h.tolerance = tolerance;
    h.target_map = [sys, as_vec, from_vec](const std::vector<double>& v) { return as_vec(smale_step(sys, from_vec(v))); };
    h.distance = [from_vec](const std::vector<double>& a, const std::vector<double>& b) {
        return smale_distance(from_vec(a), from_vec(b));
    };
    auto report = verify_conjugacy(h, hx, hsx);
    report["seed"] = seed;
    report["lambda_c"] = sys.lambda_c;
    report["c_off"] = sys.c_off;
    report["error_bound"] = 2.0 * std::pow(sys.lambda_c, static_cast<double>(depth));
    return report;
}

nlohmann::json toral_conjugacy_report(const IntMatrix& A, const TorusPerturbation& g, std::size_t samples,
                                      std::uint64_t seed, double tolerance, const ToralConjugacyParams& params)
{
    std::mt19937_64 rng(seed);
    const std::size_t k = A.dim();
    auto to_vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    auto to_eigen = [](const std::vector<double>& v) {
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    };
    std::vector<std::vector<double>> hx;
    std::vector<std::vector<double>> hsx;
    double displacement = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        RatVec c;
        for (std::size_t d = 0; d < k; ++d) {
            const long long den = uniform_int(rng, 1000, 1000000);
            c.emplace_back(Integer(uniform_int(rng, 0, den - 1)), Integer(den));
        }
        const TorusPoint x(c);
        const Eigen::VectorXd h = perturbed_anosov_conjugacy(A, g, x, params);
        Eigen::VectorXd xd(static_cast<Eigen::Index>(k));
        for (std::size_t d = 0; d < k; ++d) {
            xd(static_cast<Eigen::Index>(d)) = c[d].convert_to<double>();
        }
        displacement = std::max(displacement, torus_distance(h, xd));
        hx.push_back(to_vec(h));
        hsx.push_back(to_vec(perturbed_anosov_conjugacy(A, g, apply(A, x), params)));
    }
    ConjugacyMap h;
    h.source = "linear toral automorphism " + A.to_string();
    h.target = "perturbed toral map";
    h.depth = params.window;
    h.tolerance = tolerance;
    h.target_map = [&A, &g, to_vec, to_eigen](const std::vector<double>& v) {
        return to_vec(perturbed_step(A, g, to_eigen(v)));
    };
    h.distance = [to_eigen](const std::vector<double>& a, const std::vector<double>& b) {
        return torus_distance(to_eigen(a), to_eigen(b));
    };
    auto report = verify_conjugacy(h, hx, hsx);
    const auto s = splitting(A);
    report["seed"] = seed;
    report["sup_displacement"] = displacement;
    report["displacement_bound"] = g.sup_norm * (1.0 / (s.mu - 1.0) + 1.0 / (1.0 - s.lambda));
    report["contraction_factor"] = conjugacy_contraction_factor(A, g);
    return report;
}

}  // namespace hypsol
