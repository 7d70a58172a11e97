#include "hypsol/shadowing.hpp"

#include "hypsol/random.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>

namespace hypsol {

namespace {

Real norm(const RVec& v)
{
    Real s = 0;
    for (const auto& x : v) {
        s += x * x;
    }
    return sqrt(s);
}

RVec difference(const RVec& a, const RVec& b)
{
    RVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] - b[i];
    }
    return out;
}

RVec sum(const RVec& a, const RVec& b)
{
    RVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] + b[i];
    }
    return out;
}

Real euclidean(const RVec& a, const RVec& b)
{
    return norm(difference(a, b));
}

using RMat = std::vector<std::vector<Real>>;

RMat to_rmat(const Eigen::MatrixXd& m)
{
    RMat out(static_cast<std::size_t>(m.rows()), std::vector<Real>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
        }
    }
    return out;
}

RVec multiply(const RMat& m, const RVec& v)
{
    RVec out(m.size(), Real(0));
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            out[i] += m[i][j] * v[j];
        }
    }
    return out;
}

// Gauss-Jordan in Real, so that a block and its inverse agree to 50 digits.
RMat invert(RMat m)
{
    const std::size_t n = m.size();
    RMat inv(n, std::vector<Real>(n, Real(0)));
    for (std::size_t i = 0; i < n; ++i) {
        inv[i][i] = 1;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (abs(m[r][col]) > abs(m[piv][col])) {
                piv = r;
            }
        }
        if (m[piv][col] == 0) {
            throw DomainError("singular block in linear system");
        }
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        const Real p = m[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) {
                continue;
            }
            const Real f = m[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

RVec random_direction(std::mt19937_64& rng, std::size_t n)
{
    RVec v(n);
    Real s = 0;
    do {
        s = 0;
        for (auto& x : v) {
            x = uniform(rng, -1.0, 1.0);
            s += x * x;
        }
    } while (s == 0 || s > 1);
    const Real r = sqrt(s);
    for (auto& x : v) {
        x /= r;
    }
    return v;
}

RVec scaled(const RVec& v, const Real& s)
{
    RVec out(v);
    for (auto& x : out) {
        x *= s;
    }
    return out;
}

// True orbit over the window [-J', J'] built from the pseudo-orbit's ends.
std::vector<ProductPoint> shadow_orbit(const ProductHyperbolicSystem& sys, const PseudoOrbit& pseudo, long window)
{
    const std::size_t n = static_cast<std::size_t>(2 * window + 1);
    std::vector<ProductPoint> orbit(n);
    orbit[n - 1].base = pseudo.at(window).base;
    for (std::size_t i = n - 1; i-- > 0;) {
        orbit[i].base = sys.h1_inverse(orbit[i + 1].base);
    }
    orbit[0].fiber = pseudo.at(-window).fiber;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        orbit[i + 1].fiber = sys.h2(orbit[i].base, orbit[i].fiber);
    }
    return orbit;
}

}  // namespace

ProductPoint ProductHyperbolicSystem::step(const ProductPoint& x) const
{
    return ProductPoint{h1(x.base), h2(x.base, x.fiber)};
}

ProductPoint ProductHyperbolicSystem::step_inverse(const ProductPoint& x) const
{
    RVec b = h1_inverse(x.base);
    RVec f = h2_inverse(b, x.fiber);
    return ProductPoint{std::move(b), std::move(f)};
}

Real ProductHyperbolicSystem::distance(const ProductPoint& x, const ProductPoint& y) const
{
    return rho(x.base, y.base) + fiber_metric(x.base, x.fiber, y.fiber);
}

ProductPoint add(const ProductPoint& a, const ProductPoint& b)
{
    return ProductPoint{sum(a.base, b.base), sum(a.fiber, b.fiber)};
}

double pseudo_orbit_gap(const ProductHyperbolicSystem& sys, const PseudoOrbit& pseudo)
{
    Real gap = 0;
    for (std::size_t i = 0; i + 1 < pseudo.points.size(); ++i) {
        gap = std::max(gap, sys.distance(sys.step(pseudo.points[i]), pseudo.points[i + 1]));
    }
    return gap.convert_to<double>();
}

ShadowResult shadow(const ProductHyperbolicSystem& sys, const PseudoOrbit& pseudo, double tol)
{
    if (pseudo.points.empty() || pseudo.points.size() % 2 == 0) {
        throw DomainError("pseudo-orbit needs an odd number of points x_{-J}..x_J");
    }
    for (const auto& p : pseudo.points) {
        if (p.base.size() != sys.base_dim || p.fiber.size() != sys.fiber_dim) {
            throw DomainError("pseudo-orbit point has wrong dimensions for system " + sys.name);
        }
    }
    const long J = static_cast<long>(pseudo.half_window());
    ShadowResult r;
    r.orbit = shadow_orbit(sys, pseudo, J);
    r.point = r.orbit[static_cast<std::size_t>(J)];
    r.iterations = static_cast<std::size_t>(J);
    r.gap = pseudo_orbit_gap(sys, pseudo);
    r.bound = r.gap * (1.0 / (sys.mu - 1.0) + sys.c / (1.0 - sys.lambda));
    if (J > 0) {
        const auto shorter = shadow_orbit(sys, pseudo, J - 1);
        r.last_increment = sys.distance(r.point, shorter[static_cast<std::size_t>(J - 1)]).convert_to<double>();
    } else {
        r.last_increment = r.gap;
    }
    r.converged = r.last_increment < tol;
    Real sup = 0;
    for (long j = -J; j <= J; ++j) {
        const Real d = sys.distance(r.orbit[static_cast<std::size_t>(j + J)], pseudo.at(j));
        r.residuals.push_back(d.convert_to<double>());
        sup = std::max(sup, d);
    }
    r.achieved_sup = sup.convert_to<double>();
    return r;
}

double verify_shadow(const ProductHyperbolicSystem& sys, const PseudoOrbit& pseudo, const ProductPoint& candidate)
{
    const long J = static_cast<long>(pseudo.half_window());
    Real sup = sys.distance(candidate, pseudo.at(0));
    ProductPoint fwd = candidate;
    ProductPoint bwd = candidate;
    for (long j = 1; j <= J; ++j) {
        fwd = sys.step(fwd);
        bwd = sys.step_inverse(bwd);
        sup = std::max(sup, sys.distance(fwd, pseudo.at(j)));
        sup = std::max(sup, sys.distance(bwd, pseudo.at(-j)));
    }
    return sup.convert_to<double>();
}

double uniqueness_epsilon(double C, double c, double K, double lambda, double mu, unsigned N)
{
    if (!(mu > 1.0) || !(lambda > 0.0) || !(lambda < 1.0)) {
        throw DomainError("uniqueness_epsilon needs mu > 1 and 0 < lambda < 1");
    }
    return c * K * std::pow(lambda, N) + std::pow(mu, -static_cast<double>(N)) * C;
}

double holonomy_bound_K(const ProductHyperbolicSystem& sys, double C)
{
    if (sys.fiber_dim == 0) {
        return 0.0;
    }
    if (sys.fiber_diameter) {
        return *sys.fiber_diameter;
    }
    if (sys.quotient_fiber_diameter) {
        return std::max(C, *sys.quotient_fiber_diameter);
    }
    throw DomainError("holonomy_bound_K: system " + sys.name + " supplies no fiber diameter");
}

// ---------------------------------------------------------------- built-ins

ProductPoint LinearToralSystem::from_ambient(const RVec& x) const
{
    const RVec adapted = multiply(to_rmat(split.basis_inverse), x);
    const auto np = split.dim_plus();
    return ProductPoint{RVec(adapted.begin(), adapted.begin() + static_cast<long>(np)),
                        RVec(adapted.begin() + static_cast<long>(np), adapted.end())};
}

RVec LinearToralSystem::to_ambient(const ProductPoint& p) const
{
    RVec adapted = p.base;
    adapted.insert(adapted.end(), p.fiber.begin(), p.fiber.end());
    return multiply(to_rmat(split.basis), adapted);
}

ProductPoint LinearToralSystem::lattice_translation(const IntVec& n) const
{
    RVec x;
    for (const auto& v : n) {
        x.emplace_back(v.convert_to<double>());
    }
    return from_ambient(x);
}

LinearToralSystem linear_toral_system(const IntMatrix& A)
{
    LinearToralSystem lt{splitting(A), {}, A};
    const auto& s = lt.split;
    auto& sys = lt.system;
    sys.name = "linear_toral";
    sys.base_dim = s.dim_plus();
    sys.fiber_dim = s.dim_minus();
    sys.mu = s.mu;
    sys.lambda = s.dim_minus() > 0 ? s.lambda : 0.5;
    sys.c = 1.0;
    const RMat plus = to_rmat(s.block_plus);
    const RMat plus_inv = invert(plus);
    const RMat minus = to_rmat(s.block_minus);
    const RMat minus_inv = s.dim_minus() > 0 ? invert(minus) : RMat{};
    sys.h1 = [plus](const RVec& y) { return multiply(plus, y); };
    sys.h1_inverse = [plus_inv](const RVec& y) { return multiply(plus_inv, y); };
    sys.h2 = [minus](const RVec&, const RVec& z) { return multiply(minus, z); };
    sys.h2_inverse = [minus_inv](const RVec&, const RVec& z) { return multiply(minus_inv, z); };
    sys.rho = euclidean;
    sys.fiber_metric = [](const RVec&, const RVec& a, const RVec& b) { return euclidean(a, b); };

    // fiber projection of the unit cube: its diameter is attained at corners
    const auto k = static_cast<Eigen::Index>(A.dim());
    std::vector<Eigen::VectorXd> corners;
    for (unsigned mask = 0; mask < (1U << k); ++mask) {
        Eigen::VectorXd x(k);
        for (Eigen::Index i = 0; i < k; ++i) {
            x(i) = (mask >> i) & 1U;
        }
        corners.push_back(s.minus_coordinates(x));
    }
    double diam = 0.0;
    for (const auto& a : corners) {
        for (const auto& b : corners) {
            diam = std::max(diam, (a - b).norm());
        }
    }
    sys.quotient_fiber_diameter = diam;
    return lt;
}

ProductHyperbolicSystem dyadic_cover_system()
{
    ProductHyperbolicSystem sys;
    sys.name = "dyadic_cover";
    sys.base_dim = 1;
    sys.fiber_dim = 0;
    sys.mu = 2.0;
    sys.lambda = 0.5;
    sys.c = 1.0;
    sys.h1 = [](const RVec& y) { return RVec{2 * y[0]}; };
    sys.h1_inverse = [](const RVec& y) { return RVec{y[0] / 2}; };
    sys.h2 = [](const RVec&, const RVec&) { return RVec{}; };
    sys.h2_inverse = sys.h2;
    sys.rho = euclidean;
    sys.fiber_metric = [](const RVec&, const RVec&, const RVec&) { return Real(0); };
    sys.fiber_diameter = 0.0;
    return sys;
}

ProductHyperbolicSystem smale_cover_system(double lambda_c, double c_off)
{
    if (!(lambda_c > 0.0 && lambda_c < 1.0)) {
        throw DomainError("smale_cover_system: lambda_c must lie in (0, 1)");
    }
    ProductHyperbolicSystem sys;
    sys.name = "smale_cover";
    sys.base_dim = 1;
    sys.fiber_dim = 2;
    sys.mu = 2.0;
    sys.lambda = lambda_c;
    sys.c = 1.0;
    const Real two_pi = 2 * boost::math::constants::pi<Real>();
    const Real lc = lambda_c;
    const Real co = c_off;
    auto center = [two_pi, co](const RVec& t) {
        const Real f = t[0] - floor(t[0]);
        return RVec{co * cos(two_pi * f), co * sin(two_pi * f)};
    };
    sys.h1 = [](const RVec& t) { return RVec{2 * t[0]}; };
    sys.h1_inverse = [](const RVec& t) { return RVec{t[0] / 2}; };
    sys.h2 = [center, lc](const RVec& t, const RVec& z) {
        const RVec c = center(t);
        return RVec{lc * z[0] + c[0], lc * z[1] + c[1]};
    };
    sys.h2_inverse = [center, lc](const RVec& t, const RVec& z) {
        const RVec c = center(t);
        return RVec{(z[0] - c[0]) / lc, (z[1] - c[1]) / lc};
    };
    sys.rho = euclidean;
    sys.fiber_metric = [](const RVec&, const RVec& a, const RVec& b) { return euclidean(a, b); };
    sys.fiber_diameter = 2.0;
    return sys;
}

PseudoOrbit jittered_orbit(const ProductHyperbolicSystem& sys, const ProductPoint& x, std::size_t J, double L,
                           std::mt19937_64& rng)
{
    const std::size_t n = 2 * J + 1;
    PseudoOrbit p;
    p.points.resize(n);
    p.points[J] = x;
    auto jitter = [&]() {
        const Real size = L * uniform01(rng);
        const Real share = sys.fiber_dim == 0 ? 1.0 : uniform01(rng);
        ProductPoint d{scaled(random_direction(rng, sys.base_dim), size * share),
                       sys.fiber_dim == 0 ? RVec{} : scaled(random_direction(rng, sys.fiber_dim), size * (1 - share))};
        return d;
    };
    for (std::size_t i = J; i + 1 < n; ++i) {
        p.points[i + 1] = add(sys.step(p.points[i]), jitter());
    }
    // h(x_{j-1}) = x_j + delta
    for (std::size_t i = J; i-- > 0;) {
        p.points[i] = sys.step_inverse(add(p.points[i + 1], jitter()));
    }
    return p;
}

// -------------------------------------------------------------------- json

std::string to_decimal(const Real& x)
{
    return x.str(40);
}

nlohmann::json to_json(const ProductPoint& p)
{
    auto out = nlohmann::json::array();
    for (const auto& x : p.base) {
        out.push_back(to_decimal(x));
    }
    for (const auto& x : p.fiber) {
        out.push_back(to_decimal(x));
    }
    return out;
}

ProductPoint product_point_from_json(const nlohmann::json& j, std::size_t base_dim, std::size_t fiber_dim)
{
    if (!j.is_array() || j.size() != base_dim + fiber_dim) {
        throw DomainError("point must be an array of " + std::to_string(base_dim + fiber_dim) + " coordinates");
    }
    RVec all;
    for (const auto& x : j) {
        if (x.is_string()) {
            try {
                all.emplace_back(x.get<std::string>());
            } catch (const std::exception&) {
                throw DomainError("malformed decimal '" + x.get<std::string>() + "'");
            }
        } else if (x.is_number()) {
            all.emplace_back(x.get<double>());
        } else {
            throw DomainError("coordinates must be numbers or decimal strings");
        }
    }
    return ProductPoint{RVec(all.begin(), all.begin() + static_cast<long>(base_dim)),
                        RVec(all.begin() + static_cast<long>(base_dim), all.end())};
}

nlohmann::json to_json(const PseudoOrbit& p)
{
    auto out = nlohmann::json::array();
    for (const auto& x : p.points) {
        out.push_back(to_json(x));
    }
    return out;
}

PseudoOrbit pseudo_orbit_from_json(const nlohmann::json& j, std::size_t base_dim, std::size_t fiber_dim)
{
    const nlohmann::json& pts = j.is_object() ? j.at("points") : j;
    if (!pts.is_array()) {
        throw DomainError("pseudo-orbit must be an array of points");
    }
    PseudoOrbit p;
    for (const auto& x : pts) {
        p.points.push_back(product_point_from_json(x, base_dim, fiber_dim));
    }
    return p;
}

nlohmann::json to_json(const ShadowResult& r)
{
    return {{"point", to_json(r.point)},
            {"achieved_sup", r.achieved_sup},
            {"gap", r.gap},
            {"bound", r.bound},
            {"iterations", r.iterations},
            {"last_increment", r.last_increment},
            {"converged", r.converged},
            {"residuals", r.residuals}};
}

}  // namespace hypsol
