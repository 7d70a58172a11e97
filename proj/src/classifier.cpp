#include "hypsol/classifier.hpp"

#include "hypsol/random.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>

namespace hypsol {

namespace {

constexpr double kTwoPi = 2.0 * boost::math::constants::pi<double>();

double wrap(double t)
{
    t -= std::floor(t);
    return t >= 1.0 ? 0.0 : t;
}

bool in_unit_interval(double t)
{
    return t >= 0.0 && t < 1.0;
}

}  // namespace

// -------------------------------------------------------------- decision table

std::string classify(int dim_lambda, int dim_eu)
{
    if (dim_lambda < 0 || dim_lambda > 3) {
        throw InvalidCombination("invalid-combination: dim Lambda must lie in 0..3, got " + std::to_string(dim_lambda));
    }
    if (dim_eu < 0) {
        throw InvalidCombination("invalid-combination: dim E^u must be nonnegative");
    }
    if (dim_eu > dim_lambda) {
        throw InvalidCombination("invalid-combination: dim E^u = " + std::to_string(dim_eu) +
                                 " exceeds dim Lambda = " + std::to_string(dim_lambda) +
                                 "; unstable manifolds lie inside the attractor");
    }
    if (dim_eu == 0 && dim_lambda >= 1) {
        throw InvalidCombination("invalid-combination: dim E^u = 0 forces every point to be periodic and isolated "
                                 "in Lambda, so a connected attractor has dim Lambda = 0");
    }
    if (dim_lambda == 1 && dim_eu != 1) {
        throw InvalidCombination("invalid-combination: a one-dimensional attractor is expanding with dim E^u = 1");
    }
    switch (dim_lambda) {
    case 0:
        return "attracting-fixed-point";
    case 1:
        return "generalized-1-solenoid";
    case 2:
        return dim_eu == 1 ? "torus-T2-automorphism" : "codim1-expanding";
    default:
        return "anosov-T3";
    }
}

std::vector<ClassTableEntry> classify_table()
{
    std::vector<ClassTableEntry> out;
    for (int l = 0; l <= 3; ++l) {
        for (int u = 0; u <= 2; ++u) {
            try {
                out.push_back({l, u, classify(l, u), ""});
            } catch (const InvalidCombination& e) {
                out.push_back({l, u, "invalid-combination", e.what()});
            }
        }
    }
    return out;
}

// -------------------------------------------------------------------- specs

std::size_t MapSpec::ambient_dim() const
{
    if (builtin == "smale_solenoid") {
        return 3;
    }
    if (builtin == "toral_auto" || builtin == "perturbed_toral") {
        return matrix.size();
    }
    if (builtin == "toral_times_contraction") {
        return matrix.size() + 1;
    }
    if (builtin == "fixed_point_sink") {
        return sink_rates.size();
    }
    throw DomainError("unknown builtin '" + builtin + "'");
}

nlohmann::json MapSpec::to_json() const
{
    nlohmann::json params = nlohmann::json::object();
    if (builtin == "smale_solenoid") {
        params = {{"lambda_c", lambda_c}, {"c_off", c_off}};
    } else if (builtin == "toral_auto") {
        params = {{"matrix", matrix}};
    } else if (builtin == "toral_times_contraction") {
        params = {{"matrix", matrix}, {"rate", rate}};
    } else if (builtin == "fixed_point_sink") {
        params = {{"rates", sink_rates}};
    } else if (builtin == "perturbed_toral") {
        params = {{"matrix", matrix}, {"eps", eps}};
    }
    return {{"builtin", builtin}, {"params", params}, {"ambient_dim", ambient_dim()}};
}

void validate(const MapSpec& spec)
{
    auto check_matrix = [&](std::size_t max_dim) {
        if (spec.matrix.empty() || spec.matrix.size() > max_dim) {
            throw DomainError(spec.builtin + ": matrix must be k x k with 1 <= k <= " + std::to_string(max_dim));
        }
        const IntMatrix A = IntMatrix::from_rows(spec.matrix);
        if (!check_hyperbolic(A).is_hyperbolic) {
            throw DomainError(spec.builtin + ": matrix " + A.to_string() + " is not hyperbolic");
        }
        if (boost::multiprecision::abs(A.det()) != 1) {
            throw DomainError(spec.builtin + ": matrix " + A.to_string() + " is not invertible over the integers");
        }
    };
    if (spec.builtin == "smale_solenoid") {
        if (!(spec.lambda_c > 0.0 && spec.lambda_c < 0.5) || !(spec.lambda_c < spec.c_off) ||
            spec.lambda_c + spec.c_off > 1.0) {
            throw DomainError("smale_solenoid: need 0 < lambda_c < 1/2, lambda_c < c_off, lambda_c + c_off <= 1");
        }
    } else if (spec.builtin == "toral_auto") {
        check_matrix(3);
    } else if (spec.builtin == "toral_times_contraction") {
        check_matrix(3);
        if (!(spec.rate > 0.0 && spec.rate < 1.0)) {
            throw DomainError("toral_times_contraction: contraction rate must lie in (0, 1)");
        }
    } else if (spec.builtin == "fixed_point_sink") {
        if (spec.sink_rates.empty() || spec.sink_rates.size() > 4) {
            throw DomainError("fixed_point_sink: need 1 to 4 rates");
        }
        for (double r : spec.sink_rates) {
            if (!(r > 0.0 && r < 1.0)) {
                throw DomainError("fixed_point_sink: contraction rates must lie in (0, 1)");
            }
        }
    } else if (spec.builtin == "perturbed_toral") {
        check_matrix(2);
        if (spec.matrix.size() != 2) {
            throw DomainError("perturbed_toral: matrix must be 2 x 2");
        }
        if (!(std::fabs(spec.eps) <= 0.2)) {
            throw DomainError("perturbed_toral: |eps| must not exceed 0.2");
        }
    } else {
        throw DomainError("unknown builtin '" + spec.builtin +
                          "'; expected smale_solenoid, toral_auto, toral_times_contraction, fixed_point_sink or "
                          "perturbed_toral");
    }
}

MapSpec map_spec_from_json(const nlohmann::json& j)
{
    MapSpec spec;
    try {
        spec.builtin = j.at("builtin").get<std::string>();
        const nlohmann::json params = j.contains("params") ? j.at("params") : nlohmann::json::object();
        auto matrix_or = [&](std::vector<std::vector<long long>> fallback) {
            return params.contains("matrix") ? params.at("matrix").get<std::vector<std::vector<long long>>>()
                                             : fallback;
        };
        if (spec.builtin == "smale_solenoid") {
            spec.lambda_c = params.value("lambda_c", 0.25);
            spec.c_off = params.value("c_off", 0.5);
        } else if (spec.builtin == "toral_auto") {
            spec.matrix = matrix_or({{2, 1}, {1, 1}});
        } else if (spec.builtin == "toral_times_contraction") {
            spec.matrix = matrix_or({{2, 1}, {1, 1}});
            spec.rate = params.value("rate", 0.5);
        } else if (spec.builtin == "fixed_point_sink") {
            spec.sink_rates = params.value("rates", std::vector<double>{0.5, 0.5, 0.5});
        } else if (spec.builtin == "perturbed_toral") {
            spec.matrix = matrix_or({{2, 1}, {1, 1}});
            spec.eps = params.value("eps", 0.05);
        }
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed map spec: ") + e.what());
    }
    validate(spec);
    return spec;
}

// --------------------------------------------------------------------- maps

DynamicalMap make_map(const MapSpec& spec)
{
    validate(spec);
    DynamicalMap m;
    m.dim = spec.ambient_dim();
    const auto d = static_cast<Eigen::Index>(m.dim);
    if (spec.builtin == "smale_solenoid") {
        const double l = spec.lambda_c;
        const double c = spec.c_off;
        m.step = [l, c](const Eigen::VectorXd& x) {
            Eigen::VectorXd y(3);
            y << wrap(2.0 * x(0)), l * x(1) + c * std::cos(kTwoPi * x(0)), l * x(2) + c * std::sin(kTwoPi * x(0));
            return y;
        };
        // doubling drops the lowest mantissa bit; put a random one back
        m.orbit_step = [step = m.step](const Eigen::VectorXd& x, std::mt19937_64& rng) {
            Eigen::VectorXd y = step(x);
            y(0) = wrap(y(0) + uniform01(rng) * 0x1.0p-52);
            return y;
        };
        m.jacobian = [l, c](const Eigen::VectorXd& x) {
            Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3, 3);
            J(0, 0) = 2.0;
            J(1, 0) = -kTwoPi * c * std::sin(kTwoPi * x(0));
            J(2, 0) = kTwoPi * c * std::cos(kTwoPi * x(0));
            J(1, 1) = l;
            J(2, 2) = l;
            return J;
        };
        m.initial = [](std::mt19937_64& rng) {
            Eigen::VectorXd x(3);
            double a = 0.0;
            double b = 0.0;
            do {
                a = uniform(rng, -1.0, 1.0);
                b = uniform(rng, -1.0, 1.0);
            } while (a * a + b * b > 1.0);
            x << uniform01(rng), a, b;
            return x;
        };
        m.in_bounds = [](const Eigen::VectorXd& x) {
            return in_unit_interval(x(0)) && x(1) * x(1) + x(2) * x(2) <= 1.0 + 1e-9;
        };
    } else if (spec.builtin == "toral_auto" || spec.builtin == "perturbed_toral") {
        const Eigen::MatrixXd A = IntMatrix::from_rows(spec.matrix).to_eigen();
        const double eps = spec.builtin == "perturbed_toral" ? spec.eps : 0.0;
        m.step = [A, eps](const Eigen::VectorXd& x) {
            Eigen::VectorXd y = A * x;
            if (eps != 0.0) {
                y(0) += eps * std::sin(kTwoPi * x(1)) / kTwoPi;
            }
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                y(i) = wrap(y(i));
            }
            return y;
        };
        m.jacobian = [A, eps](const Eigen::VectorXd& x) {
            Eigen::MatrixXd J = A;
            if (eps != 0.0) {
                J(0, 1) += eps * std::cos(kTwoPi * x(1));
            }
            return J;
        };
        m.initial = [d](std::mt19937_64& rng) {
            Eigen::VectorXd x(d);
            for (Eigen::Index i = 0; i < d; ++i) {
                x(i) = uniform01(rng);
            }
            return x;
        };
        m.in_bounds = [](const Eigen::VectorXd& x) {
            return std::all_of(x.data(), x.data() + x.size(), in_unit_interval);
        };
    } else if (spec.builtin == "toral_times_contraction") {
        const Eigen::MatrixXd A = IntMatrix::from_rows(spec.matrix).to_eigen();
        const Eigen::Index k = A.rows();
        const double r = spec.rate;
        m.step = [A, k, r](const Eigen::VectorXd& x) {
            Eigen::VectorXd y(k + 1);
            y.head(k) = A * x.head(k);
            for (Eigen::Index i = 0; i < k; ++i) {
                y(i) = wrap(y(i));
            }
            y(k) = r * x(k);
            if (std::fabs(y(k)) < std::numeric_limits<double>::min()) {
                y(k) = 0.0;  // flush subnormals so the fiber settles on a single cell
            }
            return y;
        };
        m.jacobian = [A, k, r](const Eigen::VectorXd&) {
            Eigen::MatrixXd J = Eigen::MatrixXd::Zero(k + 1, k + 1);
            J.topLeftCorner(k, k) = A;
            J(k, k) = r;
            return J;
        };
        m.initial = [k](std::mt19937_64& rng) {
            Eigen::VectorXd x(k + 1);
            for (Eigen::Index i = 0; i < k; ++i) {
                x(i) = uniform01(rng);
            }
            x(k) = uniform(rng, -1.0, 1.0);
            return x;
        };
        m.in_bounds = [k](const Eigen::VectorXd& x) {
            return std::all_of(x.data(), x.data() + k, in_unit_interval) && std::fabs(x(k)) <= 1.0;
        };
    } else {
        // fixed_point_sink: contraction toward (1/2, ..., 1/2)
        Eigen::VectorXd rates(d);
        for (Eigen::Index i = 0; i < d; ++i) {
            rates(i) = spec.sink_rates[static_cast<std::size_t>(i)];
        }
        const Eigen::VectorXd p = Eigen::VectorXd::Constant(d, 0.5);
        m.step = [rates, p](const Eigen::VectorXd& x) { return Eigen::VectorXd(p + rates.cwiseProduct(x - p)); };
        m.jacobian = [rates](const Eigen::VectorXd&) { return Eigen::MatrixXd(rates.asDiagonal()); };
        m.initial = [d](std::mt19937_64& rng) {
            Eigen::VectorXd x(d);
            for (Eigen::Index i = 0; i < d; ++i) {
                x(i) = uniform01(rng);
            }
            return x;
        };
        m.in_bounds = [](const Eigen::VectorXd& x) { return x.cwiseAbs().maxCoeff() <= 10.0; };
    }
    if (!m.orbit_step) {
        m.orbit_step = [step = m.step](const Eigen::VectorXd& x, std::mt19937_64&) { return step(x); };
    }
    return m;
}

OrbitCloud generate_orbit(const MapSpec& spec, std::size_t transient, std::size_t count, std::uint64_t seed)
{
    if (count < 1) {
        throw DomainError("generate_orbit: count must be at least 1");
    }
    const DynamicalMap m = make_map(spec);
    std::mt19937_64 rng(seed);
    Eigen::VectorXd x = m.initial(rng);
    OrbitCloud cloud;
    cloud.transient = transient;
    cloud.seed = seed;
    cloud.points.reserve(count);
    for (std::size_t i = 0; i < transient + count; ++i) {
        x = m.orbit_step(x, rng);
        if (!x.allFinite() || !m.in_bounds(x)) {
            throw DomainError("generate_orbit: iterate " + std::to_string(i + 1) + " of " + spec.builtin +
                              " left the ambient bounds");
        }
        if (i >= transient) {
            cloud.points.push_back(x);
        }
    }
    return cloud;
}

std::string cloud_csv(const OrbitCloud& cloud)
{
    std::ostringstream os;
    os.precision(17);
    if (!cloud.points.empty()) {
        for (Eigen::Index i = 0; i < cloud.points.front().size(); ++i) {
            os << (i ? ",x" : "x") << i;
        }
        os << '\n';
    }
    for (const auto& p : cloud.points) {
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            os << (i ? "," : "") << p(i);
        }
        os << '\n';
    }
    return os.str();
}

double cloud_diameter(const OrbitCloud& cloud)
{
    if (cloud.points.empty()) {
        return 0.0;
    }
    // bounding-box diagonal: within a factor sqrt(dim) of the true diameter
    Eigen::VectorXd lo = cloud.points.front();
    Eigen::VectorXd hi = lo;
    for (const auto& p : cloud.points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

// ----------------------------------------------------------- box counting

BoxDimension box_counting_dimension(const OrbitCloud& cloud, int level_min, int level_max, double r2_min)
{
    if (level_max - level_min < 1) {
        throw DomainError("box_counting_dimension: need at least two dyadic levels");
    }
    if (level_min < 0 || level_max > 40) {
        throw DomainError("box_counting_dimension: levels must lie in 0..40");
    }
    if (cloud.points.empty()) {
        throw DomainError("box_counting_dimension: empty cloud");
    }
    const auto dim = cloud.points.front().size();
    if (dim > 4) {
        throw DomainError("box_counting_dimension: at most 4 coordinates supported");
    }
    BoxDimension out;
    std::vector<double> xs;
    std::vector<double> ys;
    // grid anchored at the lower corner of the bounding box
    Eigen::VectorXd lo = cloud.points.front();
    for (const auto& p : cloud.points) {
        lo = lo.cwiseMin(p);
    }
    std::vector<std::array<long long, 4>> cells(cloud.points.size());
    for (int l = level_min; l <= level_max; ++l) {
        const double scale = std::ldexp(1.0, l);
        for (std::size_t i = 0; i < cloud.points.size(); ++i) {
            std::array<long long, 4> c{0, 0, 0, 0};
            for (Eigen::Index d = 0; d < dim; ++d) {
                c[static_cast<std::size_t>(d)] = static_cast<long long>(std::floor((cloud.points[i](d) - lo(d)) * scale));
            }
            cells[i] = c;
        }
        std::sort(cells.begin(), cells.end());
        const auto n = static_cast<std::size_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
        out.levels.push_back(l);
        out.counts.push_back(n);
        xs.push_back(l * std::log(2.0));
        ys.push_back(std::log(static_cast<double>(n)));
    }
    const double m = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    out.estimate = sxy / sxx;
    if (syy == 0.0) {
        out.r2 = 1.0;  // constant counts fit a zero slope exactly
    } else {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double fit = my + out.estimate * (xs[i] - mx);
            ss_res += (ys[i] - fit) * (ys[i] - fit);
        }
        out.r2 = 1.0 - ss_res / syy;
    }
    out.flagged = out.r2 < r2_min;
    return out;
}

// --------------------------------------------------------------- Lyapunov

LyapunovSpectrum lyapunov_spectrum(const MapSpec& spec, std::size_t steps, std::uint64_t seed, std::size_t transient)
{
    if (steps < 1) {
        throw DomainError("lyapunov_spectrum: steps must be at least 1");
    }
    const DynamicalMap m = make_map(spec);
    const auto d = static_cast<Eigen::Index>(m.dim);
    LyapunovSpectrum out;
    out.steps = steps;
    for (std::size_t attempt = 0; attempt < 5; ++attempt) {
        std::mt19937_64 rng(seed + attempt);
        Eigen::VectorXd x = m.initial(rng);
        for (std::size_t i = 0; i < transient; ++i) {
            x = m.orbit_step(x, rng);
        }
        Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(d, d);
        Eigen::VectorXd sums = Eigen::VectorXd::Zero(d);
        bool degenerate = false;
        for (std::size_t i = 0; i < steps && !degenerate; ++i) {
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(m.jacobian(x) * Q);
            const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
            Q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
            for (Eigen::Index j = 0; j < d; ++j) {
                const double r = R(j, j);
                if (r == 0.0 || !std::isfinite(r)) {
                    degenerate = true;
                    break;
                }
                sums(j) += std::log(std::fabs(r));
            }
            x = m.orbit_step(x, rng);
        }
        if (degenerate) {
            ++out.restarts;
            continue;
        }
        out.exponents.assign(sums.data(), sums.data() + d);
        for (auto& e : out.exponents) {
            e /= static_cast<double>(steps);
        }
        std::sort(out.exponents.begin(), out.exponents.end(), std::greater<>());
        return out;
    }
    throw DomainError("lyapunov_spectrum: tangent frame degenerate after " + std::to_string(out.restarts) +
                      " restarts");
}

// ------------------------------------------------------------------ report

nlohmann::json ClassifierConfig::to_json() const
{
    return {{"seed", seed},
            {"transient", transient},
            {"count", count},
            {"lyapunov_steps", lyapunov_steps},
            {"box_level_min", box_level_min},
            {"box_level_max", box_level_max},
            {"exponent_margin", exponent_margin},
            {"cantor_threshold", cantor_threshold},
            {"r2_min", r2_min},
            {"sink_diameter", sink_diameter}};
}

ClassifierConfig classifier_config_from_json(const nlohmann::json& j, ClassifierConfig c)
{
    try {
        c.seed = j.value("seed", c.seed);
        c.transient = j.value("transient", c.transient);
        c.count = j.value("count", c.count);
        c.lyapunov_steps = j.value("lyapunov_steps", c.lyapunov_steps);
        c.box_level_min = j.value("box_level_min", c.box_level_min);
        c.box_level_max = j.value("box_level_max", c.box_level_max);
        c.exponent_margin = j.value("exponent_margin", c.exponent_margin);
        c.cantor_threshold = j.value("cantor_threshold", c.cantor_threshold);
        c.r2_min = j.value("r2_min", c.r2_min);
        c.sink_diameter = j.value("sink_diameter", c.sink_diameter);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed config: ") + e.what());
    }
    return c;
}

int topological_dimension(double box_estimate, int dim_eu, bool collapsed, double cantor_threshold)
{
    if (collapsed) {
        return 0;
    }
    const double residual = box_estimate - dim_eu;
    const int s = residual < cantor_threshold ? 0 : static_cast<int>(std::lround(residual));
    return std::min(dim_eu + std::max(s, 0), 3);
}

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const InvalidCombination&) {
        throw;
    } catch (const std::exception& e) {
        throw DomainError(std::string("stage ") + name + ": " + e.what());
    }
}

}  // namespace

nlohmann::json report(const MapSpec& spec, const ClassifierConfig& config)
{
    stage("validate", [&] {
        validate(spec);
        return 0;
    });
    const OrbitCloud cloud =
        stage("generate_orbit", [&] { return generate_orbit(spec, config.transient, config.count, config.seed); });
    const BoxDimension box = stage("box_counting_dimension", [&] {
        return box_counting_dimension(cloud, config.box_level_min, config.box_level_max, config.r2_min);
    });
    const LyapunovSpectrum ly =
        stage("lyapunov_spectrum", [&] { return lyapunov_spectrum(spec, config.lyapunov_steps, config.seed); });

    const double diameter = cloud_diameter(cloud);
    const bool collapsed = diameter < config.sink_diameter;
    int dim_eu = 0;
    bool margin_ok = true;
    for (double e : ly.exponents) {
        dim_eu += e > config.exponent_margin ? 1 : 0;
        margin_ok = margin_ok && std::fabs(e) > config.exponent_margin;
    }
    const int dim_lambda = topological_dimension(box.estimate, dim_eu, collapsed, config.cantor_threshold);
    std::string label;
    std::string reason;
    try {
        label = classify(dim_lambda, dim_eu);
    } catch (const InvalidCombination& e) {
        label = "invalid-combination";
        reason = e.what();
    }
    // a collapsed cloud has no meaningful box fit
    const bool box_ok = collapsed || !box.flagged;
    const bool quality_ok = box_ok && margin_ok && label != "invalid-combination";

    double positive_sum = 0.0;
    for (double e : ly.exponents) {
        positive_sum += e > 0.0 ? e : 0.0;
    }
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["spec"] = spec.to_json();
    j["box_dimension"] = {{"estimate", box.estimate},
                          {"r2", box.r2},
                          {"flagged", box.flagged},
                          {"levels", box.levels},
                          {"counts", box.counts}};
    j["lyapunov"] = {{"exponents", ly.exponents},
                     {"steps", ly.steps},
                     {"restarts", ly.restarts},
                     {"entropy_estimate", positive_sum}};
    j["cloud"] = {{"count", cloud.points.size()}, {"transient", cloud.transient}, {"diameter", diameter},
                  {"collapsed", collapsed}};
    j["dim_Eu"] = dim_eu;
    j["dim_Lambda"] = dim_lambda;
    j["class_label"] = label;
    if (!reason.empty()) {
        j["class_reason"] = reason;
    }
    j["quality"] = {{"box_fit_ok", box_ok}, {"exponent_margin_ok", margin_ok}};
    j["quality_ok"] = quality_ok;
    j["provenance"] = {{"config", config.to_json()},
                       {"seeds", {{"orbit", config.seed}, {"lyapunov", config.seed}}},
                       {"rounding_rule",
                        "dim_Lambda = dim_Eu + s; s = 0 if box - dim_Eu < cantor_threshold else round(box - dim_Eu); "
                        "capped at 3; collapsed cloud gives 0"}};
    return j;
}

std::vector<nlohmann::json> report_all(const std::vector<MapSpec>& specs, const ClassifierConfig& config)
{
    std::vector<std::future<nlohmann::json>> jobs;
    jobs.reserve(specs.size());
    for (const auto& s : specs) {
        jobs.push_back(std::async(std::launch::async, [&s, &config] { return report(s, config); }));
    }
    std::vector<nlohmann::json> out;
    out.reserve(jobs.size());
    for (auto& f : jobs) {
        out.push_back(f.get());
    }
    return out;
}

}  // namespace hypsol
