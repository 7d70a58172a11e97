// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "hypsol/classifier.hpp"
#include "hypsol/conjugacy.hpp"
#include "hypsol/cover.hpp"
#include "hypsol/mme.hpp"
#include "hypsol/shadowing.hpp"
#include "hypsol/solenoid.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace hypsol;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

class Timer {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void emit(int n, Outcome& o, double seconds)
{
    std::printf("criterion %d: %s (%.1f s)%s\n", n, o.pass ? "PASS" : "FAIL", seconds, o.detail.str().c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
}

std::size_t failed_checks(const nlohmann::json& report)
{
    std::size_t bad = 0;
    for (const auto& id : report["identities"]) {
        bad += id["status"] == "pass" ? 0 : 1;
    }
    return bad;
}

void exact_algebra()
{
    Timer t;
    Outcome o;
    std::size_t identities = 0;
    for (const auto& A : {make_matrix({{2}}), make_matrix({{2, 1}, {1, 1}})}) {
        const auto laws = verify_solenoid_laws(A, 1000, 101);
        const auto cover = verify_cover_identities(A, 1000, 101);
        identities += laws["identities"].size() + cover["identities"].size();
        o.require(laws["all_passed"].get<bool>(), "solenoid laws for " + A->to_string());
        o.require(cover["all_passed"].get<bool>(), "cover identities for " + A->to_string());
        o.require(cover["identities"].size() == 8, "eight cover identities");
        o.require(failed_checks(laws) + failed_checks(cover) == 0, "zero failures");
    }
    const double s = t.seconds();
    o.require(s < 60.0, "under 60 s");
    o.detail << " identities=" << identities << " samples=1000 per matrix";
    emit(1, o, s);
}

void metric_laws()
{
    Timer t;
    Outcome o;
    std::size_t resolved = 0;
    for (const auto& A : {make_matrix({{2}}), make_matrix({{2, 1}, {1, 1}})}) {
        const auto r = verify_metric_laws(A, 200, 202);
        o.require(r["all_passed"].get<bool>(), "metric laws for " + A->to_string());
        resolved += r["resolved_pairs"].get<std::size_t>();
    }
    o.require(resolved > 0, "some pairs resolved");
    const auto two = make_matrix({{2}});
    const SolenoidPoint e = SolenoidPoint::identity(two);
    const auto d1 = d_sigma(e, act(RatVec{Rational(1)}, e), 64);
    o.require(std::holds_alternative<Exact>(d1) && std::get<Exact>(d1).value == 1, "d(e, theta_1 e) = 1");
    o.require(std::holds_alternative<Infinite>(d_sigma(e, act(RatVec{Rational(1, 3)}, e), 64)),
              "d(e, theta_1/3 e) infinite");
    o.detail << " pairs=200 per matrix resolved=" << resolved;
    emit(2, o, t.seconds());
}

void shadowing()
{
    Timer t;
    Outcome o;
    const auto lt = linear_toral_system(IntMatrix::from_rows({{2, 1}, {1, 1}}));
    const auto& sys = lt.system;
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto random_point = [&] { return lt.from_ambient(RVec{Real(u(rng)), Real(u(rng))}); };
    const double L = 0.01;
    double worst_ratio = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto r = shadow(sys, jittered_orbit(sys, random_point(), 50, L, rng));
        worst_ratio = std::max(worst_ratio, r.achieved_sup / L);
        o.require(r.achieved_sup <= 2.236 * L + 1e-6, "sup residual within 2.236 L");
    }
    double worst_zero = 0.0;
    for (int i = 0; i < 20; ++i) {
        const ProductPoint x = random_point();
        const auto r = shadow(sys, jittered_orbit(sys, x, 50, 0.0, rng));
        worst_zero = std::max(worst_zero, sys.distance(r.point, x).convert_to<double>());
    }
    o.require(worst_zero <= 1e-10, "L = 0 recovers x0");
    // adversarial pairs: offsets at the extremes allowed by the window
    std::uniform_real_distribution<double> s(-1.0, 1.0);
    std::size_t pairs = 0;
    for (unsigned N : {2u, 5u, 10u, 20u}) {
        for (int i = 0; i < 50; ++i) {
            const ProductPoint x = random_point();
            ProductPoint y = x;
            y.base[0] += Real(0.1 * std::pow(sys.mu, -static_cast<double>(N)) * s(rng));
            y.fiber[0] += Real(0.1 * std::pow(sys.lambda, static_cast<double>(N)) * s(rng));
            ProductPoint fx = x;
            ProductPoint fy = y;
            ProductPoint bx = x;
            ProductPoint by = y;
            double C = sys.distance(x, y).convert_to<double>();
            for (unsigned j = 0; j < N; ++j) {
                fx = sys.step(fx);
                fy = sys.step(fy);
                bx = sys.step_inverse(bx);
                by = sys.step_inverse(by);
                C = std::max({C, sys.distance(fx, fy).convert_to<double>(), sys.distance(bx, by).convert_to<double>()});
            }
            const double eps = uniqueness_epsilon(C, sys.c, holonomy_bound_K(sys, C), sys.lambda, sys.mu, N);
            o.require(sys.distance(x, y).convert_to<double>() <= eps * (1 + 1e-9), "uniqueness bound");
            ++pairs;
        }
    }
    const double sec = t.seconds();
    o.require(sec < 30.0, "under 30 s");
    o.detail << " worst sup/L=" << worst_ratio << " L0 error=" << worst_zero << " adversarial pairs=" << pairs;
    emit(3, o, sec);
}

void smale_conjugacy()
{
    Timer t;
    Outcome o;
    const SmaleSystem sys;
    const auto r = smale_conjugacy_report(sys, 40, 500, 404, 1e-6);
    o.require(r["passed"].get<bool>() && r["max_residual"].get<double>() <= 1e-6, "residual within 1e-6");
    const SmalePoint fixed = solenoid_to_attractor(sys, SolenoidPoint::identity(make_matrix({{2}})), 40);
    const double err = std::abs(fixed.t) + std::abs(fixed.z - 2.0 / 3.0);
    o.require(err <= 1e-9, "fixed point maps to (0, 2/3)");
    o.detail << " max residual=" << r["max_residual"].get<double>() << " fixed point error=" << err;
    emit(4, o, t.seconds());
}

void toral_conjugacy()
{
    Timer t;
    Outcome o;
    const IntMatrix A = IntMatrix::from_rows({{2, 1}, {1, 1}});
    ToralConjugacyParams params;
    params.window = 60;
    const auto r = toral_conjugacy_report(A, sine_shear_perturbation(0.05), 200, 505, 1e-6, params);
    o.require(r["passed"].get<bool>() && r["max_residual"].get<double>() <= 1e-6, "residual within 1e-6");
    const auto id = toral_conjugacy_report(A, zero_perturbation(2), 50, 505, 1e-10, params);
    o.require(id["sup_displacement"].get<double>() <= 1e-10, "eps = 0 gives the identity");
    o.detail << " max residual=" << r["max_residual"].get<double>()
             << " identity displacement=" << id["sup_displacement"].get<double>();
    emit(5, o, t.seconds());
}

bool rounds_to(double x, double shown)
{
    return std::fabs(x - shown) <= 5e-7;
}

void entropy()
{
    Timer t;
    Outcome o;
    const double cat = toral_entropy(IntMatrix::from_rows({{2, 1}, {1, 1}}));
    const double golden = entropy_sft(TransitionMatrix({{1, 1}, {1, 0}})).h;
    // the six-digit reference values are roundings of these closed forms
    o.require(std::fabs(cat - 2.0 * std::log(kPhi)) <= 1e-9 && rounds_to(cat, 0.962424), "toral entropy");
    o.require(std::fabs(golden - std::log(kPhi)) <= 1e-9 && rounds_to(golden, 0.481212), "golden mean entropy");
    MapSpec smale;
    smale.builtin = "smale_solenoid";
    const auto ly = lyapunov_spectrum(smale, 20000, 606);
    double positive = 0.0;
    for (double e : ly.exponents) {
        positive += std::max(e, 0.0);
    }
    o.require(std::fabs(positive - std::log(2.0)) <= 1e-3, "Smale Lyapunov entropy");
    char buf[160];
    std::snprintf(buf, sizeof buf, " toral=%.10f golden=%.10f smale=%.6f", cat, golden, positive);
    o.detail << buf;
    emit(6, o, t.seconds());
}

void measure_laws()
{
    Timer t;
    Outcome o;
    double worst = 0.0;
    std::size_t words = 0;
    for (const auto& T : {TransitionMatrix({{1, 1}, {1, 0}}), TransitionMatrix({{1, 1}, {1, 1}})}) {
        const auto p = entropy_sft(T);
        const double eh = std::exp(p.h);
        for (std::size_t len = 1; len <= 12; ++len) {
            for (const auto& w : admissible_words(T, len)) {
                ++words;
                const double weight = rs_unstable_weight(T, p, w);
                double children = 0.0;
                for (std::size_t s = 0; s < T.states(); ++s) {
                    if (T.allowed(w.back(), s)) {
                        Word x = w;
                        x.push_back(s);
                        children += rs_unstable_weight(T, p, x);
                    }
                }
                worst = std::max(worst, std::fabs(children - weight));
                if (w.size() >= 2) {
                    const Word tail(w.begin() + 1, w.end());
                    worst = std::max(worst, std::fabs(weight - rs_unstable_weight(T, p, tail) / eh));
                }
            }
        }
    }
    o.require(worst <= 1e-10, "additivity and pushforward");
    const auto T = TransitionMatrix({{1, 1}, {1, 0}});
    const auto p = entropy_sft(T);
    const double w0 = rs_unstable_weight(T, p, parse_word("0"));
    const double w01 = rs_unstable_weight(T, p, parse_word("00")) + rs_unstable_weight(T, p, parse_word("01"));
    o.require(std::fabs(w0 - kPhi) <= 1e-10 && std::fabs(w01 - kPhi) <= 1e-10, "golden mean weights");
    o.detail << " words=" << words << " worst deviation=" << worst;
    emit(7, o, t.seconds());
}

void unstable_length_laws()
{
    Timer t;
    Outcome o;
    const IntMatrix A = IntMatrix::from_rows({{2, 1}, {1, 1}});
    const double mu = kPhi * kPhi;
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst_cycle = 0.0;
    double worst_path = 0.0;
    double worst_ratio = 0.0;
    for (int i = 0; i < 500; ++i) {
        const Eigen::Vector2d a(u(rng), u(rng));
        const Eigen::Vector2d b(u(rng), u(rng));
        LinearModelPath g1{A, {a}};
        LinearModelPath g2{A, {a}};
        const std::size_t m1 = 1 + rng() % 6;
        const std::size_t m2 = 1 + rng() % 6;
        for (std::size_t j = 0; j < m1; ++j) {
            g1.vertices.emplace_back(Eigen::Vector2d(u(rng), u(rng)));
        }
        for (std::size_t j = 0; j < m2; ++j) {
            g2.vertices.emplace_back(Eigen::Vector2d(u(rng), u(rng)));
        }
        g1.vertices.push_back(b);
        g2.vertices.push_back(b);
        const double l1 = unstable_length(g1);
        const double l2 = unstable_length(g2);
        worst_path = std::max(worst_path, std::fabs(std::fabs(l1) - std::fabs(l2)));
        LinearModelPath cycle = g1;
        cycle.vertices.insert(cycle.vertices.end(), g2.vertices.rbegin() + 1, g2.vertices.rend());
        worst_cycle = std::max(worst_cycle, std::fabs(unstable_length(cycle)));
        const auto sc = unstable_length_scaling_check(g1);
        if (std::fabs(sc.original) > 1e-3) {
            worst_ratio = std::max(worst_ratio, std::fabs(sc.image / sc.original - mu));
        }
    }
    o.require(worst_cycle <= 1e-12, "cycle value 0");
    o.require(worst_path <= 1e-12, "path independence");
    o.require(worst_ratio <= 1e-10, "scaling ratio mu");
    o.detail << " paths=500 cycle=" << worst_cycle << " path=" << worst_path << " ratio=" << worst_ratio;
    emit(8, o, t.seconds());
}

void classifier()
{
    Timer t;
    Outcome o;
    const std::map<std::pair<int, int>, std::string> expected{
        {{0, 0}, "attracting-fixed-point"}, {{1, 1}, "generalized-1-solenoid"}, {{2, 1}, "torus-T2-automorphism"},
        {{2, 2}, "codim1-expanding"},       {{3, 1}, "anosov-T3"},              {{3, 2}, "anosov-T3"},
    };
    const auto table = classify_table();
    o.require(table.size() == 12, "12 table entries");
    for (const auto& e : table) {
        const auto it = expected.find({e.dim_lambda, e.dim_eu});
        const std::string want = it == expected.end() ? "invalid-combination" : it->second;
        o.require(e.label == want, "table entry (" + std::to_string(e.dim_lambda) + "," + std::to_string(e.dim_eu) + ")");
    }

    auto spec = [](const char* text) { return map_spec_from_json(nlohmann::json::parse(text)); };
    const std::vector<std::pair<MapSpec, std::string>> cases{
        {spec(R"({"builtin": "smale_solenoid"})"), "generalized-1-solenoid"},
        {spec(R"({"builtin": "toral_times_contraction"})"), "torus-T2-automorphism"},
        {spec(R"({"builtin": "toral_auto", "params": {"matrix": [[0, 1, 0], [0, 0, 1], [1, 1, 0]]}})"), "anosov-T3"},
        {spec(R"({"builtin": "fixed_point_sink"})"), "attracting-fixed-point"},
        {spec(R"({"builtin": "toral_auto"})"), "torus-T2-automorphism"},
    };
    std::vector<MapSpec> specs;
    for (const auto& c : cases) {
        specs.push_back(c.first);
    }
    const ClassifierConfig config;
    const auto reports = report_all(specs, config);
    for (std::size_t i = 0; i < cases.size(); ++i) {
        o.require(reports[i]["class_label"] == cases[i].second, cases[i].first.builtin + " label");
    }
    const double smale_box = reports[0]["box_dimension"]["estimate"].get<double>();
    const double cat_box = reports[4]["box_dimension"]["estimate"].get<double>();
    o.require(std::fabs(smale_box - 1.5) <= 0.15, "Smale box dimension");
    o.require(std::fabs(cat_box - 2.0) <= 0.1, "cat box dimension");

    auto exps = [&](std::size_t i) { return reports[i]["lyapunov"]["exponents"].get<std::vector<double>>(); };
    auto within = [](const std::vector<double>& got, const std::vector<double>& want, double tol) {
        if (got.size() != want.size()) {
            return false;
        }
        for (std::size_t k = 0; k < got.size(); ++k) {
            if (std::fabs(got[k] - want[k]) > tol) {
                return false;
            }
        }
        return true;
    };
    const double hc = 2.0 * std::log(kPhi);
    const double l2 = std::log(2.0);
    o.require(within(exps(4), {hc, -hc}, 1e-3), "cat exponents");
    o.require(within(exps(0), {l2, -2 * l2, -2 * l2}, 1e-2), "Smale exponents");
    o.require(within(exps(1), {hc, -l2, -hc}, 1e-2), "product exponents");
    const double sec = t.seconds();
    o.require(sec < 300.0, "under 5 min");
    char buf[200];
    std::snprintf(buf, sizeof buf, " smale box=%.3f cat box=%.3f 3x3 box=%.3f", smale_box, cat_box,
                  reports[2]["box_dimension"]["estimate"].get<double>());
    o.detail << buf;
    emit(9, o, sec);
}

}  // namespace

int main()
{
    const std::vector<void (*)()> criteria{exact_algebra, metric_laws,          shadowing,
                                           smale_conjugacy, toral_conjugacy,    entropy,
                                           measure_laws,  unstable_length_laws, classifier};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            std::printf("criterion %zu: FAIL (exception: %s)\n", i + 1, e.what());
            ++failures;
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
