#include "hypsol/classifier.hpp"
#include "hypsol/conjugacy.hpp"
#include "hypsol/cover.hpp"
#include "hypsol/linalg_torus.hpp"
#include "hypsol/mme.hpp"
#include "hypsol/random.hpp"
#include "hypsol/shadowing.hpp"
#include "hypsol/solenoid.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using hypsol::DomainError;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kInvalidSpec = 2, kQualityFailure = 3 };

struct Globals {
    std::uint64_t seed = 1;
    std::string json_out;
    std::string config_path;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot read '" + path + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Inline JSON, or a path to a JSON file.
json parse_json_arg(const std::string& text, const char* what)
{
    const auto first = text.find_first_not_of(" \t\n");
    const bool inline_json = first != std::string::npos && (text[first] == '[' || text[first] == '{');
    try {
        return json::parse(inline_json ? text : read_file(text));
    } catch (const json::exception& e) {
        throw DomainError(std::string("malformed ") + what + ": " + e.what());
    }
}

std::vector<std::vector<long long>> parse_matrix(const std::string& text)
{
    const json j = parse_json_arg(text, "matrix");
    try {
        if (j.is_array() && !j.empty() && j.front().is_number()) {
            return {j.get<std::vector<long long>>()};
        }
        return j.get<std::vector<std::vector<long long>>>();
    } catch (const json::exception& e) {
        throw DomainError(std::string("matrix must be a list of integer rows: ") + e.what());
    }
}

json load_config(const Globals& g)
{
    if (g.config_path.empty()) {
        return json::object();
    }
    json c = parse_json_arg(g.config_path, "config");
    if (!c.is_object()) {
        throw DomainError("config must be a JSON object");
    }
    return c;
}

void emit(const Globals& g, const json& j)
{
    const std::string text = j.dump(2);
    std::cout << text << '\n';
    if (!g.json_out.empty()) {
        std::ofstream out(g.json_out);
        if (!out) {
            throw DomainError("cannot write '" + g.json_out + "'");
        }
        out << text << '\n';
    }
}

int verify_identities(const Globals& g, const std::string& matrix, std::size_t samples, std::size_t depth)
{
    const auto A = hypsol::make_matrix(parse_matrix(matrix));
    json out;
    out["solenoid"] = hypsol::verify_solenoid_laws(A, samples, g.seed, depth);
    out["metric"] = hypsol::verify_metric_laws(A, std::max<std::size_t>(samples / 5, 1), g.seed, depth);
    out["cover"] = hypsol::verify_cover_identities(A, samples, g.seed);
    const bool ok =
        out["solenoid"]["all_passed"].get<bool>() && out["metric"]["all_passed"].get<bool>() &&
        out["cover"]["all_passed"].get<bool>();
    out["all_passed"] = ok;
    emit(g, out);
    return ok ? kOk : kQualityFailure;
}

struct ShadowArgs {
    std::string system = "cat";
    std::string matrix = "[[2,1],[1,1]]";
    std::string pseudo_orbit;
    std::size_t window = 50;
    double jitter = 0.01;
    double tol = 1e-12;
};

int shadow_cmd(const Globals& g, const ShadowArgs& a)
{
    std::mt19937_64 rng(g.seed);
    hypsol::ProductHyperbolicSystem sys;
    hypsol::ProductPoint x0;
    if (a.system == "cat" || a.system == "toral") {
        const auto lts = hypsol::linear_toral_system(hypsol::IntMatrix::from_rows(parse_matrix(a.matrix)));
        sys = lts.system;
        hypsol::RVec amb;
        for (std::size_t i = 0; i < lts.A.dim(); ++i) {
            amb.push_back(hypsol::uniform01(rng));
        }
        x0 = lts.from_ambient(amb);
    } else if (a.system == "dyadic") {
        sys = hypsol::dyadic_cover_system();
        x0 = {{hypsol::uniform01(rng)}, {}};
    } else if (a.system == "smale") {
        sys = hypsol::smale_cover_system();
        x0 = {{hypsol::uniform01(rng)}, {0, 0}};
    } else {
        throw DomainError("unknown system '" + a.system + "'; expected toral, cat, dyadic or smale");
    }
    const hypsol::PseudoOrbit pseudo =
        a.pseudo_orbit.empty()
            ? hypsol::jittered_orbit(sys, x0, a.window, a.jitter, rng)
            : hypsol::pseudo_orbit_from_json(parse_json_arg(a.pseudo_orbit, "pseudo-orbit"), sys.base_dim,
                                             sys.fiber_dim);
    const auto r = hypsol::shadow(sys, pseudo, a.tol);
    json out = hypsol::to_json(r);
    out["system"] = sys.name;
    out["seed"] = g.seed;
    emit(g, out);
    return r.converged && r.achieved_sup <= r.bound + 1e-9 ? kOk : kQualityFailure;
}

struct ConjugacyArgs {
    std::string system = "smale";
    std::string matrix = "[[2,1],[1,1]]";
    std::size_t depth = 40;
    std::size_t samples = 500;
    std::size_t window = 60;
    double eps = 0.05;
    double lambda_c = 0.25;
    double c_off = 0.5;
    double tolerance = 1e-6;
};

int conjugacy_cmd(const Globals& g, const ConjugacyArgs& a)
{
    json out;
    if (a.system == "smale") {
        hypsol::SmaleSystem sys{a.lambda_c, a.c_off};
        sys.validate();
        out = hypsol::smale_conjugacy_report(sys, a.depth, a.samples, g.seed, a.tolerance);
    } else if (a.system == "toral") {
        hypsol::ToralConjugacyParams p;
        p.window = a.window;
        out = hypsol::toral_conjugacy_report(hypsol::IntMatrix::from_rows(parse_matrix(a.matrix)),
                                             hypsol::sine_shear_perturbation(a.eps), a.samples, g.seed,
                                             a.tolerance, p);
    } else {
        throw DomainError("unknown system '" + a.system + "'; expected smale or toral");
    }
    emit(g, out);
    return out.value("passed", false) ? kOk : kQualityFailure;
}

hypsol::TransitionMatrix transition_from_args(const std::string& transition, const std::string& adjacency)
{
    if (!transition.empty() && !adjacency.empty()) {
        throw DomainError("give either --transition or --adjacency, not both");
    }
    if (!adjacency.empty()) {
        return hypsol::TransitionMatrix::from_adjacency_json(parse_json_arg(adjacency, "adjacency list"));
    }
    const json j = parse_json_arg(transition, "transition matrix");
    try {
        return hypsol::TransitionMatrix(j.get<std::vector<std::vector<int>>>());
    } catch (const json::exception& e) {
        throw DomainError(std::string("transition matrix must be 0/1 rows: ") + e.what());
    }
}

int entropy_cmd(const Globals& g, const std::string& matrix, const std::string& transition,
                const std::string& adjacency)
{
    json out;
    if (!matrix.empty()) {
        const auto A = hypsol::IntMatrix::from_rows(parse_matrix(matrix));
        const auto hyp = hypsol::check_hyperbolic(A);
        out["kind"] = "toral";
        out["matrix"] = A.to_rows();
        out["hyperbolic"] = hyp.is_hyperbolic;
        out["entropy"] = hypsol::toral_entropy(A);
    } else {
        const auto T = transition_from_args(
            adjacency.empty() && transition.empty() ? std::string("[[1,1],[1,0]]") : transition, adjacency);
        const auto p = hypsol::entropy_sft(T);
        out["kind"] = "sft";
        out["transition"] = T.rows();
        out["irreducible"] = T.irreducible();
        out["period"] = T.period();
        out["entropy"] = p.h;
        out["right_vector"] = std::vector<double>(p.right_vec.data(), p.right_vec.data() + p.right_vec.size());
        out["left_vector"] = std::vector<double>(p.left_vec.data(), p.left_vec.data() + p.left_vec.size());
        out["normalization"] = p.normalization;
    }
    emit(g, out);
    return kOk;
}

int weights_cmd(const Globals& g, const std::string& transition, const std::string& adjacency, std::size_t length,
                const std::string& word)
{
    const auto T = transition_from_args(
        transition.empty() && adjacency.empty() ? std::string("[[1,1],[1,0]]") : transition, adjacency);
    const auto p = hypsol::entropy_sft(T);
    if (!word.empty()) {
        const auto w = hypsol::parse_word(word);
        json out{{"word", hypsol::format_word(w, T.states())},
                 {"weight", hypsol::rs_unstable_weight(T, p, w)},
                 {"entropy", p.h}};
        emit(g, out);
        return kOk;
    }
    const std::string csv = hypsol::weights_csv(T, p, length);
    std::cout << csv;
    if (!g.json_out.empty()) {
        std::ofstream(g.json_out) << csv;
    }
    return kOk;
}

int length_cmd(const Globals& g, const std::string& matrix, const std::string& path, const std::string& norm)
{
    hypsol::UnstableNormalization n = hypsol::UnstableNormalization::UnitLength;
    if (norm == "first-component") {
        n = hypsol::UnstableNormalization::FirstComponentOne;
    } else if (norm != "unit") {
        throw DomainError("normalization must be 'unit' or 'first-component'");
    }
    hypsol::LinearModelPath model{hypsol::IntMatrix::from_rows(parse_matrix(matrix)), {}};
    const json pj = parse_json_arg(path, "path");
    try {
        for (const auto& v : pj) {
            const auto c = v.get<std::vector<double>>();
            if (c.size() != model.A.dim()) {
                throw DomainError("path vertices must have " + std::to_string(model.A.dim()) + " coordinates");
            }
            model.vertices.push_back(Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size())));
        }
    } catch (const json::exception& e) {
        throw DomainError(std::string("path must be a list of vertices: ") + e.what());
    }
    const auto check = hypsol::unstable_length_scaling_check(model, n);
    json out{{"matrix", model.A.to_rows()},
             {"normalization", norm},
             {"length", check.original},
             {"image_length", check.image},
             {"seed", g.seed}};
    emit(g, out);
    return kOk;
}

int classify_cmd(const Globals& g, int dim_lambda, int dim_eu, bool table)
{
    if (table) {
        json rows = json::array();
        for (const auto& e : hypsol::classify_table()) {
            json r{{"dim_Lambda", e.dim_lambda}, {"dim_Eu", e.dim_eu}, {"class_label", e.label}};
            if (!e.reason.empty()) {
                r["reason"] = e.reason;
            }
            rows.push_back(r);
        }
        emit(g, rows);
        return kOk;
    }
    emit(g, {{"dim_Lambda", dim_lambda}, {"dim_Eu", dim_eu}, {"class_label", hypsol::classify(dim_lambda, dim_eu)}});
    return kOk;
}

int report_cmd(const Globals& g, const std::string& spec_text, const std::string& cloud_csv)
{
    hypsol::ClassifierConfig config;
    config.seed = g.seed;
    config = hypsol::classifier_config_from_json(load_config(g), config);
    const json sj = parse_json_arg(spec_text, "map spec");
    std::vector<hypsol::MapSpec> specs;
    if (sj.is_array()) {
        for (const auto& s : sj) {
            specs.push_back(hypsol::map_spec_from_json(s));
        }
    } else {
        specs.push_back(hypsol::map_spec_from_json(sj));
    }
    if (!cloud_csv.empty()) {
        if (specs.size() != 1) {
            throw DomainError("--cloud-csv needs a single map spec");
        }
        std::ofstream out(cloud_csv);
        out << hypsol::cloud_csv(hypsol::generate_orbit(specs.front(), config.transient, config.count, config.seed));
    }
    const auto reports = hypsol::report_all(specs, config);
    bool ok = true;
    for (const auto& r : reports) {
        ok = ok && r["quality_ok"].get<bool>();
    }
    emit(g, sj.is_array() ? json(reports) : reports.front());
    return ok ? kOk : kQualityFailure;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hyperbolic attractors, toral solenoids and shadowing"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--json-out", g.json_out, "Also write the output to this file");
    app.add_option("--config", g.config_path, "Classifier config, JSON file or inline");

    std::function<int()> run;

    auto* vi = app.add_subcommand("verify-identities", "Exact solenoid, metric and covering-group laws");
    std::string vi_matrix = "[[2]]";
    std::size_t vi_samples = 1000;
    std::size_t vi_depth = 64;
    vi->add_option("--matrix", vi_matrix, "Integer matrix as JSON")->capture_default_str();
    vi->add_option("--samples", vi_samples)->capture_default_str();
    vi->add_option("--depth", vi_depth, "Comparison depth for non-normalizable chains")->capture_default_str();
    vi->callback([&] { run = [&] { return verify_identities(g, vi_matrix, vi_samples, vi_depth); }; });

    auto* sh = app.add_subcommand("shadow", "Shadow a pseudo-orbit by a true orbit");
    ShadowArgs sa;
    sh->add_option("--system", sa.system, "toral, cat, dyadic or smale")->capture_default_str();
    sh->add_option("--matrix", sa.matrix, "Matrix for the toral system")->capture_default_str();
    sh->add_option("--pseudo-orbit", sa.pseudo_orbit, "Pseudo-orbit JSON; default is a jittered random orbit");
    sh->add_option("--window", sa.window, "Half window J")->capture_default_str();
    sh->add_option("--jitter", sa.jitter, "Per-step error L")->capture_default_str();
    sh->add_option("--tol", sa.tol, "Convergence tolerance")->capture_default_str();
    sh->callback([&] { run = [&] { return shadow_cmd(g, sa); }; });

    auto* cj = app.add_subcommand("conjugacy", "Build and verify a conjugacy");
    ConjugacyArgs ca;
    cj->add_option("--system", ca.system, "smale or toral")->capture_default_str();
    cj->add_option("--matrix", ca.matrix, "Matrix for the toral system")->capture_default_str();
    cj->add_option("--depth", ca.depth, "Inverse-limit depth (smale)")->capture_default_str();
    cj->add_option("--samples", ca.samples)->capture_default_str();
    cj->add_option("--window", ca.window, "Orbit window (toral)")->capture_default_str();
    cj->add_option("--eps", ca.eps, "Sine shear amplitude (toral)")->capture_default_str();
    cj->add_option("--lambda-c", ca.lambda_c)->capture_default_str();
    cj->add_option("--c-off", ca.c_off)->capture_default_str();
    cj->add_option("--tolerance", ca.tolerance)->capture_default_str();
    cj->callback([&] { run = [&] { return conjugacy_cmd(g, ca); }; });

    auto* en = app.add_subcommand("entropy", "Topological entropy of a toral automorphism or a subshift");
    std::string en_matrix;
    std::string en_transition;
    std::string en_adjacency;
    auto* en_m = en->add_option("--matrix", en_matrix, "Toral matrix as JSON");
    en->add_option("--transition", en_transition, "0/1 transition matrix as JSON")->excludes(en_m);
    en->add_option("--adjacency", en_adjacency, "Adjacency list as JSON")->excludes(en_m);
    en->callback([&] { run = [&] { return entropy_cmd(g, en_matrix, en_transition, en_adjacency); }; });

    auto* we = app.add_subcommand("weights", "Maximal-entropy unstable weights of cylinder words");
    std::string we_transition;
    std::string we_adjacency;
    std::string we_word;
    std::size_t we_length = 4;
    we->add_option("--transition", we_transition, "0/1 transition matrix; default golden mean");
    we->add_option("--adjacency", we_adjacency, "Adjacency list as JSON");
    we->add_option("--length", we_length, "Word length for the CSV listing")->capture_default_str();
    we->add_option("--word", we_word, "Single word, e.g. 0110");
    we->callback([&] { run = [&] { return weights_cmd(g, we_transition, we_adjacency, we_length, we_word); }; });

    auto* le = app.add_subcommand("length", "Signed unstable length of a polygonal path");
    std::string le_matrix = "[[2,1],[1,1]]";
    std::string le_path;
    std::string le_norm = "unit";
    le->add_option("--matrix", le_matrix)->capture_default_str();
    le->add_option("--path", le_path, "Vertices as JSON, e.g. [[0,0],[1,0]]")->required();
    le->add_option("--normalization", le_norm, "unit or first-component")->capture_default_str();
    le->callback([&] { run = [&] { return length_cmd(g, le_matrix, le_path, le_norm); }; });

    auto* cl = app.add_subcommand("classify", "Attractor type from (dim Lambda, dim E^u)");
    int cl_lambda = 0;
    int cl_eu = 0;
    bool cl_table = false;
    cl->add_option("--dim-lambda", cl_lambda);
    cl->add_option("--dim-eu", cl_eu);
    cl->add_flag("--table", cl_table, "Print the full decision table");
    cl->callback([&] { run = [&] { return classify_cmd(g, cl_lambda, cl_eu, cl_table); }; });

    auto* re = app.add_subcommand("report", "Numerical classification of a built-in map");
    std::string re_spec;
    std::string re_cloud;
    re->add_option("--spec", re_spec, "MapSpec JSON (object or array), inline or file")->required();
    re->add_option("--cloud-csv", re_cloud, "Write the orbit cloud as CSV");
    re->callback([&] { run = [&] { return report_cmd(g, re_spec, re_cloud); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        return run();
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidSpec;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidSpec;
    }
}
