#include "hypsol/solenoid.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace hypsol {

namespace {

constexpr std::size_t kOrbitCap = 1u << 20;

std::size_t minimal_period(const std::vector<TorusPoint>& cycle)
{
    const std::size_t p = cycle.size();
    for (std::size_t d = 1; d < p; ++d) {
        if (p % d != 0) {
            continue;
        }
        bool ok = true;
        for (std::size_t i = 0; i + d < p && ok; ++i) {
            ok = cycle[i] == cycle[i + d];
        }
        if (ok) {
            return d;
        }
    }
    return p;
}

std::vector<TorusPoint> minimize(std::vector<TorusPoint> cycle)
{
    cycle.resize(minimal_period(cycle));
    return cycle;
}

SolenoidPoint from_cycle(const MatrixHandle& A, std::vector<TorusPoint> cycle, RatVec offset)
{
    return SolenoidPoint(A, BackwardChain{{}, std::move(cycle)}, std::move(offset));
}

void require_same(const SolenoidPoint& x, const SolenoidPoint& y, const char* op)
{
    if (!same_matrix(x.matrix(), y.matrix())) {
        throw DomainError(std::string(op) + ": points over different matrices " + x.matrix()->to_string() +
                          " and " + y.matrix()->to_string());
    }
}

enum class ChainStatus { Found, OutsideK, Undecided };

struct IdentityChain {
    ChainStatus status;
    std::vector<TorusPoint> cycle;
};

// Chain of theta_u(e): coordinates A^{-j} u mod 1, periodic exactly when u in K.
IdentityChain identity_translate_chain(const IntMatrix& A, const RatVec& u)
{
    const BoundedDenominatorSpace K(A);
    const auto in_k = K.contains(u);
    if (!in_k.has_value()) {
        return {ChainStatus::Undecided, {}};
    }
    if (!*in_k) {
        return {ChainStatus::OutsideK, {}};
    }
    const IntMatrix& B = *K.inverse_on_space();
    const TorusPoint start(u);
    std::vector<TorusPoint> cycle{start};
    TorusPoint z = apply(B, start);
    while (!(z == start)) {
        if (cycle.size() >= kOrbitCap) {
            return {ChainStatus::Undecided, {}};
        }
        cycle.push_back(z);
        z = apply(B, z);
    }
    return {ChainStatus::Found, std::move(cycle)};
}

bool cycles_equal(const std::vector<TorusPoint>& a, const std::vector<TorusPoint>& b)
{
    return minimize(a) == minimize(b);
}

// Coordinates 0..n of x.
std::vector<TorusPoint> coordinates(const SolenoidPoint& x, std::size_t n)
{
    std::vector<TorusPoint> out;
    out.reserve(n + 1);
    RatVec w = x.offset();
    for (std::size_t j = 0; j <= n; ++j) {
        if (j > 0) {
            w = x.matrix()->apply_inverse(w);
        }
        out.push_back(x.cycle()[j % x.period()] + w);
    }
    return out;
}

Rational pow2(long e)
{
    Integer one = 1;
    if (e >= 0) {
        return Rational(Integer(one << static_cast<unsigned>(e)));
    }
    return Rational(one, Integer(one << static_cast<unsigned>(-e)));
}

double to_double_norm(const RatVec& v)
{
    return euclidean_norm(v);
}

}  // namespace

// ---------------------------------------------------------------- chains

BackwardChain normalize_chain(const IntMatrix& A, BackwardChain chain)
{
    const std::size_t k = A.dim();
    if (chain.cycle.empty()) {
        throw DomainError("backward chain needs a nonempty cycle");
    }
    for (const auto* part : {&chain.head, &chain.cycle}) {
        for (const auto& x : *part) {
            if (x.dim() != k) {
                throw DomainError("backward chain point has dimension " + std::to_string(x.dim()) + ", expected " +
                                  std::to_string(k));
            }
        }
    }
    std::vector<TorusPoint> seq = chain.head;
    seq.insert(seq.end(), chain.cycle.begin(), chain.cycle.end());
    for (std::size_t j = 0; j + 1 < seq.size(); ++j) {
        if (!(apply(A, seq[j + 1]) == seq[j])) {
            throw DomainError("backward chain is inconsistent at index " + std::to_string(j) + ": " +
                              seq[j].to_string() + " != A " + seq[j + 1].to_string());
        }
    }
    if (!(apply(A, chain.cycle.front()) == chain.cycle.back())) {
        throw DomainError("backward chain cycle does not close: A " + chain.cycle.front().to_string() +
                          " != " + chain.cycle.back().to_string());
    }
    // x_{h-1} = A cycle[0] = cycle[p-1]: the head unwinds into the cycle.
    const std::size_t p = chain.cycle.size();
    const std::size_t h = chain.head.size();
    std::vector<TorusPoint> cycle(p);
    for (std::size_t i = 0; i < p; ++i) {
        cycle[i] = i < h ? chain.head[i] : chain.cycle[(i - h) % p];
    }
    return BackwardChain{{}, minimize(std::move(cycle))};
}

BackwardChain periodic_chain_through(const IntMatrix& A, const TorusPoint& y)
{
    std::map<TorusPoint, std::size_t> seen;
    std::vector<TorusPoint> orbit;
    TorusPoint z = y;
    while (seen.find(z) == seen.end()) {
        if (orbit.size() >= kOrbitCap) {
            throw DomainError("periodic_chain_through: forward orbit too long");
        }
        seen.emplace(z, orbit.size());
        orbit.push_back(z);
        z = apply(A, z);
    }
    const std::size_t m = seen[z];
    const std::size_t period = orbit.size() - m;
    std::vector<TorusPoint> cycle(period);
    cycle[0] = orbit[m];
    for (std::size_t i = 1; i < period; ++i) {
        cycle[i] = orbit[m + period - i];
    }
    return BackwardChain{{}, std::move(cycle)};
}

// ---------------------------------------------------------- SolenoidPoint

SolenoidPoint::SolenoidPoint(MatrixHandle A, BackwardChain base, RatVec offset)
    : A_(std::move(A)), offset_(std::move(offset))
{
    if (!A_) {
        throw DomainError("solenoid point needs a matrix");
    }
    if (A_->det() == 0) {
        throw DomainError("solenoid needs a nonsingular matrix");
    }
    if (offset_.size() != A_->dim()) {
        throw DomainError("solenoid offset has wrong dimension");
    }
    cycle_ = normalize_chain(*A_, std::move(base)).cycle;
}

SolenoidPoint SolenoidPoint::identity(MatrixHandle A)
{
    const std::size_t k = A->dim();
    return from_cycle(A, {TorusPoint::zero(k)}, RatVec(k, Rational(0)));
}

bool SolenoidPoint::same_representation(const SolenoidPoint& o) const
{
    return same_matrix(A_, o.A_) && cycle_ == o.cycle_ && offset_ == o.offset_;
}

TorusPoint coordinate(const SolenoidPoint& x, std::size_t j)
{
    return coordinates(x, j).back();
}

SolenoidPoint shift(const SolenoidPoint& x)
{
    // (A x_0, x_0, x_1, ...) and A x_0 = cycle[p-1]
    const auto& c = x.cycle();
    std::vector<TorusPoint> cycle;
    cycle.reserve(c.size());
    cycle.push_back(c.back());
    cycle.insert(cycle.end(), c.begin(), c.end() - 1);
    return from_cycle(x.matrix(), std::move(cycle), x.matrix()->apply(x.offset()));
}

SolenoidPoint unshift(const SolenoidPoint& x)
{
    const auto& c = x.cycle();
    std::vector<TorusPoint> cycle(c.begin() + 1, c.end());
    cycle.push_back(c.front());
    return from_cycle(x.matrix(), std::move(cycle), x.matrix()->apply_inverse(x.offset()));
}

SolenoidPoint act(const RatVec& v, const SolenoidPoint& x)
{
    return from_cycle(x.matrix(), x.cycle(), x.offset() + v);
}

SolenoidPoint add(const SolenoidPoint& x, const SolenoidPoint& y)
{
    require_same(x, y, "add");
    const std::size_t p = x.period();
    const std::size_t q = y.period();
    const std::size_t l = std::lcm(p, q);
    std::vector<TorusPoint> cycle(l);
    for (std::size_t i = 0; i < l; ++i) {
        cycle[i] = x.cycle()[i % p] + y.cycle()[i % q];
    }
    return from_cycle(x.matrix(), minimize(std::move(cycle)), x.offset() + y.offset());
}

SolenoidPoint neg(const SolenoidPoint& x)
{
    std::vector<TorusPoint> cycle;
    cycle.reserve(x.period());
    for (const auto& c : x.cycle()) {
        cycle.push_back(-c);
    }
    return from_cycle(x.matrix(), std::move(cycle), -x.offset());
}

SolenoidPoint subtract(const SolenoidPoint& x, const SolenoidPoint& y)
{
    return add(x, neg(y));
}

// --------------------------------------------------------------- equality

std::optional<SolenoidPoint> translate_identity_as_chain(const MatrixHandle& A, const RatVec& u)
{
    auto chain = identity_translate_chain(*A, u);
    if (chain.status != ChainStatus::Found) {
        return std::nullopt;
    }
    return from_cycle(A, std::move(chain.cycle), RatVec(A->dim(), Rational(0)));
}

Tri compare(const SolenoidPoint& x, const SolenoidPoint& y, std::size_t depth)
{
    require_same(x, y, "compare");
    if (x.same_representation(y)) {
        return Tri::Equal;
    }
    // x - y = theta_u(d) is e iff d = theta_{-u}(e)
    const SolenoidPoint z = subtract(x, y);
    const auto chain = identity_translate_chain(*x.matrix(), -z.offset());
    switch (chain.status) {
    case ChainStatus::Found:
        return cycles_equal(chain.cycle, z.cycle()) ? Tri::Equal : Tri::Different;
    case ChainStatus::OutsideK:
        return Tri::Different;
    case ChainStatus::Undecided:
        break;
    }
    for (const auto& c : coordinates(z, depth)) {
        if (!c.is_zero()) {
            return Tri::Different;
        }
    }
    return Tri::Unknown;
}

// ---------------------------------------------------------------- metrics

SigmaDistance d_sigma(const SolenoidPoint& x, const SolenoidPoint& y, std::size_t depth)
{
    require_same(x, y, "d_sigma");
    const SolenoidPoint z = subtract(x, y);
    const auto coords = coordinates(z, depth);
    const IntMatrix& A = *x.matrix();
    if (!coords[0].is_zero()) {
        // Zeroth coordinates differ, hence so do all deeper ones (sum 1). The
        // forward part is 2^J - 1 where A^J z_0 first hits [0], if ever.
        std::set<TorusPoint> seen;
        TorusPoint w = coords[0];
        long J = 0;
        while (!w.is_zero()) {
            if (!seen.insert(w).second) {
                return Infinite{};
            }
            if (seen.size() > kOrbitCap) {
                throw DomainError("d_sigma: forward orbit exceeded the search cap");
            }
            w = apply(A, w);
            ++J;
        }
        return Exact{pow2(J)};
    }
    for (std::size_t i = 1; i <= depth; ++i) {
        if (!coords[i].is_zero()) {
            // nonzero from i on: sum_{j >= i} 2^{-j}
            return Exact{pow2(-static_cast<long>(i) + 1)};
        }
    }
    if (compare(z, SolenoidPoint::identity(x.matrix()), depth) == Tri::Equal) {
        return Exact{Rational(0)};
    }
    return Interval{Rational(0), pow2(-static_cast<long>(depth))};
}

PathResult path_vector(const SolenoidPoint& x, const SolenoidPoint& y, std::size_t depth)
{
    require_same(x, y, "path_vector");
    // y - x = theta_u(d); y = theta_t(x) iff d = theta_{t-u}(e)
    const SolenoidPoint z = subtract(y, x);
    const RatVec& u = z.offset();
    const std::size_t k = x.dim();
    const bool base_trivial = z.period() == 1 && z.cycle()[0].is_zero();
    if (base_trivial) {
        return PathVector{u};
    }
    const BoundedDenominatorSpace K(*x.matrix());
    switch (K.kind()) {
    case BoundedDenominatorSpace::Kind::Zero:
        return NotSameComponent{};
    case BoundedDenominatorSpace::Kind::Everything:
        return PathVector{z.cycle()[0].centered_lift() + u};
    case BoundedDenominatorSpace::Kind::PolynomialKernel: {
        // search s = lift(d_0) + n in K over a small integer box
        const RatVec base = z.cycle()[0].centered_lift();
        std::vector<int> n(k, -2);
        while (true) {
            RatVec s = base;
            for (std::size_t i = 0; i < k; ++i) {
                s[i] += n[i];
            }
            if (K.contains(s).value_or(false)) {
                auto chain = identity_translate_chain(*x.matrix(), s);
                if (chain.status == ChainStatus::Found && cycles_equal(chain.cycle, z.cycle())) {
                    return PathVector{s + u};
                }
            }
            std::size_t i = 0;
            while (i < k && ++n[i] > 2) {
                n[i] = -2;
                ++i;
            }
            if (i == k) {
                break;
            }
        }
        return UnknownComponent{depth};
    }
    case BoundedDenominatorSpace::Kind::Undetermined:
        break;
    }
    return UnknownComponent{depth};
}

namespace {

std::optional<double> sigma_upper(const SigmaDistance& d)
{
    if (const auto* e = std::get_if<Exact>(&d)) {
        return e->value.convert_to<double>();
    }
    if (const auto* i = std::get_if<Interval>(&d)) {
        return i->upper.convert_to<double>();
    }
    return std::nullopt;
}

double one_way_upper(const SolenoidPoint& x, const SolenoidPoint& y, std::size_t depth)
{
    double best = std::numeric_limits<double>::infinity();
    const auto pv = path_vector(x, y, depth);
    if (const auto* v = std::get_if<PathVector>(&pv)) {
        best = std::min(best, to_double_norm(v->v));
    }
    if (const auto jump = sigma_upper(d_sigma(x, y, depth))) {
        best = std::min(best, *jump);
    }
    // translate x so that zeroth coordinates agree, then jump
    const RatVec w = (coordinate(y, 0) - coordinate(x, 0)).centered_lift();
    if (const auto jump = sigma_upper(d_sigma(act(w, x), y, depth))) {
        best = std::min(best, to_double_norm(w) + *jump);
    }
    return best;
}

}  // namespace

double chain_distance_upper(const SolenoidPoint& x, const SolenoidPoint& y, const ChainParams& params)
{
    require_same(x, y, "chain_distance_upper");
    if (compare(x, y, params.depth) == Tri::Equal) {
        return 0.0;
    }
    return std::min(one_way_upper(x, y, params.depth), one_way_upper(y, x, params.depth));
}

std::string to_string(const SigmaDistance& d)
{
    if (const auto* e = std::get_if<Exact>(&d)) {
        return "Exact(" + to_string(e->value) + ")";
    }
    if (const auto* i = std::get_if<Interval>(&d)) {
        return "Interval(" + to_string(i->lower) + ", " + to_string(i->upper) + ")";
    }
    return "Infinite";
}

// ---------------------------------------------------------------- sampling

Rational random_rational(std::mt19937_64& rng, int max_den, int range)
{
    const long long den = 1 + static_cast<long long>(rng() % static_cast<unsigned long long>(max_den));
    const long long span = 2LL * range * den + 1;
    const long long num = static_cast<long long>(rng() % static_cast<unsigned long long>(span)) - range * den;
    return Rational(Integer(num), Integer(den));
}

RatVec random_rational_vector(std::mt19937_64& rng, std::size_t k, int max_den, int range)
{
    RatVec v;
    v.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        v.push_back(random_rational(rng, max_den, range));
    }
    return v;
}

SolenoidPoint random_point(const MatrixHandle& A, std::mt19937_64& rng, int max_den, int offset_range)
{
    const TorusPoint y(random_rational_vector(rng, A->dim(), max_den, 1));
    return SolenoidPoint(A, periodic_chain_through(*A, y), random_rational_vector(rng, A->dim(), max_den, offset_range));
}

// -------------------------------------------------------------------- json

nlohmann::json rational_vector_json(const RatVec& v)
{
    auto out = nlohmann::json::array();
    for (const auto& x : v) {
        out.push_back(to_string(x));
    }
    return out;
}

RatVec rational_vector_from_json(const nlohmann::json& j)
{
    if (!j.is_array()) {
        throw DomainError("expected an array of rationals");
    }
    RatVec v;
    for (const auto& x : j) {
        if (x.is_string()) {
            v.push_back(parse_rational(x.get<std::string>()));
        } else if (x.is_number_integer()) {
            v.emplace_back(x.get<long long>());
        } else {
            throw DomainError("rationals must be \"p/q\" strings or integers");
        }
    }
    return v;
}

nlohmann::json to_json(const SolenoidPoint& x)
{
    nlohmann::json j;
    j["matrix"] = x.matrix()->to_rows();
    j["head"] = nlohmann::json::array();
    auto cycle = nlohmann::json::array();
    for (const auto& c : x.cycle()) {
        cycle.push_back(rational_vector_json(c.coords()));
    }
    j["cycle"] = cycle;
    j["offset"] = rational_vector_json(x.offset());
    return j;
}

SolenoidPoint solenoid_point_from_json(const nlohmann::json& j)
{
    try {
        auto A = make_matrix(j.at("matrix").get<std::vector<std::vector<long long>>>());
        BackwardChain chain;
        if (j.contains("head")) {
            for (const auto& p : j.at("head")) {
                chain.head.emplace_back(rational_vector_from_json(p));
            }
        }
        for (const auto& p : j.at("cycle")) {
            chain.cycle.emplace_back(rational_vector_from_json(p));
        }
        RatVec offset = j.contains("offset") ? rational_vector_from_json(j.at("offset")) : RatVec(A->dim(), Rational(0));
        return SolenoidPoint(std::move(A), std::move(chain), std::move(offset));
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed solenoid point: ") + e.what());
    }
}

}  // namespace hypsol
