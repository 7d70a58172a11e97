#pragma once

// Exact points of the toral solenoid S_A = lim<- (T^k, A): the shift, the
// R^k translation action theta, the group law, and the two metrics d_Sigma
// (dyadic weights on disagreeing coordinates) and rho (leafwise translation).
//
// A point is theta_offset(chain) for a periodic backward chain and a rational
// offset. Every eventually periodic backward chain of an invertible A is in
// fact purely periodic (the head folds into the cycle), so chains are kept
// with an empty head and minimal period; cycle[j] is coordinate j.

#include "hypsol/linalg_torus.hpp"

#include <json.hpp>

#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace hypsol {

struct BackwardChain {
    std::vector<TorusPoint> head;
    std::vector<TorusPoint> cycle;
};

/// Checks x_j = A x_{j+1} everywhere and returns the equivalent chain with
/// empty head and minimal period. Throws DomainError on inconsistent input.
BackwardChain normalize_chain(const IntMatrix& A, BackwardChain chain);

/// The backward chain through the periodic point reached by the forward
/// A-orbit of y.
BackwardChain periodic_chain_through(const IntMatrix& A, const TorusPoint& y);

class SolenoidPoint {
public:
    SolenoidPoint(MatrixHandle A, BackwardChain base, RatVec offset);
    static SolenoidPoint identity(MatrixHandle A);

    const MatrixHandle& matrix() const { return A_; }
    std::size_t dim() const { return A_->dim(); }
    const std::vector<TorusPoint>& cycle() const { return cycle_; }
    std::size_t period() const { return cycle_.size(); }
    const RatVec& offset() const { return offset_; }

    /// Same chain and same offset. Distinct representations can still denote
    /// one point; see compare().
    bool same_representation(const SolenoidPoint& o) const;

private:
    MatrixHandle A_;
    std::vector<TorusPoint> cycle_;
    RatVec offset_;
};

TorusPoint coordinate(const SolenoidPoint& x, std::size_t j);

SolenoidPoint shift(const SolenoidPoint& x);
SolenoidPoint unshift(const SolenoidPoint& x);
SolenoidPoint act(const RatVec& v, const SolenoidPoint& x);
SolenoidPoint add(const SolenoidPoint& x, const SolenoidPoint& y);
SolenoidPoint neg(const SolenoidPoint& x);
SolenoidPoint subtract(const SolenoidPoint& x, const SolenoidPoint& y);

enum class Tri { Equal, Different, Unknown };

/// Decides equality of the denoted points. Exact whenever the bounded-
/// denominator space of A is known; otherwise falls back to comparing the
/// first `depth` coordinates, and answers Unknown if they all agree.
Tri compare(const SolenoidPoint& x, const SolenoidPoint& y, std::size_t depth = 64);

/// The chain of theta_u(e) when it is periodic (u in K), as a point with zero
/// offset. Empty when u is outside K or K is undetermined.
std::optional<SolenoidPoint> translate_identity_as_chain(const MatrixHandle& A, const RatVec& u);

struct Exact { Rational value; };
struct Interval { Rational lower; Rational upper; };
struct Infinite {};
using SigmaDistance = std::variant<Exact, Interval, Infinite>;

SigmaDistance d_sigma(const SolenoidPoint& x, const SolenoidPoint& y, std::size_t depth);

struct PathVector { RatVec v; };
struct NotSameComponent {};
struct UnknownComponent { std::size_t depth; };
using PathResult = std::variant<PathVector, NotSameComponent, UnknownComponent>;

/// A translation v with theta_v(x) = y when one is found. For |det A| = 1
/// the action has the lattice Z^k as stabilizer; the returned v is then the
/// representative with coordinatewise centered base difference.
PathResult path_vector(const SolenoidPoint& x, const SolenoidPoint& y, std::size_t depth);

struct ChainParams {
    std::size_t depth = 64;
};

/// Upper bound on the chain metric from one translation leg, one d_Sigma
/// jump, or a translation followed by a jump; minimized over both directions.
double chain_distance_upper(const SolenoidPoint& x, const SolenoidPoint& y, const ChainParams& params = {});

std::string to_string(const SigmaDistance& d);

/// Random point: periodic chain through a random rational point with
/// denominators up to max_den, plus a random rational offset.
SolenoidPoint random_point(const MatrixHandle& A, std::mt19937_64& rng, int max_den = 12, int offset_range = 3);
Rational random_rational(std::mt19937_64& rng, int max_den, int range);
RatVec random_rational_vector(std::mt19937_64& rng, std::size_t k, int max_den, int range);

nlohmann::json to_json(const SolenoidPoint& x);
nlohmann::json to_json(const SigmaDistance& d);
SolenoidPoint solenoid_point_from_json(const nlohmann::json& j);
nlohmann::json rational_vector_json(const RatVec& v);
RatVec rational_vector_from_json(const nlohmann::json& j);

/// Exact checks of the translation action, shift equivariance, projection,
/// group laws and coordinate consistency on random rational samples.
/// Undecided comparisons count as failures.
nlohmann::json verify_solenoid_laws(const MatrixHandle& A, std::size_t samples, std::uint64_t seed,
                                    std::size_t depth = 64);

/// Translation invariance of d_Sigma on all sampled pairs and halving under
/// the shift on pairs whose distance is resolved exactly.
nlohmann::json verify_metric_laws(const MatrixHandle& A, std::size_t pairs, std::uint64_t seed,
                                  std::size_t depth = 64);

}  // namespace hypsol
