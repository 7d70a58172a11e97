#pragma once

// The covering groups of the solenoid. S-bar = Sigma x R^k, with Sigma the
// fiber of the zeroth-coordinate projection over [0]; S-tilde is the direct
// limit of S-bar under sigma-bar. Both come with quotient maps onto S_A and
// embeddings of Z^k and Z^k[A^-1] as deck groups.

#include "hypsol/solenoid.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>

namespace hypsol {

class CoverPoint {
public:
    /// Throws unless coordinate(fiber, 0) = [0].
    CoverPoint(SolenoidPoint fiber, RatVec v);
    static CoverPoint identity(const MatrixHandle& A);

    const SolenoidPoint& fiber() const { return fiber_; }
    const RatVec& v() const { return v_; }
    const MatrixHandle& matrix() const { return fiber_.matrix(); }

private:
    SolenoidPoint fiber_;
    RatVec v_;
};

CoverPoint cover_add(const CoverPoint& a, const CoverPoint& b);
CoverPoint cover_neg(const CoverPoint& a);
Tri cover_compare(const CoverPoint& a, const CoverPoint& b);

CoverPoint sigma_bar(const CoverPoint& s);
/// Preimage under sigma_bar, when the fiber has a preimage in Sigma.
std::optional<CoverPoint> sigma_bar_preimage(const CoverPoint& s);
SolenoidPoint q_bar(const CoverPoint& s);
CoverPoint alpha(const MatrixHandle& A, const IntVec& n);

/// Class [(point, level)], kept at minimal level.
class TildeCoverPoint {
public:
    TildeCoverPoint(CoverPoint point, unsigned level);

    const CoverPoint& point() const { return point_; }
    unsigned level() const { return level_; }
    const MatrixHandle& matrix() const { return point_.matrix(); }

private:
    CoverPoint point_;
    unsigned level_;
};

using SigmaBarFn = std::function<CoverPoint(const CoverPoint&)>;

/// Representative at a higher level, obtained by applying `sb` (default sigma_bar).
CoverPoint tilde_lift(const TildeCoverPoint& t, unsigned level, const SigmaBarFn& sb = sigma_bar);

TildeCoverPoint tilde_add(const TildeCoverPoint& a, const TildeCoverPoint& b, const SigmaBarFn& sb = sigma_bar);
Tri tilde_compare(const TildeCoverPoint& a, const TildeCoverPoint& b, const SigmaBarFn& sb = sigma_bar);
TildeCoverPoint sigma_tilde(const TildeCoverPoint& t, const SigmaBarFn& sb = sigma_bar);
TildeCoverPoint sigma_tilde_inverse(const TildeCoverPoint& t);
SolenoidPoint q_tilde(const TildeCoverPoint& t);
TildeCoverPoint alpha_tilde(const LimitElement& g);

nlohmann::json to_json(const CoverPoint& s);
nlohmann::json to_json(const TildeCoverPoint& t);

/// Random sample of S-bar: a Sigma point theta_o(chain) with o = -chain_0 + n
/// for a random integer vector n, and a random rational v.
CoverPoint random_cover_point(const MatrixHandle& A, std::mt19937_64& rng);

/// Checks the four identities for (S-bar, sigma-bar, q-bar, alpha) and the
/// four for (S-tilde, sigma-tilde, q-tilde, alpha-tilde) on random samples.
/// A replacement sigma-bar can be injected to test the checker itself.
/// Report: {"matrix", "samples", "seed", "all_passed",
///          "identities": [{"identity", "statement", "status", "checks", "witness"?}]}.
nlohmann::json verify_cover_identities(const MatrixHandle& A, std::size_t samples, std::uint64_t seed,
                                       const SigmaBarFn& sb = sigma_bar);

}  // namespace hypsol
