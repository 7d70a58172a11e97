#pragma once

// Exact integer linear algebra on the torus T^k = R^k / Z^k: hyperbolicity,
// eigen-splittings with an adapted norm, toral entropy, and the direct-limit
// group Z^k[A^-1].

#include "hypsol/rational.hpp"

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hypsol {

class IntMatrix {
public:
    /// Row-major entries, k*k of them.
    IntMatrix(std::size_t k, std::vector<Integer> entries);

    static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows);
    static IntMatrix identity(std::size_t k);

    std::size_t dim() const { return k_; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return entries_[i * k_ + j]; }

    const Integer& det() const { return det_; }
    const IntMatrix& adjugate() const { return *adjugate_; }

    /// Monic characteristic polynomial, coefficients c_0..c_k (c_k = 1).
    const std::vector<Integer>& characteristic_polynomial() const { return charpoly_; }

    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix& other) const;
    IntMatrix power(unsigned n) const;

    IntVec apply(const IntVec& v) const;
    RatVec apply(const RatVec& v) const;
    /// Exact A^{-1} v; throws when det = 0.
    RatVec apply_inverse(const RatVec& v) const;

    Eigen::MatrixXd to_eigen() const;
    std::vector<std::vector<long long>> to_rows() const;
    std::string to_string() const;

    bool operator==(const IntMatrix& other) const;

private:
    IntMatrix(std::size_t k, std::vector<Integer> entries, bool compute_invariants);

    std::size_t k_;
    std::vector<Integer> entries_;
    Integer det_;
    std::vector<Integer> charpoly_;
    std::shared_ptr<const IntMatrix> adjugate_;
};

using MatrixHandle = std::shared_ptr<const IntMatrix>;

MatrixHandle make_matrix(const std::vector<std::vector<long long>>& rows);

/// A point of T^k with exact coordinates in [0,1).
class TorusPoint {
public:
    TorusPoint() = default;
    /// Reduces every coordinate mod 1.
    explicit TorusPoint(RatVec coords);
    static TorusPoint zero(std::size_t k);

    const RatVec& coords() const { return coords_; }
    std::size_t dim() const { return coords_.size(); }
    bool is_zero() const;

    /// Lift with every coordinate in [-1/2, 1/2).
    RatVec centered_lift() const;

    TorusPoint operator+(const TorusPoint& o) const;
    TorusPoint operator-(const TorusPoint& o) const;
    TorusPoint operator-() const;
    TorusPoint operator+(const RatVec& v) const;

    bool operator==(const TorusPoint& o) const { return coords_ == o.coords_; }
    bool operator<(const TorusPoint& o) const { return coords_ < o.coords_; }

    std::string to_string() const;

private:
    RatVec coords_;
};

/// Image of a torus point under the endomorphism induced by A.
TorusPoint apply(const IntMatrix& A, const TorusPoint& x);

struct HyperbolicityReport {
    bool is_hyperbolic = false;
    Integer det;
    std::vector<double> eigen_moduli;  // descending
};

inline constexpr double kHyperbolicTolerance = 1e-9;

/// Eigenvalues polished against the exact characteristic polynomial, sorted by
/// descending modulus.
std::vector<std::complex<long double>> eigenvalues(const IntMatrix& A);

HyperbolicityReport check_hyperbolic(const IntMatrix& A, double tolerance = kHyperbolicTolerance);

/// Sum of log|eigenvalue| over the expanding eigenvalues, in nats.
double toral_entropy(const IntMatrix& A);

/// E+ (+) E- splitting. Coordinates in the columns of `basis` are the adapted
/// coordinates: the adapted norm of x is the Euclidean norm of basis^{-1} x,
/// and in it A scales E+ by at least mu and E- by at most lambda per iterate.
struct HyperbolicSplitting {
    Eigen::MatrixXd basis_plus;   // k x dim E+
    Eigen::MatrixXd basis_minus;  // k x dim E-
    double mu = 0.0;
    double lambda = 0.0;          // 0 when E- = {0}

    Eigen::MatrixXd basis;          // [basis_plus | basis_minus]
    Eigen::MatrixXd basis_inverse;
    Eigen::MatrixXd block_plus;     // A restricted to E+ in adapted coordinates
    Eigen::MatrixXd block_minus;

    std::size_t dim_plus() const { return static_cast<std::size_t>(basis_plus.cols()); }
    std::size_t dim_minus() const { return static_cast<std::size_t>(basis_minus.cols()); }

    double adapted_norm(const Eigen::VectorXd& x) const;
    Eigen::VectorXd plus_coordinates(const Eigen::VectorXd& x) const;
    Eigen::VectorXd minus_coordinates(const Eigen::VectorXd& x) const;
    Eigen::VectorXd from_coordinates(const Eigen::VectorXd& plus, const Eigen::VectorXd& minus) const;
};

/// Real eigenvectors are scaled to unit length with positive first nonzero
/// component; complex pairs use the real canonical (Re, Im) frame.
HyperbolicSplitting splitting(const IntMatrix& A);

/// Rational subspace K of vectors u for which A^{-j} u has bounded
/// denominators (j >= 0). theta_u(e) is a periodic chain exactly when u lies
/// in K. Decided exactly for |det A| = 1, for fully expanding A, and for k <= 3.
class BoundedDenominatorSpace {
public:
    enum class Kind { Zero, Everything, PolynomialKernel, Undetermined };

    explicit BoundedDenominatorSpace(const IntMatrix& A);

    Kind kind() const { return kind_; }
    std::optional<bool> contains(const RatVec& u) const;

    /// An integer matrix agreeing with A^{-1} on K (absent when undetermined).
    const std::optional<IntMatrix>& inverse_on_space() const { return inverse_on_; }

private:
    Kind kind_ = Kind::Undetermined;
    std::optional<IntMatrix> kernel_of_;  // K = ker(kernel_of_) for PolynomialKernel
    std::optional<IntMatrix> inverse_on_;
};

/// Class [(vec, level)] in Z^k[A^-1], i.e. the rational vector A^{-level} vec.
class LimitElement {
public:
    /// Stores the representative as given; use limit_reduce for canonical form.
    LimitElement(MatrixHandle A, IntVec vec, unsigned level);
    static LimitElement zero(MatrixHandle A);

    const MatrixHandle& matrix() const { return A_; }
    const IntVec& vec() const { return vec_; }
    unsigned level() const { return level_; }

    /// A^{-level} vec as an exact rational vector.
    RatVec value() const;
    bool is_canonical() const;

    bool operator==(const LimitElement& o) const;

private:
    MatrixHandle A_;
    IntVec vec_;
    unsigned level_;
};

bool same_matrix(const MatrixHandle& a, const MatrixHandle& b);

LimitElement limit_reduce(const LimitElement& a);
LimitElement limit_lift(const LimitElement& a, unsigned level);
LimitElement limit_add(const LimitElement& a, const LimitElement& b);
LimitElement limit_neg(const LimitElement& a);
LimitElement limit_tau(const LimitElement& a);
LimitElement limit_tau_inverse(const LimitElement& a);

}  // namespace hypsol
