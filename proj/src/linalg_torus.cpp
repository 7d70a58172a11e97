#include "hypsol/linalg_torus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hypsol {

namespace {

using IntMat = std::vector<Integer>;  // row-major k*k

IntMat multiply(const IntMat& a, const IntMat& b, std::size_t k)
{
    IntMat c(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i * k + l] == 0) {
                continue;
            }
            for (std::size_t j = 0; j < k; ++j) {
                c[i * k + j] += a[i * k + l] * b[l * k + j];
            }
        }
    }
    return c;
}

// Faddeev-LeVerrier; every division is exact over the integers.
void faddeev_leverrier(const IntMat& a, std::size_t k, std::vector<Integer>& coeffs, IntMat& adj)
{
    coeffs.assign(k + 1, Integer(0));
    coeffs[k] = 1;
    IntMat m(k * k, Integer(0));
    IntMat am(k * k, Integer(0));
    for (std::size_t step = 1; step <= k; ++step) {
        // M_step = A M_{step-1} + c_{k-step+1} I
        m = am;
        for (std::size_t i = 0; i < k; ++i) {
            m[i * k + i] += coeffs[k - step + 1];
        }
        am = multiply(a, m, k);
        Integer trace = 0;
        for (std::size_t i = 0; i < k; ++i) {
            trace += am[i * k + i];
        }
        coeffs[k - step] = -trace / Integer(step);
    }
    // adj(A) = (-1)^{k+1} M_k
    adj = m;
    if (k % 2 == 0) {
        for (auto& x : adj) {
            x = -x;
        }
    }
}

template <typename T>
std::complex<T> eval_poly(const std::vector<Integer>& c, std::complex<T> z, std::complex<T>* deriv)
{
    std::complex<T> p = 0;
    std::complex<T> dp = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
        dp = dp * z + p;
        p = p * z + static_cast<T>(c[i].convert_to<long double>());
    }
    if (deriv != nullptr) {
        *deriv = dp;
    }
    return p;
}

long double eval_real(const std::vector<Integer>& c, long double x)
{
    long double p = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
        p = p * x + c[i].convert_to<long double>();
    }
    return p;
}

Integer eval_exact(const std::vector<Integer>& c, const Integer& x)
{
    Integer p = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
        p = p * x + c[i];
    }
    return p;
}

std::complex<long double> polish_root(const std::vector<Integer>& c, std::complex<long double> z)
{
    for (int it = 0; it < 60; ++it) {
        std::complex<long double> dp;
        const auto p = eval_poly<long double>(c, z, &dp);
        if (std::abs(dp) == 0.0L) {
            break;
        }
        const auto step = p / dp;
        z -= step;
        if (std::abs(step) <= 1e-19L * std::max<long double>(1.0L, std::abs(z))) {
            break;
        }
    }
    return z;
}

// Bisection inside a sign-change bracket around a real root estimate.
long double certify_real_root(const std::vector<Integer>& c, long double r)
{
    const long double delta = 1e-10L * std::max<long double>(1.0L, std::fabs(r));
    long double lo = r - delta;
    long double hi = r + delta;
    long double flo = eval_real(c, lo);
    const long double fhi = eval_real(c, hi);
    if (flo == 0.0L) {
        return lo;
    }
    if (fhi == 0.0L) {
        return hi;
    }
    if ((flo < 0) == (fhi < 0)) {
        return r;  // even multiplicity: no sign change to certify
    }
    for (int it = 0; it < 200 && hi - lo > 0; ++it) {
        const long double mid = 0.5L * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const long double fm = eval_real(c, mid);
        if (fm == 0.0L) {
            return mid;
        }
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5L * (lo + hi);
}

// Square-free part p / gcd(p, p') of a monic integer polynomial; monic with
// integer coefficients, and every root is simple.
std::vector<Integer> square_free_part(const std::vector<Integer>& c)
{
    using Poly = std::vector<Rational>;
    auto trim = [](Poly& a) {
        while (!a.empty() && a.back() == 0) {
            a.pop_back();
        }
    };
    auto rem = [&](Poly a, const Poly& b) {
        while (a.size() >= b.size() && !a.empty()) {
            const Rational f = a.back() / b.back();
            const std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) {
                a[i + shift] -= f * b[i];
            }
            a.pop_back();
            trim(a);
        }
        return a;
    };
    Poly p(c.begin(), c.end());
    Poly dp;
    for (std::size_t i = 1; i < p.size(); ++i) {
        dp.push_back(p[i] * static_cast<long>(i));
    }
    trim(dp);
    Poly a = p;
    Poly b = dp;
    while (!b.empty()) {
        Poly r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.size() <= 1) {
        return c;
    }
    // exact division p / a
    Poly q(p.size() - a.size() + 1);
    Poly r = p;
    for (std::size_t i = q.size(); i-- > 0;) {
        q[i] = r[i + a.size() - 1] / a.back();
        for (std::size_t j = 0; j < a.size(); ++j) {
            r[i + j] -= q[i] * a[j];
        }
    }
    std::vector<Integer> out;
    for (const auto& x : q) {
        out.push_back(numerator(Rational(x / q.back())));
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(std::size_t k, std::vector<Integer> entries)
    : IntMatrix(k, std::move(entries), true)
{
}

IntMatrix::IntMatrix(std::size_t k, std::vector<Integer> entries, bool compute_invariants)
    : k_(k), entries_(std::move(entries))
{
    if (k_ == 0) {
        throw DomainError("matrix dimension must be positive");
    }
    if (entries_.size() != k_ * k_) {
        throw DomainError("matrix must be square");
    }
    if (!compute_invariants) {
        return;
    }
    IntMat adj;
    faddeev_leverrier(entries_, k_, charpoly_, adj);
    det_ = (k_ % 2 == 0) ? charpoly_[0] : Integer(-charpoly_[0]);
    adjugate_ = std::shared_ptr<const IntMatrix>(new IntMatrix(k_, std::move(adj), false));
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long long>>& rows)
{
    const std::size_t k = rows.size();
    std::vector<Integer> e;
    e.reserve(k * k);
    for (const auto& r : rows) {
        if (r.size() != k) {
            throw DomainError("matrix must be square");
        }
        for (long long x : r) {
            e.emplace_back(x);
        }
    }
    return IntMatrix(k, std::move(e));
}

IntMatrix IntMatrix::identity(std::size_t k)
{
    std::vector<Integer> e(k * k, Integer(0));
    for (std::size_t i = 0; i < k; ++i) {
        e[i * k + i] = 1;
    }
    return IntMatrix(k, std::move(e));
}

IntMatrix IntMatrix::transpose() const
{
    std::vector<Integer> e(k_ * k_);
    for (std::size_t i = 0; i < k_; ++i) {
        for (std::size_t j = 0; j < k_; ++j) {
            e[j * k_ + i] = entries_[i * k_ + j];
        }
    }
    return IntMatrix(k_, std::move(e));
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const
{
    if (other.k_ != k_) {
        throw DomainError("matrix dimension mismatch");
    }
    return IntMatrix(k_, multiply(entries_, other.entries_, k_));
}

IntMatrix IntMatrix::power(unsigned n) const
{
    IntMat result = IntMatrix::identity(k_).entries_;
    IntMat base = entries_;
    while (n > 0) {
        if (n & 1U) {
            result = multiply(result, base, k_);
        }
        base = multiply(base, base, k_);
        n >>= 1U;
    }
    return IntMatrix(k_, std::move(result));
}

IntVec IntMatrix::apply(const IntVec& v) const
{
    if (v.size() != k_) {
        throw DomainError("vector dimension mismatch");
    }
    IntVec out(k_, Integer(0));
    for (std::size_t i = 0; i < k_; ++i) {
        for (std::size_t j = 0; j < k_; ++j) {
            out[i] += entries_[i * k_ + j] * v[j];
        }
    }
    return out;
}

RatVec IntMatrix::apply(const RatVec& v) const
{
    if (v.size() != k_) {
        throw DomainError("vector dimension mismatch");
    }
    RatVec out(k_, Rational(0));
    for (std::size_t i = 0; i < k_; ++i) {
        for (std::size_t j = 0; j < k_; ++j) {
            if (entries_[i * k_ + j] != 0) {
                out[i] += Rational(entries_[i * k_ + j]) * v[j];
            }
        }
    }
    return out;
}

RatVec IntMatrix::apply_inverse(const RatVec& v) const
{
    if (det_ == 0) {
        throw DomainError("singular matrix has no inverse");
    }
    RatVec out = adjugate_->apply(v);
    const Rational inv_det(Integer(1), det_);
    for (auto& x : out) {
        x *= inv_det;
    }
    return out;
}

Eigen::MatrixXd IntMatrix::to_eigen() const
{
    Eigen::MatrixXd m(static_cast<Eigen::Index>(k_), static_cast<Eigen::Index>(k_));
    for (std::size_t i = 0; i < k_; ++i) {
        for (std::size_t j = 0; j < k_; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entries_[i * k_ + j].convert_to<double>();
        }
    }
    return m;
}

std::vector<std::vector<long long>> IntMatrix::to_rows() const
{
    std::vector<std::vector<long long>> rows(k_, std::vector<long long>(k_));
    for (std::size_t i = 0; i < k_; ++i) {
        for (std::size_t j = 0; j < k_; ++j) {
            rows[i][j] = entries_[i * k_ + j].convert_to<long long>();
        }
    }
    return rows;
}

std::string IntMatrix::to_string() const
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < k_; ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < k_; ++j) {
            os << (j ? "," : "") << entries_[i * k_ + j];
        }
        os << ']';
    }
    os << ']';
    return os.str();
}

bool IntMatrix::operator==(const IntMatrix& other) const
{
    return k_ == other.k_ && entries_ == other.entries_;
}

MatrixHandle make_matrix(const std::vector<std::vector<long long>>& rows)
{
    return std::make_shared<const IntMatrix>(IntMatrix::from_rows(rows));
}

// --------------------------------------------------------------- TorusPoint

TorusPoint::TorusPoint(RatVec coords) : coords_(frac(coords)) {}

TorusPoint TorusPoint::zero(std::size_t k)
{
    return TorusPoint(RatVec(k, Rational(0)));
}

bool TorusPoint::is_zero() const
{
    return hypsol::is_zero(coords_);
}

RatVec TorusPoint::centered_lift() const
{
    RatVec out = coords_;
    for (auto& x : out) {
        if (x >= Rational(1, 2)) {
            x -= 1;
        }
    }
    return out;
}

TorusPoint TorusPoint::operator+(const TorusPoint& o) const
{
    return TorusPoint(coords_ + o.coords_);
}

TorusPoint TorusPoint::operator-(const TorusPoint& o) const
{
    return TorusPoint(coords_ - o.coords_);
}

TorusPoint TorusPoint::operator-() const
{
    return TorusPoint(-coords_);
}

TorusPoint TorusPoint::operator+(const RatVec& v) const
{
    return TorusPoint(coords_ + v);
}

std::string TorusPoint::to_string() const
{
    std::string s = "[";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        s += (i ? "," : "") + hypsol::to_string(coords_[i]);
    }
    return s + "]";
}

TorusPoint apply(const IntMatrix& A, const TorusPoint& x)
{
    return TorusPoint(A.apply(x.coords()));
}

// ----------------------------------------------------------- hyperbolicity

std::vector<std::complex<long double>> eigenvalues(const IntMatrix& A)
{
    const auto cp = square_free_part(A.characteristic_polynomial());
    Eigen::EigenSolver<Eigen::MatrixXd> es(A.to_eigen(), false);
    std::vector<std::complex<long double>> roots;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const auto ev = es.eigenvalues()(i);
        std::complex<long double> z(ev.real(), ev.imag());
        z = polish_root(cp, z);
        if (std::fabs(z.imag()) <= 1e-12L * std::max<long double>(1.0L, std::abs(z))) {
            z = certify_real_root(cp, z.real());
        }
        roots.push_back(z);
    }
    std::stable_sort(roots.begin(), roots.end(),
                     [](const auto& a, const auto& b) { return std::abs(a) > std::abs(b); });
    return roots;
}

HyperbolicityReport check_hyperbolic(const IntMatrix& A, double tolerance)
{
    HyperbolicityReport r;
    r.det = A.det();
    const auto roots = eigenvalues(A);
    r.is_hyperbolic = true;
    for (const auto& z : roots) {
        const double m = static_cast<double>(std::abs(z));
        r.eigen_moduli.push_back(m);
        if (std::fabs(m - 1.0) <= tolerance) {
            r.is_hyperbolic = false;
        }
    }
    // +-1 roots are decided exactly.
    const auto& cp = A.characteristic_polynomial();
    if (eval_exact(cp, Integer(1)) == 0 || eval_exact(cp, Integer(-1)) == 0) {
        r.is_hyperbolic = false;
    }
    return r;
}

double toral_entropy(const IntMatrix& A)
{
    if (!check_hyperbolic(A).is_hyperbolic) {
        throw DomainError("toral_entropy: matrix " + A.to_string() + " is not hyperbolic; splitting undefined");
    }
    long double h = 0.0L;
    for (const auto& z : eigenvalues(A)) {
        const long double m = std::abs(z);
        if (m > 1.0L) {
            h += std::log(m);
        }
    }
    return static_cast<double>(h);
}

// ---------------------------------------------------------------- splitting

namespace {

Eigen::VectorXcd refine_eigenvector(const Eigen::MatrixXd& a, std::complex<double> lambda, Eigen::VectorXcd v)
{
    const Eigen::Index k = a.rows();
    const double scale = std::max(1.0, std::abs(lambda));
    const std::complex<double> shift = lambda + std::complex<double>(1e-13 * scale, 0.0);
    Eigen::MatrixXcd m = a.cast<std::complex<double>>() - shift * Eigen::MatrixXcd::Identity(k, k);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    for (int it = 0; it < 3; ++it) {
        Eigen::VectorXcd w = lu.solve(v);
        const double n = w.norm();
        if (!std::isfinite(n) || n == 0.0) {
            break;
        }
        v = w / n;
    }
    return v;
}

void normalize_real_direction(Eigen::VectorXd& v)
{
    v.normalize();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::fabs(v(i)) > 1e-12) {
            if (v(i) < 0) {
                v = -v;
            }
            break;
        }
    }
}

struct Frame {
    std::vector<Eigen::VectorXd> vectors;
    std::vector<Eigen::MatrixXd> blocks;  // 1x1 or 2x2 real canonical blocks
    double min_modulus = std::numeric_limits<double>::infinity();
    double max_modulus = 0.0;
};

Eigen::MatrixXd assemble_block(const std::vector<Eigen::MatrixXd>& blocks, Eigen::Index n)
{
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        out.block(at, at, b.rows(), b.cols()) = b;
        at += b.rows();
    }
    return out;
}

}  // namespace

HyperbolicSplitting splitting(const IntMatrix& A)
{
    const auto report = check_hyperbolic(A);
    if (!report.is_hyperbolic) {
        throw DomainError("splitting: matrix " + A.to_string() + " is not hyperbolic");
    }
    const Eigen::MatrixXd a = A.to_eigen();
    const auto k = static_cast<Eigen::Index>(A.dim());
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, true);
    const auto polished = eigenvalues(A);

    std::vector<std::complex<double>> values;
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto ev = es.eigenvalues()(i);
        // replace by the nearest polished root
        std::size_t best = 0;
        for (std::size_t j = 1; j < polished.size(); ++j) {
            if (std::abs(std::complex<double>(polished[j]) - ev) < std::abs(std::complex<double>(polished[best]) - ev)) {
                best = j;
            }
        }
        values.emplace_back(polished[best]);
    }

    Frame plus;
    Frame minus;
    for (Eigen::Index i = 0; i < k; ++i) {
        const std::complex<double> lambda = values[static_cast<std::size_t>(i)];
        const bool is_real = std::fabs(lambda.imag()) <= 1e-12 * std::max(1.0, std::abs(lambda));
        if (!is_real && lambda.imag() < 0) {
            continue;  // handled with its conjugate
        }
        bool simple = true;
        for (Eigen::Index j = 0; j < k; ++j) {
            if (j != i && std::abs(values[static_cast<std::size_t>(j)] - lambda) < 1e-6 * std::max(1.0, std::abs(lambda))) {
                simple = false;
            }
        }
        Eigen::VectorXcd v = es.eigenvectors().col(i);
        if (simple) {
            v = refine_eigenvector(a, lambda, v);
        }
        const double modulus = std::abs(lambda);
        Frame& f = modulus > 1.0 ? plus : minus;
        f.min_modulus = std::min(f.min_modulus, modulus);
        f.max_modulus = std::max(f.max_modulus, modulus);
        if (is_real) {
            // rotate the complex phase away, then keep the real part
            Eigen::Index big = 0;
            v.cwiseAbs().maxCoeff(&big);
            v *= std::conj(v(big)) / std::abs(v(big));
            Eigen::VectorXd r = v.real();
            normalize_real_direction(r);
            f.vectors.push_back(r);
            Eigen::MatrixXd b(1, 1);
            b(0, 0) = lambda.real();
            f.blocks.push_back(b);
        } else {
            // A(u + iv) = (a + ib)(u + iv)  =>  A [u v] = [u v] [[a, b], [-b, a]]
            v /= v.norm();
            f.vectors.push_back(v.real());
            f.vectors.push_back(v.imag());
            Eigen::MatrixXd b(2, 2);
            b << lambda.real(), lambda.imag(), -lambda.imag(), lambda.real();
            f.blocks.push_back(b);
        }
    }

    HyperbolicSplitting s;
    const auto np = static_cast<Eigen::Index>(plus.vectors.size());
    const auto nm = static_cast<Eigen::Index>(minus.vectors.size());
    s.basis_plus.resize(k, np);
    s.basis_minus.resize(k, nm);
    for (Eigen::Index i = 0; i < np; ++i) {
        s.basis_plus.col(i) = plus.vectors[static_cast<std::size_t>(i)];
    }
    for (Eigen::Index i = 0; i < nm; ++i) {
        s.basis_minus.col(i) = minus.vectors[static_cast<std::size_t>(i)];
    }
    s.mu = plus.vectors.empty() ? std::numeric_limits<double>::infinity() : plus.min_modulus;
    s.lambda = minus.vectors.empty() ? 0.0 : minus.max_modulus;
    s.basis.resize(k, k);
    s.basis << s.basis_plus, s.basis_minus;
    s.basis_inverse = s.basis.inverse();
    s.block_plus = assemble_block(plus.blocks, np);
    s.block_minus = assemble_block(minus.blocks, nm);
    return s;
}

double HyperbolicSplitting::adapted_norm(const Eigen::VectorXd& x) const
{
    return (basis_inverse * x).norm();
}

Eigen::VectorXd HyperbolicSplitting::plus_coordinates(const Eigen::VectorXd& x) const
{
    return (basis_inverse * x).head(basis_plus.cols());
}

Eigen::VectorXd HyperbolicSplitting::minus_coordinates(const Eigen::VectorXd& x) const
{
    return (basis_inverse * x).tail(basis_minus.cols());
}

Eigen::VectorXd HyperbolicSplitting::from_coordinates(const Eigen::VectorXd& p, const Eigen::VectorXd& m) const
{
    return basis_plus * p + basis_minus * m;
}

// ------------------------------------------------- BoundedDenominatorSpace

namespace {

// Integer roots of a monic integer polynomial (candidates divide c_0).
std::vector<Integer> integer_roots(const std::vector<Integer>& c)
{
    std::vector<Integer> roots;
    Integer c0 = boost::multiprecision::abs(c[0]);
    if (c0 == 0) {
        roots.push_back(0);
        return roots;
    }
    if (c0 > Integer(1000000)) {
        return roots;
    }
    const long long n = c0.convert_to<long long>();
    for (long long d = 1; d * d <= n; ++d) {
        if (n % d != 0) {
            continue;
        }
        for (long long cand : {d, -d, n / d, -(n / d)}) {
            if (eval_exact(c, Integer(cand)) == 0 &&
                std::find(roots.begin(), roots.end(), Integer(cand)) == roots.end()) {
                roots.push_back(cand);
            }
        }
    }
    return roots;
}

// Synthetic division by (x - r).
std::vector<Integer> deflate(const std::vector<Integer>& c, const Integer& r)
{
    const std::size_t n = c.size() - 1;
    std::vector<Integer> q(n);
    Integer carry = 0;
    for (std::size_t i = n; i-- > 0;) {
        carry = c[i + 1] + carry * r;
        q[i] = carry;
    }
    return q;
}

IntMatrix evaluate_at(const IntMatrix& A, const std::vector<Integer>& q)
{
    const std::size_t k = A.dim();
    // Horner: ((q_n A + q_{n-1}) A + ...)
    IntMatrix h(k, std::vector<Integer>(k * k, Integer(0)));
    for (std::size_t i = q.size(); i-- > 0;) {
        h = h * A;
        std::vector<Integer> e(k * k);
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t s = 0; s < k; ++s) {
                e[r * k + s] = h(r, s) + (r == s ? q[i] : Integer(0));
            }
        }
        h = IntMatrix(k, std::move(e));
    }
    return h;
}

}  // namespace

BoundedDenominatorSpace::BoundedDenominatorSpace(const IntMatrix& A)
{
    using boost::multiprecision::abs;
    const std::size_t k = A.dim();
    const IntMatrix zero(k, std::vector<Integer>(k * k, Integer(0)));
    if (A.det() == 0) {
        kind_ = Kind::Undetermined;
        return;
    }
    if (abs(A.det()) == 1) {
        kind_ = Kind::Everything;
        std::vector<Integer> e(k * k);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                e[i * k + j] = A.det() * A.adjugate()(i, j);
            }
        }
        inverse_on_ = IntMatrix(k, std::move(e));
        return;
    }
    const auto roots = eigenvalues(A);
    const bool fully_expanding =
        std::all_of(roots.begin(), roots.end(), [](const auto& z) { return std::abs(z) > 1.0L + 1e-9L; });
    const auto& cp = A.characteristic_polynomial();
    const auto ir = integer_roots(cp);
    const auto unit = [](const Integer& r) { return abs(r) == 1; };
    if (fully_expanding || k <= 2) {
        // For k <= 2 a unit-constant factor is either the whole polynomial
        // (excluded, |det| > 1) or a linear factor x -+ 1.
        if (fully_expanding || std::none_of(ir.begin(), ir.end(), unit)) {
            kind_ = Kind::Zero;
            inverse_on_ = zero;
        }
        return;
    }
    if (k == 3) {
        if (ir.empty()) {
            kind_ = Kind::Zero;  // irreducible cubic, non-unit constant
            inverse_on_ = zero;
            return;
        }
        const auto quad = deflate(cp, ir.front());
        if (abs(quad[0]) == 1) {
            // On K = ker q(A): A (A + q_1) = -q_0, so A^{-1} = -q_0 (A + q_1).
            kind_ = Kind::PolynomialKernel;
            kernel_of_ = evaluate_at(A, quad);
            std::vector<Integer> e(k * k);
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t j = 0; j < k; ++j) {
                    e[i * k + j] = -quad[0] * (A(i, j) + (i == j ? quad[1] : Integer(0)));
                }
            }
            inverse_on_ = IntMatrix(k, std::move(e));
            return;
        }
        const auto qr = integer_roots(quad);
        if (std::none_of(ir.begin(), ir.end(), unit) && std::none_of(qr.begin(), qr.end(), unit)) {
            kind_ = Kind::Zero;
            inverse_on_ = zero;
        }
        return;
    }
}

std::optional<bool> BoundedDenominatorSpace::contains(const RatVec& u) const
{
    switch (kind_) {
    case Kind::Zero:
        return is_zero(u);
    case Kind::Everything:
        return true;
    case Kind::PolynomialKernel:
        return is_zero(kernel_of_->apply(u));
    case Kind::Undetermined:
        break;
    }
    if (is_zero(u)) {
        return true;
    }
    return std::nullopt;
}

// ------------------------------------------------------------- LimitElement

bool same_matrix(const MatrixHandle& a, const MatrixHandle& b)
{
    return a == b || (a && b && *a == *b);
}

LimitElement::LimitElement(MatrixHandle A, IntVec vec, unsigned level)
    : A_(std::move(A)), vec_(std::move(vec)), level_(level)
{
    if (!A_) {
        throw DomainError("limit element needs a matrix");
    }
    if (vec_.size() != A_->dim()) {
        throw DomainError("limit element dimension mismatch");
    }
    if (A_->det() == 0) {
        throw DomainError("direct limit needs a nonsingular matrix");
    }
}

LimitElement LimitElement::zero(MatrixHandle A)
{
    const std::size_t k = A->dim();
    return LimitElement(std::move(A), IntVec(k, Integer(0)), 0);
}

RatVec LimitElement::value() const
{
    RatVec v = to_rational(vec_);
    for (unsigned i = 0; i < level_; ++i) {
        v = A_->apply_inverse(v);
    }
    return v;
}

namespace {

// w with A w = v, if one exists over the integers.
std::optional<IntVec> integer_preimage(const IntMatrix& A, const IntVec& v)
{
    IntVec w = A.adjugate().apply(v);
    for (auto& x : w) {
        if (x % A.det() != 0) {
            return std::nullopt;
        }
        x /= A.det();
    }
    return w;
}

}  // namespace

bool LimitElement::is_canonical() const
{
    return level_ == 0 || !integer_preimage(*A_, vec_).has_value();
}

bool LimitElement::operator==(const LimitElement& o) const
{
    if (!same_matrix(A_, o.A_)) {
        return false;
    }
    const auto a = limit_reduce(*this);
    const auto b = limit_reduce(o);
    return a.level_ == b.level_ && a.vec_ == b.vec_;
}

LimitElement limit_reduce(const LimitElement& a)
{
    IntVec v = a.vec();
    unsigned level = a.level();
    while (level > 0) {
        auto w = integer_preimage(*a.matrix(), v);
        if (!w) {
            break;
        }
        v = std::move(*w);
        --level;
    }
    return LimitElement(a.matrix(), std::move(v), level);
}

LimitElement limit_lift(const LimitElement& a, unsigned level)
{
    if (level < a.level()) {
        throw DomainError("limit_lift cannot lower the level");
    }
    IntVec v = a.vec();
    for (unsigned i = a.level(); i < level; ++i) {
        v = a.matrix()->apply(v);
    }
    return LimitElement(a.matrix(), std::move(v), level);
}

LimitElement limit_add(const LimitElement& a, const LimitElement& b)
{
    if (!same_matrix(a.matrix(), b.matrix())) {
        throw DomainError("limit_add: elements over different matrices");
    }
    const unsigned level = std::max(a.level(), b.level());
    const auto la = limit_lift(a, level);
    const auto lb = limit_lift(b, level);
    IntVec sum(la.vec().size());
    for (std::size_t i = 0; i < sum.size(); ++i) {
        sum[i] = la.vec()[i] + lb.vec()[i];
    }
    return limit_reduce(LimitElement(a.matrix(), std::move(sum), level));
}

LimitElement limit_neg(const LimitElement& a)
{
    IntVec v = a.vec();
    for (auto& x : v) {
        x = -x;
    }
    return limit_reduce(LimitElement(a.matrix(), std::move(v), a.level()));
}

LimitElement limit_tau(const LimitElement& a)
{
    return limit_reduce(LimitElement(a.matrix(), a.matrix()->apply(a.vec()), a.level()));
}

LimitElement limit_tau_inverse(const LimitElement& a)
{
    return limit_reduce(LimitElement(a.matrix(), a.vec(), a.level() + 1));
}

}  // namespace hypsol
