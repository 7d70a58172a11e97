#pragma once

// Exact scalar and vector types shared by every exact module.

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hypsol {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

using IntVec = std::vector<Integer>;
using RatVec = std::vector<Rational>;

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Largest integer not exceeding q.
Integer floor(const Rational& q);

/// q - floor(q), always in [0,1).
Rational frac(const Rational& q);

/// Nearest integer, ties rounded up.
Integer round_nearest(const Rational& q);

std::string to_string(const Rational& q);       // "p/q"
Rational parse_rational(std::string_view text);  // accepts "p/q", "p", "-p/q"

RatVec to_rational(const IntVec& v);
RatVec frac(const RatVec& v);

RatVec operator+(const RatVec& a, const RatVec& b);
RatVec operator-(const RatVec& a, const RatVec& b);
RatVec operator-(const RatVec& a);
RatVec operator*(const Rational& s, const RatVec& v);

bool is_integral(const Rational& q);
bool is_integral(const RatVec& v);
bool is_zero(const RatVec& v);

/// Least common multiple of the denominators.
Integer common_denominator(const RatVec& v);

double euclidean_norm(const RatVec& v);
std::vector<double> to_double(const RatVec& v);

}  // namespace hypsol
