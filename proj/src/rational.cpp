#include "hypsol/rational.hpp"

#include <cmath>

namespace hypsol {

namespace mp = boost::multiprecision;

Integer floor(const Rational& q)
{
    const Integer num = mp::numerator(q);
    const Integer den = mp::denominator(q);
    Integer quot = num / den;  // truncates toward zero
    if (num < 0 && quot * den != num) {
        quot -= 1;
    }
    return quot;
}

Rational frac(const Rational& q)
{
    return q - Rational(floor(q));
}

Integer round_nearest(const Rational& q)
{
    return floor(q + Rational(1, 2));
}

std::string to_string(const Rational& q)
{
    return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

Rational parse_rational(std::string_view text)
{
    const auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) {
            return Rational(Integer(std::string(text)));
        }
        Integer num(std::string(text.substr(0, slash)));
        Integer den(std::string(text.substr(slash + 1)));
        if (den == 0) {
            throw DomainError("zero denominator in rational '" + std::string(text) + "'");
        }
        return Rational(num, den);
    } catch (const std::runtime_error& e) {
        if (dynamic_cast<const DomainError*>(&e) != nullptr) {
            throw;
        }
        throw DomainError("malformed rational '" + std::string(text) + "'");
    }
}

RatVec to_rational(const IntVec& v)
{
    RatVec out;
    out.reserve(v.size());
    for (const auto& x : v) {
        out.emplace_back(x);
    }
    return out;
}

RatVec frac(const RatVec& v)
{
    RatVec out;
    out.reserve(v.size());
    for (const auto& x : v) {
        out.push_back(frac(x));
    }
    return out;
}

RatVec operator+(const RatVec& a, const RatVec& b)
{
    if (a.size() != b.size()) {
        throw DomainError("vector dimension mismatch");
    }
    RatVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] + b[i];
    }
    return out;
}

RatVec operator-(const RatVec& a, const RatVec& b)
{
    if (a.size() != b.size()) {
        throw DomainError("vector dimension mismatch");
    }
    RatVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] - b[i];
    }
    return out;
}

RatVec operator-(const RatVec& a)
{
    RatVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = -a[i];
    }
    return out;
}

RatVec operator*(const Rational& s, const RatVec& v)
{
    RatVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = s * v[i];
    }
    return out;
}

bool is_integral(const Rational& q)
{
    return mp::denominator(q) == 1;
}

bool is_integral(const RatVec& v)
{
    for (const auto& x : v) {
        if (!is_integral(x)) {
            return false;
        }
    }
    return true;
}

bool is_zero(const RatVec& v)
{
    for (const auto& x : v) {
        if (x != 0) {
            return false;
        }
    }
    return true;
}

Integer common_denominator(const RatVec& v)
{
    Integer l = 1;
    for (const auto& x : v) {
        l = mp::lcm(l, Integer(mp::denominator(x)));
    }
    return l;
}

double euclidean_norm(const RatVec& v)
{
    double s = 0.0;
    for (const auto& x : v) {
        const double d = x.convert_to<double>();
        s += d * d;
    }
    return std::sqrt(s);
}

std::vector<double> to_double(const RatVec& v)
{
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        out.push_back(x.convert_to<double>());
    }
    return out;
}

}  // namespace hypsol
