#include "polybound/rational.hpp"

#include <cmath>
#include <stdexcept>

#include "polybound/errors.hpp"

namespace polybound {

Rat rat_from_double(double x) {
    if (x == 0.0) return Rat(0);
    if (!std::isfinite(x)) throw std::invalid_argument("cannot convert non-finite double to rational");
    int exp = 0;
    double mantissa = std::frexp(x, &exp);  // x = mantissa * 2^exp, |mantissa| in [0.5, 1)
    // 53 significand bits make this product integral for normals and subnormals alike.
    auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
    exp -= 53;
    Rat r(scaled);
    if (exp > 0) {
        r *= Rat(BigInt(1) << exp);
    } else if (exp < 0) {
        r /= Rat(BigInt(1) << -exp);
    }
    return r;
}

Rat rat_pow(const Rat& base, int exp) {
    if (exp < 0) throw std::invalid_argument("rat_pow: negative exponent");
    Rat result(1);
    Rat b = base;
    while (exp > 0) {
        if (exp & 1) result *= b;
        b *= b;
        exp >>= 1;
    }
    return result;
}

BigInt factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    BigInt f(1);
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return BigInt(0);
    k = std::min(k, n - k);
    BigInt num(1);
    for (int i = 0; i < k; ++i) {
        num *= (n - i);
        num /= (i + 1);  // divides exactly: prefix products are binomials
    }
    return num;
}

Rat parse_rat(const std::string& text) {
    try {
        auto slash = text.find('/');
        if (slash == std::string::npos) {
            return Rat(BigInt(text));
        }
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw SchemaError("rational literal with zero denominator: " + text);
        return Rat(num, den);
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception&) {
        throw SchemaError("malformed rational literal: \"" + text + "\" (expected \"a\" or \"a/b\")");
    }
}

std::string rat_to_string(const Rat& r) {
    BigInt num = numerator(r);
    BigInt den = denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

bool fits_double(const Rat& r) {
    double d = to_double(r);
    if (!std::isfinite(d)) return false;
    return rat_from_double(d) == r;
}

}  // namespace polybound
