#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace sgm {

using Integer = boost::multiprecision::cpp_int;
using IntVector = std::vector<Integer>;

/// Remainder in [0, |m|) for m != 0; returns x unchanged for m == 0.
inline Integer floor_mod(const Integer& x, const Integer& m) {
    if (m == 0) return x;
    Integer r = x % m;
    if (r < 0) r += abs(m);
    return r;
}

/// Floor division for m != 0.
inline Integer floor_div(const Integer& x, const Integer& m) {
    Integer q = x / m;
    if ((x % m != 0) && ((x < 0) != (m < 0))) --q;
    return q;
}

/// Non-negative gcd with gcd(0, 0) = 0.
inline Integer igcd(const Integer& a, const Integer& b) {
    return boost::multiprecision::gcd(abs(a), abs(b));
}

inline Integer ilcm(const Integer& a, const Integer& b) {
    if (a == 0 || b == 0) return 0;
    return abs(a / igcd(a, b) * b);
}

/// Extended gcd: returns g >= 0 and s, t with s*a + t*b == g.
struct ExtendedGcd {
    Integer g, s, t;
};

inline ExtendedGcd extended_gcd(const Integer& a, const Integer& b) {
    Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        Integer q = old_r / r;
        Integer tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    return {old_r, old_s, old_t};
}

inline bool is_prime(const Integer& n) {
    if (n < 2) return false;
    for (Integer d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::string to_string(const Integer& x) { return x.str(); }

inline bool is_zero_vector(const IntVector& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

}  // namespace sgm
