#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace percolab {

using Rat = mpq_class;
using Int = mpz_class;

// "num/den" with the denominator always present, e.g. "3/1", "-5/2".
inline std::string rat_to_string(const Rat& r) {
    Rat c = r;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    r.canonicalize();
    return r;
}

inline Int binom(unsigned long n, unsigned long k) {
    if (k > n) return Int(0);
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

// Raised by enumeration and DP entry points when the requested instance
// exceeds the configured feasibility caps.
struct ResourceGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace percolab
