#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "percolab/rational.hpp"

namespace percolab {

// Dense polynomial in the bond density p with exact rational coefficients.
class RatPoly {
  public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    static RatPoly constant(const Rat& a) { return RatPoly(std::vector<Rat>{a}); }
    // c * p^k
    static RatPoly monomial(const Rat& c, std::size_t k);

    bool is_zero() const { return c_.empty(); }
    // Degree of the zero polynomial is reported as -1.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    Rat coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rat(0); }
    void set_coeff(std::size_t k, const Rat& v);
    const std::vector<Rat>& coeffs() const { return c_; }

    RatPoly operator+(const RatPoly& o) const;
    RatPoly operator-(const RatPoly& o) const;
    RatPoly operator*(const RatPoly& o) const;
    RatPoly operator*(const Rat& s) const;
    RatPoly operator-() const { return *this * Rat(-1); }
    bool operator==(const RatPoly& o) const { return c_ == o.c_; }

    RatPoly truncated(std::size_t max_order) const;
    // True when every coefficient through max_order vanishes.
    bool zero_through(std::size_t max_order) const;
    // Smallest k with a nonzero coefficient, or -1 for the zero polynomial.
    long lowest_order() const;

    Rat eval(const Rat& p) const;
    double eval_double(double p) const;

    // Ascending "num/den" strings, one per coefficient starting at p^0.
    std::vector<std::string> coeff_strings() const;
    // Human form like "3/1 p^4 + -1/2 p^6"; "0/1" for the zero polynomial.
    std::string pretty() const;

  private:
    void trim();
    std::vector<Rat> c_;
};

}  // namespace percolab
