#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "percolab/rational.hpp"

namespace percolab::series {

// Truncated formal power series sum_k a_k / Omega^k with exact rational
// coefficients. All operations truncate at the fixed order of the receiver.
class InvOmegaSeries {
  public:
    // Zero series of order 0.
    InvOmegaSeries() : c_(1, Rat(0)) {}
    // Zero series truncated at `order` (coefficients 0..order inclusive).
    explicit InvOmegaSeries(std::size_t order) : c_(order + 1, Rat(0)) {}
    explicit InvOmegaSeries(std::vector<Rat> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.push_back(Rat(0));
    }
    static InvOmegaSeries constant(const Rat& a, std::size_t order);
    // 1/Omega to the k-th power, truncated at `order`.
    static InvOmegaSeries x_power(std::size_t k, std::size_t order);

    std::size_t order() const { return c_.size() - 1; }
    Rat coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rat(0); }
    const std::vector<Rat>& coeffs() const { return c_; }

    InvOmegaSeries operator+(const InvOmegaSeries& o) const;
    InvOmegaSeries operator-(const InvOmegaSeries& o) const;
    InvOmegaSeries operator*(const InvOmegaSeries& o) const;
    InvOmegaSeries operator*(const Rat& s) const;
    bool operator==(const InvOmegaSeries& o) const { return c_ == o.c_; }

    // Multiplicative inverse; requires a nonzero constant term.
    InvOmegaSeries recip() const;
    InvOmegaSeries pow(unsigned e) const;
    // Shift by x^k, i.e. multiply by Omega^{-k}, truncating as usual.
    InvOmegaSeries shifted(std::size_t k) const;

    double eval_double(double omega) const;
    std::vector<std::string> coeff_strings() const;

  private:
    std::vector<Rat> c_;
};

}  // namespace percolab::series
