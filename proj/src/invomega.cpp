#include "percolab/invomega.hpp"

#include <algorithm>
#include <stdexcept>

namespace percolab::series {

InvOmegaSeries InvOmegaSeries::constant(const Rat& a, std::size_t order) {
    InvOmegaSeries s(order);
    s.c_[0] = a;
    return s;
}

InvOmegaSeries InvOmegaSeries::x_power(std::size_t k, std::size_t order) {
    InvOmegaSeries s(order);
    if (k <= order) s.c_[k] = 1;
    return s;
}

InvOmegaSeries InvOmegaSeries::operator+(const InvOmegaSeries& o) const {
    InvOmegaSeries s(std::min(order(), o.order()));
    for (std::size_t k = 0; k <= s.order(); ++k) s.c_[k] = coeff(k) + o.coeff(k);
    return s;
}

InvOmegaSeries InvOmegaSeries::operator-(const InvOmegaSeries& o) const {
    InvOmegaSeries s(std::min(order(), o.order()));
    for (std::size_t k = 0; k <= s.order(); ++k) s.c_[k] = coeff(k) - o.coeff(k);
    return s;
}

InvOmegaSeries InvOmegaSeries::operator*(const InvOmegaSeries& o) const {
    InvOmegaSeries s(std::min(order(), o.order()));
    for (std::size_t i = 0; i <= s.order(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; i + j <= s.order(); ++j)
            s.c_[i + j] += c_[i] * o.coeff(j);
    }
    return s;
}

InvOmegaSeries InvOmegaSeries::operator*(const Rat& x) const {
    InvOmegaSeries s = *this;
    for (auto& a : s.c_) a *= x;
    return s;
}

InvOmegaSeries InvOmegaSeries::recip() const {
    if (c_[0] == 0)
        throw std::domain_error("series reciprocal needs a nonzero constant term");
    InvOmegaSeries s(order());
    s.c_[0] = 1 / c_[0];
    for (std::size_t k = 1; k <= order(); ++k) {
        Rat acc(0);
        for (std::size_t j = 1; j <= k; ++j) acc += coeff(j) * s.c_[k - j];
        s.c_[k] = -acc / c_[0];
    }
    return s;
}

InvOmegaSeries InvOmegaSeries::pow(unsigned e) const {
    InvOmegaSeries s = constant(Rat(1), order());
    for (unsigned i = 0; i < e; ++i) s = s * *this;
    return s;
}

InvOmegaSeries InvOmegaSeries::shifted(std::size_t k) const {
    InvOmegaSeries s(order());
    for (std::size_t j = 0; j + k <= order(); ++j) s.c_[j + k] = coeff(j);
    return s;
}

double InvOmegaSeries::eval_double(double omega) const {
    double acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc / omega + c_[i].get_d();
    return acc;
}

std::vector<std::string> InvOmegaSeries::coeff_strings() const {
    std::vector<std::string> out;
    out.reserve(c_.size());
    for (const auto& x : c_) out.push_back(rat_to_string(x));
    return out;
}

}  // namespace percolab::series
