#include "percolab/polynomial.hpp"

#include <algorithm>

namespace percolab {

void RatPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

RatPoly RatPoly::monomial(const Rat& c, std::size_t k) {
    std::vector<Rat> v(k + 1, Rat(0));
    v[k] = c;
    return RatPoly(std::move(v));
}

void RatPoly::set_coeff(std::size_t k, const Rat& v) {
    if (k >= c_.size()) c_.resize(k + 1, Rat(0));
    c_[k] = v;
    trim();
}

RatPoly RatPoly::operator+(const RatPoly& o) const {
    std::vector<Rat> v(std::max(c_.size(), o.c_.size()), Rat(0));
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
    return RatPoly(std::move(v));
}

RatPoly RatPoly::operator-(const RatPoly& o) const {
    std::vector<Rat> v(std::max(c_.size(), o.c_.size()), Rat(0));
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) v[i] -= o.c_[i];
    return RatPoly(std::move(v));
}

RatPoly RatPoly::operator*(const RatPoly& o) const {
    if (c_.empty() || o.c_.empty()) return RatPoly();
    std::vector<Rat> v(c_.size() + o.c_.size() - 1, Rat(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
    }
    return RatPoly(std::move(v));
}

RatPoly RatPoly::operator*(const Rat& s) const {
    std::vector<Rat> v(c_);
    for (auto& x : v) x *= s;
    return RatPoly(std::move(v));
}

RatPoly RatPoly::truncated(std::size_t max_order) const {
    std::vector<Rat> v(c_.begin(),
                       c_.begin() + std::min(c_.size(), max_order + 1));
    return RatPoly(std::move(v));
}

bool RatPoly::zero_through(std::size_t max_order) const {
    for (std::size_t k = 0; k < c_.size() && k <= max_order; ++k)
        if (c_[k] != 0) return false;
    return true;
}

long RatPoly::lowest_order() const {
    for (std::size_t k = 0; k < c_.size(); ++k)
        if (c_[k] != 0) return static_cast<long>(k);
    return -1;
}

Rat RatPoly::eval(const Rat& p) const {
    Rat acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * p + c_[i];
    return acc;
}

double RatPoly::eval_double(double p) const {
    double acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * p + c_[i].get_d();
    return acc;
}

std::vector<std::string> RatPoly::coeff_strings() const {
    std::vector<std::string> out;
    out.reserve(c_.size());
    for (const auto& x : c_) out.push_back(rat_to_string(x));
    return out;
}

std::string RatPoly::pretty() const {
    if (c_.empty()) return "0/1";
    std::string out;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0) continue;
        if (!out.empty()) out += " + ";
        out += rat_to_string(c_[k]);
        if (k == 1) out += " p";
        if (k > 1) out += " p^" + std::to_string(k);
    }
    return out;
}

}  // namespace percolab
