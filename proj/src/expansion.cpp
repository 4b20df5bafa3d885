#include "percolab/expansion.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <set>
#include <stdexcept>

namespace percolab::expansion {

using series::InvOmegaSeries;

namespace {

// Alternating sum of the three level polynomials, written in the scaled
// variables P = Omega p and x = 1/Omega. The degree-gap constant is
// Omega - Omega' (1 on the hypercube, 2 on the torus); it first matters
// beyond the supported truncation order but is carried for fidelity.
InvOmegaSeries pi_of(const InvOmegaSeries& P, int gap) {
    const std::size_t K = P.order();
    InvOmegaSeries one = InvOmegaSeries::constant(Rat(1), K);
    InvOmegaSeries x = InvOmegaSeries::x_power(1, K);
    InvOmegaSeries x2 = InvOmegaSeries::x_power(2, K);
    InvOmegaSeries degree_ratio = one - InvOmegaSeries::constant(Rat(gap), K) * x;

    InvOmegaSeries P2 = P * P;
    InvOmegaSeries P3 = P2 * P;
    InvOmegaSeries P4 = P3 * P;

    InvOmegaSeries pi0 = InvOmegaSeries::constant(Rat(3, 2), K) * P4 * x2 * degree_ratio;
    InvOmegaSeries pi1 = P2 * x + InvOmegaSeries::constant(Rat(4), K) * P4 * x2 * degree_ratio;
    InvOmegaSeries pi2 = P3 * x2 + P4 * x2 * (one - x);
    return pi0 - pi1 + pi2;
}

}  // namespace

DerivedSeries derive_pc_series(graphs::GraphKind kind, int order) {
    if (order < 0) throw std::invalid_argument("order must be >= 0");
    if (order > 2) {
        throw std::invalid_argument(
            "series derivation supports order <= 2: the level data pins the "
            "expansion only through the 1/Omega^2 coefficient");
    }
    const int gap = kind == graphs::GraphKind::hypercube ? 1 : 2;
    DerivedSeries out;
    InvOmegaSeries one = InvOmegaSeries::constant(Rat(1), order);
    InvOmegaSeries P = one;
    InvOmegaSeries pi = InvOmegaSeries::constant(Rat(0), order);
    for (int pass = 1; pass <= 8; ++pass) {
        pi = pi_of(P, gap);
        InvOmegaSeries next = (one + pi).recip();
        out.passes = pass;
        if (next == P) break;
        P = next;
    }
    out.omega_pc = P;
    out.pi_series = pi;
    return out;
}

const std::vector<Rat>& reference_series() {
    static const std::vector<Rat> coeffs = {Rat(1), Rat(1), Rat(7, 2), Rat(16), Rat(103)};
    return coeffs;
}

Rat predict_pc_exact(std::uint32_t omega, int order) {
    if (omega < 1) throw std::invalid_argument("omega must be >= 1");
    const auto& ref = reference_series();
    if (order < 1 || order > static_cast<int>(ref.size())) {
        throw std::invalid_argument("order must be between 1 and 5");
    }
    Rat total(0);
    Rat inv_pow(1);
    Rat inv(1, static_cast<unsigned long>(omega));
    for (int k = 1; k <= order; ++k) {
        inv_pow *= inv;
        total += ref[static_cast<std::size_t>(k - 1)] * inv_pow;
    }
    return total;
}

double predict_pc(std::uint32_t omega, graphs::GraphKind, int order) {
    return predict_pc_exact(omega, order).get_d();
}

FitResult fit_inverse_poly(const std::vector<FitPoint>& data) {
    constexpr int kBasis = 4;
    std::set<double> distinct;
    for (const auto& pt : data) {
        if (!(pt.omega > 0)) throw std::invalid_argument("omega must be positive");
        distinct.insert(pt.omega);
    }
    if (static_cast<int>(distinct.size()) < kBasis) {
        throw std::invalid_argument("cubic fit needs at least 4 distinct omegas");
    }
    const int m = static_cast<int>(data.size());
    Eigen::MatrixXd A(m, kBasis);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
        const double w = data[static_cast<std::size_t>(i)].stderr_ > 0
                             ? 1.0 / data[static_cast<std::size_t>(i)].stderr_
                             : 1.0;
        double basis = 1.0;
        for (int j = 0; j < kBasis; ++j) {
            A(i, j) = w * basis;
            basis /= data[static_cast<std::size_t>(i)].omega;
        }
        b(i) = w * data[static_cast<std::size_t>(i)].estimate;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-12);
    if (qr.rank() < kBasis) {
        throw std::runtime_error("fit basis is rank deficient on this data");
    }
    Eigen::VectorXd coef = qr.solve(b);
    FitResult out;
    out.coefficients.assign(coef.data(), coef.data() + kBasis);
    out.fitted.resize(static_cast<std::size_t>(m));
    out.residuals.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double fit = 0;
        double basis = 1.0;
        for (int j = 0; j < kBasis; ++j) {
            fit += coef(j) * basis;
            basis /= data[static_cast<std::size_t>(i)].omega;
        }
        out.fitted[static_cast<std::size_t>(i)] = fit;
        out.residuals[static_cast<std::size_t>(i)] = data[static_cast<std::size_t>(i)].estimate - fit;
    }
    return out;
}

}  // namespace percolab::expansion
