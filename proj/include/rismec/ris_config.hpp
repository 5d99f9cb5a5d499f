// RIS reflection vector with unit-modulus entries.
#pragma once

#include <cmath>
#include <numbers>

#include "rismec/types.hpp"

namespace rismec {

template <typename Scalar>
class RisConfig;

template <typename Scalar>
RisConfig<Scalar> project_unit_circle(const CVector<Scalar>& r);

/// r_i = exp(j theta_i), |r_i| = 1. Only constructible through the
/// projection or from phases, so the invariant always holds.
template <typename Scalar>
class RisConfig {
public:
    RisConfig() = default;

    /// All-ones reflection (every phase zero).
    explicit RisConfig(Eigen::Index elements) : r_(CVector<Scalar>::Ones(elements)) {}

    static RisConfig from_phases(const RVector<Scalar>& theta) {
        RisConfig out;
        out.r_.resize(theta.size());
        for (Eigen::Index i = 0; i < theta.size(); ++i) out.r_(i) = std::polar(Scalar(1), theta(i));
        return out;
    }

    const CVector<Scalar>& reflection() const { return r_; }
    Eigen::Index size() const { return r_.size(); }

    /// Phases wrapped to [0, 2pi).
    RVector<Scalar> phases() const {
        constexpr Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
        RVector<Scalar> theta(r_.size());
        for (Eigen::Index i = 0; i < r_.size(); ++i) {
            Scalar t = std::arg(r_(i));
            if (t < 0) t += two_pi;
            if (t >= two_pi) t -= two_pi;
            theta(i) = t;
        }
        return theta;
    }

    friend RisConfig project_unit_circle<Scalar>(const CVector<Scalar>& r);

private:
    CVector<Scalar> r_;
};

/// Entrywise r_i / |r_i|; a zero entry maps to 1 + 0j.
template <typename Scalar>
RisConfig<Scalar> project_unit_circle(const CVector<Scalar>& r) {
    RisConfig<Scalar> out;
    out.r_.resize(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        const Scalar mag = std::sqrt(std::norm(r(i)));
        out.r_(i) = mag > Scalar(0) ? r(i) / mag : Complex<Scalar>(1, 0);
    }
    return out;
}

} // namespace rismec
