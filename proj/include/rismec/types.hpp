// Common dense types and error classes.
#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace rismec {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using CMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using CVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatrixd = CMatrix<double>;
using CVectord = CVector<double>;

/// Thrown when an argument violates an operation's precondition
/// (dimension mismatch, non-finite entries, negative quantities, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown by the delay estimator when a user saw no arrivals.
class UndefinedDelay : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace rismec
