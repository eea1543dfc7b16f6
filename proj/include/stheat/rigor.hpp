#pragma once

#include <Eigen/Dense>
#include <optional>

#include "stheat/interval.hpp"

namespace stheat {

enum class Mode { fast, rigorous };

/// A certified range for one reported quantity. In rigorous mode the
/// exact value is mathematically guaranteed to lie in [lo, hi]; in fast
/// mode lo == hi is a point estimate with no guarantee attached.
struct Enclosure {
    double lo = 0.0;
    double hi = 0.0;
    Mode mode = Mode::fast;

    static Enclosure fast_point(double x) { return {x, x, Mode::fast}; }
    static Enclosure certified(const Interval& iv) { return {iv.lo, iv.hi, Mode::rigorous}; }

    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    double rel_width() const {
        const double m = std::abs(mid());
        return m > 0.0 ? width() / m : width();
    }
    bool contains(double x) const { return lo <= x && x <= hi; }
    Interval as_interval() const { return {lo, hi}; }
};

/// Dense matrix of intervals, stored as endpoint matrices. Arithmetic
/// keeps the containment guarantee: results enclose the exact
/// real-arithmetic results for every point selection of the operands.
struct IntervalMatrix {
    Eigen::MatrixXd lo, hi;

    IntervalMatrix() = default;
    IntervalMatrix(Eigen::Index rows, Eigen::Index cols)
        : lo(Eigen::MatrixXd::Zero(rows, cols)), hi(Eigen::MatrixXd::Zero(rows, cols)) {}

    static IntervalMatrix from_point(const Eigen::MatrixXd& a) { return {a, a}; }
    static IntervalMatrix identity(Eigen::Index d) {
        return from_point(Eigen::MatrixXd::Identity(d, d));
    }

    Eigen::Index rows() const { return lo.rows(); }
    Eigen::Index cols() const { return lo.cols(); }

    Interval at(Eigen::Index i, Eigen::Index j) const { return {lo(i, j), hi(i, j)}; }
    void set(Eigen::Index i, Eigen::Index j, const Interval& v) {
        lo(i, j) = v.lo;
        hi(i, j) = v.hi;
    }

    Eigen::MatrixXd mid() const { return 0.5 * (lo + hi); }
    Eigen::MatrixXd rad_upper() const;  ///< entrywise radius, rounded up
    Eigen::MatrixXd mag() const { return lo.cwiseAbs().cwiseMax(hi.cwiseAbs()); }
    double max_rel_width() const;

    IntervalMatrix transpose() const { return {lo.transpose(), hi.transpose()}; }
    bool contains(const Eigen::MatrixXd& a) const {
        return (lo.array() <= a.array()).all() && (a.array() <= hi.array()).all();
    }

private:
    IntervalMatrix(Eigen::MatrixXd l, Eigen::MatrixXd h) : lo(std::move(l)), hi(std::move(h)) {}
};

IntervalMatrix operator+(const IntervalMatrix& a, const IntervalMatrix& b);
IntervalMatrix operator-(const IntervalMatrix& a, const IntervalMatrix& b);
IntervalMatrix scale(const Interval& s, const IntervalMatrix& a);

/// Interval matrix product. Midpoint-radius evaluation: the midpoint
/// product runs as an ordinary BLAS-speed product and the radius
/// collects the operand radii plus a rigorous bound on the rounding
/// error of the midpoint product itself (the standard dot-product bound
/// |fl(x.y) - x.y| <= gamma_n |x|.|y|, valid with or without FMA).
IntervalMatrix mul(const IntervalMatrix& a, const IntervalMatrix& b);

/// Kronecker product of interval matrices (entrywise interval products).
IntervalMatrix interval_kron(const IntervalMatrix& t, const IntervalMatrix& s);

/// Interval Cholesky. On success the returned lower factor encloses the
/// exact factor of every symmetric point matrix inside S, which proves
/// all of them positive definite; std::nullopt means positive
/// definiteness could not be verified (a valid outcome, not an error).
std::optional<IntervalMatrix> verified_cholesky(const IntervalMatrix& S);

/// Enclosure of K^{-1} RHS. Computes an approximate inverse R of the
/// midpoint, requires the certified residual bound alpha = ||I - R K||_inf
/// to be below one, and wraps an iteratively refined point solution in
/// the Neumann-series error bound alpha/(1-alpha)-style tail. Throws
/// rigor_error when alpha >= 1 (too ill-conditioned at this precision).
IntervalMatrix enclose_solve(const IntervalMatrix& K, const IntervalMatrix& RHS);

/// True iff lambda_max(S) <= lambda_try is certified. Tries verified
/// Cholesky of lambda_try * I - S first; when interval radius growth
/// defeats that (many eigenvalues crowding lambda_try from below), falls
/// back to a point factorization of the shifted midpoint whose defect is
/// bounded rigorously and charged against the shift.
bool lambda_max_upper(const IntervalMatrix& S, double lambda_try);

/// Rigorous lower bound of lambda_max(S) from the Rayleigh quotient of
/// v, evaluated with directed rounding.
double rayleigh_lower(const IntervalMatrix& S, const Eigen::VectorXd& v);

}  // namespace stheat
