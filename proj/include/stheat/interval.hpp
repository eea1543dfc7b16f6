#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace stheat {

/// Raised when a rigorous computation cannot deliver a valid enclosure
/// (ill-conditioning, undefined operation on the given intervals).
struct rigor_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One-ulp neighbors, branch-light. For finite doubles the IEEE bit
// pattern is lexicographically ordered within each sign, which makes a
// single integer increment/decrement the exact ulp step. Infinities
// saturate so enclosures stay valid after overflow.
inline double succ(double x) {
    if (std::isnan(x)) return x;
    if (x == std::numeric_limits<double>::infinity()) return x;
    if (x == 0.0) return std::numeric_limits<double>::denorm_min();
    auto bits = std::bit_cast<std::uint64_t>(x);
    bits = (x > 0.0) ? bits + 1 : bits - 1;
    return std::bit_cast<double>(bits);
}

inline double pred(double x) {
    if (std::isnan(x)) return x;
    if (x == -std::numeric_limits<double>::infinity()) return x;
    if (x == 0.0) return -std::numeric_limits<double>::denorm_min();
    auto bits = std::bit_cast<std::uint64_t>(x);
    bits = (x > 0.0) ? bits - 1 : bits + 1;
    return std::bit_cast<double>(bits);
}

/// Closed interval [lo, hi]. Every operation returns an interval that
/// contains the exact real result for all choices of operands; directed
/// rounding is realized by one-ulp outward nudging of round-to-nearest
/// results, which is sound because nearest rounding is off by at most
/// half an ulp. No floating-point environment state is touched, so the
/// type is freely usable from concurrent threads.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double l, double h) : lo(l), hi(h) {
        if (!(l <= h)) throw rigor_error("interval endpoints out of order");
    }
    static Interval point(double x) { return {x, x}; }

    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return succ(hi - lo); }
    double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
    double rel_width() const {
        const double m = std::abs(mid());
        return m > 0.0 ? width() / m : width();
    }
};

inline Interval operator+(const Interval& a, const Interval& b) {
    return {pred(a.lo + b.lo), succ(a.hi + b.hi)};
}

inline Interval operator-(const Interval& a, const Interval& b) {
    return {pred(a.lo - b.hi), succ(a.hi - b.lo)};
}

inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

inline Interval operator*(const Interval& a, const Interval& b) {
    const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    const double lo = std::min(std::min(p1, p2), std::min(p3, p4));
    const double hi = std::max(std::max(p1, p2), std::max(p3, p4));
    return {pred(lo), succ(hi)};
}

inline Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo <= 0.0 && 0.0 <= b.hi)
        throw rigor_error("interval division by an interval containing zero");
    const double q1 = a.lo / b.lo, q2 = a.lo / b.hi, q3 = a.hi / b.lo, q4 = a.hi / b.hi;
    const double lo = std::min(std::min(q1, q2), std::min(q3, q4));
    const double hi = std::max(std::max(q1, q2), std::max(q3, q4));
    return {pred(lo), succ(hi)};
}

inline Interval sqrt(const Interval& a) {
    if (a.lo < 0.0) throw rigor_error("interval sqrt of a partially negative interval");
    // std::sqrt is correctly rounded, so one ulp outward suffices
    return {std::max(0.0, pred(std::sqrt(a.lo))), succ(std::sqrt(a.hi))};
}

inline Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

/// Intersection of two enclosures of the same quantity (tightening).
inline Interval meet(const Interval& a, const Interval& b) {
    const double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
    if (!(lo <= hi)) throw rigor_error("meet of disjoint intervals (inconsistent enclosures)");
    return {lo, hi};
}

/// An interval guaranteed to contain pi.
inline Interval interval_pi() {
    const double p = 3.14159265358979323846;
    return {pred(p), succ(p)};
}

/// Sanity check of the rounding machinery: the enclosure of
/// double(0.1) + double(0.2) must contain the exact sum of those two
/// binary values (computable exactly in 80-bit arithmetic) and must not
/// collapse to a point. Called once at rigorous-mode entry.
inline bool rounding_selftest() {
    const Interval s = Interval::point(0.1) + Interval::point(0.2);
    const long double exact = static_cast<long double>(0.1) + static_cast<long double>(0.2);
    const bool contains_exact =
        static_cast<long double>(s.lo) <= exact && exact <= static_cast<long double>(s.hi);
    return contains_exact && s.lo < s.hi && succ(1.0) > 1.0 && pred(1.0) < 1.0;
}

}  // namespace stheat
