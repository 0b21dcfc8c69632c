#pragma once

#include <utility>
#include <vector>

namespace otlab {

// Finite union of disjoint closed intervals [a,b], sorted by position.
// Degenerate intervals [a,a] represent isolated points, so the same type
// covers Cantor generations and finite point sets.
class IntervalSet {
public:
    using Interval = std::pair<double, double>;

    IntervalSet() = default;
    // Sorts, validates a <= b, merges overlapping or touching intervals.
    explicit IntervalSet(std::vector<Interval> intervals);

    static IntervalSet points(const std::vector<double>& xs);

    bool empty() const { return intervals_.empty(); }
    std::size_t size() const { return intervals_.size(); }
    const std::vector<Interval>& intervals() const { return intervals_; }

    bool contains(double x) const;
    // Containment of every interval of `other` in some interval of *this.
    bool contains_set(const IntervalSet& other) const;

    double total_length() const;
    std::pair<double, double> hull() const;

    // d(x, A); 0 on the set itself.
    double distance_to(double x) const;

    // Minimum gap between consecutive intervals (infinity when fewer than two).
    double min_separation() const;

private:
    std::vector<Interval> intervals_;
};

} // namespace otlab
