#include "otlab/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otlab/errors.hpp"

namespace otlab {

IntervalSet::IntervalSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    for (const auto& [a, b] : intervals_) {
        if (!std::isfinite(a) || !std::isfinite(b)) throw InputError("interval endpoints must be finite");
        if (a > b) throw InputError("interval has left > right");
    }
    std::sort(intervals_.begin(), intervals_.end());
    std::vector<Interval> merged;
    for (const auto& iv : intervals_) {
        if (!merged.empty() && iv.first <= merged.back().second) {
            merged.back().second = std::max(merged.back().second, iv.second);
        } else {
            merged.push_back(iv);
        }
    }
    intervals_ = std::move(merged);
}

IntervalSet IntervalSet::points(const std::vector<double>& xs) {
    std::vector<Interval> ivs;
    ivs.reserve(xs.size());
    for (double x : xs) ivs.emplace_back(x, x);
    return IntervalSet(std::move(ivs));
}

bool IntervalSet::contains(double x) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                               [](double v, const Interval& iv) { return v < iv.first; });
    if (it == intervals_.begin()) return false;
    --it;
    return x <= it->second;
}

bool IntervalSet::contains_set(const IntervalSet& other) const {
    for (const auto& [a, b] : other.intervals_) {
        auto it = std::upper_bound(intervals_.begin(), intervals_.end(), a,
                                   [](double v, const Interval& iv) { return v < iv.first; });
        if (it == intervals_.begin()) return false;
        --it;
        if (b > it->second) return false;
    }
    return true;
}

double IntervalSet::total_length() const {
    double len = 0.0;
    for (const auto& [a, b] : intervals_) len += b - a;
    return len;
}

std::pair<double, double> IntervalSet::hull() const {
    if (empty()) throw InputError("hull of empty interval set");
    return {intervals_.front().first, intervals_.back().second};
}

double IntervalSet::distance_to(double x) const {
    if (empty()) throw InputError("distance to empty interval set");
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                               [](double v, const Interval& iv) { return v < iv.first; });
    double d = std::numeric_limits<double>::infinity();
    if (it != intervals_.end()) d = std::min(d, it->first - x);
    if (it != intervals_.begin()) {
        --it;
        d = std::min(d, x <= it->second ? 0.0 : x - it->second);
    }
    return d;
}

double IntervalSet::min_separation() const {
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < intervals_.size(); ++i) {
        sep = std::min(sep, intervals_[i].first - intervals_[i - 1].second);
    }
    return sep;
}

} // namespace otlab
