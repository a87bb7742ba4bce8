#include "qmarket/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace qmarket {

namespace {
double range_tolerance(double t0) { return 1e-9 * std::max(1.0, t0); }
} // namespace

PriceSchedule PriceSchedule::builtin(const std::string& name, double t0) {
    if (t0 < 4.0)
        throw std::invalid_argument("builtin schedule: horizon must be >= 4");
    PriceSchedule s;
    s.name_ = name;
    s.t0_ = t0;
    if (name == "P1") {
        s.segments_ = {{0.0, t0, 0.0, 1.0}};
    } else if (name == "P2") {
        s.segments_ = {{0.0, 1.0, 0.0, 0.0}, {1.0, 3.0, -1.0, 1.0}, {3.0, t0, 2.0, 0.0}};
    } else if (name == "P3") {
        s.segments_ = {{0.0, 1.0, 2.0, 0.0}, {1.0, 3.0, 3.0, -1.0}, {3.0, t0, 0.0, 0.0}};
    } else if (name == "P4") {
        s.segments_ = {{0.0, 1.0, 0.0, 0.0},
                       {1.0, 3.0, -1.0, 1.0},
                       {3.0, 4.0, 5.0, -1.0},
                       {4.0, t0, 1.0, 0.0}};
    } else {
        throw std::invalid_argument("unknown builtin schedule '" + name + "'");
    }
    s.validate_segments();
    return s;
}

PriceSchedule PriceSchedule::closed_model(double M, double O, double lambda, double t0) {
    if (M < 0 || O < 0)
        throw std::invalid_argument("closed-model schedule: M and O must be >= 0");
    if (t0 <= 0)
        throw std::invalid_argument("closed-model schedule: horizon must be > 0");
    PriceSchedule s;
    s.name_ = "Pc";
    s.closed_ = true;
    s.t0_ = t0;
    s.M_ = M;
    s.O_ = O;
    s.lambda_ = lambda;
    return s;
}

PriceSchedule PriceSchedule::from_breakpoints(
    const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 2)
        throw std::invalid_argument("custom schedule: need at least two breakpoints");
    if (pts.front().first != 0.0)
        throw std::invalid_argument("custom schedule: first breakpoint must be at t=0");
    PriceSchedule s;
    s.name_ = "custom";
    s.t0_ = pts.back().first;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const auto [t1, p1] = pts[i];
        const auto [t2, p2] = pts[i + 1];
        if (t2 <= t1)
            throw std::invalid_argument("custom schedule: breakpoint times must increase");
        if (p1 < 0 || p2 < 0)
            throw std::invalid_argument("custom schedule: price must be >= 0");
        const double b = (p2 - p1) / (t2 - t1);
        s.segments_.push_back({t1, t2, p1 - b * t1, b});
    }
    s.validate_segments();
    return s;
}

void PriceSchedule::validate_segments() const {
    const double tol = range_tolerance(t0_);
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& seg = segments_[i];
        if (seg.a + seg.b * seg.t_start < -tol || seg.a + seg.b * seg.t_end < -tol)
            throw std::invalid_argument("schedule: price must stay >= 0");
        if (i > 0) {
            const auto& prev = segments_[i - 1];
            if (std::abs(prev.t_end - seg.t_start) > tol)
                throw std::invalid_argument("schedule: segments must be contiguous");
            const double left = prev.a + prev.b * seg.t_start;
            const double right = seg.a + seg.b * seg.t_start;
            if (std::abs(left - right) > tol)
                throw std::invalid_argument("schedule: discontinuous at segment join");
        }
    }
    if (!segments_.empty() &&
        (segments_.front().t_start > tol || std::abs(segments_.back().t_end - t0_) > tol))
        throw std::invalid_argument("schedule: segments must cover [0, t0]");
}

const PriceSchedule::Segment& PriceSchedule::segment_at(double t) const {
    const double tol = range_tolerance(t0_);
    if (t < -tol || t > t0_ + tol)
        throw std::out_of_range("schedule: time outside [0, t0]");
    for (const auto& seg : segments_)
        if (t < seg.t_end || &seg == &segments_.back()) return seg;
    return segments_.back();
}

double PriceSchedule::value(double t) const {
    if (closed_) {
        const double tol = range_tolerance(t0_);
        if (t < -tol || t > t0_ + tol)
            throw std::out_of_range("schedule: time outside [0, t0]");
        return 0.5 * ((M_ + O_) + (M_ - O_) * std::cos(2.0 * lambda_ * t));
    }
    const auto& seg = segment_at(t);
    return seg.a + seg.b * t;
}

double PriceSchedule::slope(double t) const {
    if (closed_) {
        const double tol = range_tolerance(t0_);
        if (t < -tol || t > t0_ + tol)
            throw std::out_of_range("schedule: time outside [0, t0]");
        return -lambda_ * (M_ - O_) * std::sin(2.0 * lambda_ * t);
    }
    return segment_at(t).b;
}

bool PriceSchedule::is_constant() const {
    if (closed_) return M_ == O_ || lambda_ == 0.0;
    for (const auto& seg : segments_)
        if (seg.b != 0.0) return false;
    return true;
}

std::vector<double> PriceSchedule::kink_times() const {
    std::vector<double> kinks;
    for (std::size_t i = 1; i < segments_.size(); ++i)
        kinks.push_back(segments_[i].t_start);
    return kinks;
}

} // namespace qmarket
