#ifndef QMARKET_SCHEDULE_HPP
#define QMARKET_SCHEDULE_HPP

#include <string>
#include <utility>
#include <vector>

namespace qmarket {

/// Price of the share as a function of time on [0, t0].
///
/// Piecewise-linear kinds (the builtins P1..P4 and custom breakpoint
/// schedules) store contiguous segments with P(t) = a + b*t; the closed-model
/// kind evaluates P_c(t) = ((M+O) + (M-O)cos(2*lambda*t))/2 analytically.
class PriceSchedule {
  public:
    struct Segment {
        double t_start, t_end;
        double a, b; // P(t) = a + b*t on [t_start, t_end]
    };

    static PriceSchedule builtin(const std::string& name, double t0 = 6.0);
    static PriceSchedule closed_model(double M, double O, double lambda, double t0 = 6.0);
    // breakpoints (t, P) with linear interpolation; must start at t=0,
    // be strictly increasing in t, and have P >= 0
    static PriceSchedule from_breakpoints(const std::vector<std::pair<double, double>>& pts);

    double value(double t) const;
    double operator()(double t) const { return value(t); }
    /// dP/dt; at segment joins the right-sided slope.
    double slope(double t) const;

    double horizon() const { return t0_; }
    const std::string& name() const { return name_; }
    bool is_closed_model() const { return closed_; }
    bool is_constant() const;

    const std::vector<Segment>& segments() const { return segments_; }
    /// interior segment joins (empty for the closed model)
    std::vector<double> kink_times() const;

    // closed-model parameters (only meaningful when is_closed_model())
    double initial_price() const { return M_; }
    double initial_supply() const { return O_; }
    double lambda() const { return lambda_; }

  private:
    PriceSchedule() = default;
    void validate_segments() const;
    const Segment& segment_at(double t) const;

    std::string name_;
    bool closed_ = false;
    std::vector<Segment> segments_;
    double t0_ = 0.0;
    double M_ = 0.0, O_ = 0.0, lambda_ = 0.0;
};

} // namespace qmarket

#endif
