#ifndef QMARKET_FPL_HPP
#define QMARKET_FPL_HPP

#include <complex>
#include <vector>

#include "qmarket/schedule.hpp"

namespace qmarket {

using ComplexSeries = std::vector<std::complex<double>>;
using RealSeries = std::vector<double>;

/// Hamiltonian frequencies, interaction strength and smearing amplitude.
struct ModelParams {
    double omega_a = 1.0;
    double omega_c = 1.0;
    double Omega_A = 1.0;
    double Omega_C = 1.0;
    double lambda = 1.0;
    double f1 = 1e-3;
};

/// Initial market numbers: trader tau (n shares, k cash), the reservoir
/// trader sigma (n', k'), price M and market supply O (closed model only).
struct InitialState {
    int n = 0;
    int k = 0;
    int n_prime = 0;
    int k_prime = 0;
    int M = 0;
    int O = 0;
};

/// Uniform time grid on [0, t0]; node i sits at i*h.
struct TimeGrid {
    double t0 = 6.0;
    double h = 1e-3;

    std::size_t size() const {
        return static_cast<std::size_t>(std::lround(t0 / h)) + 1;
    }
    double t(std::size_t i) const { return static_cast<double>(i) * h; }
};

struct FplCoefficients {
    TimeGrid grid;
    RealSeries chi, chi_tilde;
    ComplexSeries eta1, eta2, eta1_tilde, eta2_tilde;
};

/// State expectations omega(1), omega(2); real for number states.
struct Expectations {
    std::complex<double> omega1{0.0, 0.0};
    std::complex<double> omega2{0.0, 0.0};
};

/// Cumulative composite-trapezoid integral on a uniform grid; first element 0.
RealSeries cumulative_integral(const RealSeries& samples, const TimeGrid& grid);
ComplexSeries cumulative_integral(const ComplexSeries& samples, const TimeGrid& grid);

/// Phase integrals chi(t) = int_0^t (P*omega_c - omega_a) and the tilde
/// analogue with (Omega_C, Omega_A). Piecewise-linear schedules are
/// integrated in closed form per segment; the closed-model schedule uses
/// chi(t) = alpha*t + beta*sin(2*lambda*t).
std::pair<RealSeries, RealSeries> chi_profile(const ModelParams& params,
                                              const PriceSchedule& schedule,
                                              const TimeGrid& grid);

/// eta1 = e^{i chi}, eta2 = i*lambda*int e^{i chi~}, and the tilde pair.
FplCoefficients eta_coefficients(const ModelParams& params, const PriceSchedule& schedule,
                                 const TimeGrid& grid);

/// r(t) = omega1*eta1*conj(eta2~) + omega2*eta2*conj(eta1~).
ComplexSeries correlation_r(const FplCoefficients& coeffs, const Expectations& exps);

/// delta_n = -2*lambda*int Im r, delta_k = +2*lambda*int P*Im r.
std::pair<RealSeries, RealSeries> trader_deltas(const ComplexSeries& r,
                                                const PriceSchedule& schedule,
                                                const TimeGrid& grid, double lambda);

/// delta_Pi(t) = n*(P(t)-P(0)) + P(t)*delta_n(t) + delta_k(t).
RealSeries portfolio_delta(const RealSeries& delta_n, const RealSeries& delta_k,
                           const PriceSchedule& schedule, int n, const TimeGrid& grid);

/// Closed-form omega(1), omega(2) for a single reservoir trader, built from
/// falling/rising factorial products (never full factorials).
Expectations omega12_closed_form(const InitialState& init, double f1);

double falling_factorial(int k, int order);
double rising_factorial(int k, int order);

} // namespace qmarket

#endif
