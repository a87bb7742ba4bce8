#include "qmarket/fpl.hpp"

#include <cmath>
#include <stdexcept>

namespace qmarket {

namespace {

template <typename T>
std::vector<T> cumtrapz(const std::vector<T>& samples, const TimeGrid& grid) {
    if (samples.size() < 2)
        throw std::invalid_argument("cumulative_integral: need at least 2 samples");
    if (samples.size() != grid.size())
        throw std::invalid_argument("cumulative_integral: samples do not match grid");
    std::vector<T> out(samples.size());
    out[0] = T{};
    const double half_h = 0.5 * grid.h;
    for (std::size_t i = 1; i < samples.size(); ++i)
        out[i] = out[i - 1] + half_h * (samples[i - 1] + samples[i]);
    return out;
}

// antiderivative of P(t)*wc - wa on one linear segment, measured from t_ref
double segment_phase(const PriceSchedule::Segment& seg, double t_ref, double t, double wc,
                     double wa) {
    return (seg.a * wc - wa) * (t - t_ref) + 0.5 * seg.b * wc * (t * t - t_ref * t_ref);
}

} // namespace

RealSeries cumulative_integral(const RealSeries& samples, const TimeGrid& grid) {
    return cumtrapz(samples, grid);
}

ComplexSeries cumulative_integral(const ComplexSeries& samples, const TimeGrid& grid) {
    return cumtrapz(samples, grid);
}

std::pair<RealSeries, RealSeries> chi_profile(const ModelParams& params,
                                              const PriceSchedule& schedule,
                                              const TimeGrid& grid) {
    const std::size_t npts = grid.size();
    RealSeries chi(npts), chi_tilde(npts);

    if (schedule.is_closed_model()) {
        const double M = schedule.initial_price();
        const double O = schedule.initial_supply();
        const double lam = schedule.lambda();
        if (lam > 0.0) {
            const double alpha = 0.5 * ((M + O) * params.omega_c - 2.0 * params.omega_a);
            const double beta = params.omega_c * (M - O) / (4.0 * lam);
            const double alpha_t = 0.5 * ((M + O) * params.Omega_C - 2.0 * params.Omega_A);
            const double beta_t = params.Omega_C * (M - O) / (4.0 * lam);
            for (std::size_t i = 0; i < npts; ++i) {
                const double t = grid.t(i);
                const double s = std::sin(2.0 * lam * t);
                chi[i] = alpha * t + beta * s;
                chi_tilde[i] = alpha_t * t + beta_t * s;
            }
        } else {
            // lambda = 0 freezes the closed-model price at M
            for (std::size_t i = 0; i < npts; ++i) {
                const double t = grid.t(i);
                chi[i] = (M * params.omega_c - params.omega_a) * t;
                chi_tilde[i] = (M * params.Omega_C - params.Omega_A) * t;
            }
        }
        return {std::move(chi), std::move(chi_tilde)};
    }

    // piecewise linear: exact per-segment antiderivatives accumulated in order
    const auto& segs = schedule.segments();
    std::size_t si = 0;
    double base = 0.0, base_t = 0.0, seg_start = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
        const double t = grid.t(i);
        while (si + 1 < segs.size() && t > segs[si].t_end) {
            base += segment_phase(segs[si], seg_start, segs[si].t_end, params.omega_c,
                                  params.omega_a);
            base_t += segment_phase(segs[si], seg_start, segs[si].t_end, params.Omega_C,
                                    params.Omega_A);
            ++si;
            seg_start = segs[si].t_start;
        }
        chi[i] = base + segment_phase(segs[si], seg_start, t, params.omega_c, params.omega_a);
        chi_tilde[i] =
            base_t + segment_phase(segs[si], seg_start, t, params.Omega_C, params.Omega_A);
    }
    return {std::move(chi), std::move(chi_tilde)};
}

FplCoefficients eta_coefficients(const ModelParams& params, const PriceSchedule& schedule,
                                 const TimeGrid& grid) {
    if (params.lambda < 0.0)
        throw std::invalid_argument("eta_coefficients: lambda must be >= 0");
    FplCoefficients out;
    out.grid = grid;
    auto [chi, chi_tilde] = chi_profile(params, schedule, grid);
    const std::size_t npts = grid.size();
    out.eta1.resize(npts);
    out.eta1_tilde.resize(npts);
    ComplexSeries phase(npts), phase_tilde(npts);
    for (std::size_t i = 0; i < npts; ++i) {
        out.eta1[i] = std::polar(1.0, chi[i]);
        out.eta1_tilde[i] = std::polar(1.0, chi_tilde[i]);
        phase[i] = out.eta1[i];
        phase_tilde[i] = out.eta1_tilde[i];
    }
    if (params.lambda == 0.0) {
        out.eta2.assign(npts, {0.0, 0.0});
        out.eta2_tilde.assign(npts, {0.0, 0.0});
    } else {
        const std::complex<double> il(0.0, params.lambda);
        out.eta2 = cumulative_integral(phase_tilde, grid);
        out.eta2_tilde = cumulative_integral(phase, grid);
        for (std::size_t i = 0; i < npts; ++i) {
            out.eta2[i] *= il;
            out.eta2_tilde[i] *= il;
        }
    }
    out.chi = std::move(chi);
    out.chi_tilde = std::move(chi_tilde);
    return out;
}

ComplexSeries correlation_r(const FplCoefficients& coeffs, const Expectations& exps) {
    const std::size_t npts = coeffs.eta1.size();
    if (coeffs.eta2.size() != npts || coeffs.eta1_tilde.size() != npts ||
        coeffs.eta2_tilde.size() != npts || coeffs.grid.size() != npts)
        throw std::invalid_argument("correlation_r: series/grid length mismatch");
    ComplexSeries r(npts);
    for (std::size_t i = 0; i < npts; ++i)
        r[i] = exps.omega1 * coeffs.eta1[i] * std::conj(coeffs.eta2_tilde[i]) +
               exps.omega2 * coeffs.eta2[i] * std::conj(coeffs.eta1_tilde[i]);
    return r;
}

std::pair<RealSeries, RealSeries> trader_deltas(const ComplexSeries& r,
                                                const PriceSchedule& schedule,
                                                const TimeGrid& grid, double lambda) {
    const std::size_t npts = grid.size();
    if (r.size() != npts)
        throw std::invalid_argument("trader_deltas: series does not match grid");
    RealSeries im_r(npts), p_im_r(npts);
    for (std::size_t i = 0; i < npts; ++i) {
        im_r[i] = r[i].imag();
        p_im_r[i] = schedule.value(grid.t(i)) * im_r[i];
    }
    RealSeries delta_n = cumulative_integral(im_r, grid);
    RealSeries delta_k = cumulative_integral(p_im_r, grid);
    for (std::size_t i = 0; i < npts; ++i) {
        delta_n[i] *= -2.0 * lambda;
        delta_k[i] *= 2.0 * lambda;
    }
    return {std::move(delta_n), std::move(delta_k)};
}

RealSeries portfolio_delta(const RealSeries& delta_n, const RealSeries& delta_k,
                           const PriceSchedule& schedule, int n, const TimeGrid& grid) {
    const std::size_t npts = grid.size();
    if (delta_n.size() != npts || delta_k.size() != npts)
        throw std::invalid_argument("portfolio_delta: series do not match grid");
    const double p0 = schedule.value(0.0);
    RealSeries dpi(npts);
    for (std::size_t i = 0; i < npts; ++i) {
        const double p = schedule.value(grid.t(i));
        dpi[i] = n * (p - p0) + p * delta_n[i] + delta_k[i];
    }
    return dpi;
}

double falling_factorial(int k, int order) {
    double prod = 1.0;
    for (int j = 0; j < order; ++j) prod *= double(k - j);
    return prod;
}

double rising_factorial(int k, int order) {
    double prod = 1.0;
    for (int j = 1; j <= order; ++j) prod *= double(k + j);
    return prod;
}

Expectations omega12_closed_form(const InitialState& init, double f1) {
    if (init.k < init.M || init.k_prime < init.M)
        throw std::domain_error("omega12_closed_form: requires k >= M and k' >= M");
    const double f2 = f1 * f1;
    const double ff_k = falling_factorial(init.k, init.M);
    const double ff_kp = falling_factorial(init.k_prime, init.M);
    const double rf_kp = rising_factorial(init.k_prime, init.M);
    Expectations e;
    e.omega2 = -f2 * (1.0 + init.n_prime) * ff_k * ff_kp;
    e.omega1 = e.omega2 + f2 * init.n_prime * ff_k * rf_kp;
    return e;
}

} // namespace qmarket
