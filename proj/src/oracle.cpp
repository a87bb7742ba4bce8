#include "qmarket/oracle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qmarket {

FockOperator MarketSpace::op(Register label, int index, bool raised) const {
    return raised ? raise_op(space, label, index) : lower_op(space, label, index);
}

MarketSpace make_market_space(const MarketCutoffs& cutoffs, int L) {
    if (L < 1) throw std::invalid_argument("make_market_space: L must be >= 1");
    std::vector<RegisterSpec> regs;
    regs.push_back({Register::TraderShares, cutoffs.trader_shares});
    regs.push_back({Register::TraderCash, cutoffs.trader_cash});
    regs.push_back({Register::Price, cutoffs.price});
    for (int k = 1; k <= L; ++k) {
        regs.push_back({Register::ReservoirShares, cutoffs.reservoir_shares, k});
        regs.push_back({Register::ReservoirCash, cutoffs.reservoir_cash, k});
    }
    const bool has_supply = cutoffs.supply >= 0;
    if (has_supply)
        for (int k = 1; k <= L; ++k) regs.push_back({Register::Supply, cutoffs.supply, k});
    MarketSpace m;
    m.space = build_space(std::move(regs));
    m.has_supply = has_supply;
    m.L = L;
    return m;
}

FockOperator selling_op(const MarketSpace& market) {
    const auto cash_raise = raise_op(market.space, Register::TraderCash);
    return lower_op(market.space, Register::TraderShares) *
           conditional_power(cash_raise, market.space);
}

FockOperator reservoir_selling_op(const MarketSpace& market, int k) {
    const auto cash_raise = raise_op(market.space, Register::ReservoirCash, k);
    return lower_op(market.space, Register::ReservoirShares, k) *
           conditional_power(cash_raise, market.space);
}

FockOperator smeared_field(const MarketSpace& market, const std::vector<double>& f) {
    if (static_cast<int>(f.size()) != market.L)
        throw std::invalid_argument("smeared_field: need one amplitude per reservoir site");
    FockOperator sum = zero_op(market.space);
    for (int k = 1; k <= market.L; ++k)
        sum = sum + Complex(f[k - 1]) * reservoir_selling_op(market, k);
    return sum;
}

FockOperator hamiltonian(const MarketSpace& market, const OracleModelSpec& spec) {
    const auto& s = market.space;
    const auto& p = spec.params;
    FockOperator h0 = Complex(p.omega_a) * number_op(s, Register::TraderShares) +
                      Complex(p.omega_c) * number_op(s, Register::TraderCash) +
                      Complex(spec.omega_p) * number_op(s, Register::Price);
    for (int k = 1; k <= market.L; ++k) {
        h0 = h0 + Complex(p.Omega_A) * number_op(s, Register::ReservoirShares, k) +
             Complex(p.Omega_C) * number_op(s, Register::ReservoirCash, k);
        if (market.has_supply)
            h0 = h0 + Complex(spec.Omega_O) * number_op(s, Register::Supply, k);
    }

    const FockOperator z = selling_op(market);
    const FockOperator zf = smeared_field(market, std::vector<double>(market.L, spec.f1));
    // H_I = (z^dag Z + h.c.) + (p^dag o(g) + h.c.), assembled as S + S^dag
    FockOperator half = z.adjoint() * zf;
    if (market.has_supply) {
        FockOperator og = zero_op(s);
        for (int k = 1; k <= market.L; ++k)
            og = og + Complex(spec.g1) * lower_op(s, Register::Supply, k);
        half = half + raise_op(s, Register::Price) * og;
    }
    return h0 + Complex(p.lambda) * (half + half.adjoint());
}

FockOperator total_shares(const MarketSpace& market) {
    FockOperator sum = number_op(market.space, Register::TraderShares);
    for (int k = 1; k <= market.L; ++k)
        sum = sum + number_op(market.space, Register::ReservoirShares, k);
    return sum;
}

FockOperator total_cash(const MarketSpace& market) {
    FockOperator sum = number_op(market.space, Register::TraderCash);
    for (int k = 1; k <= market.L; ++k)
        sum = sum + number_op(market.space, Register::ReservoirCash, k);
    return sum;
}

FockOperator total_gamma(const MarketSpace& market) {
    if (!market.has_supply)
        throw std::invalid_argument("total_gamma: market space has no supply registers");
    FockOperator sum = number_op(market.space, Register::Price);
    for (int k = 1; k <= market.L; ++k)
        sum = sum + number_op(market.space, Register::Supply, k);
    return sum;
}

std::pair<Complex, Complex> omega12_bruteforce(const InitialState& init, double f1) {
    if (init.k < init.M || init.k_prime < init.M)
        throw std::domain_error("omega12_bruteforce: requires k >= M and k' >= M");
    // cutoffs one quantum above every occupation the operators can reach,
    // so the truncated algebra is exact on the relevant subspace
    MarketCutoffs cut;
    cut.trader_shares = init.n + 1;
    cut.trader_cash = init.k + init.M;
    cut.price = init.M;
    cut.reservoir_shares = init.n_prime + 1;
    cut.reservoir_cash = init.k_prime + init.M;
    cut.supply = -1; // supply never enters omega(1), omega(2)
    const MarketSpace market = make_market_space(cut, 1);

    const FockOperator z = selling_op(market);
    const FockOperator zf = Complex(f1) * reservoir_selling_op(market, 1);
    const Vector phi = number_vector(
        market.space, {init.n, init.k, init.M, init.n_prime, init.k_prime});

    const FockOperator zd = z.adjoint();
    const FockOperator zfd = zf.adjoint();
    // omega(1) = <phi, z z^dag [Z^dag, Z] phi>
    Vector v = zfd.apply(zf.apply(phi)) - zf.apply(zfd.apply(phi));
    const Complex omega1 = phi.dot(z.apply(zd.apply(v)));
    // omega(2) = <phi, Z Z^dag [z^dag, z] phi>
    v = zd.apply(z.apply(phi)) - z.apply(zd.apply(phi));
    const Complex omega2 = phi.dot(zf.apply(zfd.apply(v)));
    return {omega1, omega2};
}

Complex evolve_expectation(const FockOperator& H, const FockOperator& X,
                           const std::vector<int>& occupations, double t, double tol) {
    if (t < 0) throw std::invalid_argument("evolve_expectation: t must be >= 0");
    if (H.dimension() > kEvolveDimensionCap) {
        std::ostringstream os;
        os << "evolve_expectation: dimension " << H.dimension() << " exceeds cap "
           << kEvolveDimensionCap;
        throw std::invalid_argument(os.str());
    }
    if (!H.is_hermitian())
        throw std::invalid_argument("evolve_expectation: Hamiltonian is not Hermitian");

    Vector psi = number_vector(H.space(), occupations);
    if (t > 0) {
        // substepped truncated Taylor series for e^{-iHt} psi; unitarity of
        // the exact flow keeps the per-step truncation errors additive
        // 1-norm bound on ||H|| (equals the infinity norm for Hermitian H)
        double hnorm = 0.0;
        const SparseMat& hm = H.matrix();
        for (int c = 0; c < hm.outerSize(); ++c) {
            double col = 0.0;
            for (SparseMat::InnerIterator it(hm, c); it; ++it) col += std::abs(it.value());
            hnorm = std::max(hnorm, col);
        }
        const int steps = std::max(1, static_cast<int>(std::ceil(t * hnorm)));
        const double dt = t / steps;
        const double step_tol = tol / steps;
        for (int s = 0; s < steps; ++s) {
            Vector term = psi;
            Vector next = psi;
            const Complex factor(0.0, -dt);
            for (int k = 1; k < 200; ++k) {
                term = (factor / double(k)) * H.apply(term);
                next += term;
                if (term.norm() < step_tol) break;
            }
            psi = next;
        }
    }
    return psi.dot(X.apply(psi));
}

} // namespace qmarket
