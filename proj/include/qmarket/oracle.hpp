#ifndef QMARKET_ORACLE_HPP
#define QMARKET_ORACLE_HPP

#include <utility>
#include <vector>

#include "qmarket/fock.hpp"
#include "qmarket/fpl.hpp"

namespace qmarket {

/// Full oracle Hamiltonian data; omega_p, Omega_O and g1 appear only here
/// (they drop out of the fpl system) and default to 1.
struct OracleModelSpec {
    ModelParams params;
    double omega_p = 1.0;
    double Omega_O = 1.0;
    double f1 = 1.0; // smearing amplitude f(1) at the single reservoir site
    double g1 = 1.0;
    int L = 1;
};

/// Per-register cutoffs for the market space; reservoir cutoffs are shared
/// across the L sites.
struct MarketCutoffs {
    int trader_shares = 2;
    int trader_cash = 5;
    int price = 2;
    int reservoir_shares = 2;
    int reservoir_cash = 5;
    int supply = 2; // negative: omit the supply registers
};

/// Market Fock space plus the operators the model is built from.
struct MarketSpace {
    SpacePtr space;
    bool has_supply = false;
    int L = 1;

    FockOperator op(Register label, int index = -1, bool raised = false) const;
};

MarketSpace make_market_space(const MarketCutoffs& cutoffs, int L = 1);

/// z = a (c^dag)^P: tau sells one share, gains P cash quanta.
FockOperator selling_op(const MarketSpace& market);
/// Z_k = A_k (C_k^dag)^P at reservoir site k.
FockOperator reservoir_selling_op(const MarketSpace& market, int k);
/// Z(f) = sum_k f(k) Z_k; f has one entry per site.
FockOperator smeared_field(const MarketSpace& market, const std::vector<double>& f);

/// H = H0 + lambda*H_I of the closed model; Hermitian by construction.
FockOperator hamiltonian(const MarketSpace& market, const OracleModelSpec& spec);

// conserved totals of the closed model
FockOperator total_shares(const MarketSpace& market);   // N = n + sum N_k
FockOperator total_cash(const MarketSpace& market);     // K = k + sum K_k
FockOperator total_gamma(const MarketSpace& market);    // Gamma = P + sum O_k

/// omega(1) = <phi, z z^dag [Z^dag, Z] phi>, omega(2) = <phi, Z Z^dag [z^dag, z] phi>
/// on the number vector (n, k, M; n', k'), evaluated exactly at a truncation
/// wide enough that no operator touches a cutoff (L = 1).
std::pair<Complex, Complex> omega12_bruteforce(const InitialState& init, double f1);

/// <phi, e^{iHt} X e^{-iHt} phi> via substepped truncated-series exponential
/// applied to the state vector; error <= tol.
Complex evolve_expectation(const FockOperator& H, const FockOperator& X,
                           const std::vector<int>& occupations, double t, double tol = 1e-10);

/// Dimension guard for the evolution routine.
inline constexpr std::int64_t kEvolveDimensionCap = 5000;

} // namespace qmarket

#endif
