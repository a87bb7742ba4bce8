#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmarket/oracle.hpp"

using namespace qmarket;

namespace {

// cash registers trade up to `price` quanta per exchange, so their interior
// margin must cover that transfer
FockOperator market_interior(const MarketSpace& market, int price_cutoff) {
    std::vector<int> margins;
    for (const auto& reg : market.space->registers())
        margins.push_back((reg.label == Register::TraderCash ||
                           reg.label == Register::ReservoirCash)
                              ? price_cutoff
                              : 1);
    return interior_projector(market.space, margins);
}

MarketSpace small_market() {
    MarketCutoffs cut{1, 3, 1, 1, 3, 1};
    return make_market_space(cut, 1);
}

} // namespace

TEST_CASE("hamiltonian is exactly hermitian") {
    auto market = small_market();
    OracleModelSpec spec;
    spec.params.lambda = 0.7;
    spec.f1 = 0.3;
    CHECK(hamiltonian(market, spec).is_hermitian(0.0));
}

TEST_CASE("conserved totals commute with H on the interior") {
    auto market = small_market();
    OracleModelSpec spec;
    spec.params = {1.5, 0.8, 2.0, 1.1, 1.0, 1.0};
    auto H = hamiltonian(market, spec);
    auto interior = market_interior(market, 1);
    CHECK(commutator_residual(H, total_shares(market), interior) < 1e-12);
    CHECK(commutator_residual(H, total_cash(market), interior) < 1e-12);
    CHECK(commutator_residual(H, total_gamma(market), interior) < 1e-12);
}

TEST_CASE("trader shares alone are not conserved") {
    // share cutoffs of 2 leave room for an interior share exchange
    MarketCutoffs cut{2, 3, 1, 2, 3, 1};
    auto market = make_market_space(cut, 1);
    OracleModelSpec spec;
    spec.params.lambda = 1.0;
    auto H = hamiltonian(market, spec);
    auto n_hat = number_op(market.space, Register::TraderShares);
    CHECK(commutator_residual(H, n_hat, market_interior(market, 1)) > 0.0);
}

TEST_CASE("free hamiltonian commutes with every number operator") {
    auto market = small_market();
    OracleModelSpec spec;
    spec.params.lambda = 0.0;
    auto H = hamiltonian(market, spec);
    auto interior = identity_op(market.space);
    CHECK(commutator_residual(H, number_op(market.space, Register::TraderShares),
                              interior) == 0.0);
    CHECK(commutator_residual(H, number_op(market.space, Register::ReservoirCash, 1),
                              interior) == 0.0);
}

TEST_CASE("omega12 brute force reference values") {
    // (n=0, k=4, k'=3, n'=2, M=1), f1=1
    auto [w1, w2] = omega12_bruteforce({0, 4, 2, 3, 1, 0}, 1.0);
    CHECK(w1.real() == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(w2.real() == doctest::Approx(-36.0).epsilon(1e-12));
    CHECK(std::abs(w1.imag()) < 1e-12);
    CHECK(std::abs(w2.imag()) < 1e-12);
}

TEST_CASE("omega12 brute force, M=0 degenerate case") {
    for (int k : {0, 3})
        for (int kp : {1, 5}) {
            auto [w1, w2] = omega12_bruteforce({0, k, 4, kp, 0, 0}, 1.0);
            CHECK(w1.real() == doctest::Approx(-1.0));
            CHECK(w2.real() == doctest::Approx(-5.0)); // -(1+n') with n'=4
        }
}

TEST_CASE("omega12 brute force rejects k < M") {
    CHECK_THROWS_AS(omega12_bruteforce({0, 1, 2, 5, 2, 0}, 1.0), std::domain_error);
    CHECK_THROWS_AS(omega12_bruteforce({0, 5, 2, 1, 2, 0}, 1.0), std::domain_error);
}

TEST_CASE("oracle matches closed form over a small sweep") {
    // the closed form assumes the trader starts with no shares (n = 0);
    // n > 0 multiplies omega1 by (n+1) -- see the next test case
    const int n = 0;
    for (int M : {0, 1, 2})
        for (int k = M; k <= 6; k += 2)
                for (int kp = M; kp <= 6; kp += 3)
                    for (int np : {0, 3}) {
                        const InitialState init{n, k, np, kp, M, 0};
                        auto [b1, b2] = omega12_bruteforce(init, 1e-3);
                        const Expectations cf = omega12_closed_form(init, 1e-3);
                        const double scale =
                            std::max({1e-300, std::abs(cf.omega1), std::abs(cf.omega2)});
                        CHECK(std::abs(b1 - cf.omega1) / scale < 1e-9);
                        CHECK(std::abs(b2 - cf.omega2) / scale < 1e-9);
                    }
}

TEST_CASE("closed form is an n = 0 statement") {
    // with n > 0 the exact expectations pick up extra share-number factors:
    //   omega1 -> (n+1) * omega1|_{n=0}
    //   omega2 -> f1^2 (n'+1) ff(k',M) (n rf(k,M) - (n+1) ff(k,M))
    const InitialState base{0, 4, 2, 3, 1, 0};
    const InitialState lifted{1, 4, 2, 3, 1, 0};
    auto [b1_0, b2_0] = omega12_bruteforce(base, 1.0);
    auto [b1_1, b2_1] = omega12_bruteforce(lifted, 1.0);
    CHECK(b1_1.real() == doctest::Approx(2.0 * b1_0.real()).epsilon(1e-12));
    // n=1, k=4, M=1: n*rf - (n+1)*ff = 5 - 8 = -3, against -4 at n=0
    CHECK(b2_1.real() == doctest::Approx(b2_0.real() * 3.0 / 4.0).epsilon(1e-12));
}

TEST_CASE("evolution at t=0 is the bare expectation") {
    auto market = small_market();
    OracleModelSpec spec;
    auto H = hamiltonian(market, spec);
    auto n_hat = number_op(market.space, Register::TraderShares);
    auto w = evolve_expectation(H, n_hat, {1, 2, 1, 0, 1, 0}, 0.0);
    CHECK(w.real() == doctest::Approx(1.0));
}

TEST_CASE("free evolution keeps every number operator constant") {
    auto market = small_market();
    OracleModelSpec spec;
    spec.params.lambda = 0.0;
    auto H = hamiltonian(market, spec);
    auto k_hat = number_op(market.space, Register::TraderCash);
    for (double t : {0.3, 1.7}) {
        auto w = evolve_expectation(H, k_hat, {1, 2, 1, 0, 1, 0}, t, 1e-10);
        CHECK(w.real() == doctest::Approx(2.0).epsilon(1e-8));
    }
}

TEST_CASE("total shares are t-independent under the full H") {
    auto market = small_market();
    OracleModelSpec spec;
    spec.params.lambda = 0.8;
    spec.f1 = 0.5;
    auto H = hamiltonian(market, spec);
    auto N = total_shares(market);
    // interior-supported state: one quantum below every cutoff
    const std::vector<int> state{0, 1, 1, 0, 1, 0};
    const double w0 = evolve_expectation(H, N, state, 0.0).real();
    for (double t : {0.5, 2.0}) {
        const double wt = evolve_expectation(H, N, state, t, 1e-10).real();
        CHECK(wt == doctest::Approx(w0).epsilon(1e-8));
    }
}

TEST_CASE("evolution rejects a non-hermitian generator") {
    auto space = build_space({{Register::Price, 2}});
    auto bad = raise_op(space, Register::Price);
    CHECK_THROWS_AS(evolve_expectation(bad, identity_op(space), {0}, 1.0),
                    std::invalid_argument);
}
