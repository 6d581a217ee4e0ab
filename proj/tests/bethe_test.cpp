#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qop/bethe.hpp"
#include "qop/errors.hpp"
#include "qop/qsolver.hpp"

using qop::BetheRoots;
using qop::ChainParams;
using cd = std::complex<double>;

namespace {

qop::QPolynomial solved(int L, int N, int p) {
    return qop::solve_q_linear(qop::build_linear_system(ChainParams(L, N, p)));
}

double distance_to_set(cd value, const std::vector<cd>& set) {
    double best = 1e30;
    for (const auto& s : set) best = std::min(best, std::abs(value - s));
    return best;
}

}  // namespace

TEST_CASE("linear Q has its single root at -1") {
    const BetheRoots roots = qop::find_roots(solved(1, 1, 1));
    REQUIRE(roots.z.size() == 1);
    CHECK(std::abs(roots.z[0] - cd(-1.0, 0.0)) < 1e-12);
    // u = log(z)/2 on the principal branch: log(-1) = i pi
    CHECK(std::abs(roots.u[0] - cd(0.0, M_PI / 2)) < 1e-12);
    CHECK(roots.backward_error < 1e-10);
}

TEST_CASE("root multiset is closed under conjugation and inversion") {
    const BetheRoots roots = qop::find_roots(solved(3, 1, 4));
    REQUIRE(roots.z.size() == 4);
    for (const auto& z : roots.z) {
        CHECK(distance_to_set(std::conj(z), roots.z) < 1e-8);
        CHECK(distance_to_set(1.0 / z, roots.z) < 1e-8);
    }
    // the product of roots is Q(0)/lead up to sign, so it has modulus 1
    cd prod = 1.0;
    for (const auto& z : roots.z) prod *= z;
    CHECK(std::abs(std::abs(prod) - 1.0) < 1e-9);
}

TEST_CASE("backward error contract holds on a degree-ten solve") {
    const BetheRoots roots = qop::find_roots(solved(3, 3, 10));
    CHECK(roots.z.size() == 10);
    CHECK(roots.backward_error < 1e-10);
    // different seeds converge to the same sorted root list
    const BetheRoots again = qop::find_roots(solved(3, 3, 10), 99);
    for (std::size_t k = 0; k < roots.z.size(); ++k)
        CHECK(std::abs(roots.z[k] - again.z[k]) < 1e-8);
}

TEST_CASE("roots rebuild the polynomial coefficients") {
    const qop::QPolynomial Q = solved(3, 2, 7);
    const BetheRoots roots = qop::find_roots(Q);
    std::vector<cd> rebuilt{1.0};
    for (const auto& z : roots.z) {
        rebuilt.push_back(0.0);
        for (std::size_t k = rebuilt.size() - 1; k > 0; --k)
            rebuilt[k] = rebuilt[k - 1] - z * rebuilt[k];
        rebuilt[0] *= -z;
    }
    const auto reference = qop::numeric_coeffs(Q.poly);
    REQUIRE(rebuilt.size() == reference.size());
    for (std::size_t k = 0; k < rebuilt.size(); ++k)
        CHECK(std::abs(rebuilt[k] - reference[k]) < 1e-8);
}

TEST_CASE("Bethe equations hold at extracted roots and reject corrupted ones") {
    const BetheRoots roots = qop::find_roots(solved(3, 1, 4));
    const qop::BaeReport report = qop::bae_residual(roots);
    CHECK(report.residuals.size() == 4);
    CHECK(report.max_residual < 1e-9);

    BetheRoots corrupted = roots;
    corrupted.z[0] *= 1.01;
    corrupted.u[0] = 0.5 * std::log(corrupted.z[0]);
    CHECK(qop::bae_residual(corrupted).max_residual > 1e-3);
}

TEST_CASE("near-pole configurations abort instead of certifying noise") {
    const ChainParams cp(1, 2, 2);
    const cd eta(0.0, -2.0 * M_PI / 3.0);  // -i(L+1)pi/(L+2) at L = 1
    {
        // source term pole: u_0 = eta/2 makes sh(u_0 - s eta) vanish
        const cd u0 = 0.5 * eta;
        const cd u1(0.4, 0.1);
        const BetheRoots bad{cp, {std::exp(2.0 * u0), std::exp(2.0 * u1)}, {u0, u1}, 0.0};
        CHECK_THROWS_AS(qop::bae_residual(bad), qop::pole_proximity);
    }
    {
        // pair term pole: u_0 - u_1 = eta makes sh(u_0 - u_1 - eta) vanish
        const cd u1(0.3, 0.05);
        const cd u0 = u1 + eta;
        const BetheRoots bad{cp, {std::exp(2.0 * u0), std::exp(2.0 * u1)}, {u0, u1}, 0.0};
        CHECK_THROWS_AS(qop::bae_residual(bad), qop::pole_proximity);
    }
}

TEST_CASE("interpolation sums: frozen examples") {
    using V = std::vector<mpq_class>;
    CHECK(qop::interpolation_sum(V{1, 2}, 0) == 0);
    CHECK(qop::interpolation_sum(V{1, 2}, 1) == 1);
    CHECK(qop::interpolation_sum(V{1, 2, 3}, 1) == 0);
    CHECK(qop::interpolation_sum(V{1, 2, 3}, 2) == 1);
    CHECK_THROWS_AS(qop::interpolation_sum(V{1, 2, 1}, 1), qop::duplicate_nodes);
    CHECK_THROWS_AS(qop::interpolation_sum(V{}, 0), std::invalid_argument);
}

TEST_CASE("interpolation sums: divided-difference property on random nodes") {
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> num(-40, 40);
    std::uniform_int_distribution<int> den(1, 12);
    std::uniform_int_distribution<int> size(2, 8);
    for (int round = 0; round < 60; ++round) {
        const int K = size(rng);
        std::vector<mpq_class> nodes;
        while (static_cast<int>(nodes.size()) < K) {
            mpq_class candidate(num(rng), den(rng));
            candidate.canonicalize();
            if (std::find(nodes.begin(), nodes.end(), candidate) == nodes.end())
                nodes.push_back(candidate);
        }
        CAPTURE(round, K);
        for (unsigned ell = 0; ell + 2 <= static_cast<unsigned>(K); ++ell)
            CHECK(qop::interpolation_sum(nodes, ell) == 0);
        CHECK(qop::interpolation_sum(nodes, static_cast<unsigned>(K - 1)) == 1);
    }
}
