#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "qop/errors.hpp"
#include "qop/field.hpp"

using qop::CycloField;
using qop::CycloNum;

namespace {

// ---- independent oracle: cyclotomic polynomials via the Moebius formula ----
// Phi_n(x) = prod_{d | n} (x^{n/d} - 1)^{mu(d)}, computed with plain integer
// polynomial multiplication and exact division (no shared code with the
// library, which strips divisors recursively).

std::vector<mpz_class> mul_z(const std::vector<mpz_class>& a,
                             const std::vector<mpz_class>& b) {
    std::vector<mpz_class> out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// exact quotient of monic-led division (divisor lead coefficient +-1)
std::vector<mpz_class> div_z(std::vector<mpz_class> num,
                             const std::vector<mpz_class>& den) {
    REQUIRE(num.size() >= den.size());
    std::vector<mpz_class> quot(num.size() - den.size() + 1);
    for (std::size_t k = quot.size(); k-- > 0;) {
        mpz_class c = num[k + den.size() - 1] / den.back();
        quot[k] = c;
        if (c != 0)
            for (std::size_t j = 0; j < den.size(); ++j) num[k + j] -= c * den[j];
    }
    for (const auto& r : num) REQUIRE(r == 0);
    return quot;
}

std::vector<mpz_class> x_pow_minus_1(unsigned k) {
    std::vector<mpz_class> f(k + 1);
    f[0] = -1;
    f[k] = 1;
    return f;
}

int moebius(unsigned n) {
    int mu = 1;
    for (unsigned p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

std::vector<mpz_class> cyclotomic_oracle(unsigned n) {
    std::vector<mpz_class> num{1}, den{1};
    for (unsigned d = 1; d <= n; ++d) {
        if (n % d) continue;
        switch (moebius(d)) {
            case 1: num = mul_z(num, x_pow_minus_1(n / d)); break;
            case -1: den = mul_z(den, x_pow_minus_1(n / d)); break;
            default: break;
        }
    }
    return div_z(std::move(num), den);
}

mpq_class random_rational(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-12, 12);
    std::uniform_int_distribution<int> den(1, 9);
    mpq_class r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

CycloNum random_element(const CycloField& F, std::mt19937& rng) {
    std::vector<mpq_class> coords(F.degree());
    for (auto& c : coords) c = random_rational(rng);
    return CycloNum(F, std::move(coords));
}

}  // namespace

TEST_CASE("cyclotomic polynomials match the Moebius-formula oracle") {
    for (unsigned n = 1; n <= 30; ++n) {
        CAPTURE(n);
        CHECK(qop::cyclotomic_polynomial(n) == cyclotomic_oracle(n));
    }
}

TEST_CASE("frozen cyclotomic polynomials") {
    using V = std::vector<mpz_class>;
    CHECK(qop::cyclotomic_polynomial(1) == V{-1, 1});
    CHECK(qop::cyclotomic_polynomial(8) == V{1, 0, 0, 0, 1});
    CHECK(qop::cyclotomic_polynomial(10) == V{1, -1, 1, -1, 1});
}

TEST_CASE("divisor product of cyclotomics rebuilds x^n - 1") {
    for (unsigned n = 1; n <= 30; ++n) {
        CAPTURE(n);
        std::vector<mpz_class> prod{1};
        for (unsigned d = 1; d <= n; ++d)
            if (n % d == 0) prod = mul_z(prod, qop::cyclotomic_polynomial(d));
        CHECK(prod == x_pow_minus_1(n));
    }
}

TEST_CASE("canonical root powers: periodicity and the half-period sign") {
    const CycloField& F = CycloField::of(10);  // L = 3
    CHECK(qop::q_power(F, 10) == CycloNum::one(F));
    CHECK(qop::q_power(F, 5) == -CycloNum::one(F));
    CHECK(qop::q_power(F, -3) == qop::q_power(F, 7));
    CHECK(qop::q_power(F, 3) * qop::q_power(F, -3) == CycloNum::one(F));
    const CycloField& F14 = CycloField::of(14);  // L = 5
    CHECK(qop::q_power(F14, 7) == -CycloNum::one(F14));
    CHECK(qop::q_power(F14, 29) == qop::q_power(F14, 1));
}

TEST_CASE("character combinations in the pentagonal field") {
    const CycloField& F = CycloField::of(10);
    // 2 cos(2 pi / 5) = (sqrt 5 - 1)/2
    const double golden_inv = 0.61803398874989484820;
    CHECK(qop::ch_coeff(F, 2).to_complex().real() == Catch::Approx(golden_inv).epsilon(1e-13));
    CHECK(std::abs(qop::ch_coeff(F, 2).to_complex().imag()) < 1e-15);
    // 2 cos(6 pi / 5) = 2 cos(4 pi / 5) = -2 cos(pi / 5)
    CHECK(qop::ch_coeff(F, 6) == qop::ch_coeff(F, 4));
    CHECK(qop::ch_coeff(F, 6) == -qop::ch_coeff(F, 1));
    CHECK(qop::ch_coeff(F, 6).to_complex().real() ==
          Catch::Approx(-1.6180339887).epsilon(1e-9));
    // sh is odd, ch is even
    CHECK(qop::sh_coeff(F, 3) == -qop::sh_coeff(F, -3));
    CHECK(qop::ch_coeff(F, 3) == qop::ch_coeff(F, -3));
    CHECK(qop::sh_coeff(F, 0).is_zero());
}

TEST_CASE("field axioms hold on random elements") {
    std::mt19937 rng(42);
    for (unsigned order : {10u, 12u, 20u}) {
        const CycloField& F = CycloField::of(order);
        for (int round = 0; round < 25; ++round) {
            const CycloNum a = random_element(F, rng);
            const CycloNum b = random_element(F, rng);
            const CycloNum c = random_element(F, rng);
            CHECK((a + b) * c == a * c + b * c);
            CHECK(a * b == b * a);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a.conjugate() * b.conjugate() == (a * b).conjugate());
            if (!a.is_zero()) {
                CHECK(a * a.inverse() == CycloNum::one(F));
                CHECK(a / a == CycloNum::one(F));
            }
            const auto za = a.to_complex(), zb = b.to_complex();
            const auto zab = (a * b).to_complex();
            CHECK(std::abs(zab - za * zb) < 1e-9 * (1.0 + std::abs(za * zb)));
        }
    }
}

TEST_CASE("exact zero detection versus floating embedding") {
    const CycloField& F = CycloField::of(10);
    const CycloNum z1 = qop::q_power(F, 1);
    // (1 + q)(1 - q) - (1 - q^2) == 0 exactly
    const CycloNum lhs = (CycloNum::one(F) + z1) * (CycloNum::one(F) - z1) -
                         (CycloNum::one(F) - qop::q_power(F, 2));
    CHECK(lhs.is_zero());
    // Phi_10(q) = q^4 - q^3 + q^2 - q + 1 = 0: the alternating sum vanishes.
    CycloNum alt = CycloNum::one(F);
    for (int k = 1; k <= 4; ++k) {
        const CycloNum term = qop::q_power(F, k);
        alt += (k % 2) ? -term : term;
    }
    CHECK(alt.is_zero());
    CHECK(std::abs(alt.to_complex()) < 1e-15);
}

TEST_CASE("inverse of zero raises the invariant alarm") {
    const CycloField& F = CycloField::of(10);
    CHECK_THROWS_AS(CycloNum::zero(F).inverse(), qop::zero_inverse);
}

TEST_CASE("rational extraction") {
    const CycloField& F = CycloField::of(10);
    const CycloNum r = CycloNum::rational(F, mpq_class(22, 7));
    CHECK(r.is_rational());
    CHECK(r.rational_value() == mpq_class(22, 7));
    CHECK_THROWS_AS(qop::q_power(F, 1).rational_value(), qop::alarm);
}

TEST_CASE("embedding into a larger field preserves arithmetic") {
    const CycloField& F = CycloField::of(10);
    const CycloField& G = CycloField::of(20);
    std::mt19937 rng(7);
    for (int round = 0; round < 10; ++round) {
        const CycloNum a = random_element(F, rng);
        const CycloNum b = random_element(F, rng);
        CHECK(a.embed(G) * b.embed(G) == (a * b).embed(G));
        CHECK(a.embed(G) + b.embed(G) == (a + b).embed(G));
        CHECK(std::abs(a.embed(G).to_complex() - a.to_complex()) < 1e-12);
    }
    // the canonical roots line up as zeta_20^2 = zeta_10
    CHECK(qop::q_power(F, 1).embed(G) == qop::q_power(G, 2));
}

TEST_CASE("power reduction stays consistent under pow") {
    const CycloField& F = CycloField::of(14);
    const CycloNum q = qop::q_power(F, 1);
    CHECK(q.pow(15) == qop::q_power(F, 15));
    CHECK(q.pow(-3) == qop::q_power(F, -3));
    CHECK((q + CycloNum::one(F)).pow(3) ==
          (q + CycloNum::one(F)) * (q + CycloNum::one(F)) * (q + CycloNum::one(F)));
}
