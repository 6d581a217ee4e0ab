#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "qop/errors.hpp"
#include "qop/field.hpp"
#include "qop/functional.hpp"
#include "qop/poly.hpp"
#include "qop/qsolver.hpp"

using qop::ChainParams;
using qop::CycloField;
using qop::CycloNum;
using qop::FieldPoly;
using qop::HalfInt;
using qop::QPPair;
using qop::Var;

namespace {

qop::QPolynomial solved(int L, int N, int p) {
    return qop::solve_q_linear(qop::build_linear_system(ChainParams(L, N, p)));
}

QPPair pair_for(int L, int N, int p) { return qop::wrong_side_p(solved(L, N, p)); }

mpq_class random_rational(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 4);
    mpq_class r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

FieldPoly random_poly(const CycloField& F, Var v, std::mt19937& rng) {
    std::uniform_int_distribution<int> deg(0, 4);
    std::vector<CycloNum> coeffs;
    const int d = deg(rng);
    for (int k = 0; k <= d; ++k) {
        std::vector<mpq_class> coords(F.degree());
        for (auto& c : coords) c = random_rational(rng);
        coeffs.emplace_back(F, std::move(coords));
    }
    return FieldPoly::from_coeffs(F, v, std::move(coeffs));
}

// Independent coprimality certificate: the Sylvester resultant of A and B,
// computed by fraction-free-ish Gaussian elimination over the field.
CycloNum sylvester_resultant(const FieldPoly& A, const FieldPoly& B) {
    const CycloField& F = A.field();
    const long da = A.degree(), db = B.degree();
    REQUIRE(da >= 1);
    REQUIRE(db >= 1);
    const std::size_t n = static_cast<std::size_t>(da + db);
    std::vector<std::vector<CycloNum>> mat(n, std::vector<CycloNum>(n, CycloNum::zero(F)));
    for (long r = 0; r < db; ++r)
        for (long k = 0; k <= da; ++k)
            mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + k)] =
                A.coeff_at(static_cast<std::size_t>(da - k));
    for (long r = 0; r < da; ++r)
        for (long k = 0; k <= db; ++k)
            mat[static_cast<std::size_t>(db + r)][static_cast<std::size_t>(r + k)] =
                B.coeff_at(static_cast<std::size_t>(db - k));

    CycloNum det = CycloNum::one(F);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = n;
        for (std::size_t r = col; r < n; ++r)
            if (!mat[r][col].is_zero()) {
                pivot = r;
                break;
            }
        if (pivot == n) return CycloNum::zero(F);
        if (pivot != col) {
            std::swap(mat[pivot], mat[col]);
            det = -det;
        }
        det *= mat[col][col];
        const CycloNum inv = mat[col][col].inverse();
        for (std::size_t r = col + 1; r < n; ++r) {
            if (mat[r][col].is_zero()) continue;
            const CycloNum f = mat[r][col] * inv;
            for (std::size_t c = col; c < n; ++c) mat[r][c] -= f * mat[col][c];
        }
    }
    return det;
}

}  // namespace

TEST_CASE("half-integer labels") {
    CHECK(HalfInt::whole(2).twice == 4);
    CHECK(HalfInt::halves(3).str() == "3/2");
    CHECK(HalfInt::whole(-1).str() == "-1");
    CHECK((HalfInt{1} + HalfInt{2}).twice == 3);
    CHECK((-HalfInt{3}).twice == -3);
}

TEST_CASE("mirror-sector partner: frozen example") {
    const QPPair pair = pair_for(3, 1, 4);
    CHECK(pair.m() == 1);
    CHECK(pair.P.params.p == 5);
    // p' = 5 is odd, so P(-1) = 0
    CHECK(pair.P.poly.evaluate(mpq_class(-1)).is_zero());
    CHECK_FALSE(pair.Q.poly.evaluate(mpq_class(-1)).is_zero());
    CHECK(qop::tq_residual(pair.P).is_zero());

    // the negative-spin sector is rejected as a starting point
    CHECK_THROWS_AS(qop::wrong_side_p(solved(3, 1, 5)), std::invalid_argument);
}

TEST_CASE("tilde dressing exponents") {
    CHECK(qop::tilde_exponent(ChainParams(3, 3, 10)) == 0);  // m = 1
    CHECK(qop::tilde_exponent(ChainParams(3, 3, 11)) == 2);  // m = -1
    CHECK(qop::tilde_exponent(ChainParams(3, 1, 3)) == -2);  // m = 3
    for (int L : {1, 3, 5})
        for (const ChainParams& cp : qop::all_sectors(L, 2))
            CHECK_NOTHROW(qop::tilde_exponent(cp));  // always integral
}

TEST_CASE("dressed family basics on the ground sector") {
    qop::WronskianFamily family(pair_for(3, 1, 4));
    CHECK(family.shift() == 0);
    CHECK(family.q_exponent() == 0);
    CHECK(family.p_exponent() == 2);
    CHECK(family.t(HalfInt{-1}).is_zero());  // s = -1/2
    CHECK(family.t(HalfInt{0}) == family.t0_closed_form());
    CHECK(family.t(HalfInt{1}) == family.t_half_closed_form());
    // antisymmetry under s -> -s-1
    CHECK(family.t(HalfInt{-4}) == -family.t(HalfInt{2}));
    CHECK(family.t(HalfInt{-2}) == -family.t(HalfInt{0}));
}

TEST_CASE("dressed family with a positive shift (stretched sector)") {
    qop::WronskianFamily family(pair_for(3, 1, 3));  // m = 3
    CHECK(family.q_exponent() == -2);
    CHECK(family.p_exponent() == 4);
    CHECK(family.shift() == 4);
    CHECK(family.t(HalfInt{-1}).is_zero());
    CHECK(family.t(HalfInt{0}) == family.t0_closed_form());
    CHECK(family.t(HalfInt{1}) == family.t_half_closed_form());
}

TEST_CASE("fundamental relations hold for solved pairs") {
    for (const auto& [L, N, p] : {std::tuple{1, 1, 1}, {1, 2, 2}, {3, 1, 4},
                                  {3, 2, 7}, {5, 1, 7}}) {
        CAPTURE(L, N, p);
        const qop::FunctionalReport report = qop::verify_fundamental(pair_for(L, N, p));
        std::size_t expected = L >= 3 ? 7 : 5;  // psi2 entries only exist for L >= 3
        CHECK(report.results.size() == expected);
        for (const auto& r : report.results) CHECK(r.holds);
    }
}

TEST_CASE("fundamental relations reject a forged pair") {
    const qop::QPolynomial Q = solved(3, 1, 4);
    const QPPair forged{Q, Q};
    CHECK_THROWS_AS(qop::verify_fundamental(forged), qop::identity_violation);
}

TEST_CASE("shifted Q images are coprime, certified by an independent resultant") {
    for (const auto& [L, N, p] : {std::tuple{3, 1, 4}, {3, 2, 7}}) {
        CAPTURE(L, N, p);
        const qop::QPolynomial Q = solved(L, N, p);
        const FieldPoly Q1 = Q.poly.scale_arg(1);
        const FieldPoly Q2 = Q.poly.scale_arg(-1);
        CHECK_FALSE(sylvester_resultant(Q1, Q2).is_zero());
        CHECK(extended_gcd(Q1, Q2).g.degree() == 0);
    }
    // sanity: the certificate does flag a shared factor
    const CycloField& F = CycloField::of(10);
    const FieldPoly zm1 = qop::linear_poly(F, Var::Z, -CycloNum::one(F), CycloNum::one(F));
    const FieldPoly zp1 = qop::linear_poly(F, Var::Z, CycloNum::one(F), CycloNum::one(F));
    CHECK(sylvester_resultant(zm1 * zp1, zm1).is_zero());
}

TEST_CASE("raw Pluecker identity on random quadruples") {
    const CycloField& F = CycloField::of(20);
    std::mt19937 rng(37);
    for (int round = 0; round < 10; ++round) {
        FieldPoly A[4] = {random_poly(F, Var::W, rng), random_poly(F, Var::W, rng),
                          random_poly(F, Var::W, rng), random_poly(F, Var::W, rng)};
        FieldPoly B[4] = {random_poly(F, Var::W, rng), random_poly(F, Var::W, rng),
                          random_poly(F, Var::W, rng), random_poly(F, Var::W, rng)};
        auto delta = [&](int i, int j) { return A[i] * B[j] - A[j] * B[i]; };
        CHECK(delta(0, 0).is_zero());
        CHECK(delta(1, 2) == -delta(2, 1));
        const FieldPoly residual = delta(0, 1) * delta(2, 3) -
                                   delta(0, 2) * delta(1, 3) +
                                   delta(0, 3) * delta(1, 2);
        CHECK(residual.is_zero());
    }
}

TEST_CASE("hierarchy residuals vanish for solved families") {
    qop::WronskianFamily family(pair_for(3, 1, 4));
    const HalfInt triples[][3] = {
        {HalfInt{0}, HalfInt{-2}, HalfInt{0}},  // (0, -1, 0)
        {HalfInt{1}, HalfInt{0}, HalfInt{2}},   // (1/2, 0, 1)
        {HalfInt{2}, HalfInt{0}, HalfInt{4}},   // (1, 0, 2)
    };
    for (const auto& t : triples) {
        CAPTURE(t[0].twice, t[1].twice, t[2].twice);
        CHECK(qop::plucker_residual(family, t[0], t[1], t[2]).is_zero());
    }
}

TEST_CASE("pluecker is structural, fusion carries the TQ content") {
    // Perturb the partner palindromically: the hierarchy residual stays zero
    // (it is a determinant identity, valid for any dressed pair), while the
    // fusion relation -- which encodes the closed form of t_0 -- breaks.
    const qop::QPolynomial Q = solved(3, 1, 4);
    const qop::QPolynomial P = solved(3, 1, 5);
    std::vector<mpq_class> forged_e = P.elementary;
    forged_e[1] += 1;
    forged_e[4] -= 1;  // keep e_{p-j} = -e_j (p' = 5 is odd)
    const qop::QPolynomial forged_p =
        qop::make_q_polynomial(P.params, std::move(forged_e));

    qop::WronskianFamily broken(QPPair{Q, forged_p});
    CHECK(qop::plucker_residual(broken, HalfInt{1}, HalfInt{0}, HalfInt{2}).is_zero());
    CHECK(broken.t(HalfInt{-1}).is_zero());
    CHECK_FALSE(broken.t(HalfInt{0}) == broken.t0_closed_form());
    CHECK_FALSE(qop::fusion_residual(broken, HalfInt{0}).is_zero());
}

TEST_CASE("fusion residuals vanish, including on a shifted family") {
    for (int p : {4, 3}) {  // shift 0 and shift 4 families
        CAPTURE(p);
        qop::WronskianFamily family(pair_for(3, 1, p));
        for (int twice : {0, 1, 2}) {
            CAPTURE(twice);
            CHECK(qop::fusion_residual(family, HalfInt{twice}).is_zero());
        }
    }
}

TEST_CASE("decomposition of the partner over the ground-sector Q") {
    for (const auto& [L, N, p] : {std::tuple{3, 1, 4}, {3, 2, 7}}) {
        CAPTURE(L, N, p);
        const QPPair pair = pair_for(L, N, p);
        const qop::PQDecomposition dec = qop::pq_decompose(pair);
        CHECK(dec.F.degree() == pair.m());
        CHECK(dec.R.degree() == pair.m());
        CHECK(dec.C.degree() < pair.Q.params.p);
        CHECK(pair.P.poly == dec.F * pair.Q.poly + dec.C);
        const CycloField& F = pair.Q.params.field();
        const long long a = pair.Q.params.weight_exponent();
        CHECK(qop::q_power(F, -a) * dec.A == qop::q_power(F, a) * dec.B);
    }
}
