#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qop/errors.hpp"
#include "qop/field.hpp"
#include "qop/poly.hpp"
#include "qop/qsolver.hpp"

namespace qop {

// Half-integer spin label, stored as twice its value.
struct HalfInt {
    int twice;

    static HalfInt whole(int n) { return HalfInt{2 * n}; }
    static HalfInt halves(int n) { return HalfInt{n}; }

    friend HalfInt operator+(HalfInt a, HalfInt b) { return HalfInt{a.twice + b.twice}; }
    friend HalfInt operator-(HalfInt a, HalfInt b) { return HalfInt{a.twice - b.twice}; }
    HalfInt operator-() const { return HalfInt{-twice}; }
    friend bool operator==(HalfInt, HalfInt) = default;

    std::string str() const {
        if (twice % 2 == 0) return std::to_string(twice / 2);
        return std::to_string(twice) + "/2";
    }
};

// A sector's Q polynomial together with its "wrong-side" partner P, the
// second solution of the same TQ equation living at p' = ML - p.
// Q always holds the positive-spin representative (m = ML - 2p > 0).
struct QPPair {
    QPolynomial Q;
    QPolynomial P;

    int m() const { return Q.params.sz_twice(); }
};

// Solve the mirror sector p' = ML - p of a positive-spin Q and certify that
// the partner shares the transfer eigenvalue and satisfies the TQ equation.
// Both facts are theorems, so failure is an alarm, not user error.
inline QPPair wrong_side_p(const QPolynomial& Q) {
    if (Q.params.sz_twice() <= 0)
        throw std::invalid_argument(
            "wrong_side_p expects the positive-spin sector (p < ML/2)");
    const int p_mirror = Q.params.sites() * Q.params.L - Q.params.p;
    const ChainParams mirror(Q.params.L, Q.params.N, p_mirror);
    QPolynomial P = solve_q_linear(build_linear_system(mirror));
    if (transfer_eigenvalue(mirror) != transfer_eigenvalue(Q.params))
        throw alarm("mirror sector changed the transfer eigenvalue");
    if (!tq_residual(P).is_zero())
        throw alarm("mirror solution violates the TQ equation");
    return QPPair{Q, std::move(P)};
}

// Exponent of the tilde dressing Qtilde(z) = z^e Q(z), e = (L+1)(1-m)/4.
// Integral for every odd-M sector (m is odd and L is odd, so (L+1)(1-m) is
// divisible by 4); a violation would mean the sector arithmetic is broken.
inline int tilde_exponent(const ChainParams& params) {
    const int num = (params.L + 1) * (1 - params.sz_twice());
    if (num % 4 != 0) throw alarm("tilde exponent is not an integer");
    return num / 4;
}

struct IdentityResult {
    std::string name;
    bool holds;
    long residual_degree;          // -1 when the residual vanished identically
    std::size_t residual_height_bits;
};

struct FunctionalReport {
    std::vector<IdentityResult> results;
};

namespace detail {

// G(z) = sh(-a) prod_{j=1}^{L} (z q^{2j+1} - 1)^M, the Wronskian of the pair.
inline FieldPoly pair_wronskian_rhs(const QPPair& pair) {
    const ChainParams& cp = pair.Q.params;
    const CycloField& F = cp.field();
    const unsigned long M = static_cast<unsigned long>(cp.sites());
    FieldPoly G = FieldPoly::constant(F, Var::Z,
                                      sh_coeff(F, -cp.weight_exponent()));
    for (int j = 1; j <= cp.L; ++j)
        G = G * linear_poly(F, Var::Z, -CycloNum::one(F),
                            q_power(F, 2LL * j + 1))
                    .pow(M);
    return G;
}

inline IdentityResult record(std::string name, const FieldPoly& residual) {
    if (!residual.is_zero())
        throw identity_violation(std::move(name),
                                 "residual degree " + std::to_string(residual.degree()) +
                                     ", height " +
                                     std::to_string(height_bits(residual)) + " bits");
    return IdentityResult{std::move(name), true, -1, 0};
}

}  // namespace detail

// Verify every z-domain functional relation of a Q/P pair exactly:
// the first and second fundamental relations, the two quotient relations
// defining psi1, its closed product form, and (for L >= 3) the descent to
// psi2.  Throws identity_violation at the first nonzero residual.
inline FunctionalReport verify_fundamental(const QPPair& pair) {
    const ChainParams& cp = pair.Q.params;
    const CycloField& F = cp.field();
    const unsigned long M = static_cast<unsigned long>(cp.sites());
    const long long a = cp.weight_exponent();
    const FieldPoly& Q = pair.Q.poly;
    const FieldPoly& P = pair.P.poly;
    auto shifted_factor = [&](long long power) {  // (z q^power - 1)^M
        return linear_poly(F, Var::Z, -CycloNum::one(F), q_power(F, power)).pow(M);
    };

    FunctionalReport report;

    // q^a P(zq) Q(z/q) - q^{-a} Q(zq) P(z/q) = G
    report.results.push_back(detail::record(
        "first_fundamental",
        q_power(F, a) * (P.scale_arg(1) * Q.scale_arg(-1)) -
            q_power(F, -a) * (Q.scale_arg(1) * P.scale_arg(-1)) -
            detail::pair_wronskian_rhs(pair)));

    // q^a P(zq^2) Q(z) - q^{-a} Q(zq^2) P(z) = (zq^{-2}-1)^M psi1(z)
    FieldPoly psi1 = [&] {
        FieldPoly forward = q_power(F, a) * (P.scale_arg(2) * Q) -
                            q_power(F, -a) * (Q.scale_arg(2) * P);
        try {
            return exact_div(forward, shifted_factor(-2));
        } catch (const non_zero_remainder& e) {
            throw identity_violation("psi1_division", e.what());
        }
    }();
    report.results.push_back(IdentityResult{"psi1_division", true, -1, 0});

    // q^a Q(zq^{-2}) P(z) - q^{-a} P(zq^{-2}) Q(z) = (zq^2-1)^M psi1(z)
    report.results.push_back(detail::record(
        "psi1_pair", q_power(F, a) * (Q.scale_arg(-2) * P) -
                         q_power(F, -a) * (P.scale_arg(-2) * Q) -
                         shifted_factor(2) * psi1));

    // psi1 = sh(-a) prod_{j=2}^{L} (zq^{2j}-1)^M, degree M(L-1)
    FieldPoly psi1_closed = FieldPoly::constant(F, Var::Z, sh_coeff(F, -a));
    for (int j = 2; j <= cp.L; ++j) psi1_closed = psi1_closed * shifted_factor(2LL * j);
    report.results.push_back(detail::record("psi1_closed_form", psi1 - psi1_closed));

    // q^{2a} P(zq^2) Q(zq^{-2}) - q^{-2a} Q(zq^2) P(zq^{-2})
    //   = sh(-2a) (z-1)^M prod_{j=2}^{L} (zq^{2j}-1)^M
    FieldPoly second_rhs =
        FieldPoly::constant(F, Var::Z, sh_coeff(F, -2LL * a)) * shifted_factor(0);
    for (int j = 2; j <= cp.L; ++j) second_rhs = second_rhs * shifted_factor(2LL * j);
    report.results.push_back(detail::record(
        "second_fundamental",
        q_power(F, 2 * a) * (P.scale_arg(2) * Q.scale_arg(-2)) -
            q_power(F, -2 * a) * (Q.scale_arg(2) * P.scale_arg(-2)) - second_rhs));

    // psi1(z/q) = (zq^3-1)^M psi2(z) and psi1(zq) = (zq^{-3}-1)^M psi2(z).
    // psi2 has degree M(L-2), which only exists from L = 3 up.
    if (cp.L >= 3) {
        FieldPoly psi2 = [&] {
            try {
                return exact_div(psi1.scale_arg(-1), shifted_factor(3));
            } catch (const non_zero_remainder& e) {
                throw identity_violation("psi2_division", e.what());
            }
        }();
        report.results.push_back(IdentityResult{"psi2_division", true, -1, 0});
        report.results.push_back(detail::record(
            "psi2_pair", psi1.scale_arg(1) - shifted_factor(-3) * psi2));
        if (psi2.degree() != static_cast<long>(M) * (cp.L - 2))
            throw identity_violation("psi2_degree",
                                     "degree " + std::to_string(psi2.degree()));
    }
    return report;
}

// The fused transfer-matrix family t_s, held as dressed polynomials in
// w = sqrt(z) over the doubled field (order 4(L+2), so zeta^2 = q).
// Qhat = w^{2 eq + shift} Q(w^2), Phat = w^{2 ep + shift} P(w^2) with
// eq = (L+1)(1-m)/4, ep = (L+1)(1+m)/4 and the common even shift making both
// exponents nonnegative.  Then
//   that_s = Phat(zeta^k w) Qhat(zeta^{-k} w) - Phat(zeta^{-k} w) Qhat(zeta^k w),
// k = 2s+1, equals w^{2 shift} t_s(w^2): the zeta^{k shift} phases cancel
// inside each product, so every t_s is dressed by the same factor.
class WronskianFamily {
  public:
    explicit WronskianFamily(QPPair pair)
        : pair_(std::move(pair)),
          big_(&CycloField::of(2 * pair_.Q.params.field_order())),
          eq_(tilde_exponent(pair_.Q.params)),
          ep_(tilde_exponent(pair_.P.params)),
          shift_(std::max({0, -2 * eq_, -2 * ep_})),
          qhat_(pair_.Q.poly.to_w(*big_).shifted_up(
              static_cast<std::size_t>(2 * eq_ + shift_))),
          phat_(pair_.P.poly.to_w(*big_).shifted_up(
              static_cast<std::size_t>(2 * ep_ + shift_))) {}

    const QPPair& pair() const { return pair_; }
    const CycloField& big_field() const { return *big_; }
    int q_exponent() const { return eq_; }
    int p_exponent() const { return ep_; }
    int shift() const { return shift_; }

    // q^x inside the doubled field.
    CycloNum qx(long long x) const { return q_power(*big_, 2 * x); }

    const FieldPoly& t(HalfInt s) {
        auto it = cache_.find(s.twice);
        if (it != cache_.end()) return it->second;
        const int k = s.twice + 1;
        FieldPoly value = [&] {
            if (k == 0) return FieldPoly::zero(*big_, Var::W);
            if (k < 0) return -t(HalfInt{-k - 1});
            return phat_.scale_arg(k) * qhat_.scale_arg(-k) -
                   phat_.scale_arg(-k) * qhat_.scale_arg(k);
        }();
        return cache_.emplace(s.twice, std::move(value)).first->second;
    }

    // Closed product form of t_0:
    //   sh(-a) w^{L+1+2 shift} prod_{j=1}^{L} (w^2 q^{2j+1} - 1)^M.
    FieldPoly t0_closed_form() const {
        return closed_product(-weight(), 1, 3, /*extra_factor_z_minus_1=*/false);
    }

    // Closed product form of t_{1/2}:
    //   sh(-2a) w^{L+1+2 shift} (w^2-1)^M prod_{j=2}^{L} (w^2 q^{2j} - 1)^M.
    FieldPoly t_half_closed_form() const {
        return closed_product(-2LL * weight(), 2, 4, /*extra_factor_z_minus_1=*/true);
    }

  private:
    long long weight() const { return pair_.Q.params.weight_exponent(); }

    FieldPoly closed_product(long long sh_arg, int j_from, int first_power,
                             bool extra_factor_z_minus_1) const {
        const CycloField& F = *big_;
        const unsigned long M = static_cast<unsigned long>(pair_.Q.params.sites());
        const int L = pair_.Q.params.L;
        CycloNum sh = qx(sh_arg) - qx(-sh_arg);
        FieldPoly out = FieldPoly::constant(F, Var::W, std::move(sh))
                            .shifted_up(static_cast<std::size_t>(L + 1 + 2 * shift_));
        auto quadratic = [&](long long q_exp) {  // (w^2 q^{q_exp} - 1)^M
            return FieldPoly::from_coeffs(
                       F, Var::W,
                       {-CycloNum::one(F), CycloNum::zero(F), qx(q_exp)})
                .pow(M);
        };
        if (extra_factor_z_minus_1) out = out * quadratic(0);
        for (int j = j_from, e = first_power; j <= L; ++j, e += 2)
            out = out * quadratic(e);
        return out;
    }

    QPPair pair_;
    const CycloField* big_;
    int eq_, ep_, shift_;
    FieldPoly qhat_, phat_;
    std::map<int, FieldPoly> cache_;
};

// Residual of the Pluecker (Hirota bilinear) relation
//   t_{s1}(z/q^{2s1+1}) t_{s3-s2-1/2}(z/q^{2(s2+s3+1)})
//   - t_{s2}(z/q^{2s2+1}) t_{s3-s1-1/2}(z/q^{2(s1+s3+1)})
//   + t_{s3}(z/q^{2s3+1}) t_{s2-s1-1/2}(z/q^{2(s1+s2+1)})  =  0.
// Every product carries the same dressing phase (the shift exponents add to
// -(2s1+2s2+2s3+3) in each term), so the dressed residual vanishes exactly
// when the underlying relation holds.
inline FieldPoly plucker_residual(WronskianFamily& family, HalfInt s1, HalfInt s2,
                                  HalfInt s3) {
    auto A = [&](HalfInt s) { return family.t(s).scale_arg(-(s.twice + 1)); };
    auto B = [&](HalfInt sy, HalfInt sz) {
        return family.t(HalfInt{sz.twice - sy.twice - 1})
            .scale_arg(-(sy.twice + sz.twice + 2));
    };
    return A(s1) * B(s2, s3) - A(s2) * B(s1, s3) + A(s3) * B(s1, s2);
}

// Residual of the fusion relation in dressed form:
//   tau (w^2-1)^M that_s(z/q^{2s+1})
//   - q^{(L+1)/2 + shift} (w^2/q^2-1)^M that_{s-1/2}(z/q^{2s+2})
//   - q^{-(L+1)/2 - shift} (w^2 q^2-1)^M that_{s+1/2}(z/q^{2s})  =  0.
// Both dressed polynomials satisfy the same three-term recursion with weights
// q^{+-((L+1)/2 + shift)}, so expanding one column of the Wronskian t_s yields
// the two lower/higher neighbours on the same side of the equation; the
// +-shift correction compensates the dressing phase q^{-(2s+1+j) shift} each
// term acquires, and at shift = 0 this is the plain fusion relation.
inline FieldPoly fusion_residual(WronskianFamily& family, HalfInt s) {
    const CycloField& F = family.big_field();
    const ChainParams& cp = family.pair().Q.params;
    const unsigned long M = static_cast<unsigned long>(cp.sites());
    const FieldPoly w2m1 = FieldPoly::from_coeffs(F, Var::W,
                                                  {-CycloNum::one(F),
                                                   CycloNum::zero(F),
                                                   CycloNum::one(F)})
                               .pow(M);
    const CycloNum tau = family.qx(cp.weight_exponent()) +
                         family.qx(-cp.weight_exponent());
    const long long balance = cp.L + 1 + 2LL * family.shift();
    const HalfInt half{1};
    FieldPoly r = tau * (w2m1 * family.t(s).scale_arg(-(s.twice + 1)));
    r -= q_power(F, balance) *
         (w2m1.scale_arg(-2) * family.t(s - half).scale_arg(-(s.twice + 2)));
    r -= q_power(F, -balance) *
         (w2m1.scale_arg(2) * family.t(s + half).scale_arg(-s.twice));
    return r;
}

// Decomposition P = F Q + C of the wrong-side partner over the right-side Q,
// recovered from the pair's Wronskian G by exact partial fractions:
//   G = R * Q(zq)Q(z/q) + G1,          (division)
//   G1 = A1 Q(z/q) + A2 Q(zq),         (Bezout split, degrees < p)
//   F_j = R_j / sh(a+j),               (polynomial part, degree m)
//   C(z) = q^{-a} A1(z/q) = q^{a} (-A2(zq)).
struct PQDecomposition {
    QPPair pair;
    FieldPoly F;  // polynomial part, degree m
    FieldPoly C;  // remainder part, degree < p
    FieldPoly A;  // A1(z/q)
    FieldPoly B;  // -A2(zq)
    FieldPoly R;  // polynomial part of G / (Q(zq) Q(z/q)), degree m
};

inline PQDecomposition pq_decompose(const QPPair& pair) {
    const ChainParams& cp = pair.Q.params;
    const CycloField& F = cp.field();
    const long long a = cp.weight_exponent();
    const int m = pair.m();

    const FieldPoly Q1 = pair.Q.poly.scale_arg(1);   // Q(zq)
    const FieldPoly Q2 = pair.Q.poly.scale_arg(-1);  // Q(z/q)
    const BezoutTriple bez = extended_gcd(Q1, Q2);
    if (bez.g.degree() > 0)
        throw not_coprime("gcd(Q(zq), Q(z/q)) has degree " +
                          std::to_string(bez.g.degree()));

    const FieldPoly G = detail::pair_wronskian_rhs(pair);
    auto [R, G1] = divmod(G, Q1 * Q2);
    if (R.degree() != m)
        throw alarm("polynomial part of the Wronskian has degree " +
                    std::to_string(R.degree()) + ", expected " + std::to_string(m));

    // G1 = A1 Q2 + A2 Q1 exactly: both sides agree mod Q1 and mod Q2 and the
    // degree bound deg G1 < 2p forces the quotient term to vanish.
    const FieldPoly A1 = divmod(G1 * bez.t, Q1).second;
    const FieldPoly A2 = divmod(G1 * bez.s, Q2).second;
    if (!(G1 - (A1 * Q2 + A2 * Q1)).is_zero())
        throw alarm("partial-fraction recombination failed");

    FieldPoly A = A1.scale_arg(-1);
    FieldPoly B = -A2.scale_arg(1);
    if (!(q_power(F, -a) * A - q_power(F, a) * B).is_zero())
        throw identity_violation("pq_phase_relation",
                                 "the two partial-fraction images of C disagree");
    FieldPoly C = q_power(F, -a) * A;

    std::vector<CycloNum> f_coeffs;
    f_coeffs.reserve(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j <= m; ++j) {
        const CycloNum denom = sh_coeff(F, a + j);
        if (denom.is_zero())
            throw f_solve_singular("sh(a+j) vanishes at j=" + std::to_string(j));
        f_coeffs.push_back(R.coeff_at(static_cast<std::size_t>(j)) / denom);
    }
    FieldPoly Fpoly = FieldPoly::from_coeffs(F, Var::Z, std::move(f_coeffs));

    if (!(pair.P.poly - (Fpoly * pair.Q.poly + C)).is_zero())
        throw identity_violation("pq_decomposition", "P - (F Q + C) is nonzero");
    return PQDecomposition{pair, std::move(Fpoly), std::move(C), std::move(A),
                           std::move(B), std::move(R)};
}

}  // namespace qop
