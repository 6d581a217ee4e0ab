#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qop/errors.hpp"
#include "qop/field.hpp"
#include "qop/poly.hpp"

namespace qop {

// Sector of the spin-L/2 chain on M = 2N+1 sites with p Bethe roots.
// The chain sits at anisotropy eta = -i(L+1)pi/(L+2), where q = exp(pi i/(L+2))
// is exactly the canonical root of the order-2(L+2) cyclotomic field.
struct ChainParams {
    int L;  // twice the spin; odd positive
    int N;  // M = 2N+1 sites
    int p;  // Bethe-root count, NL <= p <= (N+1)L

    ChainParams(int L_, int N_, int p_) : L(L_), N(N_), p(p_) {
        if (L < 1 || L % 2 == 0)
            throw std::invalid_argument("L must be an odd positive integer");
        if (N < 1) throw std::invalid_argument("N must be a positive integer");
        if (p < N * L || p > (N + 1) * L)
            throw std::invalid_argument("p must lie in the sector range [N*L, (N+1)*L]");
    }

    int sites() const { return 2 * N + 1; }
    // Twice the conserved total spin, m = ML - 2p.  Odd, hence never zero.
    int sz_twice() const { return sites() * L - 2 * p; }
    // The exponent a with transfer eigenvalue q^a + q^{-a}: a = (L+1)m/2.
    int weight_exponent() const { return (L + 1) * sz_twice() / 2; }
    unsigned field_order() const { return 2u * static_cast<unsigned>(L + 2); }
    const CycloField& field() const { return CycloField::of(field_order()); }

    friend bool operator==(const ChainParams&, const ChainParams&) = default;
};

inline std::vector<ChainParams> all_sectors(int L, int N) {
    std::vector<ChainParams> out;
    for (int p = N * L; p <= (N + 1) * L; ++p) out.emplace_back(L, N, p);
    return out;
}

// One equation sum_j binom(M, ell-j) e_j = 0 over the unknowns e_1..e_p;
// the j = 0 term is the constant.
struct LinearRow {
    int ell;
    std::vector<mpz_class> coefficients;  // over e_1..e_p
    mpz_class constant;
};

struct LinearSystem {
    ChainParams params;
    std::vector<LinearRow> rows;
    std::vector<int> dropped;  // ell values whose prefactor vanished exactly
};

// Expand the TQ equation coefficient-by-coefficient in z.  The coefficient of
// z^{M+p-ell} carries the prefactor
//   phi(ell) = q^{2 ell - a} + q^{a - 2 ell} - q^a - q^{-a},
// which vanishes exactly for ell congruent to 0 or a modulo L+2; those rows
// hold automatically and are dropped.  All rows over the full range
// 0 <= ell <= M+p are produced (over-determined on purpose: consistency of
// the mirror rows is a free check on the eigenvalue).
inline LinearSystem build_linear_system(const ChainParams& params) {
    const CycloField& F = params.field();
    const int M = params.sites();
    const int p = params.p;
    const long long a = params.weight_exponent();
    LinearSystem sys{params, {}, {}};
    const CycloNum tau = ch_coeff(F, a);
    for (int ell = 0; ell <= M + p; ++ell) {
        CycloNum prefactor = ch_coeff(F, 2LL * ell - a) - tau;
        if (prefactor.is_zero()) {
            sys.dropped.push_back(ell);
            continue;
        }
        LinearRow row{ell, std::vector<mpz_class>(static_cast<std::size_t>(p)), 0};
        const int j_lo = std::max(0, ell - M);
        const int j_hi = std::min(p, ell);
        for (int j = j_lo; j <= j_hi; ++j) {
            mpz_class b;
            mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(M),
                         static_cast<unsigned long>(ell - j));
            if (j == 0)
                row.constant = std::move(b);
            else
                row.coefficients[static_cast<std::size_t>(j - 1)] = std::move(b);
        }
        sys.rows.push_back(std::move(row));
    }
    return sys;
}

// Q polynomial of a sector together with the elementary symmetric
// polynomials e_0..e_p of its roots (Q = sum_j (-1)^j z^{p-j} e_j).
struct QPolynomial {
    ChainParams params;
    std::vector<mpq_class> elementary;
    FieldPoly poly;
};

// Assemble and validate a QPolynomial from its elementary values.
// The invariants (monic, Q(0) = 1, coefficient palindrome) are theorems for
// correctly solved sectors, so violations are alarms.
inline QPolynomial make_q_polynomial(const ChainParams& params,
                                     std::vector<mpq_class> elementary) {
    const CycloField& F = params.field();
    const std::size_t p = static_cast<std::size_t>(params.p);
    if (elementary.size() != p + 1) throw alarm("elementary vector has wrong length");
    if (elementary[0] != 1) throw alarm("e_0 must be 1");
    const int sign_p = params.p % 2 ? -1 : 1;
    if (elementary[p] != sign_p) throw alarm("Q(0) invariant violated: e_p != (-1)^p");
    for (std::size_t j = 0; j <= p; ++j) {
        mpq_class mirror = elementary[p - j];
        if (sign_p < 0) mirror = -mirror;
        if (elementary[j] != mirror)
            throw alarm("palindrome invariant violated at j=" + std::to_string(j));
    }
    std::vector<CycloNum> coeffs;
    coeffs.reserve(p + 1);
    for (std::size_t k = 0; k <= p; ++k) {
        // coefficient of z^k is (-1)^{p-k} e_{p-k}
        mpq_class c = elementary[p - k];
        if ((p - k) % 2) c = -c;
        coeffs.push_back(CycloNum::rational(F, std::move(c)));
    }
    FieldPoly poly = FieldPoly::from_coeffs(F, Var::Z, std::move(coeffs));
    return QPolynomial{params, std::move(elementary), std::move(poly)};
}

// Exact Gaussian elimination over the full over-determined row set.  Pivots
// are chosen to minimize numerator+denominator bit length (coefficient swell
// is the only cost driver at these sizes).  The mirror rows beyond rank must
// eliminate to 0 = 0; anything else falsifies the eigenvalue ansatz.
inline QPolynomial solve_q_linear(const LinearSystem& sys) {
    const int p = sys.params.p;
    const std::size_t ncols = static_cast<std::size_t>(p);
    const std::size_t nrows = sys.rows.size();
    if (nrows < ncols)
        throw under_determined("kept rows (" + std::to_string(nrows) +
                               ") fewer than unknowns (" + std::to_string(p) + ")");

    std::vector<std::vector<mpq_class>> m(nrows, std::vector<mpq_class>(ncols + 1));
    for (std::size_t r = 0; r < nrows; ++r) {
        for (std::size_t c = 0; c < ncols; ++c) m[r][c] = sys.rows[r].coefficients[c];
        m[r][ncols] = -mpq_class(sys.rows[r].constant);
    }

    auto bit_cost = [](const mpq_class& x) {
        return mpz_sizeinbase(x.get_num().get_mpz_t(), 2) +
               mpz_sizeinbase(x.get_den().get_mpz_t(), 2);
    };

    std::size_t rank = 0;
    for (std::size_t col = 0; col < ncols && rank < nrows; ++col) {
        std::size_t best = nrows;
        std::size_t best_cost = 0;
        for (std::size_t r = rank; r < nrows; ++r) {
            if (m[r][col] == 0) continue;
            const std::size_t cost = bit_cost(m[r][col]);
            if (best == nrows || cost < best_cost) {
                best = r;
                best_cost = cost;
            }
        }
        if (best == nrows) continue;  // no pivot in this column
        std::swap(m[rank], m[best]);
        for (std::size_t r = rank + 1; r < nrows; ++r) {
            if (m[r][col] == 0) continue;
            mpq_class f = m[r][col] / m[rank][col];
            m[r][col] = 0;
            for (std::size_t c = col + 1; c <= ncols; ++c)
                if (m[rank][c] != 0) m[r][c] -= f * m[rank][c];
        }
        ++rank;
    }

    for (std::size_t r = rank; r < nrows; ++r) {
        bool zero_coeffs = true;
        for (std::size_t c = 0; c < ncols; ++c)
            if (m[r][c] != 0) {
                zero_coeffs = false;
                break;
            }
        if (zero_coeffs && m[r][ncols] != 0)
            throw inconsistent_system("row reduces to 0 = " + m[r][ncols].get_str());
    }
    if (rank < ncols)
        throw under_determined("rank " + std::to_string(rank) + " < " + std::to_string(p));

    // Full rank means every column acquired its pivot in order: back-substitute.
    std::vector<mpq_class> e(ncols + 1);
    e[0] = 1;
    for (std::size_t k = ncols; k-- > 0;) {
        mpq_class acc = m[k][ncols];
        for (std::size_t c = k + 1; c < ncols; ++c)
            if (m[k][c] != 0) acc -= m[k][c] * e[c + 1];
        e[k + 1] = acc / m[k][k];
    }
    return make_q_polynomial(sys.params, std::move(e));
}

// The interpolation-derived closed form: coefficient families for the two
// exponent ladders of the bracketed numerator, plus the assembled Q.
struct ClosedFormQ {
    ChainParams params;
    std::vector<mpq_class> plus_terms;   // coefficients on z^{p+1+2N-(L+2)k} - z^{(L+2)k}
    std::vector<mpq_class> minus_terms;  // coefficients on z^{(L+2)(N-k)} - z^{p+1-LN+(L+2)k}
    QPolynomial q;
};

inline ClosedFormQ closed_form_q(const ChainParams& params) {
    const int L = params.L, N = params.N, p = params.p, M = params.sites();
    const long c0 = static_cast<long>(p) + 1 - static_cast<long>(L) * N;  // >= 1
    const int k_plus = N / 2;                            // N even: N/2; N odd: (N-1)/2
    const int k_minus = N % 2 ? (N - 1) / 2 : N / 2 - 1;

    auto ladder_term = [&](int k, bool plus) {
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(N),
                     static_cast<unsigned long>(k));
        mpq_class r(binom);
        if (k % 2) r = -r;
        for (int j = 0; j <= N; ++j) {
            const long num = c0 + static_cast<long>(L + 2) * j;
            const long den = (plus ? c0 : -c0) + static_cast<long>(L + 2) * (j - k);
            if (den == 0)
                throw zero_denominator("k=" + std::to_string(k) + ", j=" + std::to_string(j));
            r *= num;
            r /= den;
        }
        return r;
    };

    ClosedFormQ out{params, {}, {}, make_q_polynomial(params, [&] {
        std::vector<mpq_class> numerator(static_cast<std::size_t>(p + M + 1));
        for (int k = 0; k <= k_plus; ++k) {
            mpq_class t = ladder_term(k, true);
            numerator.at(static_cast<std::size_t>(p + 1 + 2 * N - (L + 2) * k)) += t;
            numerator.at(static_cast<std::size_t>((L + 2) * k)) -= t;
        }
        for (int k = 0; k <= k_minus; ++k) {
            mpq_class t = ladder_term(k, false);
            numerator.at(static_cast<std::size_t>((L + 2) * (N - k))) += t;
            numerator.at(static_cast<std::size_t>(p + 1 - L * N + (L + 2) * k)) -= t;
        }
        const CycloField& F = params.field();
        std::vector<CycloNum> coeffs;
        coeffs.reserve(numerator.size());
        for (auto& c : numerator) coeffs.push_back(CycloNum::rational(F, std::move(c)));
        FieldPoly num_poly = FieldPoly::from_coeffs(F, Var::Z, std::move(coeffs));
        FieldPoly den = linear_poly(F, Var::Z, -CycloNum::one(F), CycloNum::one(F))
                            .pow(static_cast<unsigned long>(M));
        FieldPoly quotient = exact_div(num_poly, den);

        std::vector<mpq_class> e(static_cast<std::size_t>(p) + 1);
        for (int j = 0; j <= p; ++j) {
            CycloNum c = quotient.coeff_at(static_cast<std::size_t>(p - j));
            mpq_class v = c.rational_value();  // alarms if a coefficient left the rationals
            if (j % 2) v = -v;
            e[static_cast<std::size_t>(j)] = std::move(v);
        }
        return e;
    }())};
    for (int k = 0; k <= k_plus; ++k) out.plus_terms.push_back(ladder_term(k, true));
    for (int k = 0; k <= k_minus; ++k) out.minus_terms.push_back(ladder_term(k, false));
    return out;
}

// tau = q^a + q^{-a}, the exact transfer eigenvalue scalar of the sector.
inline CycloNum transfer_eigenvalue(const ChainParams& params) {
    return ch_coeff(params.field(), params.weight_exponent());
}

// Residual of the TQ equation:
//   tau (z-1)^M Q(z) - q^a (zq^{-2}-1)^M Q(zq^{-2}) - q^{-a} (zq^2-1)^M Q(zq^2).
// Identically zero for a correctly solved sector.
inline FieldPoly tq_residual(const QPolynomial& Q) {
    const CycloField& F = Q.params.field();
    const unsigned long M = static_cast<unsigned long>(Q.params.sites());
    const long long a = Q.params.weight_exponent();
    const FieldPoly zm1M =
        linear_poly(F, Var::Z, -CycloNum::one(F), CycloNum::one(F)).pow(M);
    FieldPoly r = transfer_eigenvalue(Q.params) * (zm1M * Q.poly);
    r -= q_power(F, a) * (zm1M.scale_arg(-2) * Q.poly.scale_arg(-2));
    r -= q_power(F, -a) * (zm1M.scale_arg(2) * Q.poly.scale_arg(2));
    return r;
}

}  // namespace qop
