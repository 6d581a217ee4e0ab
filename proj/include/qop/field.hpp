#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qop/errors.hpp"

namespace qop {

namespace detail {

// Exact division of integer polynomials with a monic divisor.  Coefficients
// ascending.  Only used while building cyclotomic moduli, where the division
// is guaranteed exact.
inline std::vector<mpz_class> divide_monic_exact(std::vector<mpz_class> num,
                                                 const std::vector<mpz_class>& den) {
    const std::size_t dn = num.size() - 1;
    const std::size_t dd = den.size() - 1;
    if (dd > dn) throw alarm("divide_monic_exact: divisor degree exceeds dividend");
    std::vector<mpz_class> quot(dn - dd + 1);
    for (std::size_t k = dn - dd + 1; k-- > 0;) {
        mpz_class c = num[k + dd];
        if (c == 0) continue;
        quot[k] = c;
        for (std::size_t j = 0; j <= dd; ++j) num[k + j] -= c * den[j];
    }
    for (const auto& c : num)
        if (c != 0) throw alarm("divide_monic_exact: nonzero remainder");
    return quot;
}

}  // namespace detail

// n-th cyclotomic polynomial, ascending integer coefficients, computed by
// stripping every proper-divisor factor out of x^n - 1.
inline std::vector<mpz_class> cyclotomic_polynomial(unsigned n) {
    if (n == 0) throw std::invalid_argument("cyclotomic order must be positive");
    if (n == 1) return {mpz_class(-1), mpz_class(1)};
    std::vector<mpz_class> poly(n + 1);
    poly[0] = -1;
    poly[n] = 1;
    for (unsigned d = 1; d < n; ++d)
        if (n % d == 0)
            poly = detail::divide_monic_exact(std::move(poly), cyclotomic_polynomial(d));
    return poly;
}

// The field Q(zeta_n) in the power basis 1, zeta, ..., zeta^{phi(n)-1} modulo
// Phi_n.  Instances are interned (one per order) and immutable, so elements
// hold a plain pointer to their field.
class CycloField {
public:
    static const CycloField& of(unsigned order) {
        static std::mutex mu;
        static std::map<unsigned, std::unique_ptr<CycloField>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = cache[order];
        if (!slot) slot.reset(new CycloField(order));
        return *slot;
    }

    unsigned order() const { return n_; }
    std::size_t degree() const { return phi_; }
    const std::vector<mpz_class>& modulus() const { return modulus_; }

    // x^k mod Phi_n for k in [degree, 2*degree-2]: everything a product of
    // two basis monomials can reach.  Integer coefficients.
    const std::vector<mpz_class>& power_reduction(std::size_t k) const {
        return reduction_.at(k - phi_);
    }

    // Coordinates of zeta^k for any integer exponent (reduced mod order).
    const std::vector<mpq_class>& zeta_power(long long k) const {
        long long r = k % static_cast<long long>(n_);
        if (r < 0) r += n_;
        return zeta_pow_[static_cast<std::size_t>(r)];
    }

    std::complex<long double> basis_numeric(std::size_t k) const { return basis_c_[k]; }

private:
    explicit CycloField(unsigned n) : n_(n) {
        modulus_ = cyclotomic_polynomial(n);
        phi_ = modulus_.size() - 1;

        // x^phi mod Phi = -(low part of Phi); extend by shift-and-reduce.
        std::vector<mpz_class> xphi(phi_);
        for (std::size_t k = 0; k < phi_; ++k) xphi[k] = -modulus_[k];
        if (phi_ >= 2) {
            reduction_.reserve(phi_ - 1);
            reduction_.push_back(xphi);
            for (std::size_t t = phi_ + 1; t <= 2 * phi_ - 2; ++t) {
                const std::vector<mpz_class>& prev = reduction_.back();
                std::vector<mpz_class> next(phi_);
                for (std::size_t k = 1; k < phi_; ++k) next[k] = prev[k - 1];
                if (prev[phi_ - 1] != 0)
                    for (std::size_t k = 0; k < phi_; ++k)
                        next[k] += prev[phi_ - 1] * xphi[k];
                reduction_.push_back(std::move(next));
            }
        }

        zeta_pow_.resize(n_);
        for (std::size_t k = 0; k < n_ && k < phi_; ++k) {
            zeta_pow_[k].assign(phi_, mpq_class(0));
            zeta_pow_[k][k] = 1;
        }
        for (std::size_t k = phi_; k < n_; ++k) {
            const std::vector<mpq_class>& prev = zeta_pow_[k - 1];
            std::vector<mpq_class> next(phi_);
            for (std::size_t j = 1; j < phi_; ++j) next[j] = prev[j - 1];
            if (prev[phi_ - 1] != 0)
                for (std::size_t j = 0; j < phi_; ++j)
                    next[j] += prev[phi_ - 1] * xphi[j];
            zeta_pow_[k] = std::move(next);
        }

        basis_c_.resize(phi_);
        const long double tau = 2.0L * 3.14159265358979323846264338327950288L;
        for (std::size_t k = 0; k < phi_; ++k) {
            long double arg = tau * static_cast<long double>(k) / static_cast<long double>(n_);
            basis_c_[k] = {std::cos(arg), std::sin(arg)};
        }
    }

    unsigned n_;
    std::size_t phi_;
    std::vector<mpz_class> modulus_;
    std::vector<std::vector<mpz_class>> reduction_;
    std::vector<std::vector<mpq_class>> zeta_pow_;
    std::vector<std::complex<long double>> basis_c_;
};

namespace detail {

// Minimal rational-coefficient polynomial helpers for the extended Euclid
// behind CycloNum::inverse.  Coefficients ascending, not trimmed.
inline long qpoly_degree(const std::vector<mpq_class>& p) {
    for (std::size_t k = p.size(); k-- > 0;)
        if (p[k] != 0) return static_cast<long>(k);
    return -1;
}

inline std::vector<mpq_class> qpoly_divmod(std::vector<mpq_class>& rem,
                                           const std::vector<mpq_class>& den) {
    const long dd = qpoly_degree(den);
    long dn = qpoly_degree(rem);
    std::vector<mpq_class> quot(dn >= dd ? static_cast<std::size_t>(dn - dd + 1) : 1);
    while ((dn = qpoly_degree(rem)) >= dd && dn >= 0) {
        mpq_class c = rem[dn] / den[dd];
        quot[static_cast<std::size_t>(dn - dd)] = c;
        for (long j = 0; j <= dd; ++j)
            rem[static_cast<std::size_t>(dn - dd + j)] -= c * den[static_cast<std::size_t>(j)];
    }
    return quot;
}

}  // namespace detail

// An element of Q(zeta_n): phi(n) rational coordinates in the power basis.
// Value type; all arithmetic exact.
class CycloNum {
public:
    CycloNum(const CycloField& F, std::vector<mpq_class> coords)
        : field_(&F), c_(std::move(coords)) {
        if (c_.size() != F.degree())
            throw std::invalid_argument("coordinate count does not match field degree");
        for (auto& x : c_) x.canonicalize();
    }

    static CycloNum zero(const CycloField& F) {
        return CycloNum(F, std::vector<mpq_class>(F.degree()));
    }
    static CycloNum one(const CycloField& F) { return rational(F, 1); }
    static CycloNum rational(const CycloField& F, mpq_class r) {
        std::vector<mpq_class> c(F.degree());
        c[0] = std::move(r);
        return CycloNum(F, std::move(c));
    }

    const CycloField& field() const { return *field_; }
    const std::vector<mpq_class>& coords() const { return c_; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (std::size_t k = 1; k < c_.size(); ++k)
            if (c_[k] != 0) return false;
        return true;
    }
    // Requires is_rational(); the exact-zero test makes this reliable.
    const mpq_class& rational_value() const {
        if (!is_rational()) throw alarm("rational_value on a non-rational element");
        return c_[0];
    }

    CycloNum operator-() const {
        std::vector<mpq_class> c(c_.size());
        for (std::size_t k = 0; k < c_.size(); ++k) c[k] = -c_[k];
        return CycloNum(*field_, std::move(c));
    }

    CycloNum& operator+=(const CycloNum& o) {
        check_field(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    CycloNum& operator-=(const CycloNum& o) {
        check_field(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    CycloNum& operator*=(const CycloNum& o) {
        check_field(o);
        const std::size_t phi = c_.size();
        std::vector<mpq_class> acc(2 * phi - 1);
        for (std::size_t i = 0; i < phi; ++i) {
            if (c_[i] == 0) continue;
            for (std::size_t j = 0; j < phi; ++j) {
                if (o.c_[j] == 0) continue;
                acc[i + j] += c_[i] * o.c_[j];
            }
        }
        for (std::size_t t = 2 * phi - 2; t + 1 > phi; --t) {
            if (acc[t] == 0) continue;
            const std::vector<mpz_class>& row = field_->power_reduction(t);
            for (std::size_t k = 0; k < phi; ++k)
                if (row[k] != 0) acc[k] += row[k] * acc[t];
        }
        acc.resize(phi);
        c_ = std::move(acc);
        return *this;
    }
    CycloNum& operator*=(const mpq_class& r) {
        for (auto& x : c_) x *= r;
        return *this;
    }

    friend CycloNum operator+(CycloNum a, const CycloNum& b) { return a += b; }
    friend CycloNum operator-(CycloNum a, const CycloNum& b) { return a -= b; }
    friend CycloNum operator*(CycloNum a, const CycloNum& b) { return a *= b; }
    friend CycloNum operator*(CycloNum a, const mpq_class& r) { return a *= r; }
    friend CycloNum operator*(const mpq_class& r, CycloNum a) { return a *= r; }
    friend CycloNum operator/(const CycloNum& a, const CycloNum& b) { return a * b.inverse(); }

    friend bool operator==(const CycloNum& a, const CycloNum& b) {
        return a.field_ == b.field_ && a.c_ == b.c_;
    }
    friend bool operator!=(const CycloNum& a, const CycloNum& b) { return !(a == b); }

    // Extended Euclid against the (irreducible) modulus.
    CycloNum inverse() const {
        if (is_zero()) throw zero_inverse();
        const std::size_t phi = c_.size();
        std::vector<mpq_class> r0(field_->modulus().size());
        for (std::size_t k = 0; k < r0.size(); ++k) r0[k] = field_->modulus()[k];
        std::vector<mpq_class> r1 = c_;
        r1.resize(phi + 1);
        std::vector<mpq_class> t0(phi + 1), t1(phi + 1);
        t1[0] = 1;
        while (detail::qpoly_degree(r1) >= 0) {
            std::vector<mpq_class> rem = r0;
            std::vector<mpq_class> q = detail::qpoly_divmod(rem, r1);
            r0 = std::move(r1);
            r1 = std::move(rem);
            // t_{k+1} = t_{k-1} - q * t_k
            std::vector<mpq_class> tn(phi + 1);
            for (std::size_t i = 0; i < q.size(); ++i) {
                if (q[i] == 0) continue;
                for (std::size_t j = 0; j + i <= phi; ++j)
                    if (t1[j] != 0) tn[i + j] += q[i] * t1[j];
            }
            for (std::size_t j = 0; j <= phi; ++j) tn[j] = t0[j] - tn[j];
            t0 = std::move(t1);
            t1 = std::move(tn);
        }
        if (detail::qpoly_degree(r0) != 0)
            throw alarm("modulus is not coprime to a nonzero element");
        std::vector<mpq_class> out(phi);
        for (std::size_t k = 0; k < phi && k < t0.size(); ++k) out[k] = t0[k] / r0[0];
        return CycloNum(*field_, std::move(out));
    }

    // Complex conjugation: zeta -> zeta^{-1}.
    CycloNum conjugate() const {
        std::vector<mpq_class> out(c_.size());
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] == 0) continue;
            const std::vector<mpq_class>& z = field_->zeta_power(-static_cast<long long>(k));
            for (std::size_t j = 0; j < out.size(); ++j)
                if (z[j] != 0) out[j] += c_[k] * z[j];
        }
        return CycloNum(*field_, std::move(out));
    }

    CycloNum pow(long long e) const {
        if (e < 0) return inverse().pow(-e);
        CycloNum acc = one(*field_);
        CycloNum base = *this;
        while (e > 0) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    // Numeric embedding at zeta = exp(2*pi*i/n).
    std::complex<double> to_complex() const {
        std::complex<long double> acc{0.0L, 0.0L};
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] == 0) continue;
            acc += static_cast<long double>(c_[k].get_d()) * field_->basis_numeric(k);
        }
        return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
    }

    // Image in a larger cyclotomic field whose order is a multiple of ours
    // (zeta_n = zeta_{tn}^t).
    CycloNum embed(const CycloField& big) const {
        if (big.order() % field_->order() != 0)
            throw std::invalid_argument("embedding target order is not a multiple");
        const long long t = big.order() / field_->order();
        std::vector<mpq_class> out(big.degree());
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] == 0) continue;
            const std::vector<mpq_class>& z = big.zeta_power(static_cast<long long>(k) * t);
            for (std::size_t j = 0; j < out.size(); ++j)
                if (z[j] != 0) out[j] += c_[k] * z[j];
        }
        return CycloNum(big, std::move(out));
    }

private:
    void check_field(const CycloNum& o) const {
        if (field_ != o.field_) throw std::invalid_argument("mixed cyclotomic fields");
    }

    const CycloField* field_;
    std::vector<mpq_class> c_;
};

// zeta^k as an element (for the chain fields, zeta is exactly q resp. q^{1/2}).
inline CycloNum q_power(const CycloField& F, long long k) {
    return CycloNum(F, F.zeta_power(k));
}

// q^a + q^{-a}: the "2 cosh" combination entering transfer eigenvalues.
inline CycloNum ch_coeff(const CycloField& F, long long a) {
    return q_power(F, a) + q_power(F, -a);
}

// q^a - q^{-a}: the "2 sinh" combination entering Wronskian constants.
inline CycloNum sh_coeff(const CycloField& F, long long a) {
    return q_power(F, a) - q_power(F, -a);
}

// Max bit length over all numerators/denominators; a cheap growth metric.
inline std::size_t height_bits(const CycloNum& x) {
    std::size_t h = 0;
    for (const auto& q : x.coords()) {
        h = std::max(h, mpz_sizeinbase(q.get_num().get_mpz_t(), 2));
        h = std::max(h, mpz_sizeinbase(q.get_den().get_mpz_t(), 2));
    }
    return h;
}

}  // namespace qop
