#pragma once

#include <complex>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qop/errors.hpp"
#include "qop/field.hpp"

namespace qop {

// Which formal variable a polynomial lives in.  W is the square-root
// variable (w^2 = z) used by the Wronskian family, where half-integer
// shifts of z become integer scalings of w.
enum class Var { Z, W };

inline std::string_view var_name(Var v) { return v == Var::Z ? "z" : "w"; }

// Multiplicative argument shift: the substitution var -> zeta^power * var,
// where zeta is the canonical root of the coefficient field.  For Z
// polynomials over the order-2(L+2) field zeta = q, so power k realizes
// z -> q^k z; for W polynomials over the doubled field zeta = q^{1/2}.
struct LaurentShift {
    int power = 0;
    constexpr LaurentShift then(LaurentShift o) const { return {power + o.power}; }
};

// Dense univariate polynomial with CycloNum coefficients, ascending order,
// trimmed (zero polynomial has no stored coefficients).
class FieldPoly {
public:
    FieldPoly(const CycloField& F, Var v) : field_(&F), var_(v) {}

    static FieldPoly zero(const CycloField& F, Var v) { return FieldPoly(F, v); }

    static FieldPoly from_coeffs(const CycloField& F, Var v, std::vector<CycloNum> coeffs) {
        FieldPoly p(F, v);
        for (const auto& c : coeffs)
            if (&c.field() != &F)
                throw std::invalid_argument("coefficient from a different field");
        p.c_ = std::move(coeffs);
        p.trim();
        return p;
    }

    static FieldPoly constant(const CycloField& F, Var v, CycloNum c) {
        FieldPoly p(F, v);
        p.c_.push_back(std::move(c));
        p.trim();
        return p;
    }

    static FieldPoly monomial(const CycloField& F, Var v, std::size_t k, CycloNum c) {
        FieldPoly p(F, v);
        if (!c.is_zero()) {
            p.c_.assign(k, CycloNum::zero(F));
            p.c_.push_back(std::move(c));
        }
        return p;
    }

    const CycloField& field() const { return *field_; }
    Var var() const { return var_; }
    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const std::vector<CycloNum>& coeffs() const { return c_; }

    CycloNum coeff_at(std::size_t k) const {
        return k < c_.size() ? c_[k] : CycloNum::zero(*field_);
    }
    const CycloNum& lead() const {
        if (c_.empty()) throw alarm("leading coefficient of the zero polynomial");
        return c_.back();
    }
    bool is_monic() const { return !c_.empty() && c_.back() == CycloNum::one(*field_); }

    FieldPoly operator-() const {
        FieldPoly out(*field_, var_);
        out.c_.reserve(c_.size());
        for (const auto& c : c_) out.c_.push_back(-c);
        return out;
    }

    FieldPoly& operator+=(const FieldPoly& o) {
        check_compat(o);
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), CycloNum::zero(*field_));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        trim();
        return *this;
    }
    FieldPoly& operator-=(const FieldPoly& o) {
        check_compat(o);
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), CycloNum::zero(*field_));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
        trim();
        return *this;
    }
    friend FieldPoly operator+(FieldPoly a, const FieldPoly& b) { return a += b; }
    friend FieldPoly operator-(FieldPoly a, const FieldPoly& b) { return a -= b; }

    FieldPoly& operator*=(const CycloNum& s) {
        if (s.is_zero()) {
            c_.clear();
            return *this;
        }
        for (auto& c : c_) c *= s;
        trim();
        return *this;
    }
    friend FieldPoly operator*(FieldPoly a, const CycloNum& s) { return a *= s; }
    friend FieldPoly operator*(const CycloNum& s, FieldPoly a) { return a *= s; }

    // Product via common-denominator integerization: clears both factors to
    // integer coordinate matrices, convolves in mpz, reduces the basis
    // overflow once per output coefficient, then restores the denominator.
    // Far cheaper than rational-by-rational schoolbook on large operands.
    friend FieldPoly operator*(const FieldPoly& A, const FieldPoly& B) {
        A.check_compat(B);
        FieldPoly out(*A.field_, A.var_);
        if (A.is_zero() || B.is_zero()) return out;
        const CycloField& F = *A.field_;
        const std::size_t phi = F.degree();
        const std::size_t na = A.c_.size(), nb = B.c_.size();
        const std::size_t width = 2 * phi - 1;

        mpz_class da = 1, db = 1;
        for (const auto& c : A.c_)
            for (const auto& q : c.coords())
                if (q != 0) mpz_lcm(da.get_mpz_t(), da.get_mpz_t(), q.get_den().get_mpz_t());
        for (const auto& c : B.c_)
            for (const auto& q : c.coords())
                if (q != 0) mpz_lcm(db.get_mpz_t(), db.get_mpz_t(), q.get_den().get_mpz_t());

        std::vector<mpz_class> Ia(na * phi), Ib(nb * phi);
        std::vector<std::vector<unsigned>> sup_a(na), sup_b(nb);
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t k = 0; k < phi; ++k) {
                const mpq_class& q = A.c_[i].coords()[k];
                if (q == 0) continue;
                Ia[i * phi + k] = q.get_num() * (da / q.get_den());
                sup_a[i].push_back(static_cast<unsigned>(k));
            }
        for (std::size_t j = 0; j < nb; ++j)
            for (std::size_t k = 0; k < phi; ++k) {
                const mpq_class& q = B.c_[j].coords()[k];
                if (q == 0) continue;
                Ib[j * phi + k] = q.get_num() * (db / q.get_den());
                sup_b[j].push_back(static_cast<unsigned>(k));
            }

        std::vector<mpz_class> acc((na + nb - 1) * width);
        for (std::size_t i = 0; i < na; ++i) {
            if (sup_a[i].empty()) continue;
            for (std::size_t j = 0; j < nb; ++j) {
                if (sup_b[j].empty()) continue;
                mpz_class* row = &acc[(i + j) * width];
                for (unsigned k1 : sup_a[i]) {
                    const mpz_class& x = Ia[i * phi + k1];
                    for (unsigned k2 : sup_b[j])
                        mpz_addmul(row[k1 + k2].get_mpz_t(), x.get_mpz_t(),
                                   Ib[j * phi + k2].get_mpz_t());
                }
            }
        }

        const mpz_class den = da * db;
        out.c_.reserve(na + nb - 1);
        for (std::size_t r = 0; r < na + nb - 1; ++r) {
            mpz_class* row = &acc[r * width];
            for (std::size_t t = width; t-- > phi;) {
                if (row[t] == 0) continue;
                const std::vector<mpz_class>& red = F.power_reduction(t);
                for (std::size_t k = 0; k < phi; ++k)
                    if (red[k] != 0)
                        mpz_addmul(row[k].get_mpz_t(), red[k].get_mpz_t(), row[t].get_mpz_t());
            }
            std::vector<mpq_class> coords(phi);
            for (std::size_t k = 0; k < phi; ++k) {
                if (row[k] == 0) continue;
                coords[k] = mpq_class(row[k], den);
                coords[k].canonicalize();
            }
            out.c_.emplace_back(F, std::move(coords));
        }
        out.trim();
        return out;
    }

    FieldPoly pow(unsigned long e) const {
        FieldPoly acc = constant(*field_, var_, CycloNum::one(*field_));
        FieldPoly base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            if (e >>= 1) base = base * base;
        }
        return acc;
    }

    // var -> zeta^k * var: multiplies the j-th coefficient by zeta^{k j}.
    FieldPoly scale_arg(long long k) const {
        FieldPoly out(*field_, var_);
        out.c_.reserve(c_.size());
        for (std::size_t j = 0; j < c_.size(); ++j)
            out.c_.push_back(c_[j] * q_power(*field_, k * static_cast<long long>(j)));
        out.trim();  // scaling by a unit never changes the degree, but stay canonical
        return out;
    }
    FieldPoly scale_arg(LaurentShift s) const { return scale_arg(static_cast<long long>(s.power)); }

    // Multiply by var^k.
    FieldPoly shifted_up(std::size_t k) const {
        if (is_zero() || k == 0) return *this;
        FieldPoly out(*field_, var_);
        out.c_.assign(k, CycloNum::zero(*field_));
        out.c_.insert(out.c_.end(), c_.begin(), c_.end());
        return out;
    }

    CycloNum evaluate(const CycloNum& x) const {
        CycloNum acc = CycloNum::zero(*field_);
        for (std::size_t k = c_.size(); k-- > 0;) {
            acc *= x;
            acc += c_[k];
        }
        return acc;
    }
    CycloNum evaluate(const mpq_class& x) const {
        return evaluate(CycloNum::rational(*field_, x));
    }

    friend std::pair<FieldPoly, FieldPoly> divmod(const FieldPoly& A, const FieldPoly& B) {
        A.check_compat(B);
        if (B.is_zero()) throw std::invalid_argument("polynomial division by zero");
        FieldPoly quot(*A.field_, A.var_);
        if (A.degree() < B.degree()) return {std::move(quot), A};
        const CycloNum inv_lead = B.lead().inverse();
        const std::size_t db = static_cast<std::size_t>(B.degree());
        std::vector<CycloNum> rem = A.c_;
        quot.c_.assign(A.c_.size() - db, CycloNum::zero(*A.field_));
        for (std::size_t k = quot.c_.size(); k-- > 0;) {
            CycloNum c = rem[k + db] * inv_lead;
            if (c.is_zero()) continue;
            for (std::size_t j = 0; j < db; ++j) rem[k + j] -= c * B.c_[j];
            rem[k + db] = CycloNum::zero(*A.field_);
            quot.c_[k] = std::move(c);
        }
        rem.erase(rem.begin() + static_cast<std::ptrdiff_t>(db), rem.end());
        FieldPoly r = from_coeffs(*A.field_, A.var_, std::move(rem));
        quot.trim();
        return {std::move(quot), std::move(r)};
    }

    // Division that must be exact; a surviving remainder is an alarm, not a
    // rounding matter.
    friend FieldPoly exact_div(const FieldPoly& A, const FieldPoly& B) {
        auto [q, r] = divmod(A, B);
        if (!r.is_zero())
            throw non_zero_remainder("remainder degree " + std::to_string(r.degree()));
        return std::move(q);
    }

    friend bool operator==(const FieldPoly& a, const FieldPoly& b) {
        return a.field_ == b.field_ && a.var_ == b.var_ && a.c_ == b.c_;
    }
    friend bool operator!=(const FieldPoly& a, const FieldPoly& b) { return !(a == b); }

    // Reinterpret a polynomial in z as one in w (w^2 = z) over the doubled
    // field, embedding every coefficient.
    FieldPoly to_w(const CycloField& big) const {
        if (var_ != Var::Z) throw std::invalid_argument("to_w expects a Z polynomial");
        if (big.order() != 2 * field_->order())
            throw std::invalid_argument("to_w target must double the field order");
        FieldPoly out(big, Var::W);
        if (is_zero()) return out;
        out.c_.assign(2 * c_.size() - 1, CycloNum::zero(big));
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (!c_[k].is_zero()) out.c_[2 * k] = c_[k].embed(big);
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    void check_compat(const FieldPoly& o) const {
        if (field_ != o.field_) throw std::invalid_argument("mixed coefficient fields");
        if (var_ != o.var_) throw std::invalid_argument("mixed polynomial variables");
    }

    const CycloField* field_;
    Var var_;
    std::vector<CycloNum> c_;
};

// a*var + b convenience.
inline FieldPoly linear_poly(const CycloField& F, Var v, CycloNum b, CycloNum a) {
    return FieldPoly::from_coeffs(F, v, {std::move(b), std::move(a)});
}

struct BezoutTriple {
    FieldPoly g;  // monic gcd
    FieldPoly s;  // s*A + t*B = g
    FieldPoly t;
};

// Extended Euclid with the Bezout pair put in canonical minimal-degree form:
// s is reduced modulo B/g (and t recomputed exactly), so when deg B > deg g
// the bounds deg s < deg B - deg g and deg t < deg A - deg g hold.
inline BezoutTriple extended_gcd(const FieldPoly& A, const FieldPoly& B) {
    if (A.is_zero() && B.is_zero())
        throw std::invalid_argument("gcd of two zero polynomials");
    const CycloField& F = A.field();
    const Var v = A.var();
    FieldPoly r0 = A, r1 = B;
    FieldPoly s0 = FieldPoly::constant(F, v, CycloNum::one(F));
    FieldPoly s1 = FieldPoly::zero(F, v);
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        FieldPoly sn = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(sn);
    }
    const CycloNum inv_lead = r0.lead().inverse();
    FieldPoly g = r0 * inv_lead;
    FieldPoly s = s0 * inv_lead;
    FieldPoly t = FieldPoly::zero(F, v);
    if (!B.is_zero()) {
        FieldPoly cofactor = exact_div(B, g);
        if (cofactor.degree() > 0) s = divmod(s, cofactor).second;
        t = exact_div(g - s * A, B);
    }
    return {std::move(g), std::move(s), std::move(t)};
}

inline std::size_t height_bits(const FieldPoly& P) {
    std::size_t h = 0;
    for (const auto& c : P.coeffs()) h = std::max(h, height_bits(c));
    return h;
}

// Coefficients as complex doubles (ascending), for numeric root finding.
inline std::vector<std::complex<double>> numeric_coeffs(const FieldPoly& P) {
    std::vector<std::complex<double>> out;
    out.reserve(P.coeffs().size());
    for (const auto& c : P.coeffs()) out.push_back(c.to_complex());
    return out;
}

// ---- LaTeX emission ------------------------------------------------------

inline std::string latex(const mpq_class& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    std::string sign = r < 0 ? "-" : "";
    mpq_class a = abs(r);
    return sign + "\\frac{" + a.get_num().get_str() + "}{" + a.get_den().get_str() + "}";
}

inline std::string latex(const CycloNum& x) {
    if (x.is_rational()) return latex(x.rational_value());
    std::ostringstream out;
    bool first = true;
    for (std::size_t k = 0; k < x.coords().size(); ++k) {
        const mpq_class& c = x.coords()[k];
        if (c == 0) continue;
        mpq_class a = abs(c);
        if (first)
            out << (c < 0 ? "-" : "");
        else
            out << (c < 0 ? " - " : " + ");
        first = false;
        const bool unit = (a == 1 && k > 0);
        if (!unit) out << latex(a);
        if (k == 1) out << "\\zeta";
        if (k > 1) out << "\\zeta^{" << k << "}";
    }
    return "\\left(" + out.str() + "\\right)";
}

inline std::string latex(const FieldPoly& P) {
    if (P.is_zero()) return "0";
    std::ostringstream out;
    const std::string var(var_name(P.var()));
    bool first = true;
    for (std::size_t k = P.coeffs().size(); k-- > 0;) {
        const CycloNum& c = P.coeffs()[k];
        if (c.is_zero()) continue;
        std::string body;
        bool negative = false;
        if (c.is_rational()) {
            mpq_class r = c.rational_value();
            negative = r < 0;
            mpq_class a = abs(r);
            if (a != 1 || k == 0) body = latex(a);
        } else {
            body = latex(c);
        }
        if (first)
            out << (negative ? "-" : "");
        else
            out << (negative ? " - " : " + ");
        first = false;
        out << body;
        if (k >= 1 && !body.empty()) out << " ";
        if (k == 1) out << var;
        if (k > 1) out << var << "^{" << k << "}";
    }
    return out.str();
}

}  // namespace qop
