#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "qop/errors.hpp"
#include "qop/poly.hpp"
#include "qop/qsolver.hpp"

namespace qop {

// Numeric Bethe roots of a Q polynomial: z_j in multiplicative variables and
// u_j = log(z_j)/2 in the additive strip Im(u) in (-pi/2, pi/2].
struct BetheRoots {
    ChainParams params;
    std::vector<std::complex<double>> z;
    std::vector<std::complex<double>> u;
    double backward_error;  // max_j |Q(z_j)| / sum_k |c_k| |z_j|^k
};

namespace detail {

inline std::complex<double> horner(const std::vector<std::complex<double>>& c,
                                   std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    return acc;
}

inline double backward_error_at(const std::vector<std::complex<double>>& c,
                                std::complex<double> z) {
    double scale = 0.0, zpow = 1.0;
    const double az = std::abs(z);
    for (const auto& ck : c) {
        scale += std::abs(ck) * zpow;
        zpow *= az;
    }
    return std::abs(horner(c, z)) / scale;
}

}  // namespace detail

// Simultaneous Aberth-Ehrlich iteration from a seeded, slightly perturbed
// unit circle (every root of a valid Q lies on |z| = 1, so the circle is an
// excellent prior).  Converged roots must satisfy the relative backward-error
// contract < 1e-10 or the whole solve is rejected.
inline BetheRoots find_roots(const QPolynomial& Q, std::uint64_t seed = 1) {
    const std::vector<std::complex<double>> c = numeric_coeffs(Q.poly);
    const std::size_t n = c.size() - 1;  // degree = p >= 1 for every valid sector

    std::vector<std::complex<double>> d(n);  // derivative coefficients
    for (std::size_t k = 1; k <= n; ++k) d[k - 1] = c[k] * static_cast<double>(k);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    std::vector<std::complex<double>> x(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double theta =
            2.0 * M_PI * (static_cast<double>(j) + 0.5) / static_cast<double>(n) +
            jitter(rng);
        const double radius = 1.0 + jitter(rng);
        x[j] = std::polar(radius, theta);
    }

    const double target = 5e-14;
    double worst = 1.0;
    for (int iter = 0; iter < 600; ++iter) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::complex<double> pv = detail::horner(c, x[j]);
            const std::complex<double> dv = detail::horner(d, x[j]);
            if (pv == 0.0) continue;
            const std::complex<double> newton = pv / dv;
            std::complex<double> repulsion = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) repulsion += 1.0 / (x[j] - x[k]);
            x[j] -= newton / (1.0 - newton * repulsion);
        }
        worst = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            worst = std::max(worst, detail::backward_error_at(c, x[j]));
        if (worst < target) break;
    }
    if (worst > 1e-10) throw non_convergence(worst);

    // Conjugate pairs share a real part exactly; the computed values differ by
    // last-bit noise that depends on the starting guesses, so an exact
    // comparison would make the ordering seed-dependent.  Snap real parts that
    // agree to 1e-9 (far above solver noise, far below root separation) before
    // falling back to the imaginary part.
    std::sort(x.begin(), x.end(), [](const auto& a, const auto& b) {
        if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    BetheRoots out{Q.params, std::move(x), {}, worst};
    out.u.reserve(n);
    // Principal log keeps Im(u) in (-pi/2, pi/2] automatically.
    for (const auto& z : out.z) out.u.push_back(0.5 * std::log(z));
    return out;
}

struct BaeReport {
    std::vector<double> residuals;  // |LHS/RHS - 1| per root
    double max_residual;
};

// Check the additive-variable Bethe equations
//   (sh(u_j + s eta) / sh(u_j - s eta))^M = prod_{k != j} sh(u_j-u_k+eta)/sh(u_j-u_k-eta)
// with eta = -i(L+1)pi/(L+2) and s = L/2.  Denominators within 1e-8 of a zero
// of sh abort with the offending root index: a ratio against a near-pole
// factor certifies nothing.
inline BaeReport bae_residual(const BetheRoots& roots) {
    using cd = std::complex<double>;
    const int L = roots.params.L;
    const int M = roots.params.sites();
    const cd eta(0.0, -static_cast<double>(L + 1) * M_PI / static_cast<double>(L + 2));
    const cd s_eta = 0.5 * static_cast<double>(L) * eta;
    const std::size_t n = roots.u.size();

    BaeReport report{std::vector<double>(n), 0.0};
    for (std::size_t j = 0; j < n; ++j) {
        const cd uj = roots.u[j];
        const cd den_src = std::sinh(uj - s_eta);
        if (std::abs(den_src) < 1e-8) throw pole_proximity(j);
        cd lhs = std::pow(std::sinh(uj + s_eta) / den_src, M);
        cd rhs = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == j) continue;
            const cd den_pair = std::sinh(uj - roots.u[k] - eta);
            if (std::abs(den_pair) < 1e-8) throw pole_proximity(j);
            rhs *= std::sinh(uj - roots.u[k] + eta) / den_pair;
        }
        report.residuals[j] = std::abs(lhs / rhs - 1.0);
        report.max_residual = std::max(report.max_residual, report.residuals[j]);
    }
    return report;
}

// Exact Lagrange power sum: sum_k x_k^ell / prod_{j != k} (x_k - x_j).
// Vanishes for ell <= K-2 and equals 1 at ell = K-1 (divided-difference
// identity); the tail values feed interpolation arguments elsewhere.
inline mpq_class interpolation_sum(const std::vector<mpq_class>& nodes, unsigned ell) {
    const std::size_t K = nodes.size();
    if (K == 0) throw std::invalid_argument("interpolation_sum needs at least one node");
    mpq_class total = 0;
    for (std::size_t k = 0; k < K; ++k) {
        mpq_class denom = 1;
        for (std::size_t j = 0; j < K; ++j) {
            if (j == k) continue;
            mpq_class diff = nodes[k] - nodes[j];
            if (diff == 0) throw duplicate_nodes();
            denom *= diff;
        }
        mpq_class power = 1;
        for (unsigned i = 0; i < ell; ++i) power *= nodes[k];
        total += power / denom;
    }
    return total;
}

}  // namespace qop
