#include <cmath>

#include "nev/expr.hpp"

namespace nev {

namespace {

constexpr int kPrincipalDepth = 24;

// Laurent coefficients on indices [-kPrincipalDepth, k_hi] from M circle
// samples; fails (empty) if the circle runs through a singularity.
bool circle_coeffs(const Expr& f, cplx z0, double rho, int k_hi, std::vector<cplx>& out) {
    constexpr int M = 512;
    std::vector<cplx> fv(M);
    for (int j = 0; j < M; ++j) {
        double th = kTwoPi * j / M;
        EvalResult r = f.evaluate(z0 + rho * cplx(std::cos(th), std::sin(th)));
        if (!r.finite()) return false;
        fv[j] = r.value;
    }
    static const std::vector<cplx> twiddle = [] {
        std::vector<cplx> w(M);
        for (int j = 0; j < M; ++j)
            w[static_cast<size_t>(j)] = cplx(std::cos(kTwoPi * j / M), -std::sin(kTwoPi * j / M));
        return w;
    }();
    out.assign(static_cast<size_t>(kPrincipalDepth + k_hi + 1), cplx(0.0));
    for (int m = -kPrincipalDepth; m <= k_hi; ++m) {
        cplx s(0.0);
        for (int j = 0; j < M; ++j)
            s += fv[j] * twiddle[static_cast<size_t>((long(j) * ((m % M + M) % M)) % M)];
        out[static_cast<size_t>(m + kPrincipalDepth)] = s / (double(M) * std::pow(rho, m));
    }
    return true;
}

}  // namespace

LocalExpansion local_expansion(const Expr& f, cplx z0, int analytic_terms, double sep_hint) {
    if (analytic_terms < 1) throw InvalidInput("expansion needs at least one analytic term");
    int k_hi = std::min(analytic_terms - 1, 64);

    double rho = sep_hint > 0.0 ? 0.45 * sep_hint : 0.4;
    std::vector<cplx> big, small;
    for (; rho >= 1e-6; rho *= 0.55) {
        if (!circle_coeffs(f, z0, rho, k_hi, big)) continue;
        if (!circle_coeffs(f, z0, 0.5 * rho, k_hi, small)) continue;
        double scale = 0.0;
        for (const auto& c : big) scale = std::max(scale, std::abs(c));
        bool ok = true;
        for (size_t i = 0; i < big.size() && ok; ++i) {
            double tol = 1e-7 * (1.0 + std::abs(big[i])) + 1e-10 * scale;
            if (std::abs(big[i] - small[i]) > tol) ok = false;
        }
        if (!ok) continue;

        LocalExpansion ex;
        ex.center = z0;
        ex.truncation_order = k_hi;
        double floor = 1e-10 * (1.0 + scale);
        for (int m = -kPrincipalDepth; m < 0; ++m) {
            cplx c = big[static_cast<size_t>(m + kPrincipalDepth)];
            if (std::abs(c) > floor) ex.principal.emplace_back(m, c);
        }
        ex.analytic.assign(big.begin() + kPrincipalDepth, big.end());

        // symbolic cross-check of the first coefficients at regular points
        if (ex.principal.empty()) {
            EvalResult v0 = f.evaluate(z0);
            if (v0.finite() &&
                std::abs(v0.value - ex.analytic[0]) > 1e-7 * (1.0 + std::abs(v0.value)))
                throw ExpansionError("expansion disagrees with direct evaluation");
            if (k_hi >= 1) {
                EvalResult v1 = f.differentiate().evaluate(z0);
                if (v1.finite() &&
                    std::abs(v1.value - ex.analytic[1]) > 1e-7 * (1.0 + std::abs(v1.value)))
                    throw ExpansionError("expansion disagrees with the derivative");
            }
        }
        return ex;
    }
    throw ExpansionError("could not separate the point from nearby singularities");
}

}  // namespace nev
