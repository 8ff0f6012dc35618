#include "nev/wp.hpp"

#include <cmath>

namespace nev {

namespace {

// Lagrange (Gauss) reduction of a rank-2 basis.
void reduce_basis(cplx& b1, cplx& b2) {
    for (int iter = 0; iter < 64; ++iter) {
        if (std::abs(b1) > std::abs(b2)) std::swap(b1, b2);
        double mu = std::round((b2.real() * b1.real() + b2.imag() * b1.imag()) / std::norm(b1));
        if (mu == 0.0) return;
        b2 -= mu * b1;
    }
}

}  // namespace

WpEngine::WpEngine(cplx w1, cplx w2) : w1_(w1), w2_(w2) {
    if (w1 == cplx(0.0) || w2 == cplx(0.0))
        throw InvalidInput("lattice generators must be nonzero");
    cplx tau0 = w2 / w1;
    if (tau0.imag() == 0.0)
        throw InvalidInput("lattice generators are linearly dependent over R");
    if (tau0.imag() < 0.0) w2_ = -w2;  // same lattice, oriented

    b1_ = w1_;
    b2_ = w2_;
    reduce_basis(b1_, b2_);
    cplx tau = b2_ / b1_;
    if (tau.imag() < 0.0) { b2_ = -b2_; tau = -tau; }
    area_ = std::abs(b1_.real() * b2_.imag() - b1_.imag() * b2_.real());

    // Invariants from the Eisenstein q-series; |q| <= exp(-pi*sqrt(3)) after
    // reduction, so a couple dozen terms reach full precision.
    cplx q = std::exp(cplx(0.0, kTwoPi) * tau);
    cplx e4(1.0), e6(1.0);
    cplx qn(1.0);
    for (int n = 1; n <= 40; ++n) {
        qn *= q;
        if (std::abs(qn) < 1e-20) break;
        cplx d = qn / (1.0 - qn);
        double n3 = double(n) * n * n;
        e4 += 240.0 * n3 * d;
        e6 -= 504.0 * n3 * double(n) * n * d;
    }
    double pi4 = kPi * kPi * kPi * kPi;
    cplx b1p4 = b1_ * b1_ * b1_ * b1_;
    g2_ = (4.0 * pi4 / 3.0) * e4 / b1p4;
    g3_ = (8.0 * pi4 * kPi * kPi / 27.0) * e6 / (b1p4 * b1_ * b1_);

    // Laurent coefficients c_k of p(u) = 1/u^2 + sum_{k>=1} c_k u^{2k}.
    laurent_.assign(28, cplx(0.0));
    laurent_[0] = g2_ / 20.0;
    laurent_[1] = g3_ / 28.0;
    for (size_t k = 3; k <= laurent_.size(); ++k) {
        cplx s(0.0);
        for (size_t m = 1; m + 1 <= k - 1; ++m) s += laurent_[m - 1] * laurent_[k - 1 - m - 1];
        laurent_[k - 1] = 3.0 * s / ((2.0 * double(k) + 3.0) * (double(k) - 2.0));
    }
}

WpEngine::Reduced WpEngine::reduce(cplx z) const {
    double det = b1_.real() * b2_.imag() - b2_.real() * b1_.imag();
    double x = (z.real() * b2_.imag() - b2_.real() * z.imag()) / det;
    double y = (b1_.real() * z.imag() - z.real() * b1_.imag()) / det;
    double m0 = std::round(x), n0 = std::round(y);
    Reduced best{z, cplx(0.0)};
    double best_norm = -1.0;
    for (int dm = -1; dm <= 1; ++dm) {
        for (int dn = -1; dn <= 1; ++dn) {
            cplx pt = (m0 + dm) * b1_ + (n0 + dn) * b2_;
            double nn = std::norm(z - pt);
            if (best_norm < 0.0 || nn < best_norm) {
                best_norm = nn;
                best = Reduced{z - pt, pt};
            }
        }
    }
    return best;
}

WpEngine::Pair WpEngine::series_pair(cplx u) const {
    cplx u2 = u * u;
    cplx p(0.0), dp(0.0);
    cplx upow = u2;  // u^{2k}
    for (size_t k = 1; k <= laurent_.size(); ++k) {
        cplx term = laurent_[k - 1] * upow;
        p += term;
        dp += 2.0 * double(k) * term / u;
        upow *= u2;
    }
    p += 1.0 / u2;
    dp += -2.0 / (u2 * u);
    return {p, dp};
}

WpEngine::Pair WpEngine::duplicate(const Pair& w) const {
    cplx d2 = 6.0 * w.p * w.p - 0.5 * g2_;   // p''
    cplx d3 = 12.0 * w.p * w.dp;             // p'''
    cplx ratio = d2 / (2.0 * w.dp);
    cplx p2 = ratio * ratio - 2.0 * w.p;
    cplx dp2 = d2 * (w.dp * d3 - d2 * d2) / (4.0 * w.dp * w.dp * w.dp) - w.dp;
    return {p2, dp2};
}

WpEngine::Pair WpEngine::eval_pair(cplx z) const {
    cplx h = reduce(z).h;
    double target = 0.3 * std::abs(b1_);
    int k = 0;
    double ah = std::abs(h);
    while (ah > target && k < 64) { ah *= 0.5; ++k; }
    Pair w = series_pair(h / std::pow(2.0, k));
    for (int i = 0; i < k; ++i) w = duplicate(w);
    return w;
}

LogC WpEngine::eval_logc(cplx z, bool prime) const {
    cplx h = reduce(z).h;
    double ah = std::abs(h);
    if (ah == 0.0) return {std::numeric_limits<double>::infinity(), 0.0};
    if (ah <= 0.05 * std::abs(b1_)) {
        // factor the pole out: p = (1 + sum c_k h^{2k+2}) / h^2,
        //                      p' = -2 (1 - sum k c_k h^{2k+2}) / h^3
        cplx h2 = h * h;
        cplx s(0.0);
        cplx hp = h2 * h2;  // h^{2k+2} at k=1
        for (size_t k = 1; k <= laurent_.size(); ++k) {
            s += (prime ? -double(k) : 1.0) * laurent_[k - 1] * hp;
            hp *= h2;
        }
        cplx unit = 1.0 + s;
        double lm = std::log(std::abs(unit)) - (prime ? 3.0 : 2.0) * std::log(ah);
        double ph = std::arg(unit) - (prime ? 3.0 : 2.0) * std::arg(h);
        if (prime) { lm += std::log(2.0); ph += kPi; }
        return {lm, ph};
    }
    Pair w = eval_pair(z);
    return LogC::from(prime ? w.dp : w.p);
}

std::vector<cplx> WpEngine::points_in_disk(double radius) const {
    std::vector<cplx> pts;
    // rows of constant n are spaced area/|b1| apart
    long n_max = static_cast<long>(std::floor(radius * std::abs(b1_) / area_)) + 1;
    for (long n = -n_max; n <= n_max; ++n) {
        double reach = radius + double(std::abs(n)) * std::abs(b2_);
        long m_max = static_cast<long>(std::floor(reach / std::abs(b1_))) + 1;
        for (long m = -m_max; m <= m_max; ++m) {
            cplx pt = double(m) * b1_ + double(n) * b2_;
            if (std::abs(pt) <= radius) pts.push_back(pt);
        }
    }
    std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return pts;
}

Lattice::Lattice(cplx w1, cplx w2) : engine_(std::make_shared<WpEngine>(w1, w2)) {}

}  // namespace nev
