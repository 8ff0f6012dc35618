#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nev {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Magnitude above this is treated as a pole hit.
inline constexpr double kOverflowGuard = 1e300;
// Distance below this from a known singularity is "too close to trust".
inline constexpr double kNearSingularGuard = 1e-9;

inline double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

// Complex value carried as exp(lm) * exp(i*ph).  lm = -inf encodes zero,
// lm = +inf a pole hit.  Keeps log|f| computable where |f| overflows.
struct LogC {
    double lm;
    double ph;

    static LogC zero() { return {-std::numeric_limits<double>::infinity(), 0.0}; }
    static LogC from(cplx v) {
        if (v == cplx(0.0)) return zero();
        return {std::log(std::abs(v)), std::arg(v)};
    }
    bool is_zero() const { return lm == -std::numeric_limits<double>::infinity(); }
    bool is_pole() const { return lm == std::numeric_limits<double>::infinity(); }
    double log_plus_abs() const { return lm > 0.0 ? lm : 0.0; }
    cplx value() const {
        if (is_zero()) return cplx(0.0);
        double m = std::exp(lm);
        return cplx(m * std::cos(ph), m * std::sin(ph));
    }
};

inline LogC logc_mul(LogC a, LogC b) {
    if (a.is_zero() || b.is_zero()) return LogC::zero();
    return {a.lm + b.lm, a.ph + b.ph};
}
inline LogC logc_div(LogC a, LogC b) {
    if (a.is_zero()) return LogC::zero();
    if (b.is_zero()) return {std::numeric_limits<double>::infinity(), 0.0};
    return {a.lm - b.lm, a.ph - b.ph};
}
inline LogC logc_pow(LogC a, int k) {
    if (a.is_zero()) return k > 0 ? LogC::zero() : LogC{std::numeric_limits<double>::infinity(), 0.0};
    return {a.lm * k, a.ph * k};
}
inline LogC logc_add(LogC a, LogC b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_pole() || b.is_pole()) return {std::numeric_limits<double>::infinity(), 0.0};
    if (a.lm < b.lm) std::swap(a, b);
    double d = b.lm - a.lm;  // <= 0
    if (d < -745.0) return a;
    cplx s = 1.0 + std::exp(d) * cplx(std::cos(b.ph - a.ph), std::sin(b.ph - a.ph));
    if (s == cplx(0.0)) return LogC::zero();
    return {a.lm + std::log(std::abs(s)), a.ph + std::arg(s)};
}

inline double sqr(double x) { return x * x; }

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};
struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// Geometric radius grid r0, r0*ratio, ..., r0*ratio^steps.
struct GridSpec {
    double r0 = 2.0;
    double ratio = 1.15;
    int steps = 40;

    std::vector<double> radii() const {
        if (!(r0 > 0.0) || !(ratio > 1.0) || steps < 1)
            throw InvalidInput("grid spec requires r0>0, ratio>1, steps>=1");
        std::vector<double> rs(static_cast<size_t>(steps) + 1);
        double r = r0;
        for (auto& x : rs) { x = r; r *= ratio; }
        return rs;
    }
    double top() const { return r0 * std::pow(ratio, steps); }
};

// splitmix64; used for probe points and sample draws so runs are
// reproducible independent of the standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ull) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // uniform in [0,1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * next_double(); }
    // uniform over a disk of given radius (rejection-free via sqrt law)
    cplx disk_point(double radius) {
        double rho = radius * std::sqrt(next_double());
        double th = kTwoPi * next_double();
        return cplx(rho * std::cos(th), rho * std::sin(th));
    }
    // annulus point, uniform in angle and radius
    cplx annulus_point(double r_lo, double r_hi) {
        double rho = uniform(r_lo, r_hi);
        double th = kTwoPi * next_double();
        return cplx(rho * std::cos(th), rho * std::sin(th));
    }

  private:
    std::uint64_t state_;
};

enum class Exec { serial, parallel };

inline int hardware_workers() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_workers(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

// Index-space parallel loop. Bodies write to disjoint slots, so results do
// not depend on the thread count or schedule.
template <class F>
void par_for(Exec ex, std::int64_t n, F&& body) {
    if (ex == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < n; ++i) body(static_cast<size_t>(i));
        return;
#endif
    }
    for (std::int64_t i = 0; i < n; ++i) body(static_cast<size_t>(i));
}

// Fixed-order compensated sum; summation order never depends on threading.
inline double kahan_sum(const std::vector<double>& xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

inline double percentile_sorted(std::vector<double> v, double p) {
    if (v.empty()) throw InvalidInput("percentile of empty set");
    std::sort(v.begin(), v.end());
    double idx = p * (static_cast<double>(v.size()) - 1.0);
    size_t lo = static_cast<size_t>(std::floor(idx));
    size_t hi = static_cast<size_t>(std::ceil(idx));
    double w = idx - static_cast<double>(lo);
    return v[lo] * (1.0 - w) + v[hi] * w;
}

// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidInput("slope needs >=2 aligned points");
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += sqr(x[i] - mx);
    }
    if (sxx == 0.0) throw InvalidInput("slope of degenerate abscissa");
    return sxy / sxx;
}

}  // namespace nev
