#pragma once

#include <memory>
#include <vector>

#include "nev/base.hpp"

namespace nev {

// Weierstrass p-function machinery for the lattice Z*w1 + Z*w2.
//
// Evaluation reduces the argument to the Voronoi cell of the origin, sums
// the Laurent series about 0 on a point shrunk by halving, and then walks
// back up with the duplication formula for the pair (p, p').  The series
// keeps the exact 1/h^2 term, so values stay accurate arbitrarily close to
// a pole.
class WpEngine {
  public:
    WpEngine(cplx w1, cplx w2);

    cplx w1() const { return w1_; }
    cplx w2() const { return w2_; }
    cplx g2() const { return g2_; }
    cplx g3() const { return g3_; }
    // shortest nonzero lattice vector length
    double min_norm() const { return std::abs(b1_); }
    double cell_area() const { return area_; }

    // Nearest lattice point to z and the offset h = z - point.
    struct Reduced {
        cplx h;
        cplx point;
    };
    Reduced reduce(cplx z) const;

    struct Pair {
        cplx p;
        cplx dp;
    };
    // Both values at once; |h| must be positive (caller guards the exact
    // lattice-point hit).
    Pair eval_pair(cplx z) const;

    // All lattice points with |point| <= radius, sorted by (Re, Im).
    std::vector<cplx> points_in_disk(double radius) const;

    // Log-magnitude form, exact through the pole factor; prime selects p'.
    LogC eval_logc(cplx z, bool prime) const;

  private:
    Pair series_pair(cplx u) const;
    Pair duplicate(const Pair& w) const;

    cplx w1_, w2_;    // as given (normalized so Im(w2/w1) > 0)
    cplx b1_, b2_;    // Lagrange-reduced basis, |b1| <= |b2|
    double area_ = 0.0;
    cplx g2_, g3_;
    std::vector<cplx> laurent_;  // c_k, k = 1.., p(u) = 1/u^2 + sum c_k u^{2k}
};

// Value-type handle; engines are immutable and shared between expression
// nodes that use the same lattice.
class Lattice {
  public:
    Lattice(cplx w1, cplx w2);

    const WpEngine& engine() const { return *engine_; }
    cplx w1() const { return engine_->w1(); }
    cplx w2() const { return engine_->w2(); }
    bool same_as(const Lattice& o) const { return engine_ == o.engine_; }

  private:
    std::shared_ptr<const WpEngine> engine_;
};

}  // namespace nev
