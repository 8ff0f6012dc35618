#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nev/base.hpp"
#include "nev/wp.hpp"

namespace nev {

enum class EvalStatus { finite, pole_like, near_singular };

struct EvalResult {
    EvalStatus status;
    cplx value;  // meaningful only when finite

    bool finite() const { return status == EvalStatus::finite; }
};

enum class NodeKind {
    constant,
    variable,
    add,
    mul,
    divide,
    int_pow,
    exp_fn,
    sin_fn,
    cos_fn,
    wp_fn,
    wp_prime_fn,
    shift
};

// Immutable expression tree over one complex variable.  Construction folds
// constants and normalizes nested shifts; no other rewriting happens, all
// equality questions downstream are numeric.
class Expr {
  public:
    Expr() = default;

    static Expr constant(cplx v);
    static Expr variable();
    static Expr add(Expr a, Expr b);
    static Expr sub(Expr a, Expr b);
    static Expr mul(Expr a, Expr b);
    static Expr div(Expr a, Expr b);  // rejects denominators that vanish at 8 probe points
    static Expr int_pow(Expr a, int k);
    static Expr exp(Expr a);
    static Expr sin(Expr a);
    static Expr cos(Expr a);
    static Expr wp(const Lattice& lat);
    static Expr wp_prime(const Lattice& lat);
    static Expr shift(Expr a, cplx offset);

    bool valid() const { return node_ != nullptr; }

    EvalResult evaluate(cplx z) const;
    LogC evaluate_log(cplx z) const;
    Expr differentiate() const;

    // introspection (used by the structural singularity pass and printers)
    NodeKind kind() const;
    const Expr& child_a() const;
    const Expr& child_b() const;
    cplx constant_value() const;
    int exponent() const;
    cplx shift_offset() const;
    const Lattice& lattice() const;

    std::string to_string() const;

    // stable identity for per-function caches
    const void* id() const { return node_.get(); }

    friend Expr operator+(const Expr& a, const Expr& b) { return add(a, b); }
    friend Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }
    friend Expr operator*(const Expr& a, const Expr& b) { return mul(a, b); }
    friend Expr operator/(const Expr& a, const Expr& b) { return div(a, b); }
    friend Expr operator-(const Expr& a) { return mul(constant(cplx(-1.0)), a); }

  private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr make(Node n);
    std::shared_ptr<const Node> node_;
};

// n-fold forward difference with step c.  c = 0 is invalid for n >= 1.
Expr difference(const Expr& f, cplx c, int n = 1);

// Laurent data about a point: principal part plus leading Taylor slice.
struct LocalExpansion {
    cplx center;
    std::vector<std::pair<int, cplx>> principal;  // strictly negative indices, ascending
    std::vector<cplx> analytic;                   // coefficients for indices 0,1,2,...
    int truncation_order = 0;

    int pole_order() const { return principal.empty() ? 0 : -principal.front().first; }
    cplx coeff(int idx) const;
    // leading nonzero coefficient and its index (zero/pole order at center)
    std::pair<int, cplx> leading(double noise_floor = 1e-13) const;
};

struct ExpansionError : NumericError {
    using NumericError::NumericError;
};

// Coefficients around z0 by circle sampling, self-validated by recomputing
// on a half-radius circle.  sep_hint, when positive, bounds the distance to
// the nearest other singularity.
LocalExpansion local_expansion(const Expr& f, cplx z0, int analytic_terms, double sep_hint = 0.0);

// Probe-based identically-zero test of num against the magnitude scale of ref.
bool relatively_null(const Expr& num, const Expr& ref, double tol = 1e-10);

}  // namespace nev
