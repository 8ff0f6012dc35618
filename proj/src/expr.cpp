#include "nev/expr.hpp"

#include <cmath>
#include <sstream>

namespace nev {

struct Expr::Node {
    NodeKind kind;
    cplx value{};       // constant
    Expr a, b;          // children
    int exponent = 0;   // int_pow
    cplx offset{};      // shift
    std::optional<Lattice> lat;  // wp nodes
};

Expr Expr::make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

namespace {

bool is_const(const Expr& e) { return e.valid() && e.kind() == NodeKind::constant; }
bool is_const(const Expr& e, cplx v) { return is_const(e) && e.constant_value() == v; }

}  // namespace

Expr Expr::constant(cplx v) {
    Node n;
    n.kind = NodeKind::constant;
    n.value = v;
    return make(std::move(n));
}

Expr Expr::variable() {
    Node n;
    n.kind = NodeKind::variable;
    return make(std::move(n));
}

Expr Expr::add(Expr a, Expr b) {
    if (is_const(a) && is_const(b)) return constant(a.constant_value() + b.constant_value());
    if (is_const(a, cplx(0.0))) return b;
    if (is_const(b, cplx(0.0))) return a;
    Node n;
    n.kind = NodeKind::add;
    n.a = std::move(a);
    n.b = std::move(b);
    return make(std::move(n));
}

Expr Expr::sub(Expr a, Expr b) { return add(std::move(a), mul(constant(cplx(-1.0)), std::move(b))); }

Expr Expr::mul(Expr a, Expr b) {
    if (is_const(a) && is_const(b)) return constant(a.constant_value() * b.constant_value());
    if (is_const(a, cplx(0.0)) || is_const(b, cplx(0.0))) return constant(cplx(0.0));
    if (is_const(a, cplx(1.0))) return b;
    if (is_const(b, cplx(1.0))) return a;
    Node n;
    n.kind = NodeKind::mul;
    n.a = std::move(a);
    n.b = std::move(b);
    return make(std::move(n));
}

Expr Expr::div(Expr a, Expr b) {
    if (is_const(b)) {
        if (b.constant_value() == cplx(0.0)) throw InvalidInput("division by the zero constant");
        if (is_const(a)) return constant(a.constant_value() / b.constant_value());
        return mul(constant(1.0 / b.constant_value()), std::move(a));
    }
    // reject denominators that are zero at all 8 probe points
    Rng rng(0xd1b54a32d192ed03ull);
    bool all_zero = true;
    for (int i = 0; i < 8 && all_zero; ++i) {
        EvalResult r = b.evaluate(rng.annulus_point(0.5, 2.5));
        if (!r.finite() || std::abs(r.value) > 1e-12) all_zero = false;
    }
    if (all_zero) throw InvalidInput("denominator is numerically the zero function");
    Node n;
    n.kind = NodeKind::divide;
    n.a = std::move(a);
    n.b = std::move(b);
    return make(std::move(n));
}

Expr Expr::int_pow(Expr a, int k) {
    if (k == 0) throw InvalidInput("int_pow exponent must be a nonzero integer");
    if (k == 1) return a;
    if (is_const(a)) {
        cplx v = a.constant_value();
        if (v == cplx(0.0) && k < 0) throw InvalidInput("negative power of the zero constant");
        cplx r(1.0);
        cplx base = k > 0 ? v : 1.0 / v;
        for (int i = 0; i < std::abs(k); ++i) r *= base;
        return constant(r);
    }
    Node n;
    n.kind = NodeKind::int_pow;
    n.a = std::move(a);
    n.exponent = k;
    return make(std::move(n));
}

Expr Expr::exp(Expr a) {
    if (is_const(a)) return constant(std::exp(a.constant_value()));
    Node n;
    n.kind = NodeKind::exp_fn;
    n.a = std::move(a);
    return make(std::move(n));
}

Expr Expr::sin(Expr a) {
    if (is_const(a)) return constant(std::sin(a.constant_value()));
    Node n;
    n.kind = NodeKind::sin_fn;
    n.a = std::move(a);
    return make(std::move(n));
}

Expr Expr::cos(Expr a) {
    if (is_const(a)) return constant(std::cos(a.constant_value()));
    Node n;
    n.kind = NodeKind::cos_fn;
    n.a = std::move(a);
    return make(std::move(n));
}

Expr Expr::wp(const Lattice& lat) {
    Node n;
    n.kind = NodeKind::wp_fn;
    n.lat = lat;
    return make(std::move(n));
}

Expr Expr::wp_prime(const Lattice& lat) {
    Node n;
    n.kind = NodeKind::wp_prime_fn;
    n.lat = lat;
    return make(std::move(n));
}

Expr Expr::shift(Expr a, cplx offset) {
    if (offset == cplx(0.0)) return a;
    if (is_const(a)) return a;
    if (a.kind() == NodeKind::shift) {
        // compose additively
        cplx total = a.shift_offset() + offset;
        return shift(a.child_a(), total);
    }
    Node n;
    n.kind = NodeKind::shift;
    n.a = std::move(a);
    n.offset = offset;
    return make(std::move(n));
}

NodeKind Expr::kind() const { return node_->kind; }
const Expr& Expr::child_a() const { return node_->a; }
const Expr& Expr::child_b() const { return node_->b; }
cplx Expr::constant_value() const { return node_->value; }
int Expr::exponent() const { return node_->exponent; }
cplx Expr::shift_offset() const { return node_->offset; }
const Lattice& Expr::lattice() const { return *node_->lat; }

namespace {

EvalResult finite_guarded(cplx v) {
    double m = std::abs(v);
    if (!(m <= kOverflowGuard)) return {EvalStatus::pole_like, cplx(0.0)};
    return {EvalStatus::finite, v};
}

EvalStatus worse(EvalStatus a, EvalStatus b) {
    if (a == EvalStatus::near_singular || b == EvalStatus::near_singular)
        return EvalStatus::near_singular;
    return EvalStatus::pole_like;
}

}  // namespace

EvalResult Expr::evaluate(cplx z) const {
    const Node& n = *node_;
    switch (n.kind) {
        case NodeKind::constant:
            return {EvalStatus::finite, n.value};
        case NodeKind::variable:
            return {EvalStatus::finite, z};
        case NodeKind::add: {
            EvalResult a = n.a.evaluate(z), b = n.b.evaluate(z);
            if (!a.finite() || !b.finite())
                return {worse(a.finite() ? EvalStatus::pole_like : a.status,
                              b.finite() ? EvalStatus::pole_like : b.status),
                        cplx(0.0)};
            return finite_guarded(a.value + b.value);
        }
        case NodeKind::mul: {
            EvalResult a = n.a.evaluate(z), b = n.b.evaluate(z);
            if (!a.finite() || !b.finite())
                return {worse(a.finite() ? EvalStatus::pole_like : a.status,
                              b.finite() ? EvalStatus::pole_like : b.status),
                        cplx(0.0)};
            return finite_guarded(a.value * b.value);
        }
        case NodeKind::divide: {
            EvalResult a = n.a.evaluate(z), b = n.b.evaluate(z);
            if (a.finite() && b.finite()) {
                if (b.value == cplx(0.0)) return {EvalStatus::pole_like, cplx(0.0)};
                return finite_guarded(a.value / b.value);
            }
            if (a.finite() && b.status == EvalStatus::pole_like)
                return {EvalStatus::finite, cplx(0.0)};  // finite over a pole
            return {worse(a.finite() ? EvalStatus::pole_like : a.status,
                          b.finite() ? EvalStatus::pole_like : b.status),
                    cplx(0.0)};
        }
        case NodeKind::int_pow: {
            EvalResult a = n.a.evaluate(z);
            if (!a.finite()) {
                if (n.exponent < 0 && a.status == EvalStatus::pole_like)
                    return {EvalStatus::finite, cplx(0.0)};
                return a;
            }
            if (a.value == cplx(0.0) && n.exponent < 0)
                return {EvalStatus::pole_like, cplx(0.0)};
            LogC lv = logc_pow(LogC::from(a.value), n.exponent);
            if (lv.is_zero()) return {EvalStatus::finite, cplx(0.0)};
            if (lv.lm > std::log(kOverflowGuard)) return {EvalStatus::pole_like, cplx(0.0)};
            return {EvalStatus::finite, lv.value()};
        }
        case NodeKind::exp_fn: {
            EvalResult a = n.a.evaluate(z);
            if (!a.finite()) return a;
            if (a.value.real() > 690.0) return {EvalStatus::pole_like, cplx(0.0)};
            return {EvalStatus::finite, std::exp(a.value)};
        }
        case NodeKind::sin_fn:
        case NodeKind::cos_fn: {
            EvalResult a = n.a.evaluate(z);
            if (!a.finite()) return a;
            if (std::abs(a.value.imag()) > 690.0) return {EvalStatus::pole_like, cplx(0.0)};
            return {EvalStatus::finite,
                    n.kind == NodeKind::sin_fn ? std::sin(a.value) : std::cos(a.value)};
        }
        case NodeKind::wp_fn:
        case NodeKind::wp_prime_fn: {
            const WpEngine& eng = n.lat->engine();
            cplx h = eng.reduce(z).h;
            double ah = std::abs(h);
            if (ah == 0.0) return {EvalStatus::pole_like, cplx(0.0)};
            if (ah < kNearSingularGuard) return {EvalStatus::near_singular, cplx(0.0)};
            WpEngine::Pair w = eng.eval_pair(z);
            return finite_guarded(n.kind == NodeKind::wp_fn ? w.p : w.dp);
        }
        case NodeKind::shift:
            return n.a.evaluate(z + n.offset);
    }
    return {EvalStatus::pole_like, cplx(0.0)};
}

LogC Expr::evaluate_log(cplx z) const {
    const Node& n = *node_;
    switch (n.kind) {
        case NodeKind::constant:
            return LogC::from(n.value);
        case NodeKind::variable:
            return LogC::from(z);
        case NodeKind::add:
            return logc_add(n.a.evaluate_log(z), n.b.evaluate_log(z));
        case NodeKind::mul:
            return logc_mul(n.a.evaluate_log(z), n.b.evaluate_log(z));
        case NodeKind::divide:
            return logc_div(n.a.evaluate_log(z), n.b.evaluate_log(z));
        case NodeKind::int_pow:
            return logc_pow(n.a.evaluate_log(z), n.exponent);
        case NodeKind::exp_fn: {
            LogC g = n.a.evaluate_log(z);
            if (g.is_zero()) return LogC::from(cplx(1.0));
            if (g.lm > 709.0) {
                double c = std::cos(g.ph);
                double inf = std::numeric_limits<double>::infinity();
                return {c > 0.0 ? inf : (c < 0.0 ? -inf : 0.0), 0.0};
            }
            cplx gv = g.value();
            return {gv.real(), gv.imag()};
        }
        case NodeKind::sin_fn:
        case NodeKind::cos_fn: {
            LogC g = n.a.evaluate_log(z);
            bool is_sin = n.kind == NodeKind::sin_fn;
            if (g.is_zero()) return is_sin ? LogC::zero() : LogC::from(cplx(1.0));
            if (g.lm > 709.0) {
                // astronomically large argument; magnitude e^{|Im g|} saturates
                return {std::numeric_limits<double>::infinity(), 0.0};
            }
            cplx gv = g.value();
            double y = gv.imag(), x = gv.real();
            if (std::abs(y) <= 20.0)
                return LogC::from(is_sin ? std::sin(gv) : std::cos(gv));
            double lm = std::abs(y) - std::log(2.0);
            double ph;
            if (is_sin)
                ph = y > 0.0 ? kPi / 2.0 - x : x - kPi / 2.0;
            else
                ph = y > 0.0 ? -x : x;
            return {lm, ph};
        }
        case NodeKind::wp_fn:
        case NodeKind::wp_prime_fn:
            return n.lat->engine().eval_logc(z, n.kind == NodeKind::wp_prime_fn);
        case NodeKind::shift:
            return n.a.evaluate_log(z + n.offset);
    }
    return LogC::zero();
}

Expr Expr::differentiate() const {
    const Node& n = *node_;
    switch (n.kind) {
        case NodeKind::constant:
            return constant(cplx(0.0));
        case NodeKind::variable:
            return constant(cplx(1.0));
        case NodeKind::add:
            return add(n.a.differentiate(), n.b.differentiate());
        case NodeKind::mul:
            return add(mul(n.a.differentiate(), n.b), mul(n.a, n.b.differentiate()));
        case NodeKind::divide:
            return div(sub(mul(n.a.differentiate(), n.b), mul(n.a, n.b.differentiate())),
                       int_pow(n.b, 2));
        case NodeKind::int_pow: {
            Expr inner = n.exponent == 2 ? n.a : int_pow(n.a, n.exponent - 1);
            return mul(mul(constant(cplx(double(n.exponent))), inner), n.a.differentiate());
        }
        case NodeKind::exp_fn:
            return mul(n.a.differentiate(), *this);
        case NodeKind::sin_fn:
            return mul(n.a.differentiate(), cos(n.a));
        case NodeKind::cos_fn:
            return mul(constant(cplx(-1.0)), mul(n.a.differentiate(), sin(n.a)));
        case NodeKind::wp_fn:
            return wp_prime(*n.lat);
        case NodeKind::wp_prime_fn:
            // p'' = 6 p^2 - g2/2
            return sub(mul(constant(cplx(6.0)), int_pow(wp(*n.lat), 2)),
                       constant(n.lat->engine().g2() / 2.0));
        case NodeKind::shift:
            return shift(n.a.differentiate(), n.offset);
    }
    return constant(cplx(0.0));
}

namespace {

std::string fmt_cplx(cplx v) {
    std::ostringstream os;
    os.precision(12);
    if (v.imag() == 0.0) {
        os << v.real();
    } else if (v.real() == 0.0) {
        os << v.imag() << "*i";
    } else {
        os << "(" << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "*i)";
    }
    return os.str();
}

}  // namespace

std::string Expr::to_string() const {
    const Node& n = *node_;
    switch (n.kind) {
        case NodeKind::constant:
            return fmt_cplx(n.value);
        case NodeKind::variable:
            return "z";
        case NodeKind::add:
            return "(" + n.a.to_string() + " + " + n.b.to_string() + ")";
        case NodeKind::mul:
            return "(" + n.a.to_string() + " * " + n.b.to_string() + ")";
        case NodeKind::divide:
            return "(" + n.a.to_string() + " / " + n.b.to_string() + ")";
        case NodeKind::int_pow:
            return n.a.to_string() + "^" + std::to_string(n.exponent);
        case NodeKind::exp_fn:
            return "exp(" + n.a.to_string() + ")";
        case NodeKind::sin_fn:
            return "sin(" + n.a.to_string() + ")";
        case NodeKind::cos_fn:
            return "cos(" + n.a.to_string() + ")";
        case NodeKind::wp_fn:
            return "wp(z)";
        case NodeKind::wp_prime_fn:
            return "wpp(z)";
        case NodeKind::shift:
            return "shift(" + n.a.to_string() + ", " + fmt_cplx(n.offset) + ")";
    }
    return "?";
}

Expr difference(const Expr& f, cplx c, int n) {
    if (n < 0) throw InvalidInput("difference order must be nonnegative");
    if (n >= 1 && c == cplx(0.0)) throw InvalidInput("difference step must be nonzero");
    Expr g = f;
    for (int i = 0; i < n; ++i) g = Expr::sub(Expr::shift(g, c), g);
    return g;
}

bool relatively_null(const Expr& num, const Expr& ref, double tol) {
    Rng rng(0x243f6a8885a308d3ull);
    int checked = 0;
    for (int i = 0; i < 60 && checked < 20; ++i) {
        cplx z = rng.annulus_point(0.3, 3.0);
        EvalResult a = num.evaluate(z);
        EvalResult b = ref.evaluate(z);
        if (!a.finite() || !b.finite()) continue;
        ++checked;
        if (std::abs(a.value) > tol * (1.0 + std::abs(b.value))) return false;
    }
    return checked >= 12;
}

cplx LocalExpansion::coeff(int idx) const {
    if (idx < 0) {
        for (const auto& [j, c] : principal)
            if (j == idx) return c;
        return cplx(0.0);
    }
    if (static_cast<size_t>(idx) < analytic.size()) return analytic[static_cast<size_t>(idx)];
    return cplx(0.0);
}

std::pair<int, cplx> LocalExpansion::leading(double noise_floor) const {
    double scale = 0.0;
    for (const auto& [j, c] : principal) scale = std::max(scale, std::abs(c));
    for (const auto& c : analytic) scale = std::max(scale, std::abs(c));
    double floor = noise_floor * (1.0 + scale);
    for (const auto& [j, c] : principal)
        if (std::abs(c) > floor) return {j, c};
    for (size_t i = 0; i < analytic.size(); ++i)
        if (std::abs(analytic[i]) > floor) return {static_cast<int>(i), analytic[i]};
    return {truncation_order + 1, cplx(0.0)};
}

}  // namespace nev
