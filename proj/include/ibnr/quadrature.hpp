#pragma once

// Adaptive Gauss-Kronrod (21-point) integration with a global error heap.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <span>
#include <sstream>
#include <vector>

#include "ibnr/errors.hpp"

namespace ibnr {

struct QuadratureControl {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_depth = 50;     // bisections allowed below an initial segment
    int grid_points = 257;  // nodes per memoization grid (engine)

    void validate() const {
        if (!(abs_tol > 0) || !(rel_tol > 0))
            throw DomainError("quadrature tolerances must be positive");
        if (max_depth < 10) throw DomainError("quadrature max_depth must be >= 10");
        if (grid_points < 9) throw DomainError("grid_points must be >= 9");
    }

    // Same control with both tolerances scaled by `factor` (used for inner integrals).
    QuadratureControl scaled(double factor) const {
        QuadratureControl c = *this;
        c.abs_tol *= factor;
        c.rel_tol = std::max(c.rel_tol * factor, 1e-13);
        return c;
    }
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int segments = 0;
};

namespace detail {

inline constexpr double gk21_x[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr double gk21_wk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208896614205, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes (x[1], x[3], ..., x[9]).
inline constexpr double gk21_wg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a, b, value, error;
    int depth;
};

template <class F>
Segment gk21(F& f, double a, double b, int depth) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double rk = fc * gk21_wk[10];
    double rg = 0.0;
    double fv1[10], fv2[10];
    for (int j = 0; j < 10; ++j) {
        const double dx = h * gk21_x[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        rk += gk21_wk[j] * (f1 + f2);
        if (j % 2 == 1) rg += gk21_wg[j / 2] * (f1 + f2);
    }
    // QUADPACK-style error scaling.
    const double mean = 0.5 * rk;
    double asc = gk21_wk[10] * std::abs(fc - mean);
    double abs_int = gk21_wk[10] * std::abs(fc);
    for (int j = 0; j < 10; ++j) {
        asc += gk21_wk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
        abs_int += gk21_wk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    }
    const double ah = std::abs(h);
    asc *= ah;
    abs_int *= ah;
    double err = std::abs((rk - rg) * h);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (abs_int > std::numeric_limits<double>::min() / (50 * eps))
        err = std::max(err, 50 * eps * abs_int);
    if (!std::isfinite(rk)) {
        std::ostringstream os;
        os << "non-finite integrand on [" << a << ", " << b << "]";
        throw NumericalError(os.str());
    }
    return {a, b, rk * h, err, depth};
}

}  // namespace detail

// Integrates f over the union of [pts[i], pts[i+1]]; the breakpoints must be
// nondecreasing. Throws NumericalError when the tolerance cannot be met.
template <class F>
QuadResult integrate(F&& f, std::span<const double> pts, const QuadratureControl& ctl = {}) {
    using detail::Segment;
    QuadResult out;
    if (pts.size() < 2) return out;
    constexpr std::size_t max_segments = 20000;
    auto worse = [](const Segment& x, const Segment& y) { return x.error < y.error; };
    std::vector<Segment> heap;
    heap.reserve(64);
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!(pts[i + 1] >= pts[i])) throw DomainError("integration breakpoints must be nondecreasing");
        if (pts[i + 1] == pts[i]) continue;
        Segment s = detail::gk21(f, pts[i], pts[i + 1], 0);
        total += s.value;
        total_err += s.error;
        heap.push_back(s);
    }
    std::make_heap(heap.begin(), heap.end(), worse);
    for (;;) {
        double tol = std::max(ctl.abs_tol, ctl.rel_tol * std::abs(total));
        if (total_err <= tol) {
            // Re-sum to shed the drift of the running totals before accepting.
            total = 0.0;
            total_err = 0.0;
            for (const auto& s : heap) {
                total += s.value;
                total_err += s.error;
            }
            tol = std::max(ctl.abs_tol, ctl.rel_tol * std::abs(total));
            if (total_err <= tol) break;
        }
        std::pop_heap(heap.begin(), heap.end(), worse);
        Segment worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (worst.depth >= ctl.max_depth || heap.size() >= max_segments || mid <= worst.a ||
            mid >= worst.b) {
            std::ostringstream os;
            os << "adaptive quadrature did not converge: estimate " << total << ", error " << total_err
               << " > tolerance " << tol << " (worst segment [" << worst.a << ", " << worst.b << "])";
            throw NumericalError(os.str());
        }
        Segment l = detail::gk21(f, worst.a, mid, worst.depth + 1);
        Segment r = detail::gk21(f, mid, worst.b, worst.depth + 1);
        total += l.value + r.value - worst.value;
        total_err += l.error + r.error - worst.error;
        heap.push_back(l);
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back(r);
        std::push_heap(heap.begin(), heap.end(), worse);
    }
    out.value = total;
    out.error = total_err;
    out.segments = static_cast<int>(heap.size());
    return out;
}

template <class F>
double integrate(F&& f, std::initializer_list<double> pts, const QuadratureControl& ctl = {}) {
    std::vector<double> v(pts);
    return integrate(f, std::span<const double>(v), ctl).value;
}

template <class F>
double integrate(F&& f, const std::vector<double>& pts, const QuadratureControl& ctl = {}) {
    return integrate(f, std::span<const double>(pts), ctl).value;
}

// Breakpoints a, a+h0, a+10 h0, ... (decades) up to b. Helps the first pass see
// features sitting near the left endpoint of a long interval.
inline std::vector<double> decade_points(double a, double b, double h0) {
    std::vector<double> p{a};
    for (double h = h0; a + h < b; h *= 10.0) p.push_back(a + h);
    p.push_back(b);
    return p;
}

}  // namespace ibnr
