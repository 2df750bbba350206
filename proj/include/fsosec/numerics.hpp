#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fsosec/error.hpp"

namespace fsosec::numerics
{

//! Truncation policy for infinite series.
//!
//! Summation stops after `consecutive_small` successive terms satisfy
//! |term| < tail_tol * |partial sum| (absolute tail_tol when the partial sum
//! is exactly zero), or after `max_terms` terms, whichever comes first.
struct SeriesControl
{
    int max_terms = 200;
    double tail_tol = 1e-12;
    int consecutive_small = 3;

    void validate() const;
};

template <class T>
struct SeriesSum
{
    T value{};
    int terms_used = 0;
    bool converged = false;
};

struct QuadratureControl
{
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;

    void validate() const;
};

struct Integral
{
    double value = 0.0;
    double err_est = 0.0;
    int subdivisions = 0;
    int evaluations = 0;
};

//! ln Gamma(x) for x > 0.
double log_gamma(double x);

//! Generalized binomial coefficient C(a, k) = a (a-1) ... (a-k+1) / k!.
template <class T>
T gen_binomial(T a, int k)
{
    if (k < 0)
        throw DomainError("gen_binomial: k must be non-negative");
    if (!std::isfinite(static_cast<double>(a)))
        throw DomainError("gen_binomial: non-finite upper argument");
    T c = 1;
    for (int j = 0; j < k; ++j)
        c *= (a - T(j)) / T(j + 1);
    return c;
}

double gen_binomial(double a, int k);

//! Sums term(0) + term(1) + ... under the SeriesControl termination rule.
//!
//! term is invoked with n = 0, 1, 2, ... strictly in order, so generators may
//! carry state between calls (binomial recurrences etc).
template <class Term>
auto sum_alternating(Term&& term, const SeriesControl& ctl)
    -> SeriesSum<decltype(term(0))>
{
    using T = decltype(term(0));
    ctl.validate();
    SeriesSum<T> out;
    T partial = 0;
    int small = 0;
    for (int n = 0; n < ctl.max_terms; ++n)
    {
        const T t = term(n);
        if (!std::isfinite(static_cast<double>(t)))
            throw NumericalError("sum_alternating: non-finite term at index " + std::to_string(n));
        partial += t;
        const T scale = partial == T(0) ? T(1) : static_cast<T>(std::abs(partial));
        if (std::abs(t) < T(ctl.tail_tol) * scale)
            ++small;
        else
            small = 0;
        if (small >= ctl.consecutive_small)
        {
            out.value = partial;
            out.terms_used = n + 1;
            out.converged = true;
            return out;
        }
    }
    out.value = partial;
    out.terms_used = ctl.max_terms;
    out.converged = false;
    return out;
}

namespace detail
{

struct Segment
{
    double a;
    double b;
    double value;
    double error;
};

// 21-point Gauss-Kronrod rule with the 10-point Gauss rule embedded.
template <class F>
Segment gauss_kronrod21(F& f, double a, double b)
{
    static constexpr double xgk[11] = {
        0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
        0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
        0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
        0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
        0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
        0.000000000000000000000000000000000};
    static constexpr double wgk[11] = {
        0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
        0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
        0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
        0.123491976262065851077208931783607, 0.134709217311473325928054001771707,
        0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
        0.149445554002916905664936468389821};
    static constexpr double wg[5] = {
        0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
        0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
        0.295524224714752870173892994651338};

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resk = fc * wgk[10];
    double resg = 0.0;
    double resabs = std::abs(resk);
    double fv1[10];
    double fv2[10];
    for (int j = 0; j < 10; ++j)
    {
        const double dx = half * xgk[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
        const double s = fv1[j] + fv2[j];
        resk += wgk[j] * s;
        resabs += wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1)
            resg += wg[j / 2] * s;
    }
    const double mean = 0.5 * resk;
    double resasc = wgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j)
        resasc += wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

    const double result = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = 2.220446049250313e-16;
    if (resabs > 1e-290)
        err = std::max(50.0 * eps * resabs, err);
    return {a, b, result, err};
}

// Globally adaptive bisection: always split the segment with the largest
// error estimate.
template <class F>
Integral adaptive(F& f, double a, double b, const QuadratureControl& ctl, const char* who)
{
    ctl.validate();
    auto by_error = [](const Segment& x, const Segment& y) { return x.error < y.error; };
    std::vector<Segment> heap;
    heap.reserve(static_cast<std::size_t>(ctl.max_subdivisions) + 1);
    heap.push_back(gauss_kronrod21(f, a, b));
    double total = heap.front().value;
    double error = heap.front().error;
    int evaluations = 21;
    int subdivisions = 1;

    auto done = [&] { return error <= std::max(ctl.rel_tol * std::abs(total), ctl.abs_tol); };
    while (!done())
    {
        if (subdivisions >= ctl.max_subdivisions)
            throw ConvergenceError(std::string(who) + ": subdivision limit reached", total, error);
        std::pop_heap(heap.begin(), heap.end(), by_error);
        const Segment worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
        {
            // Segment cannot be split further in double precision.
            throw ConvergenceError(std::string(who) + ": roundoff limit reached", total, error);
        }
        const Segment left = gauss_kronrod21(f, worst.a, mid);
        const Segment right = gauss_kronrod21(f, mid, worst.b);
        evaluations += 42;
        ++subdivisions;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), by_error);
    }
    // Re-sum to shed the drift of the running updates.
    total = 0.0;
    error = 0.0;
    for (const auto& s : heap)
    {
        total += s.value;
        error += s.error;
    }
    return {total, error, subdivisions, evaluations};
}

}  // namespace detail

//! Adaptive integral of f over the finite interval [a, b].
template <class F>
Integral integrate(F&& f, double a, double b, const QuadratureControl& ctl = {})
{
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw DomainError("integrate: interval bounds must be finite");
    if (a == b)
        return {};
    auto checked = [&f](double x) {
        const double v = f(x);
        if (!std::isfinite(v))
            throw NumericalError("integrate: non-finite integrand at x = " + std::to_string(x));
        return v;
    };
    return detail::adaptive(checked, a, b, ctl, "integrate");
}

//! Adaptive integral of f over [0, inf).
//!
//! Maps x = scale * t / (1 - t), t in [0, 1). The 21-point rule never samples
//! the endpoints, so integrable endpoint singularities at x = 0 are resolved
//! by bisection. `scale` should sit near the bulk of the integrand.
template <class F>
Integral integrate_semi_infinite(F&& f, const QuadratureControl& ctl = {}, double scale = 1.0)
{
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw DomainError("integrate_semi_infinite: scale must be positive and finite");
    auto mapped = [&f, scale](double t) {
        const double om = 1.0 - t;
        const double x = scale * t / om;
        const double v = f(x);
        if (v == 0.0)
            return 0.0;
        const double out = v * scale / (om * om);
        if (!std::isfinite(out))
            throw NumericalError("integrate_semi_infinite: non-finite integrand at x = " +
                                 std::to_string(x));
        return out;
    };
    return detail::adaptive(mapped, 0.0, 1.0, ctl, "integrate_semi_infinite");
}

}  // namespace fsosec::numerics
