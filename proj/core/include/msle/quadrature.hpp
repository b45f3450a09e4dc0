#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <utility>
#include <vector>

namespace msle::quad {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

// Nodes and weights on [-1,1] by Golub-Welsch.
Rule gauss_legendre(int n);
// Weight (1-x)^alpha (1+x)^beta on [-1,1]. Cached per thread.
const Rule& gauss_jacobi(int n, double alpha, double beta);

template <class T>
struct Result {
    T value{};
    double abs_error = 0;
    long evals = 0;
    bool converged = true;
};

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Est {
    T v;
    double e;
    double l1;  // Kronrod estimate of the integral of |f|
};

template <class T, class F>
Est<T> gk15(F& f, double a, double b) {
    double c = 0.5 * (a + b);
    double hl = 0.5 * (b - a);
    T fc = f(c);
    T rk = fc * kWgk[7];
    T rg = fc * kWg[3];
    double l1 = std::abs(fc) * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        double dx = hl * kXgk[j];
        T f1 = f(c - dx);
        T f2 = f(c + dx);
        rk += (f1 + f2) * kWgk[j];
        l1 += (std::abs(f1) + std::abs(f2)) * kWgk[j];
        if (j % 2 == 1) rg += (f1 + f2) * kWg[j / 2];
    }
    rk *= hl;
    rg *= hl;
    return {rk, std::abs(rk - rg), l1 * std::abs(hl)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod 7/15 over a union of intervals.
// l1_rel > 0 also accepts an error below l1_rel * (integral of |f|), for results that cancel to ~0.
template <class T, class F>
Result<T> adaptive(F&& f, const std::vector<std::pair<double, double>>& intervals, double abs_tol,
                   double rel_tol, long max_evals = 200000, double l1_rel = 0.0) {
    struct Seg {
        double a, b;
        T v;
        double e, l1;
        bool operator<(const Seg& o) const { return e < o.e; }
    };
    std::priority_queue<Seg> heap;
    Result<T> res;
    T total{};
    double err = 0, l1 = 0;
    for (auto [a, b] : intervals) {
        auto q = detail::gk15<T>(f, a, b);
        res.evals += 15;
        heap.push({a, b, q.v, q.e, q.l1});
        total += q.v;
        err += q.e;
        l1 += q.l1;
    }
    while (err > std::max({abs_tol, rel_tol * std::abs(total), l1_rel * l1})) {
        if (res.evals + 30 > max_evals || heap.empty()) {
            res.converged = false;
            break;
        }
        Seg s = heap.top();
        heap.pop();
        double m = 0.5 * (s.a + s.b);
        if (!(m > s.a && m < s.b)) {
            res.converged = false;
            heap.push(s);
            break;
        }
        auto q1 = detail::gk15<T>(f, s.a, m);
        auto q2 = detail::gk15<T>(f, m, s.b);
        res.evals += 30;
        total += q1.v + q2.v - s.v;
        err += q1.e + q2.e - s.e;
        l1 += q1.l1 + q2.l1 - s.l1;
        heap.push({s.a, m, q1.v, q1.e, q1.l1});
        heap.push({m, s.b, q2.v, q2.e, q2.l1});
    }
    // re-sum to shed accumulated rounding
    T sum{};
    double esum = 0;
    while (!heap.empty()) {
        sum += heap.top().v;
        esum += heap.top().e;
        heap.pop();
    }
    res.value = sum;
    res.abs_error = esum;
    return res;
}

template <class T, class F>
Result<T> adaptive(F&& f, double a, double b, double abs_tol, double rel_tol,
                   long max_evals = 200000, double l1_rel = 0.0) {
    return adaptive<T>(std::forward<F>(f), std::vector<std::pair<double, double>>{{a, b}}, abs_tol,
                       rel_tol, max_evals, l1_rel);
}

// Integral of (u-a)^alpha (b-u)^beta g(u) over [a,b]. g is smooth on [a,b];
// clear_left/clear_right are the distances from a/b to the nearest singularity
// of g outside the interval (infinity if none).
Result<double> jacobi_weighted(const std::function<double(double)>& g, double a, double b,
                               double alpha, double beta, double clear_left, double clear_right,
                               double rel_tol, int n = 32);

}  // namespace msle::quad
