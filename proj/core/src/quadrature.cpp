#include "msle/quadrature.hpp"

#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#include <Eigen/Dense>

#include "msle/specfun.hpp"

namespace msle::quad {

namespace {

Rule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, double mu0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    Rule r;
    int n = static_cast<int>(diag.size());
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        r.x[i] = es.eigenvalues()(i);
        double v = es.eigenvectors()(0, i);
        r.w[i] = mu0 * v * v;
    }
    return r;
}

}  // namespace

Rule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd s(std::max(n - 1, 0));
    for (int k = 1; k < n; ++k) s(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
    return golub_welsch(d, s, 2.0);
}

const Rule& gauss_jacobi(int n, double alpha, double beta) {
    if (n < 1 || alpha <= -1 || beta <= -1) throw std::invalid_argument("gauss_jacobi: bad parameters");
    thread_local std::map<std::tuple<int, double, double>, Rule> cache;
    auto key = std::make_tuple(n, alpha, beta);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    double ab = alpha + beta;
    Eigen::VectorXd d(n);
    Eigen::VectorXd s(std::max(n - 1, 0));
    d(0) = (beta - alpha) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        double t = 2.0 * k + ab;
        d(k) = (beta * beta - alpha * alpha) / (t * (t + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        double t = 2.0 * k + ab;
        double num, den;
        if (k == 1) {
            num = 4.0 * (1.0 + alpha) * (1.0 + beta);
            den = (2.0 + ab) * (2.0 + ab) * (3.0 + ab);
        } else {
            num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
            den = t * t * (t + 1.0) * (t - 1.0);
        }
        s(k - 1) = std::sqrt(num / den);
    }
    double mu0 = std::exp((ab + 1.0) * std::log(2.0) + ln_gamma(alpha + 1.0).value +
                          ln_gamma(beta + 1.0).value - ln_gamma(ab + 2.0).value);
    auto [pos, ok] = cache.emplace(key, golub_welsch(d, s, mu0));
    return pos->second;
}

namespace {

// (u-a)^alpha g(u) on [a, a+len] with a Gauss-Jacobi rule of n nodes.
double left_panel(const std::function<double(double)>& g, double a, double len, double alpha, int n) {
    const Rule& r = gauss_jacobi(n, 0.0, alpha);
    double half = 0.5 * len;
    double s = 0;
    for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * g(a + half * (1.0 + r.x[i]));
    return s * std::pow(half, alpha + 1.0);
}

double right_panel(const std::function<double(double)>& g, double b, double len, double beta, int n) {
    const Rule& r = gauss_jacobi(n, beta, 0.0);
    double half = 0.5 * len;
    double s = 0;
    for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * g(b - half * (1.0 - r.x[i]));
    return s * std::pow(half, beta + 1.0);
}

}  // namespace

Result<double> jacobi_weighted(const std::function<double(double)>& g, double a, double b,
                               double alpha, double beta, double clear_left, double clear_right,
                               double rel_tol, int n) {
    if (!(b > a)) throw std::invalid_argument("jacobi_weighted: empty interval");
    double len = b - a;
    double ll = std::min(0.25 * len, 0.5 * clear_left);
    double lr = std::min(0.25 * len, 0.5 * clear_right);
    auto gl = [&](double u) { return g(u) * std::pow(b - u, beta); };
    auto gr = [&](double u) { return g(u) * std::pow(u - a, alpha); };
    Result<double> res;
    double vl = left_panel(gl, a, ll, alpha, n);
    double vl2 = left_panel(gl, a, ll, alpha, n + 8);
    double vr = right_panel(gr, b, lr, beta, n);
    double vr2 = right_panel(gr, b, lr, beta, n + 8);
    res.evals = 4L * n + 16;
    auto full = [&](double u) { return g(u) * std::pow(u - a, alpha) * std::pow(b - u, beta); };
    double scale = std::abs(vl2) + std::abs(vr2);
    auto mid = adaptive<double>(full, a + ll, b - lr, 0.25 * rel_tol * scale, 0.25 * rel_tol);
    res.value = vl2 + vr2 + mid.value;
    res.abs_error = std::abs(vl2 - vl) + std::abs(vr2 - vr) + mid.abs_error;
    res.evals += mid.evals;
    res.converged = mid.converged && res.abs_error <= rel_tol * std::abs(res.value) + 1e-300;
    return res;
}

}  // namespace msle::quad
