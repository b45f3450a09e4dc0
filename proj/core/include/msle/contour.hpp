#pragma once

#include <complex>
#include <string>
#include <vector>

#include "msle/linkpat.hpp"

namespace msle {

using cplx = std::complex<double>;

// Straight segment z0 -> z1, or arc center + radius * exp(i(t0 + s (t1 - t0))).
struct Piece {
    bool arc = false;
    cplx z0, z1;
    cplx center;
    double radius = 0, t0 = 0, t1 = 0;

    cplx at(double s) const;
    cplx deriv(double s) const;
};

class Path {
public:
    std::vector<Piece> pieces;

    void segment(cplx a, cplx b);
    // arc of angular extent sweep, split into pieces of at most pi/2
    void arc(cplx center, double radius, double start_angle, double sweep);
    void append(const Path& other);
    Path reversed() const;

    int size() const { return static_cast<int>(pieces.size()); }
    cplx start() const { return pieces.front().at(0.0); }
    cplx end() const { return pieces.back().at(1.0); }
    // global parameter T in [0, size()]
    cplx at(double T) const;
    double clearance(const std::vector<cplx>& pts) const;
    // prefix of the path up to global parameter T
    Path prefix(double T) const;
};

// Commutator loop: b clockwise, a counterclockwise, b counterclockwise, a clockwise,
// joined by a strand from a to b. height > 0 lifts the strand to the left of a->b.
Path make_pochhammer(cplx a, cplx b, double clearance, double height = 0.0);
Path make_circle(cplx center, double radius, double start_angle, bool ccw);

double winding_number(const Path& p, cplx z);
// continuous change of arg(z - q) along the whole path
double arg_change(const Path& p, cplx q);

// f = prefactor * prod_{s,i} (u_s - x_i)^{expo[s][i]} * prod_{t<s} (u_s - u_t)^{mutual},
// each factor continued from |.| at the path start points, shifted by theta0[s][i].
struct BranchedIntegrand {
    double kappa = 0;
    std::vector<cplx> marked;
    int screenings = 0;
    std::vector<std::vector<double>> expo;
    std::vector<std::vector<double>> theta0;  // empty means zero
    double mutual = 0;
    cplx prefactor = 1.0;
};

// Full integrand f_beta with screenings ordered like beta.links().
BranchedIntegrand coulomb_integrand(double kappa, const LinkPattern& beta, const std::vector<double>& x);
// Integrand with screening r removed and the conjugate charge at b_r (at_b) or a_r.
BranchedIntegrand reduced_integrand(double kappa, const LinkPattern& beta, const std::vector<double>& x,
                                    int r, bool at_b = true);

// Value at the end points of the prefixes, continued from their start points.
cplx eval_branched(const BranchedIntegrand& f, const std::vector<Path>& prefixes);

struct ContourValue {
    cplx value;
    double abs_error = 0;
    long evals = 0;
    bool converged = true;
    std::string method;
};

// Iterated integral; paths[0] is the outermost variable.
ContourValue integrate_path(const BranchedIntegrand& f, const std::vector<Path>& paths, double rel_tol,
                            double abs_tol = 0.0, long max_evals = 200000);

// Pochhammer contours for the given links (1-based into x), arched by nesting depth.
std::vector<Path> pattern_contours(const std::vector<std::pair<int, int>>& links, const std::vector<double>& x);
double contour_clearance(const std::vector<double>& x);

enum class HRoute { Auto, Full, Reduced };

// Link removed by the reduced route: one that leaves the shallowest nesting.
int removal_choice(const LinkPattern& beta);

ContourValue coulomb_H(double kappa, const LinkPattern& beta, const std::vector<double>& x,
                       HRoute route = HRoute::Auto, double rel_tol = 1e-10);
// Reduced route with an explicit removed link.
ContourValue coulomb_H_reduced(double kappa, const LinkPattern& beta, const std::vector<double>& x, int r,
                               bool at_b, double rel_tol = 1e-10);

enum class LineForm { Auto, Collapsed, Parallel, Link62 };

struct LineValue {
    double value = 0;
    double abs_error = 0;
    long evals = 0;
    bool converged = true;
    std::string method;
};

bool line_form_available(const LinkPattern& beta, LineForm form);
// F_beta = C^N H_beta from iterated real integrals of |f|, kappa in (4,8).
LineValue coulomb_H_line(double kappa, const LinkPattern& beta, const std::vector<double>& x,
                         LineForm form = LineForm::Auto, double rel_tol = 1e-11);

// Continuation of H_beta while x_{2N} travels over the upper half-plane to the far left
// and the other points slide one place right.
struct BraidResult {
    cplx ratio;       // continued H_beta / H_{sigma beta} at the end point
    cplx phase;       // tracked phase of the constant factors
    cplx expected;    // -exp(-6 pi i / kappa)
    std::vector<double> end_points;
    double abs_error = 0;
};
BraidResult braid_transport(double kappa, const LinkPattern& beta, const std::vector<double>& x,
                            int steps = 400, double rel_tol = 1e-11);

}  // namespace msle
