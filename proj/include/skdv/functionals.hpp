#pragma once

#include <span>
#include <string>
#include <vector>

#include "skdv/field.hpp"
#include "skdv/noise.hpp"

namespace skdv {

/// All scalar functionals of one state, as one CSV row.
struct FunctionalSample {
    double t = 0.0;
    double l2_sq = 0.0;     ///< ||u||^2_L2
    double dx_l2_sq = 0.0;  ///< ||u_x||^2_L2
    double h1_sq = 0.0;     ///< ||u||^2_H1 = l2_sq + dx_l2_sq
    double I = 0.0;         ///< int u_x^2 - u^3/3
    double alpha = 0.0;     ///< drift of I, see alpha()
    double cubic = 0.0;     ///< int u^3
    double sup_abs = 0.0;   ///< max |u| over the grid
    double uf = 0.0;        ///< (u, f)
};

const std::vector<std::string>& functional_sample_columns();
std::vector<double> to_row(const FunctionalSample& s);

double l2_norm_sq(const Field& u);
double dx_l2_norm_sq(const Field& u);
double h1_norm_sq(const Field& u);
/// sum_k (1 + xi_k^2)^m |c_k|^2.
double sobolev_norm_sq(const Field& u, double m);
double inner(const Field& a, const Field& b);
double sup_norm(const Field& u);
double cubic_integral(const Field& u);
double mean_value(const Field& u);

/// I(v) = int (v_x)^2 - v^3 / 3 dx.
double invariant_I(const Field& v);

/// alpha = (lambda/3) int u^3 + ||d_x Phi||^2_HS - sum_i int u |Phi e_i|^2
///         + 2 (u_x, f_x) - (u^2, f).
/// For the Fourier-diagonal Phi, sum_i |Phi e_i(x)|^2 is the constant
/// ||Phi||^2_HS / L, so the third term is ||Phi||^2_HS times the mean of u.
double alpha(const Field& u, const Field& f, const NoiseOperator& phi, double lambda);

/// ||v||_L2^(1/2) ||v_x||_L2^(1/2) - ||v||_Linf, applied to v minus its mean.
double agmon_gap(const Field& v);

struct SandwichResult {
    bool lower_ok = false;
    bool upper_ok = false;
    /// Slack of each side; both nonnegative exactly when the sides hold.
    double lower_slack = 0.0;
    double upper_slack = 0.0;
};

/// (2/3)||v_x||^2 - C||v||^(10/3) <= I(v) <= (4/3)||v_x||^2 + C||v||^(10/3).
SandwichResult sandwich_check(const Field& v, double C);

/// |alpha| - lambda ||u_x||^2 <= C (||u||^4 + 1): returns the left side
/// divided by (||u||^4 + 1), so a given C holds iff the value is <= C.
double alpha_bound_ratio(const Field& u, const Field& f, const NoiseOperator& phi, double lambda);

/// Smallest C in [lo, hi] for which holds(C) is true, by bisection; holds
/// must be monotone (false below the threshold, true above).
template <typename Predicate>
double bisect_smallest_constant(Predicate&& holds, double lo, double hi, double rel_tol = 1e-10)
{
    while (!holds(hi)) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (holds(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

/// Smallest C for which the sandwich holds for every field, by bisection.
double fit_sandwich_constant(std::span<const Field> fields);
/// Smallest C for which |alpha| <= lambda ||u_x||^2 + C(||u||^4 + 1) holds for
/// every field, by bisection.
double fit_alpha_constant(std::span<const Field> fields, const Field& f, const NoiseOperator& phi, double lambda);

FunctionalSample evaluate_sample(double t, const Field& u, const Field& f, const NoiseOperator& phi, double lambda);

/// evaluate_sample with the forcing transforms and noise norms cached, for
/// repeated use along a trajectory. Immutable and shareable.
class FunctionalEvaluator {
public:
    FunctionalEvaluator(const Field& f, const NoiseOperator& phi, double lambda);
    FunctionalSample operator()(double t, const Field& u) const;

private:
    Grid grid_;
    std::vector<Complex> f_hat_;
    std::vector<double> f_values_;
    double hs_sq_;
    double dx_hs_sq_;
    double lambda_;
};

/// Components of the X_1(T) diagnostic for a trajectory sampled at times t_i.
struct X1Components {
    double sup_t_h1 = 0.0;         ///< sup_t ||u(t)||_H1
    double l2x_sup_t = 0.0;        ///< || sup_t |u(., t)| ||_L2(x)
    double sup_x_l2t_dx = 0.0;     ///< sup_x ( int_0^T |u_x(x, t)|^2 dt )^(1/2)
    double l4t_sup_x_dx = 0.0;     ///< ( int_0^T ||u_x(t)||_Linf^4 dt )^(1/4)
    double norm() const;           ///< max of the four
};

/// Time integrals use the trapezoidal rule; needs at least two samples.
X1Components x1_components(std::span<const double> times, std::span<const Field> trajectory);
double x1_norm(std::span<const double> times, std::span<const Field> trajectory);

}  // namespace skdv
