#include "skdv/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skdv/spectral.hpp"

namespace skdv {

const std::vector<std::string>& functional_sample_columns()
{
    static const std::vector<std::string> cols{"t", "l2_sq", "dx_l2_sq", "h1_sq", "I", "alpha", "cubic", "sup_abs"};
    return cols;
}

std::vector<double> to_row(const FunctionalSample& s)
{
    return {s.t, s.l2_sq, s.dx_l2_sq, s.h1_sq, s.I, s.alpha, s.cubic, s.sup_abs};
}

double l2_norm_sq(const Field& u)
{
    const auto c = u.coefficients();
    return spectral_l2_sq(u.grid(), c);
}

double dx_l2_norm_sq(const Field& u)
{
    const auto c = u.coefficients();
    return spectral_weighted_sq(u.grid(), c, 1);
}

double h1_norm_sq(const Field& u)
{
    const auto c = u.coefficients();
    return spectral_l2_sq(u.grid(), c) + spectral_weighted_sq(u.grid(), c, 1);
}

double sobolev_norm_sq(const Field& u, double m)
{
    const Grid& g = u.grid();
    const auto c = u.coefficients();
    const auto& xi = g.half_wavenumbers();
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        s += g.multiplicity(k) * std::pow(1.0 + xi[k] * xi[k], m) * std::norm(c[k]);
    }
    return s;
}

double inner(const Field& a, const Field& b)
{
    require_same_grid(a.grid(), b.grid());
    const Grid& g = a.grid();
    const auto ca = a.coefficients();
    const auto cb = b.coefficients();
    double s = 0.0;
    for (std::size_t k = 0; k < ca.size(); ++k) {
        s += g.multiplicity(k) * std::real(ca[k] * std::conj(cb[k]));
    }
    return s;
}

double sup_norm(const Field& u)
{
    double m = 0.0;
    for (double v : u.values()) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double cubic_integral(const Field& u)
{
    double s = 0.0;
    for (double v : u.values()) {
        s += v * v * v;
    }
    return s * u.grid().dx();
}

double mean_value(const Field& u)
{
    // c_0 = (u, 1/sqrt(L)) = mean * sqrt(L).
    return u.coefficient(0).real() / std::sqrt(u.grid().length());
}

double invariant_I(const Field& v)
{
    return dx_l2_norm_sq(v) - cubic_integral(v) / 3.0;
}

double alpha(const Field& u, const Field& f, const NoiseOperator& phi, double lambda)
{
    require_same_grid(u.grid(), f.grid());
    require_same_grid(u.grid(), phi.grid());
    const Grid& g = u.grid();
    const auto cu = u.coefficients();
    const auto cf = f.coefficients();
    const auto& xi = g.half_wavenumbers();

    double dxu_dxf = 0.0;
    for (std::size_t k = 0; k < cu.size(); ++k) {
        dxu_dxf += g.multiplicity(k) * xi[k] * xi[k] * std::real(cu[k] * std::conj(cf[k]));
    }
    const auto uv = u.values();
    const auto fv = f.values();
    double cubic = 0.0;
    double u2f = 0.0;
    for (std::size_t j = 0; j < uv.size(); ++j) {
        cubic += uv[j] * uv[j] * uv[j];
        u2f += uv[j] * uv[j] * fv[j];
    }
    cubic *= g.dx();
    u2f *= g.dx();

    const double hs = hs_norm(phi);
    const double dx_hs = dx_hs_norm(phi);
    const double noise_mean_term = hs * hs * mean_value(u);
    return lambda / 3.0 * cubic + dx_hs * dx_hs - noise_mean_term + 2.0 * dxu_dxf - u2f;
}

double agmon_gap(const Field& v)
{
    const double m = mean_value(v);
    std::vector<double> w = v.values();
    for (double& x : w) {
        x -= m;
    }
    const Field centred = Field::from_physical(v.grid(), std::move(w));
    const double l2 = std::sqrt(l2_norm_sq(centred));
    const double dx = std::sqrt(dx_l2_norm_sq(centred));
    return std::sqrt(l2 * dx) - sup_norm(centred);
}

SandwichResult sandwich_check(const Field& v, double C)
{
    if (!(C > 0.0)) {
        throw std::invalid_argument("sandwich constant must be positive");
    }
    const double dx2 = dx_l2_norm_sq(v);
    const double l2 = std::sqrt(l2_norm_sq(v));
    const double I = invariant_I(v);
    const double penalty = C * std::pow(l2, 10.0 / 3.0);
    SandwichResult r;
    r.lower_slack = I - (2.0 / 3.0 * dx2 - penalty);
    r.upper_slack = (4.0 / 3.0 * dx2 + penalty) - I;
    r.lower_ok = r.lower_slack >= 0.0;
    r.upper_ok = r.upper_slack >= 0.0;
    return r;
}

double alpha_bound_ratio(const Field& u, const Field& f, const NoiseOperator& phi, double lambda)
{
    const double a = alpha(u, f, phi, lambda);
    const double l2_sq = l2_norm_sq(u);
    return (std::abs(a) - lambda * dx_l2_norm_sq(u)) / (l2_sq * l2_sq + 1.0);
}

double fit_sandwich_constant(std::span<const Field> fields)
{
    struct Parts {
        double dx2, l2, I;
    };
    std::vector<Parts> parts;
    parts.reserve(fields.size());
    for (const auto& v : fields) {
        parts.push_back({dx_l2_norm_sq(v), std::sqrt(l2_norm_sq(v)), invariant_I(v)});
    }
    const auto holds = [&](double C) {
        for (const auto& p : parts) {
            const double pen = C * std::pow(p.l2, 10.0 / 3.0);
            if (p.I < 2.0 / 3.0 * p.dx2 - pen || p.I > 4.0 / 3.0 * p.dx2 + pen) {
                return false;
            }
        }
        return true;
    };
    return bisect_smallest_constant(holds, 0.0, 1.0);
}

double fit_alpha_constant(std::span<const Field> fields, const Field& f, const NoiseOperator& phi, double lambda)
{
    std::vector<double> ratios;
    ratios.reserve(fields.size());
    for (const auto& u : fields) {
        ratios.push_back(alpha_bound_ratio(u, f, phi, lambda));
    }
    const auto holds = [&](double C) {
        return std::all_of(ratios.begin(), ratios.end(), [C](double r) { return r <= C; });
    };
    return bisect_smallest_constant(holds, 0.0, 1.0);
}

FunctionalSample evaluate_sample(double t, const Field& u, const Field& f, const NoiseOperator& phi, double lambda)
{
    return FunctionalEvaluator(f, phi, lambda)(t, u);
}

FunctionalEvaluator::FunctionalEvaluator(const Field& f, const NoiseOperator& phi, double lambda)
    : grid_(f.grid()),
      f_hat_(f.coefficients()),
      f_values_(f.values()),
      hs_sq_(std::pow(hs_norm(phi), 2)),
      dx_hs_sq_(std::pow(dx_hs_norm(phi), 2)),
      lambda_(lambda)
{
    require_same_grid(f.grid(), phi.grid());
}

FunctionalSample FunctionalEvaluator::operator()(double t, const Field& u) const
{
    require_same_grid(u.grid(), grid_);
    const Grid& g = grid_;
    const auto c = u.coefficients();
    const auto uv = u.values();
    const auto& xi = g.half_wavenumbers();
    FunctionalSample s;
    s.t = t;
    s.l2_sq = spectral_l2_sq(g, c);
    s.dx_l2_sq = spectral_weighted_sq(g, c, 1);
    s.h1_sq = s.l2_sq + s.dx_l2_sq;
    double cubic = 0.0;
    double uf = 0.0;
    double u2f = 0.0;
    double sup = 0.0;
    for (std::size_t j = 0; j < uv.size(); ++j) {
        const double u2 = uv[j] * uv[j];
        cubic += u2 * uv[j];
        uf += uv[j] * f_values_[j];
        u2f += u2 * f_values_[j];
        sup = std::max(sup, std::abs(uv[j]));
    }
    double dxu_dxf = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        dxu_dxf += g.multiplicity(k) * xi[k] * xi[k] * std::real(c[k] * std::conj(f_hat_[k]));
    }
    s.cubic = cubic * g.dx();
    s.uf = uf * g.dx();
    u2f *= g.dx();
    s.sup_abs = sup;
    s.I = s.dx_l2_sq - s.cubic / 3.0;
    const double mean_u = c[0].real() / std::sqrt(g.length());
    s.alpha = lambda_ / 3.0 * s.cubic + dx_hs_sq_ - hs_sq_ * mean_u + 2.0 * dxu_dxf - u2f;
    return s;
}

double X1Components::norm() const
{
    return std::max({sup_t_h1, l2x_sup_t, sup_x_l2t_dx, l4t_sup_x_dx});
}

X1Components x1_components(std::span<const double> times, std::span<const Field> trajectory)
{
    if (times.size() != trajectory.size()) {
        throw std::invalid_argument("x1_norm: times and samples differ in length");
    }
    if (trajectory.size() < 2) {
        throw std::invalid_argument("x1_norm needs at least two samples");
    }
    const Grid& g = trajectory.front().grid();
    const std::size_t n = g.modes();
    std::vector<double> sup_abs(n, 0.0);
    std::vector<double> dx_sq_time(n, 0.0);
    double sup_h1 = 0.0;
    double l4 = 0.0;
    std::vector<double> prev_dx;
    double prev_sup_dx4 = 0.0;
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        const Field& u = trajectory[i];
        require_same_grid(g, u.grid());
        sup_h1 = std::max(sup_h1, std::sqrt(h1_norm_sq(u)));
        const auto uv = u.values();
        const auto dv = derivative(u, 1).values();
        double sup_dx = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            sup_abs[j] = std::max(sup_abs[j], std::abs(uv[j]));
            sup_dx = std::max(sup_dx, std::abs(dv[j]));
        }
        const double sup_dx4 = std::pow(sup_dx, 4);
        if (i > 0) {
            const double h = times[i] - times[i - 1];
            if (!(h > 0.0)) {
                throw std::invalid_argument("x1_norm: sample times must increase");
            }
            for (std::size_t j = 0; j < n; ++j) {
                dx_sq_time[j] += 0.5 * h * (prev_dx[j] * prev_dx[j] + dv[j] * dv[j]);
            }
            l4 += 0.5 * h * (prev_sup_dx4 + sup_dx4);
        }
        prev_dx = dv;
        prev_sup_dx4 = sup_dx4;
    }
    X1Components out;
    out.sup_t_h1 = sup_h1;
    double l2x = 0.0;
    for (double s : sup_abs) {
        l2x += s * s;
    }
    out.l2x_sup_t = std::sqrt(l2x * g.dx());
    out.sup_x_l2t_dx = std::sqrt(*std::max_element(dx_sq_time.begin(), dx_sq_time.end()));
    out.l4t_sup_x_dx = std::pow(l4, 0.25);
    return out;
}

double x1_norm(std::span<const double> times, std::span<const Field> trajectory)
{
    return x1_components(times, trajectory).norm();
}

}  // namespace skdv
