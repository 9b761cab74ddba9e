#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace gerbeloop {

/* 2-form coef(x, y) dx^dy on the flat unit-square chart of the torus. */
struct ChartForm2 {
    std::function<double(double, double)> coef;
};

/* Loop on the chart, parametrized over [0, 1]. */
struct ChartLoop {
    std::function<Eigen::Vector2d(double)> pos;
    std::function<Eigen::Vector2d(double)> vel;
};

/* Transgressed 1-form of rho evaluated on a variation field along the loop:
 * the circle quadrature of rho(loop'(t), v(t)) dt by composite Simpson. */
double transgress_form(const ChartForm2& rho, const ChartLoop& loop,
                       const std::function<Eigen::Vector2d(double)>& variation,
                       int panels = 128);

/* Mean-free trigonometric 2-form with a closed-form periodic potential. */
struct FourierForm {
    struct Mode {
        int m = 0, n = 0;
        double ac = 0.0, as = 0.0;
    };
    std::vector<Mode> modes;

    double eval(double x, double y) const;
    /* lambda = P dx + Q dy with dQ/dx - dP/dy = eval. */
    Eigen::Vector2d potential(double x, double y) const;
    ChartForm2 form() const;
};

FourierForm sample_fourier_form(unsigned seed, int max_mode = 2, double amp = 1.0);

/* Line integral of the potential along the straight segment a -> b. */
double segment_potential_integral(const FourierForm& F, const Eigen::Vector2d& a,
                                  const Eigen::Vector2d& b, int panels = 64);

/* Integral of the form over an axis-aligned rectangle by 2D composite
 * Simpson quadrature. */
double rect_form_integral(const FourierForm& F, const Eigen::Vector2d& lo,
                          const Eigen::Vector2d& hi, int panels = 32);

} // namespace gerbeloop
