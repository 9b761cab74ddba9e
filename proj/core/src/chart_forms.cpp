#include "gerbeloop/chart_forms.hpp"

#include <cmath>
#include <random>

namespace gerbeloop {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels < 2) panels = 2;
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return acc * h / 3.0;
}

} // namespace

double transgress_form(const ChartForm2& rho, const ChartLoop& loop,
                       const std::function<Eigen::Vector2d(double)>& variation, int panels) {
    if (panels % 2) ++panels;
    auto f = [&](double t) {
        Eigen::Vector2d p = loop.pos(t);
        Eigen::Vector2d d = loop.vel(t);
        Eigen::Vector2d v = variation(t);
        return rho.coef(p.x(), p.y()) * (d.x() * v.y() - d.y() * v.x());
    };
    return simpson(f, 0.0, 1.0, panels);
}

double FourierForm::eval(double x, double y) const {
    double acc = 0.0;
    for (const Mode& md : modes) {
        const double th = kTwoPi * (md.m * x + md.n * y);
        acc += md.ac * std::cos(th) + md.as * std::sin(th);
    }
    return acc;
}

Eigen::Vector2d FourierForm::potential(double x, double y) const {
    Eigen::Vector2d lam = Eigen::Vector2d::Zero();
    for (const Mode& md : modes) {
        const double th = kTwoPi * (md.m * x + md.n * y);
        const double anti = md.ac * std::sin(th) - md.as * std::cos(th);
        if (md.m != 0)
            lam.y() += anti / (kTwoPi * md.m);
        else if (md.n != 0)
            lam.x() -= anti / (kTwoPi * md.n);
    }
    return lam;
}

ChartForm2 FourierForm::form() const {
    FourierForm copy = *this;
    return {[copy](double x, double y) { return copy.eval(x, y); }};
}

FourierForm sample_fourier_form(unsigned seed, int max_mode, double amp) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coeff(-amp, amp);
    FourierForm F;
    for (int m = -max_mode; m <= max_mode; ++m)
        for (int n = 0; n <= max_mode; ++n) {
            if (n == 0 && m <= 0) continue;
            F.modes.push_back({m, n, coeff(rng), coeff(rng)});
        }
    return F;
}

double segment_potential_integral(const FourierForm& F, const Eigen::Vector2d& a,
                                  const Eigen::Vector2d& b, int panels) {
    if (panels % 2) ++panels;
    Eigen::Vector2d d = b - a;
    auto f = [&](double t) {
        Eigen::Vector2d p = a + t * d;
        return F.potential(p.x(), p.y()).dot(d);
    };
    return simpson(f, 0.0, 1.0, panels);
}

double rect_form_integral(const FourierForm& F, const Eigen::Vector2d& lo,
                          const Eigen::Vector2d& hi, int panels) {
    if (panels % 2) ++panels;
    auto inner = [&](double y) {
        return simpson([&](double x) { return F.eval(x, y); }, lo.x(), hi.x(), panels) ;
    };
    return simpson(inner, lo.y(), hi.y(), panels);
}

} // namespace gerbeloop
