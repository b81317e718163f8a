#include "gfa/numeric.hpp"

#include <array>
#include <vector>

namespace gfa {

namespace {

Complex simpson_rec(const std::function<Complex(double)>& f, double a, double b, Complex fa,
                    Complex fm, Complex fb, Complex whole, double tol, double noise_floor,
                    int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    Complex flm = f(lm);
    Complex frm = f(rm);
    Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    Complex delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * std::max(tol, noise_floor)) {
        return left + right + delta / 15.0;
    }
    double child_tol = std::max(0.5 * tol, noise_floor);
    return simpson_rec(f, a, m, fa, flm, fm, left, child_tol, noise_floor, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, child_tol, noise_floor, depth - 1);
}

}  // namespace

Complex adaptive_simpson(const std::function<Complex(double)>& f, double a, double b,
                         double rel_tol, double abs_floor, int max_depth) {
    if (a == b) return {0.0, 0.0};
    Complex fa = f(a), fb = f(b);
    double m = 0.5 * (a + b);
    Complex fm = f(m);
    // Probe a few interior points for the magnitude scale; functions peaked
    // away from endpoints/midpoint would otherwise see a zero tolerance.
    double mag = std::max({std::abs(fa), std::abs(fm), std::abs(fb)});
    for (double t : {0.1, 0.3, 0.7, 0.9}) {
        mag = std::max(mag, std::abs(f(a + t * (b - a))));
    }
    Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double scale = mag * std::abs(b - a);
    double tol = std::max(rel_tol * std::max(scale, std::abs(whole)), abs_floor);
    // Below roundoff of the accumulated sum no refinement can help.
    double noise_floor = std::max(1e-16 * scale, 1e-305);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, noise_floor, max_depth);
}

Complex composite_simpson(const std::function<Complex(double)>& f, double a, double b, int n) {
    if (n < 2) n = 2;
    if (n % 2) ++n;
    double h = (b - a) / n;
    Complex acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels) {
    // 16-point Gauss-Legendre nodes/weights on [-1, 1] (symmetric halves).
    static const std::array<double, 8> xs = {
        0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
        0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
    static const std::array<double, 8> ws = {
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
        0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
    double total = 0.0;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        double c = lo + 0.5 * h;
        double r = 0.5 * h;
        double acc = 0.0;
        for (int i = 0; i < 8; ++i) {
            acc += ws[i] * (f(c + r * xs[i]) + f(c - r * xs[i]));
        }
        total += acc * r;
    }
    return total;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(Error::Kind::InvalidInput, "fit_line needs >= 2 matched points");
    }
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw Error(Error::Kind::InvalidInput, "degenerate abscissae in fit_line");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    for (size_t i = 0; i < x.size(); ++i) {
        fit.max_residual =
            std::max(fit.max_residual, std::abs(y[i] - (fit.slope * x[i] + fit.intercept)));
    }
    return fit;
}

}  // namespace gfa
