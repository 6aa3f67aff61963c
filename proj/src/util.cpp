#include "rmf/util.hpp"

namespace rmf {

const std::vector<std::pair<double, double>>& gauss_legendre_32() {
    // Abscissae/weights for n=32 on [-1,1], 20 significant digits.
    static const std::vector<std::pair<double, double>> table = [] {
        static const double x[16] = {
            0.048307665687738316235, 0.144471961582796493485, 0.239287362252137074545,
            0.331868602282127649780, 0.421351276130635345364, 0.506899908932229390024,
            0.587715757240762329041, 0.663044266930215200975, 0.732182118740289680387,
            0.794483795967942406963, 0.849367613732569970134, 0.896321155766052123965,
            0.934906075937739689171, 0.964762255587506430774, 0.985611511545268335400,
            0.997263861849481563545};
        static const double w[16] = {
            0.096540088514727800567, 0.095638720079274859419, 0.093844399080804565639,
            0.091173878695763884713, 0.087652093004403811143, 0.083311924226946755222,
            0.078193895787070306472, 0.072345794108848506225, 0.065822222776361846838,
            0.058684093478535547145, 0.050998059262376176196, 0.042835898022226680657,
            0.034273862913021433103, 0.025392065309262059456, 0.016274394730905670605,
            0.007018610009470096600};
        std::vector<std::pair<double, double>> t;
        t.reserve(32);
        for (int i = 15; i >= 0; --i) t.emplace_back(-x[i], w[i]);
        for (int i = 0; i < 16; ++i) t.emplace_back(x[i], w[i]);
        return t;
    }();
    return table;
}

double gauss_quad(const std::function<double(double)>& f, double a, double b, int nseg) {
    if (!(b > a)) return 0.0;
    const auto& gl = gauss_legendre_32();
    KahanSum acc;
    const double h = (b - a) / nseg;
    for (int s = 0; s < nseg; ++s) {
        const double mid = a + (s + 0.5) * h;
        const double rad = 0.5 * h;
        for (const auto& [xi, wi] : gl) acc.add(rad * wi * f(mid + rad * xi));
    }
    return acc.value();
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b,
               double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = simpson(f, a, fa, b, fb, m, fm);
    return simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe r;
    r.n = xs.size();
    if (r.n == 0) return r;
    KahanSum s;
    for (double x : xs) s.add(x);
    r.mean = s.value() / static_cast<double>(r.n);
    if (r.n > 1) {
        KahanSum v;
        for (double x : xs) v.add((x - r.mean) * (x - r.mean));
        r.se = std::sqrt(v.value() / (static_cast<double>(r.n) * (static_cast<double>(r.n) - 1)));
    }
    return r;
}

}  // namespace rmf
