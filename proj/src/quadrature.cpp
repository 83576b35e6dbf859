#include "nvbroad/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "nvbroad/units.hpp"

namespace nvbroad::quad {
namespace {

// Kronrod abscissae (descending); odd indices are shared with the 7-point
// Gauss rule.
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

Interval gk15(const Integrand& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * wgk[7];
    double gauss = fc * wg[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * xgk[i];
        const double pair = f(centre - dx) + f(centre + dx);
        kronrod += wgk[i] * pair;
        if (i % 2 == 1) gauss += wg[i / 2] * pair;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opts) {
    Result res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::priority_queue<Interval> heap;
    std::vector<Interval> settled;
    heap.push(gk15(f, a, b));
    res.evaluations = 15;
    double value = heap.top().value;
    double error = heap.top().error;

    auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(value)); };
    constexpr double eps = std::numeric_limits<double>::epsilon();

    while (error > target() && static_cast<int>(heap.size()) < opts.max_intervals) {
        const Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (std::abs(worst.b - worst.a) <= 64.0 * eps * std::max(std::abs(worst.a), std::abs(worst.b))) {
            // cannot bisect further in floating point
            settled.push_back(worst);
            error -= worst.error;
            if (heap.empty()) break;
            continue;
        }
        const Interval left = gk15(f, worst.a, mid);
        const Interval right = gk15(f, mid, worst.b);
        res.evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    CompensatedSum<> v;
    CompensatedSum<> e;
    for (const auto& s : settled) {
        v.add(s.value);
        e.add(s.error);
    }
    while (!heap.empty()) {
        v.add(heap.top().value);
        e.add(heap.top().error);
        heap.pop();
    }
    res.value = v.value();
    res.error = e.value();
    res.converged = res.error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(res.value)) * 1.0000001
                    || res.error <= 64.0 * eps * std::abs(res.value);
    return res;
}

Result integrate_upper(const Integrand& f, double a, double scale, const Options& opts) {
    auto g = [&](double t) {
        const double s = 1.0 - t;
        return f(a + scale * t / s) * scale / (s * s);
    };
    return integrate(g, 0.0, 1.0, opts);
}

Result integrate_real_line(const Integrand& f, double scale, const Options& opts) {
    auto g = [&](double t) {
        const double s = 1.0 - t * t;
        return f(scale * t / s) * scale * (1.0 + t * t) / (s * s);
    };
    return integrate(g, -1.0, 1.0, opts);
}

}  // namespace nvbroad::quad
