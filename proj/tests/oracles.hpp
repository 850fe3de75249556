// Independent reference implementations used only by the tests. Each one
// recomputes a quantity along a different code path than the library
// (direct formulas, numeric integration, brute-force enumeration) so that
// agreement is meaningful.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracle {

// Adaptive Simpson quadrature with absolute tolerance `tol`.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 60);
}

// Student-t density with `dof` degrees of freedom.
inline double t_density(double u, double dof) {
    const double ln = std::lgamma((dof + 1.0) / 2.0) - std::lgamma(dof / 2.0) -
                      0.5 * std::log(dof * M_PI) -
                      (dof + 1.0) / 2.0 * std::log1p(u * u / dof);
    return std::exp(ln);
}

// Two-tailed tail mass 2*P(T > |t|) by numeric integration: the tail is
// mapped onto [0,1) with u = |t| + s/(1-s).
inline double t_two_tailed(double t, double dof) {
    if (!std::isfinite(t)) return 0.0;
    const double start = std::fabs(t);
    const auto integrand = [&](double s) {
        const double one_minus = 1.0 - s;
        const double u = start + s / one_minus;
        return t_density(u, dof) / (one_minus * one_minus);
    };
    return 2.0 * integrate(integrand, 0.0, 1.0 - 1e-12, 1e-13);
}

// Product-moment correlation by the raw-sums formula (no centering pass).
inline double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3) throw std::invalid_argument("bad vectors");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    const double num = n * sxy - sx * sy;
    const double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    return num / den;
}

inline double pearson_p(std::span<const double> x, std::span<const double> y) {
    const double r = pearson_r(x, y);
    const double dof = static_cast<double>(x.size()) - 2.0;
    if (std::fabs(r) >= 1.0) return 0.0;
    const double t = r * std::sqrt(dof / (1.0 - r * r));
    return t_two_tailed(t, dof);
}

// Maximum of the SVM dual by exhaustive analytic pair sweeps: every (i, j)
// pair is solved exactly in turn, holding the rest fixed and respecting the
// box [0, C] and the equality constraint, until a full sweep improves the
// objective by less than `rest`. No working-set heuristics, caches, or
// shared code with the trained implementation.
struct SvmDualOracle {
    std::vector<double> alphas;
    double objective = 0.0;
};

inline SvmDualOracle svm_dual_max(const std::vector<std::vector<double>>& x,
                                  const std::vector<double>& y, double c,
                                  const std::function<double(const std::vector<double>&,
                                                             const std::vector<double>&)>& kernel,
                                  double rest = 1e-12, std::size_t max_sweeps = 200000) {
    const std::size_t n = x.size();
    std::vector<double> gram(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) gram[i * n + j] = kernel(x[i], x[j]);
    }
    std::vector<double> a(n, 0.0);
    const auto dual = [&] {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            v += a[i];
            for (std::size_t j = 0; j < n; ++j) {
                v -= 0.5 * a[i] * a[j] * y[i] * y[j] * gram[i * n + j];
            }
        }
        return v;
    };
    double value = dual();
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                // move along a_i' = a_i + y_i*y_j*(a_j - t), a_j' = t
                const double s = y[i] * y[j];
                const double gamma = a[i] + s * a[j];
                double lo = 0.0, hi = c;
                if (s > 0.0) {
                    lo = std::max(0.0, gamma - c);
                    hi = std::min(c, gamma);
                } else {
                    lo = std::max(0.0, -gamma);
                    hi = std::min(c, c - gamma);
                }
                if (hi - lo < 1e-15) continue;
                // dual restricted to t = a_j' is a concave quadratic; take its
                // vertex when curvature allows, else the better endpoint
                const double kii = gram[i * n + i], kjj = gram[j * n + j], kij = gram[i * n + j];
                const double eta = kii + kjj - 2.0 * kij;
                double fi = 0.0, fj = 0.0;  // sum_k a_k y_k K(k, .) excluding i, j
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == i || k == j) continue;
                    fi += a[k] * y[k] * gram[k * n + i];
                    fj += a[k] * y[k] * gram[k * n + j];
                }
                const auto restricted = [&](double t) {
                    const double ai = gamma - s * t;
                    return ai + t -
                           0.5 * (ai * ai * kii + t * t * kjj) - s * ai * t * kij -
                           y[i] * ai * fi - y[j] * t * fj;
                };
                double best = a[j];
                if (eta > 0.0) {
                    const double grad = 1.0 - s - y[j] * (fj - fi) -
                                        s * gamma * kij + s * gamma * kii -
                                        a[j] * eta;
                    best = std::clamp(a[j] + grad / eta, lo, hi);
                } else {
                    best = restricted(lo) >= restricted(hi) ? lo : hi;
                }
                if (restricted(best) > restricted(a[j])) {
                    a[i] = gamma - s * best;
                    a[j] = best;
                }
            }
        }
        const double next = dual();
        if (next - value < rest) {
            value = next;
            break;
        }
        value = next;
    }
    return {std::move(a), value};
}

}  // namespace oracle
