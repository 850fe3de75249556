#include <algorithm>
#include <cmath>
#include <vector>

#include "asd/error.hpp"
#include "asd/learn.hpp"

namespace asd {

double Kernel::operator()(std::span<const double> a, std::span<const double> b) const {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    if (kind == KernelKind::Linear) return dot;
    return std::pow(dot + coef, degree);
}

double SmoModel::decision(std::span<const double> x) const {
    double f = bias;
    for (std::size_t i = 0; i < support_vectors.size(); ++i) {
        f += support_coefficients[i] * kernel(support_vectors[i], x);
    }
    return f;
}

double smo_dual_objective(const EncodedMatrix& m, const Kernel& kernel,
                          std::span<const double> alphas) {
    if (alphas.size() != m.rows) throw Error("multiplier count does not match the data");
    double obj = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) obj += alphas[i];
    for (std::size_t i = 0; i < m.rows; ++i) {
        if (alphas[i] == 0.0) continue;
        for (std::size_t j = 0; j < m.rows; ++j) {
            if (alphas[j] == 0.0) continue;
            obj -= 0.5 * alphas[i] * alphas[j] * m.labels[i] * m.labels[j] *
                   kernel(m.row(i), m.row(j));
        }
    }
    return obj;
}

namespace {

// Pairwise dual ascent state. The error cache holds f(x_i) - y_i for every
// row and is updated incrementally after each accepted step, so both bound
// and non-bound rows read from it.
class Optimizer {
public:
    Optimizer(const EncodedMatrix& m, const SmoConfig& cfg)
        : m_(m), cfg_(cfg), n_(m.rows), gram_(n_ * n_), alpha_(n_, 0.0), error_(n_) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i; j < n_; ++j) {
                const double k = cfg_.kernel(m_.row(i), m_.row(j));
                gram_[i * n_ + j] = k;
                gram_[j * n_ + i] = k;
            }
        }
        // with all multipliers at zero, f(x) = 0 everywhere
        for (std::size_t i = 0; i < n_; ++i) error_[i] = -m_.labels[i];
    }

    void run() {
        std::size_t passes = 0;
        std::size_t changed = 0;
        bool examine_all = true;
        while (changed > 0 || examine_all) {
            if (++passes > cfg_.max_passes) {
                throw Error("margin optimizer exceeded " + std::to_string(cfg_.max_passes) +
                            " passes without converging");
            }
            changed = 0;
            if (examine_all) {
                for (std::size_t i = 0; i < n_; ++i) changed += examine(i);
            } else {
                for (std::size_t i = 0; i < n_; ++i) {
                    if (is_free(i)) changed += examine(i);
                }
            }
            if (examine_all) {
                examine_all = false;
            } else if (changed == 0) {
                examine_all = true;
            }
        }
    }

    // The running threshold is only a per-step heuristic; the certificate
    // interval [b_low, b_high] computed from the multipliers decides both
    // the final threshold and whether a violating pair actually remains.
    // For each row, F_i = y_i - sum_j alpha_j y_j K_ij is the threshold that
    // would put the row exactly on the margin; rows that may still move up
    // force b >= F_i, rows that may move down force b <= F_i.
    struct Certificate {
        double lo = 0.0, hi = 0.0;
        std::size_t arg_lo = 0, arg_hi = 0;
    };

    Certificate certificate() const {
        Certificate cert;
        bool has_lo = false, has_hi = false;
        for (std::size_t i = 0; i < n_; ++i) {
            const double f = b_ - error_[i];  // y_i - sum_j alpha_j y_j K_ij
            const double y = m_.labels[i];
            // classify with the same slack the final snapping uses, so a row
            // numerically at a bound cannot pin the interval as if free
            const bool upper = alpha_[i] > cfg_.c - 1e-12;
            const bool lower = alpha_[i] < 1e-12;
            const bool needs_ge = (y > 0.0 && !upper) || (y < 0.0 && !lower);
            const bool needs_le = (y > 0.0 && !lower) || (y < 0.0 && !upper);
            if (needs_ge && (!has_lo || f > cert.lo)) {
                cert.lo = f;
                cert.arg_lo = i;
                has_lo = true;
            }
            if (needs_le && (!has_hi || f < cert.hi)) {
                cert.hi = f;
                cert.arg_hi = i;
                has_hi = true;
            }
        }
        return cert;
    }

    // Platt's loop can stop while the certificate interval is still open
    // (the shared threshold can mask a violating pair); close it directly.
    void repair() {
        std::size_t passes = 0;
        while (true) {
            const Certificate cert = certificate();
            if (cert.lo - cert.hi <= 2.0 * cfg_.tol) break;
            if (++passes > cfg_.max_passes ||
                !take_step(cert.arg_lo, cert.arg_hi)) {
                break;
            }
        }
    }

    SmoModel finish() {
        const Certificate cert = certificate();
        SmoModel model;
        model.c = cfg_.c;
        model.kernel = cfg_.kernel;
        model.bias = 0.5 * (cert.lo + cert.hi);
        model.objective_trace = std::move(trace_);
        for (double& a : alpha_) {
            // snap numerically-dirty multipliers back onto the box
            if (a < 1e-12) a = 0.0;
            if (a > cfg_.c - 1e-12) a = cfg_.c;
        }
        model.alphas = alpha_;
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] == 0.0) continue;
            model.support_rows.push_back(i);
            const auto row = m_.row(i);
            model.support_vectors.emplace_back(row.begin(), row.end());
            model.support_coefficients.push_back(alpha_[i] * m_.labels[i]);
        }
        return model;
    }

private:
    double k(std::size_t i, std::size_t j) const { return gram_[i * n_ + j]; }
    bool is_free(std::size_t i) const { return alpha_[i] > 0.0 && alpha_[i] < cfg_.c; }

    std::size_t examine(std::size_t i2) {
        const double y2 = m_.labels[i2];
        const double a2 = alpha_[i2];
        const double r2 = error_[i2] * y2;
        const bool violates = (r2 < -cfg_.tol && a2 < cfg_.c) || (r2 > cfg_.tol && a2 > 0.0);
        if (!violates) return 0;

        // best partner first: maximal |E1 - E2| over the free rows
        std::size_t best = n_;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (i == i2 || !is_free(i)) continue;
            const double gap = std::fabs(error_[i] - error_[i2]);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n_ && take_step(best, i2)) return 1;
        for (std::size_t i1 = 0; i1 < n_; ++i1) {
            if (i1 != i2 && is_free(i1) && take_step(i1, i2)) return 1;
        }
        for (std::size_t i1 = 0; i1 < n_; ++i1) {
            if (i1 != i2 && take_step(i1, i2)) return 1;
        }
        return 0;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        const double y1 = m_.labels[i1];
        const double y2 = m_.labels[i2];
        const double alph1 = alpha_[i1];
        const double alph2 = alpha_[i2];
        const double e1 = error_[i1];
        const double e2 = error_[i2];
        const double s = y1 * y2;
        const double c = cfg_.c;

        double lo, hi;
        if (y1 != y2) {
            lo = std::max(0.0, alph2 - alph1);
            hi = std::min(c, c + alph2 - alph1);
        } else {
            lo = std::max(0.0, alph1 + alph2 - c);
            hi = std::min(c, alph1 + alph2);
        }
        if (lo >= hi) return false;

        const double k11 = k(i1, i1);
        const double k12 = k(i1, i2);
        const double k22 = k(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;

        double a2;
        if (eta > 0.0) {
            a2 = std::clamp(alph2 + y2 * (e1 - e2) / eta, lo, hi);
        } else {
            // flat or concave direction: compare the dual at both ends
            const double f1 = e1 + y1;  // f(x1)
            const double f2 = e2 + y2;
            const double v1 = f1 - alph1 * y1 * k11 - alph2 * y2 * k12 - b_;
            const double v2 = f2 - alph1 * y1 * k12 - alph2 * y2 * k22 - b_;
            const auto dual_at = [&](double cand) {
                const double a1 = alph1 + s * (alph2 - cand);
                return a1 + cand - 0.5 * k11 * a1 * a1 - 0.5 * k22 * cand * cand -
                       s * k12 * a1 * cand - y1 * v1 * a1 - y2 * v2 * cand;
            };
            const double at_lo = dual_at(lo);
            const double at_hi = dual_at(hi);
            if (at_lo > at_hi + 1e-12) {
                a2 = lo;
            } else if (at_hi > at_lo + 1e-12) {
                a2 = hi;
            } else {
                return false;
            }
        }
        if (std::fabs(a2 - alph2) < 1e-12 * (a2 + alph2 + 1e-12)) return false;

        double a1 = alph1 + s * (alph2 - a2);
        a1 = std::clamp(a1, 0.0, c);

        const double d1 = a1 - alph1;
        const double d2 = a2 - alph2;
        const double b1 = b_ - e1 - d1 * y1 * k11 - d2 * y2 * k12;
        const double b2 = b_ - e2 - d1 * y1 * k12 - d2 * y2 * k22;
        double b_new;
        if (a1 > 0.0 && a1 < c) {
            b_new = b1;
        } else if (a2 > 0.0 && a2 < c) {
            b_new = b2;
        } else {
            b_new = 0.5 * (b1 + b2);
        }

        const double db = b_new - b_;
        for (std::size_t i = 0; i < n_; ++i) {
            error_[i] += d1 * y1 * k(i1, i) + d2 * y2 * k(i2, i) + db;
        }
        alpha_[i1] = a1;
        alpha_[i2] = a2;
        b_ = b_new;

        if (cfg_.record_objective) trace_.push_back(current_objective());
        return true;
    }

    double current_objective() const {
        double obj = 0.0;
        for (std::size_t i = 0; i < n_; ++i) obj += alpha_[i];
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] == 0.0) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (alpha_[j] == 0.0) continue;
                obj -= 0.5 * alpha_[i] * alpha_[j] * m_.labels[i] * m_.labels[j] * k(i, j);
            }
        }
        return obj;
    }

    const EncodedMatrix& m_;
    const SmoConfig& cfg_;
    std::size_t n_;
    std::vector<double> gram_;
    std::vector<double> alpha_;
    std::vector<double> error_;
    std::vector<double> trace_;
    double b_ = 0.0;
};

}  // namespace

SmoModel fit_smo(const EncodedMatrix& m, const SmoConfig& config) {
    if (m.rows < 2) throw Error("margin training needs at least two records");
    if (!(config.c > 0.0)) throw Error("box constraint must be positive");
    bool pos = false, neg = false;
    for (double y : m.labels) {
        if (y == 1.0) pos = true;
        else if (y == -1.0) neg = true;
        else throw Error("margin training needs -1/+1 labels");
    }
    if (!pos || !neg) throw Error("margin training needs both classes present");
    for (double v : m.values) {
        if (!std::isfinite(v)) throw Error("non-finite feature value");
    }

    Optimizer opt(m, config);
    opt.run();
    opt.repair();
    return opt.finish();
}

}  // namespace asd
