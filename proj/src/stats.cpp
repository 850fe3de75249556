#include "asd/stats.hpp"

#include <algorithm>
#include <cmath>

#include "asd/error.hpp"
#include "asd/screening.hpp"

namespace asd {

namespace {

// Continued fraction for the regularized incomplete beta, evaluated with
// the modified Lentz scheme. Converges quickly when x < (a+1)/(a+b+2).
double beta_continued_fraction(double a, double b, double x) {
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw Error("incomplete beta failed to converge");
}

double column_as_double(const Dataset& d, std::size_t col, const Record& rec) {
    const Cell& cell = rec.cells[col];
    if (cell.is_missing()) throw Error("missing value in '" + d.schema[col].name + "'");
    switch (d.schema[col].kind) {
        case AttributeKind::BinaryItem:
        case AttributeKind::Numeric:
            return cell.number();
        case AttributeKind::Categorical:
            return static_cast<double>(cell.category());
        case AttributeKind::Class:
            return cell.label() ? 1.0 : 0.0;
    }
    return 0.0;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error("incomplete beta needs positive parameters");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double dof) {
    if (!(dof > 0.0)) throw Error("degrees of freedom must be positive");
    if (!std::isfinite(t)) return 0.0;
    const double x = dof / (dof + t * t);
    return regularized_incomplete_beta(dof / 2.0, 0.5, x);
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error("correlation needs vectors of equal length");
    const std::size_t n = x.size();
    if (n < 3) throw Error("correlation needs at least 3 observations");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error("correlation undefined for a constant vector");
    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);

    CorrelationResult out;
    out.r = r;
    out.n = n;
    const double dof = static_cast<double>(n - 2);
    if (std::fabs(r) >= 1.0) {
        out.p = 0.0;
    } else {
        const double t = r * std::sqrt(dof / (1.0 - r * r));
        out.p = student_t_two_tailed(t, dof);
    }
    return out;
}

double entropy(std::span<const std::size_t> counts) {
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    if (total == 0) throw Error("entropy of an empty count vector");
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

double chi_squared(const std::vector<std::vector<std::size_t>>& table) {
    if (table.empty() || table.front().empty()) throw Error("empty contingency table");
    const std::size_t rows = table.size();
    const std::size_t cols = table.front().size();
    std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        if (table[i].size() != cols) throw Error("ragged contingency table");
        for (std::size_t j = 0; j < cols; ++j) {
            const auto v = static_cast<double>(table[i][j]);
            row_sum[i] += v;
            col_sum[j] += v;
            total += v;
        }
    }
    for (double s : row_sum) {
        if (s == 0.0) throw Error("contingency table has a zero row sum");
    }
    for (double s : col_sum) {
        if (s == 0.0) throw Error("contingency table has a zero column sum");
    }
    double stat = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const double expected = row_sum[i] * col_sum[j] / total;
            const double diff = static_cast<double>(table[i][j]) - expected;
            stat += diff * diff / expected;
        }
    }
    return stat;
}

std::string strength_label(double p, double r) {
    if (p >= 0.05) return "no significant";
    if (std::fabs(r) <= 0.25) return "negligible";
    return "significant";
}

std::vector<CorrelationRow> correlation_table(const Dataset& d) {
    const auto class_col = static_cast<std::size_t>(d.require_class_index());
    std::vector<double> cls;
    cls.reserve(d.size());
    for (const Record& rec : d.records) cls.push_back(column_as_double(d, class_col, rec));

    std::vector<CorrelationRow> out;
    for (DemographicField field : {DemographicField::Jaundice, DemographicField::FamilyAsd,
                                   DemographicField::Ethnicity}) {
        const int idx = find_demographic(d, field);
        if (idx < 0) continue;
        std::vector<double> values;
        values.reserve(d.size());
        for (const Record& rec : d.records) {
            values.push_back(column_as_double(d, static_cast<std::size_t>(idx), rec));
        }
        CorrelationRow row;
        row.variable = demographic_label(field);
        row.result = pearson(values, cls);
        row.strength = strength_label(row.result.p, row.result.r);
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace asd
