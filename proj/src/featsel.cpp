#include "asd/featsel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "asd/error.hpp"
#include "asd/rng.hpp"
#include "asd/stats.hpp"

namespace asd {

namespace {

constexpr int kNumericBins = 10;

// Integer value ids per record for one attribute: binary 0/1, categorical
// by index, numerics binned equal-width over the observed range.
struct Discretized {
    std::vector<int> values;
    int value_count = 0;
};

double cell_as_double(const Dataset& d, std::size_t attr, const Record& rec) {
    const Cell& cell = rec.cells[attr];
    if (cell.is_missing()) {
        throw Error("missing value in '" + d.schema[attr].name + "' (preprocess first)");
    }
    switch (d.schema[attr].kind) {
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

Discretized discretize(const Dataset& d, std::size_t attr) {
    Discretized out;
    out.values.reserve(d.size());
    const AttributeSchema& schema = d.schema[attr];
    switch (schema.kind) {
        case AttributeKind::BinaryItem: {
            for (const Record& rec : d.records) {
                out.values.push_back(cell_as_double(d, attr, rec) != 0.0 ? 1 : 0);
            }
            out.value_count = 2;
            break;
        }
        case AttributeKind::Categorical: {
            for (const Record& rec : d.records) {
                out.values.push_back(static_cast<int>(cell_as_double(d, attr, rec)));
            }
            out.value_count = static_cast<int>(schema.categories.size());
            break;
        }
        case AttributeKind::Numeric: {
            double lo = 0.0, hi = 0.0;
            bool seen = false;
            for (const Record& rec : d.records) {
                const double v = cell_as_double(d, attr, rec);
                if (!seen) {
                    lo = hi = v;
                    seen = true;
                } else {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
            const double width = hi - lo;
            for (const Record& rec : d.records) {
                const double v = cell_as_double(d, attr, rec);
                const int bin = width == 0.0
                                    ? 0
                                    : std::min(kNumericBins - 1,
                                               static_cast<int>((v - lo) / width * kNumericBins));
                out.values.push_back(bin);
            }
            out.value_count = width == 0.0 ? 1 : kNumericBins;
            break;
        }
        case AttributeKind::Class:
            throw Error("cannot discretize the class attribute");
    }
    return out;
}

std::vector<int> class_vector(const Dataset& d) {
    const auto cls = static_cast<std::size_t>(d.require_class_index());
    std::vector<int> out;
    out.reserve(d.size());
    for (const Record& rec : d.records) {
        const Cell& cell = rec.cells[cls];
        if (cell.is_missing()) throw Error("missing class label");
        out.push_back(cell.label() ? 1 : 0);
    }
    return out;
}

std::vector<std::size_t> feature_columns(const Dataset& d) {
    if (d.records.empty()) throw Error("cannot rank an empty dataset");
    std::vector<std::size_t> cols;
    for (std::size_t a = 0; a < d.schema.size(); ++a) {
        if (d.schema[a].kind != AttributeKind::Class) cols.push_back(a);
    }
    if (cols.empty()) throw Error("dataset has no feature attributes");
    return cols;
}

FeatureRanking finish(const Dataset& d, RankMethod method,
                      const std::vector<std::size_t>& cols, const std::vector<double>& scores) {
    std::vector<std::size_t> order(cols.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    FeatureRanking out;
    out.method = method;
    for (std::size_t i : order) {
        out.entries.push_back({d.schema[cols[i]].name, scores[i]});
    }
    return out;
}

// value-by-class counts; rows with no observations dropped
std::vector<std::vector<std::size_t>> contingency(const Discretized& a,
                                                  const std::vector<int>& cls) {
    std::vector<std::vector<std::size_t>> table(static_cast<std::size_t>(a.value_count),
                                                std::vector<std::size_t>(2, 0));
    for (std::size_t r = 0; r < cls.size(); ++r) {
        ++table[static_cast<std::size_t>(a.values[r])][static_cast<std::size_t>(cls[r])];
    }
    std::erase_if(table, [](const std::vector<std::size_t>& row) {
        return row[0] + row[1] == 0;
    });
    return table;
}

}  // namespace

std::string rank_method_name(RankMethod m) {
    switch (m) {
        case RankMethod::InfoGain: return "InfoGain";
        case RankMethod::ChiSquared: return "ChiSquared";
        case RankMethod::Correlation: return "Correlation";
        case RankMethod::OneR: return "OneR";
        case RankMethod::ReliefF: return "ReliefF";
    }
    return "InfoGain";
}

std::optional<RankMethod> rank_method_from_name(std::string_view name) {
    const std::string c = canonical_name(name);
    for (RankMethod m : kAllRankMethods) {
        if (c == canonical_name(rank_method_name(m))) return m;
    }
    if (c == "informationgain") return RankMethod::InfoGain;
    if (c == "chisquare" || c == "chi2") return RankMethod::ChiSquared;
    if (c == "1r" || c == "onerule") return RankMethod::OneR;
    return std::nullopt;
}

FeatureRanking rank_info_gain(const Dataset& d) {
    const std::vector<std::size_t> cols = feature_columns(d);
    const std::vector<int> cls = class_vector(d);
    const std::size_t n = cls.size();
    std::vector<std::size_t> class_counts(2, 0);
    for (int c : cls) ++class_counts[static_cast<std::size_t>(c)];
    const double class_entropy =
        (class_counts[0] == 0 || class_counts[1] == 0) ? 0.0 : entropy(class_counts);

    std::vector<double> scores;
    for (std::size_t a : cols) {
        const Discretized disc = discretize(d, a);
        double conditional = 0.0;
        for (const auto& row : contingency(disc, cls)) {
            const std::size_t total = row[0] + row[1];
            conditional += static_cast<double>(total) / static_cast<double>(n) * entropy(row);
        }
        scores.push_back(class_entropy - conditional);
    }
    return finish(d, RankMethod::InfoGain, cols, scores);
}

FeatureRanking rank_chi_squared(const Dataset& d) {
    const std::vector<std::size_t> cols = feature_columns(d);
    const std::vector<int> cls = class_vector(d);
    const bool both_classes =
        std::count(cls.begin(), cls.end(), 1) != 0 && std::count(cls.begin(), cls.end(), 0) != 0;

    std::vector<double> scores;
    for (std::size_t a : cols) {
        if (!both_classes) {
            scores.push_back(0.0);
            continue;
        }
        scores.push_back(chi_squared(contingency(discretize(d, a), cls)));
    }
    return finish(d, RankMethod::ChiSquared, cols, scores);
}

FeatureRanking rank_correlation(const Dataset& d) {
    const std::vector<std::size_t> cols = feature_columns(d);
    const std::vector<int> cls = class_vector(d);
    std::vector<double> y(cls.begin(), cls.end());
    const bool class_constant =
        std::all_of(cls.begin(), cls.end(), [&](int c) { return c == cls.front(); });

    std::vector<double> scores;
    std::vector<double> x(d.size());
    for (std::size_t a : cols) {
        for (std::size_t r = 0; r < d.size(); ++r) x[r] = cell_as_double(d, a, d.records[r]);
        const bool constant =
            std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
        scores.push_back(class_constant || constant ? 0.0 : std::fabs(pearson(x, y).r));
    }
    return finish(d, RankMethod::Correlation, cols, scores);
}

FeatureRanking rank_one_r(const Dataset& d) {
    const std::vector<std::size_t> cols = feature_columns(d);
    const std::vector<int> cls = class_vector(d);
    const auto n = static_cast<double>(cls.size());

    std::vector<double> scores;
    for (std::size_t a : cols) {
        std::size_t correct = 0;
        for (const auto& row : contingency(discretize(d, a), cls)) {
            // majority vote per value; a tie predicts "no" (row[0])
            correct += row[1] > row[0] ? row[1] : row[0];
        }
        scores.push_back(static_cast<double>(correct) / n);
    }
    return finish(d, RankMethod::OneR, cols, scores);
}

FeatureRanking rank_relief_f(const Dataset& d, const ReliefFConfig& config) {
    const std::vector<std::size_t> cols = feature_columns(d);
    const std::vector<int> cls = class_vector(d);
    const std::size_t n = d.size();
    const std::size_t k = config.neighbors;
    if (k < 1) throw Error("neighbor count must be at least 1");
    for (int label : {0, 1}) {
        const auto members =
            static_cast<std::size_t>(std::count(cls.begin(), cls.end(), label));
        if (members < k + 1) {
            throw Error("class '" + std::string(label ? "yes" : "no") + "' has " +
                        std::to_string(members) + " records, fewer than the " +
                        std::to_string(k + 1) + " the neighbor search needs");
        }
    }

    // Per-record numeric view plus per-attribute ranges for the diff metric.
    const std::size_t width = cols.size();
    std::vector<double> vals(n * width);
    std::vector<double> range(width, 0.0);
    std::vector<bool> numeric(width, false);
    for (std::size_t j = 0; j < width; ++j) {
        const std::size_t a = cols[j];
        numeric[j] = d.schema[a].kind == AttributeKind::Numeric;
        double lo = 0.0, hi = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double v = cell_as_double(d, a, d.records[r]);
            vals[r * width + j] = v;
            if (r == 0) {
                lo = hi = v;
            } else {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        range[j] = hi - lo;
    }
    const auto diff = [&](std::size_t j, double a, double b) {
        if (numeric[j]) return range[j] == 0.0 ? 0.0 : std::fabs(a - b) / range[j];
        return a == b ? 0.0 : 1.0;
    };

    const std::size_t m = (config.samples == 0 || config.samples > n) ? n : config.samples;
    Rng rng(config.seed);

    std::vector<double> weights(width, 0.0);
    std::vector<std::vector<double>> diffs(n, std::vector<double>(width));
    std::vector<double> dist(n, 0.0);
    std::vector<std::size_t> hits, misses;
    const auto closer = [&](std::size_t a, std::size_t b) {
        if (dist[a] != dist[b]) return dist[a] < dist[b];
        return diffs[a] < diffs[b];  // order-independent tie break
    };

    const double scale = 1.0 / (static_cast<double>(m) * static_cast<double>(k));
    for (std::size_t s = 0; s < m; ++s) {
        const std::size_t i = (m == n) ? s : static_cast<std::size_t>(rng.index(n));
        hits.clear();
        misses.clear();
        for (std::size_t r = 0; r < n; ++r) {
            if (r == i) continue;
            double total = 0.0;
            for (std::size_t j = 0; j < width; ++j) {
                const double dj = diff(j, vals[i * width + j], vals[r * width + j]);
                diffs[r][j] = dj;
                total += dj;
            }
            dist[r] = total;
            (cls[r] == cls[i] ? hits : misses).push_back(r);
        }
        std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k),
                          hits.end(), closer);
        std::partial_sort(misses.begin(), misses.begin() + static_cast<std::ptrdiff_t>(k),
                          misses.end(), closer);
        for (std::size_t t = 0; t < k; ++t) {
            for (std::size_t j = 0; j < width; ++j) {
                weights[j] -= diffs[hits[t]][j] * scale;
                weights[j] += diffs[misses[t]][j] * scale;
            }
        }
    }
    return finish(d, RankMethod::ReliefF, cols, weights);
}

FeatureRanking rank(const Dataset& d, RankMethod m) {
    switch (m) {
        case RankMethod::InfoGain: return rank_info_gain(d);
        case RankMethod::ChiSquared: return rank_chi_squared(d);
        case RankMethod::Correlation: return rank_correlation(d);
        case RankMethod::OneR: return rank_one_r(d);
        case RankMethod::ReliefF: return rank_relief_f(d);
    }
    throw Error("unknown ranking method");
}

std::vector<std::string> top_k(const FeatureRanking& ranking, std::size_t k) {
    if (k < 1 || k > ranking.entries.size()) {
        throw Error("selection size " + std::to_string(k) + " outside 1.." +
                    std::to_string(ranking.entries.size()));
    }
    std::vector<std::string> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(ranking.entries[i].attribute);
    return out;
}

std::string rankings_csv(const std::vector<FeatureRanking>& rankings) {
    std::string out = "method,rank,attribute,score\n";
    for (const FeatureRanking& ranking : rankings) {
        for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
            out += rank_method_name(ranking.method);
            out += ',';
            out += std::to_string(i + 1);
            out += ',';
            out += ranking.entries[i].attribute;
            out += ',';
            out += format_number(ranking.entries[i].score);
            out += '\n';
        }
    }
    return out;
}

}  // namespace asd
