#include "asd/eval.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "asd/error.hpp"
#include "asd/rng.hpp"

namespace asd {

namespace {

std::optional<double> ratio(double numerator, double denominator) {
    if (denominator <= 0.0) return std::nullopt;
    return numerator / denominator;
}

std::string csv_value(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string("NA");
}

}  // namespace

Metrics metrics(const ConfusionMatrix& cm) {
    Metrics m;
    const auto tp = static_cast<double>(cm.tp);
    const auto tn = static_cast<double>(cm.tn);
    const auto fp = static_cast<double>(cm.fp);
    const auto fn = static_cast<double>(cm.fn);
    m.accuracy = ratio(tp + tn, tp + tn + fp + fn);
    m.precision = ratio(tp, tp + fp);
    m.recall = ratio(tp, tp + fn);
    if (m.precision && m.recall) {
        const double p = *m.precision;
        const double r = *m.recall;
        if (p + r > 0.0) m.f_measure = 2.0 * p * r / (p + r);
    }
    return m;
}

ErrorSummary error_metrics(std::span<const double> predicted, std::span<const double> actual,
                           ErrorVariant variant) {
    if (predicted.size() != actual.size())
        throw Error("error metrics need predictions and actuals of equal length");
    if (predicted.empty()) throw Error("error metrics need at least one prediction");

    const auto n = static_cast<double>(predicted.size());
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    double actual_mean = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - actual[i];
        abs_sum += std::fabs(d);
        sq_sum += d * d;
        actual_mean += actual[i];
    }
    actual_mean /= n;

    double abs_dev = 0.0;  // total deviation of actuals from their mean
    double sq_dev = 0.0;
    double sq_actual = 0.0;
    for (const double a : actual) {
        abs_dev += std::fabs(a - actual_mean);
        sq_dev += (a - actual_mean) * (a - actual_mean);
        sq_actual += a * a;
    }

    ErrorSummary s;
    s.mae = abs_sum / n;
    s.rmse = std::sqrt(sq_sum / n);
    if (variant == ErrorVariant::U1) {
        if (sq_actual > 0.0) s.rae = std::sqrt(sq_sum) / std::sqrt(sq_actual);
    } else {
        if (abs_dev > 0.0) s.rae = abs_sum / abs_dev;
    }
    if (sq_dev > 0.0) s.rrse = std::sqrt(sq_sum / sq_dev);
    return s;
}

std::vector<std::size_t> FoldAssignment::test_rows(std::size_t f) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < fold.size(); ++i)
        if (fold[i] == f) rows.push_back(i);
    return rows;
}

std::vector<std::size_t> FoldAssignment::train_rows(std::size_t f) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < fold.size(); ++i)
        if (fold[i] != f) rows.push_back(i);
    return rows;
}

FoldAssignment stratified_folds(const Dataset& d, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw Error("cross-validation needs at least 2 folds");
    if (k > d.size())
        throw Error("cannot make " + std::to_string(k) + " folds from " +
                     std::to_string(d.size()) + " records");
    const int ci = d.require_class_index();

    std::vector<std::size_t> negatives;
    std::vector<std::size_t> positives;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Cell& c = d.records[i].cells[static_cast<std::size_t>(ci)];
        if (!c.is_label())
            throw Error("record " + std::to_string(i) + " has no class label");
        (c.label() ? positives : negatives).push_back(i);
    }
    if (negatives.empty() || positives.empty())
        throw Error("stratification needs both classes present");

    Rng rng(seed);
    shuffle(negatives, rng);
    shuffle(positives, rng);

    FoldAssignment fa;
    fa.k = k;
    fa.fold.resize(d.size());
    // Dealing both classes through one running counter keeps the fold
    // sizes balanced as well as the per-fold class counts.
    std::size_t next = 0;
    for (const auto* rows : {&negatives, &positives})
        for (const std::size_t row : *rows) fa.fold[row] = next++ % k;
    return fa;
}

const ErrorSummary& EvalReport::errors(ErrorVariant variant) const {
    const bool hard = kind == ClassifierKind::Smo;
    if (variant == ErrorVariant::U1) return hard ? hard_u1 : prob_u1;
    return hard ? hard_baseline : prob_baseline;
}

EvalReport cross_validate(const Dataset& d, const std::vector<std::string>& features,
                          const LearnerConfig& config, std::size_t k, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    if (features.empty()) throw Error("cross-validation needs at least one feature");
    const int ci = d.require_class_index();
    const FoldAssignment folds = stratified_folds(d, k, seed);

    EvalReport report;
    report.kind = config.kind;
    report.fold_count = k;
    report.feature_count = features.size();

    std::vector<double> prob_predictions;
    std::vector<double> hard_predictions;
    std::vector<double> actuals;
    prob_predictions.reserve(d.size());
    hard_predictions.reserve(d.size());
    actuals.reserve(d.size());

    for (std::size_t f = 0; f < k; ++f) {
        const Dataset training = d.subset(folds.train_rows(f));

        bool seen_yes = false;
        bool seen_no = false;
        for (const Record& r : training.records)
            (r.cells[static_cast<std::size_t>(ci)].label() ? seen_yes : seen_no) = true;
        if (!seen_yes || !seen_no)
            throw Error("fold " + std::to_string(f) + " has a single-class training partition");

        LearnerConfig fold_config = config;
        fold_config.mlp.seed = Rng::mix(seed, f);
        const TrainedModel model = train(training, features, fold_config);

        for (const std::size_t row : folds.test_rows(f)) {
            const Record& r = d.records[row];
            const bool actual = r.cells[static_cast<std::size_t>(ci)].label();
            const double proba = model.predict_proba(r);
            const bool predicted = model.predict(r);
            if (predicted && actual) ++report.confusion.tp;
            if (predicted && !actual) ++report.confusion.fp;
            if (!predicted && actual) ++report.confusion.fn;
            if (!predicted && !actual) ++report.confusion.tn;
            prob_predictions.push_back(proba);
            hard_predictions.push_back(predicted ? 1.0 : 0.0);
            actuals.push_back(actual ? 1.0 : 0.0);
        }
    }

    report.metrics = metrics(report.confusion);
    report.hard_u1 = error_metrics(hard_predictions, actuals, ErrorVariant::U1);
    report.hard_baseline = error_metrics(hard_predictions, actuals, ErrorVariant::MeanBaseline);
    report.prob_u1 = error_metrics(prob_predictions, actuals, ErrorVariant::U1);
    report.prob_baseline = error_metrics(prob_predictions, actuals, ErrorVariant::MeanBaseline);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<CurvePoint> attribute_curve(const Dataset& d, const FeatureRanking& ranking,
                                        const LearnerConfig& config, std::size_t k,
                                        std::uint64_t seed) {
    std::vector<CurvePoint> curve;
    curve.reserve(ranking.entries.size());
    for (std::size_t m = 1; m <= ranking.entries.size(); ++m) {
        const EvalReport report = cross_validate(d, top_k(ranking, m), config, k, seed);
        curve.push_back({m, report.metrics.f_measure});
    }
    return curve;
}

std::string report_csv_header() {
    return "dataset,classifier,features,folds,accuracy,precision,recall,f_measure,"
           "mae,rmse,rae,rrse,seconds\n";
}

std::string report_csv_row(const std::string& dataset, const EvalReport& report) {
    const ErrorSummary& e = report.errors(ErrorVariant::MeanBaseline);
    std::string row = dataset;
    row += ',';
    row += classifier_name(report.kind);
    row += ',';
    row += std::to_string(report.feature_count);
    row += ',';
    row += std::to_string(report.fold_count);
    for (const auto& v : {report.metrics.accuracy, report.metrics.precision,
                          report.metrics.recall, report.metrics.f_measure}) {
        row += ',';
        row += csv_value(v);
    }
    row += ',';
    row += format_number(e.mae);
    row += ',';
    row += format_number(e.rmse);
    row += ',';
    row += csv_value(e.rae);
    row += ',';
    row += csv_value(e.rrse);
    row += ',';
    row += format_number(report.wall_seconds);
    row += '\n';
    return row;
}

}  // namespace asd
