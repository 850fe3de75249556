#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "asd/tabular.hpp"

namespace asd {

// --- kernels --------------------------------------------------------------

enum class KernelKind { Linear, Polynomial };

struct Kernel {
    KernelKind kind = KernelKind::Linear;
    int degree = 2;      // polynomial only
    double coef = 1.0;   // polynomial additive constant

    double operator()(std::span<const double> a, std::span<const double> b) const;
};

// --- support vector machine (sequential minimal optimization) -------------

struct SmoConfig {
    double c = 1.0;
    Kernel kernel{};
    double tol = 1e-3;              // KKT tolerance
    std::size_t max_passes = 100000;  // outer-loop safety bound
    bool record_objective = false;  // keep the dual value after each accepted step
};

struct SmoModel {
    double c = 1.0;
    Kernel kernel{};
    double bias = 0.0;
    std::vector<double> alphas;                     // one per training row
    std::vector<std::size_t> support_rows;          // training rows with alpha > 0
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> support_coefficients;       // alpha_i * y_i
    std::vector<double> objective_trace;            // filled when requested

    // f(x) = sum_i alpha_i y_i K(x_i, x) + bias
    double decision(std::span<const double> x) const;
};

// Platt's pairwise coordinate ascent on the SVM dual. Labels must be
// exactly -1/+1 with both classes present. On return every row satisfies
// the KKT conditions within tol.
SmoModel fit_smo(const EncodedMatrix& m, const SmoConfig& config = {});

// Dual objective of a multiplier vector on the training data (used by the
// optimality checks): sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
double smo_dual_objective(const EncodedMatrix& m, const Kernel& kernel,
                          std::span<const double> alphas);

// --- logistic regression ---------------------------------------------------

struct LogisticConfig {
    double ridge = 1e-8;            // keeps the optimum finite on separable data
    std::size_t max_iterations = 100;
    double tol = 1e-8;              // gradient infinity-norm target
};

struct LogisticModel {
    std::vector<double> weights;
    double intercept = 0.0;
    double ridge = 0.0;
    bool converged = false;
    std::size_t iterations = 0;

    double linear(std::span<const double> x) const;
    double probability(std::span<const double> x) const;  // P(label 1)
};

// Ridge-penalized maximum likelihood by damped Newton steps; the intercept
// is not penalized. Labels must be 0/1 with both classes present.
LogisticModel fit_logistic(const EncodedMatrix& m, const LogisticConfig& config = {});

// --- one-vs-rest wrapper ----------------------------------------------------

struct MulticlassModel {
    std::size_t class_count = 0;
    std::vector<LogisticModel> members;  // one per class; binary input keeps one

    // Binary input (class_count == 2) reuses the single base model, making
    // predictions bit-for-bit identical to fit_logistic.
    bool binary_shortcut() const { return members.size() == 1; }

    std::size_t predict_class(std::span<const double> x) const;
    std::vector<double> class_scores(std::span<const double> x) const;
    double probability(std::span<const double> x) const;  // P(class 1), binary only
};

// Labels are class ids 0..K-1 (stored as doubles); K >= 2 and every class
// must appear at least once.
MulticlassModel fit_multiclass(const EncodedMatrix& m, const LogisticConfig& base = {});

// --- multilayer perceptron ---------------------------------------------------

struct MlpConfig {
    std::size_t hidden = 0;  // 0 = (d + 2 + 1) / 2, i.e. ceil((d+2)/2)
    double learning_rate = 0.3;
    double momentum = 0.2;
    std::size_t epochs = 500;
    std::uint64_t seed = 0;
};

struct MlpModel {
    std::size_t inputs = 0;
    std::size_t hidden = 0;
    std::vector<double> hidden_weights;  // hidden x (inputs+1), bias last per row
    std::vector<double> output_weights;  // hidden+1, bias last
    std::vector<double> epoch_loss;      // mean cross-entropy after each epoch

    double probability(std::span<const double> x) const;
};

// Single hidden layer of logistic units trained by per-record gradient
// descent with momentum; weight initialization is uniform(-0.5, 0.5) from
// the seed. Labels must be 0/1. Throws (naming the epoch) on divergence to
// non-finite weights.
MlpModel fit_mlp(const EncodedMatrix& m, const MlpConfig& config = {});

// Per-sample cross-entropy loss and its analytic gradient with respect to
// every weight, ordered (hidden_weights..., output_weights...). Exposed so
// the gradient can be checked against finite differences.
double mlp_loss(const MlpModel& model, std::span<const double> x, double y);
std::vector<double> mlp_gradient(const MlpModel& model, std::span<const double> x, double y);

// --- uniform prediction interface --------------------------------------------

enum class ClassifierKind { Smo, Logistic, Multiclass, Mlp };

inline constexpr ClassifierKind kAllClassifiers[] = {ClassifierKind::Smo, ClassifierKind::Logistic,
                                                     ClassifierKind::Multiclass,
                                                     ClassifierKind::Mlp};

std::string classifier_name(ClassifierKind kind);
std::optional<ClassifierKind> classifier_from_name(std::string_view name);

struct LearnerConfig {
    ClassifierKind kind = ClassifierKind::Smo;
    SmoConfig smo{};
    LogisticConfig logistic{};
    MlpConfig mlp{};
};

// A fitted classifier plus the encoder that maps records to its feature
// space. Prediction accepts any record conforming to the fit-time schema.
struct TrainedModel {
    std::variant<SmoModel, LogisticModel, MulticlassModel, MlpModel> model;
    Encoder encoder;

    ClassifierKind kind() const;
    // P(yes); for the margin classifier this is a logistic squashing of
    // the decision value, sigma(2 f(x)) — a calibration convenience.
    double predict_proba(const Record& r) const;
    // yes iff P(yes) >= 0.5; the margin classifier instead tests f(x) > 0,
    // so an exact f(x) = 0 tie resolves to "no".
    bool predict(const Record& r) const;
};

// Fits `config.kind` on the named feature subset of `d` (encoder fitted on
// `d` itself — callers running cross-validation pass the training fold).
TrainedModel train(const Dataset& d, const std::vector<std::string>& features,
                   const LearnerConfig& config);

// Versioned JSON form of a trained model (decision function + encoder).
std::string save_model(const TrainedModel& model);
TrainedModel load_model(const std::string& text);

}  // namespace asd
