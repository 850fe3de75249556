#include "asd/learn.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "json.hpp"

#include "asd/error.hpp"
#include "asd/rng.hpp"

namespace asd {

namespace {

using nlohmann::json;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + e^t) without overflow on either side
double log1pexp(double t) {
    if (t > 0.0) return t + std::log1p(std::exp(-t));
    return std::log1p(std::exp(t));
}

void check_finite(const EncodedMatrix& m) {
    for (double v : m.values) {
        if (!std::isfinite(v)) throw Error("non-finite feature value");
    }
}

void check_binary_labels(const EncodedMatrix& m) {
    bool zero = false, one = false;
    for (double y : m.labels) {
        if (y == 0.0) zero = true;
        else if (y == 1.0) one = true;
        else throw Error("training needs 0/1 labels");
    }
    if (!zero || !one) throw Error("training needs both classes present");
}

// Cholesky solve of the symmetric positive-definite system a*x = rhs
// (row-major, size k). Returns false when a pivot fails.
bool cholesky_solve(std::vector<double> a, std::vector<double> rhs, std::size_t k,
                    std::vector<double>* out) {
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i * k + j];
            for (std::size_t t = 0; t < j; ++t) sum -= a[i * k + t] * a[j * k + t];
            if (i == j) {
                if (sum <= 0.0) return false;
                a[i * k + i] = std::sqrt(sum);
            } else {
                a[i * k + j] = sum / a[j * k + j];
            }
        }
    }
    for (std::size_t i = 0; i < k; ++i) {  // forward
        double sum = rhs[i];
        for (std::size_t t = 0; t < i; ++t) sum -= a[i * k + t] * rhs[t];
        rhs[i] = sum / a[i * k + i];
    }
    for (std::size_t ii = k; ii-- > 0;) {  // backward
        double sum = rhs[ii];
        for (std::size_t t = ii + 1; t < k; ++t) sum -= a[t * k + ii] * rhs[t];
        rhs[ii] = sum / a[ii * k + ii];
    }
    *out = std::move(rhs);
    return true;
}

}  // namespace

// --- logistic regression ----------------------------------------------------

double LogisticModel::linear(std::span<const double> x) const {
    if (x.size() != weights.size()) throw Error("feature width does not match the model");
    double z = intercept;
    for (std::size_t i = 0; i < x.size(); ++i) z += weights[i] * x[i];
    return z;
}

double LogisticModel::probability(std::span<const double> x) const { return sigmoid(linear(x)); }

LogisticModel fit_logistic(const EncodedMatrix& m, const LogisticConfig& config) {
    if (m.rows < 2) throw Error("training needs at least two records");
    if (!(config.ridge >= 0.0)) throw Error("ridge penalty must be non-negative");
    check_finite(m);
    check_binary_labels(m);

    const std::size_t n = m.rows;
    const std::size_t d = m.cols;
    const std::size_t k = d + 1;  // weights plus intercept, intercept last

    std::vector<double> theta(k, 0.0);
    const auto nll = [&](const std::vector<double>& th) {
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double z = th[d];
            const auto row = m.row(i);
            for (std::size_t j = 0; j < d; ++j) z += th[j] * row[j];
            loss += log1pexp(z) - m.labels[i] * z;
        }
        for (std::size_t j = 0; j < d; ++j) loss += 0.5 * config.ridge * th[j] * th[j];
        return loss;
    };

    LogisticModel model;
    model.ridge = config.ridge;
    double current = nll(theta);
    std::vector<double> grad(k), hess(k * k), step, candidate(k), p(n);

    for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
        std::fill(grad.begin(), grad.end(), 0.0);
        std::fill(hess.begin(), hess.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = m.row(i);
            double z = theta[d];
            for (std::size_t j = 0; j < d; ++j) z += theta[j] * row[j];
            p[i] = sigmoid(z);
            const double resid = p[i] - m.labels[i];
            const double s = p[i] * (1.0 - p[i]);
            for (std::size_t j = 0; j < d; ++j) {
                grad[j] += resid * row[j];
                for (std::size_t t = 0; t <= j; ++t) hess[j * k + t] += s * row[j] * row[t];
                hess[d * k + j] += s * row[j];
            }
            grad[d] += resid;
            hess[d * k + d] += s;
        }
        for (std::size_t j = 0; j < d; ++j) {
            grad[j] += config.ridge * theta[j];
            hess[j * k + j] += config.ridge;
        }
        for (std::size_t j = 0; j < k; ++j) {  // mirror the lower triangle
            for (std::size_t t = j + 1; t < k; ++t) hess[j * k + t] = hess[t * k + j];
        }

        double inf_norm = 0.0;
        for (double g : grad) inf_norm = std::max(inf_norm, std::fabs(g));
        model.iterations = iter;
        if (inf_norm <= config.tol) {
            model.converged = true;
            break;
        }

        // Newton direction, with a diagonal boost when the Hessian loses
        // positive definiteness (saturated probabilities)
        double jitter = 0.0;
        bool solved = cholesky_solve(hess, grad, k, &step);
        while (!solved && jitter < 1.0) {
            jitter = jitter == 0.0 ? 1e-10 : jitter * 100.0;
            std::vector<double> boosted = hess;
            for (std::size_t j = 0; j < k; ++j) boosted[j * k + j] += jitter;
            solved = cholesky_solve(boosted, grad, k, &step);
        }
        if (!solved) break;

        // backtracking line search on the step length
        double scale = 1.0;
        bool improved = false;
        for (int half = 0; half < 40; ++half) {
            for (std::size_t j = 0; j < k; ++j) candidate[j] = theta[j] - scale * step[j];
            const double value = nll(candidate);
            if (value < current) {
                theta = candidate;
                current = value;
                improved = true;
                break;
            }
            scale *= 0.5;
        }
        if (!improved) break;
    }

    model.weights.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(d));
    model.intercept = theta[d];
    return model;
}

// --- one-vs-rest wrapper ------------------------------------------------------

std::size_t MulticlassModel::predict_class(std::span<const double> x) const {
    if (binary_shortcut()) return members[0].probability(x) >= 0.5 ? 1 : 0;
    const std::vector<double> scores = class_scores(x);
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[best]) best = c;
    }
    return best;
}

std::vector<double> MulticlassModel::class_scores(std::span<const double> x) const {
    if (binary_shortcut()) {
        const double p = members[0].probability(x);
        return {1.0 - p, p};
    }
    std::vector<double> scores;
    scores.reserve(members.size());
    for (const LogisticModel& member : members) scores.push_back(member.probability(x));
    return scores;
}

double MulticlassModel::probability(std::span<const double> x) const {
    if (class_count != 2) throw Error("probability of 'yes' only exists for binary models");
    return members[0].probability(x);
}

MulticlassModel fit_multiclass(const EncodedMatrix& m, const LogisticConfig& base) {
    if (m.rows < 2) throw Error("training needs at least two records");
    check_finite(m);
    std::size_t class_count = 0;
    for (double y : m.labels) {
        const double r = std::round(y);
        if (y != r || y < 0.0) throw Error("class ids must be non-negative integers");
        class_count = std::max(class_count, static_cast<std::size_t>(r) + 1);
    }
    std::vector<std::size_t> counts(class_count, 0);
    for (double y : m.labels) ++counts[static_cast<std::size_t>(y)];
    if (class_count < 2) throw Error("training needs at least two classes");
    for (std::size_t c = 0; c < class_count; ++c) {
        if (counts[c] == 0) throw Error("class " + std::to_string(c) + " has no records");
    }

    MulticlassModel model;
    model.class_count = class_count;
    if (class_count == 2) {
        // binary input degenerates to the base learner itself
        model.members.push_back(fit_logistic(m, base));
        return model;
    }
    for (std::size_t c = 0; c < class_count; ++c) {
        EncodedMatrix view = m;
        for (double& y : view.labels) y = (static_cast<std::size_t>(y) == c) ? 1.0 : 0.0;
        model.members.push_back(fit_logistic(view, base));
    }
    return model;
}

// --- multilayer perceptron ------------------------------------------------------

namespace {

struct MlpForward {
    std::vector<double> hidden_out;
    double z_out = 0.0;
    double p = 0.0;
};

MlpForward mlp_forward(const MlpModel& model, std::span<const double> x) {
    if (x.size() != model.inputs) throw Error("feature width does not match the model");
    MlpForward f;
    f.hidden_out.resize(model.hidden);
    const std::size_t row = model.inputs + 1;
    for (std::size_t j = 0; j < model.hidden; ++j) {
        double z = model.hidden_weights[j * row + model.inputs];
        for (std::size_t i = 0; i < model.inputs; ++i) {
            z += model.hidden_weights[j * row + i] * x[i];
        }
        f.hidden_out[j] = sigmoid(z);
    }
    f.z_out = model.output_weights[model.hidden];
    for (std::size_t j = 0; j < model.hidden; ++j) {
        f.z_out += model.output_weights[j] * f.hidden_out[j];
    }
    f.p = sigmoid(f.z_out);
    return f;
}

// gradient of the per-sample cross-entropy, laid out like the weights
void mlp_backward(const MlpModel& model, std::span<const double> x, double y,
                  const MlpForward& f, std::vector<double>* hidden_grad,
                  std::vector<double>* output_grad) {
    const std::size_t row = model.inputs + 1;
    const double delta_out = f.p - y;
    output_grad->assign(model.hidden + 1, 0.0);
    hidden_grad->assign(model.hidden * row, 0.0);
    for (std::size_t j = 0; j < model.hidden; ++j) {
        (*output_grad)[j] = delta_out * f.hidden_out[j];
        const double delta_j = delta_out * model.output_weights[j] * f.hidden_out[j] *
                               (1.0 - f.hidden_out[j]);
        for (std::size_t i = 0; i < model.inputs; ++i) {
            (*hidden_grad)[j * row + i] = delta_j * x[i];
        }
        (*hidden_grad)[j * row + model.inputs] = delta_j;
    }
    (*output_grad)[model.hidden] = delta_out;
}

}  // namespace

double MlpModel::probability(std::span<const double> x) const { return mlp_forward(*this, x).p; }

double mlp_loss(const MlpModel& model, std::span<const double> x, double y) {
    // cross-entropy written against the pre-squash output to stay finite
    const MlpForward f = mlp_forward(model, x);
    return log1pexp(f.z_out) - y * f.z_out;
}

MlpModel fit_mlp(const EncodedMatrix& m, const MlpConfig& config) {
    if (m.rows < 1) throw Error("training needs at least one record");
    if (config.epochs < 1) throw Error("epoch count must be positive");
    if (!(config.learning_rate > 0.0)) throw Error("learning rate must be positive");
    if (!(config.momentum >= 0.0 && config.momentum < 1.0)) {
        throw Error("momentum outside [0,1)");
    }
    check_finite(m);
    check_binary_labels(m);

    MlpModel model;
    model.inputs = m.cols;
    model.hidden = config.hidden > 0 ? config.hidden : (m.cols + 3) / 2;
    const std::size_t row = model.inputs + 1;

    Rng rng(config.seed);
    model.hidden_weights.resize(model.hidden * row);
    model.output_weights.resize(model.hidden + 1);
    for (double& w : model.hidden_weights) w = rng.real_in(-0.5, 0.5);
    for (double& w : model.output_weights) w = rng.real_in(-0.5, 0.5);

    std::vector<double> hidden_velocity(model.hidden_weights.size(), 0.0);
    std::vector<double> output_velocity(model.output_weights.size(), 0.0);
    std::vector<double> hidden_grad, output_grad;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t r = 0; r < m.rows; ++r) {
            const auto x = m.row(r);
            const MlpForward f = mlp_forward(model, x);
            mlp_backward(model, x, m.labels[r], f, &hidden_grad, &output_grad);
            for (std::size_t i = 0; i < hidden_velocity.size(); ++i) {
                hidden_velocity[i] = config.momentum * hidden_velocity[i] -
                                     config.learning_rate * hidden_grad[i];
                model.hidden_weights[i] += hidden_velocity[i];
            }
            for (std::size_t i = 0; i < output_velocity.size(); ++i) {
                output_velocity[i] = config.momentum * output_velocity[i] -
                                     config.learning_rate * output_grad[i];
                model.output_weights[i] += output_velocity[i];
            }
        }
        double total = 0.0;
        for (std::size_t r = 0; r < m.rows; ++r) {
            total += mlp_loss(model, m.row(r), m.labels[r]);
        }
        const double mean = total / static_cast<double>(m.rows);
        if (!std::isfinite(mean)) {
            throw Error("training diverged at epoch " + std::to_string(epoch + 1));
        }
        model.epoch_loss.push_back(mean);
    }
    return model;
}

std::vector<double> mlp_gradient(const MlpModel& model, std::span<const double> x, double y) {
    const MlpForward f = mlp_forward(model, x);
    std::vector<double> hidden_grad, output_grad;
    mlp_backward(model, x, y, f, &hidden_grad, &output_grad);
    hidden_grad.insert(hidden_grad.end(), output_grad.begin(), output_grad.end());
    return hidden_grad;
}

// --- uniform interface -------------------------------------------------------------

std::string classifier_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::Smo: return "smo";
        case ClassifierKind::Logistic: return "logistic";
        case ClassifierKind::Multiclass: return "multiclass";
        case ClassifierKind::Mlp: return "mlp";
    }
    return "smo";
}

std::optional<ClassifierKind> classifier_from_name(std::string_view name) {
    const std::string c = canonical_name(name);
    if (c == "smo" || c == "svm") return ClassifierKind::Smo;
    if (c == "logistic" || c == "logisticregression") return ClassifierKind::Logistic;
    if (c == "multiclass" || c == "multiclassclassifier" || c == "onevsrest" || c == "ovr") {
        return ClassifierKind::Multiclass;
    }
    if (c == "mlp" || c == "multilayerperceptron") return ClassifierKind::Mlp;
    return std::nullopt;
}

ClassifierKind TrainedModel::kind() const {
    if (std::holds_alternative<SmoModel>(model)) return ClassifierKind::Smo;
    if (std::holds_alternative<LogisticModel>(model)) return ClassifierKind::Logistic;
    if (std::holds_alternative<MulticlassModel>(model)) return ClassifierKind::Multiclass;
    return ClassifierKind::Mlp;
}

double TrainedModel::predict_proba(const Record& r) const {
    const std::vector<double> x = encoder.transform_record(r);
    if (const auto* smo = std::get_if<SmoModel>(&model)) {
        return sigmoid(2.0 * smo->decision(x));
    }
    if (const auto* logistic = std::get_if<LogisticModel>(&model)) {
        return logistic->probability(x);
    }
    if (const auto* ovr = std::get_if<MulticlassModel>(&model)) {
        return ovr->probability(x);
    }
    return std::get<MlpModel>(model).probability(x);
}

bool TrainedModel::predict(const Record& r) const {
    if (const auto* smo = std::get_if<SmoModel>(&model)) {
        return smo->decision(encoder.transform_record(r)) > 0.0;
    }
    return predict_proba(r) >= 0.5;
}

TrainedModel train(const Dataset& d, const std::vector<std::string>& features,
                   const LearnerConfig& config) {
    if (features.empty()) throw Error("feature selection is empty");
    TrainedModel out;
    out.encoder = Encoder::fit(d, features);
    const LabelScheme scheme = config.kind == ClassifierKind::Smo ? LabelScheme::PlusMinusOne
                                                                  : LabelScheme::ZeroOne;
    const EncodedMatrix m = out.encoder.transform(d, scheme);
    switch (config.kind) {
        case ClassifierKind::Smo:
            out.model = fit_smo(m, config.smo);
            break;
        case ClassifierKind::Logistic:
            out.model = fit_logistic(m, config.logistic);
            break;
        case ClassifierKind::Multiclass:
            out.model = fit_multiclass(m, config.logistic);
            break;
        case ClassifierKind::Mlp:
            out.model = fit_mlp(m, config.mlp);
            break;
    }
    return out;
}

// --- serialization ---------------------------------------------------------------

namespace {

std::string kind_name(AttributeKind k) {
    switch (k) {
        case AttributeKind::BinaryItem: return "binary";
        case AttributeKind::Numeric: return "numeric";
        case AttributeKind::Categorical: return "categorical";
        case AttributeKind::Class: return "class";
    }
    return "numeric";
}

AttributeKind kind_from(const std::string& name) {
    if (name == "binary") return AttributeKind::BinaryItem;
    if (name == "numeric") return AttributeKind::Numeric;
    if (name == "categorical") return AttributeKind::Categorical;
    if (name == "class") return AttributeKind::Class;
    throw Error("unknown attribute kind '" + name + "' in model file");
}

json encoder_to_json(const Encoder& enc) {
    json schema = json::array();
    for (const AttributeSchema& attr : enc.fit_schema()) {
        schema.push_back({{"name", attr.name},
                          {"kind", kind_name(attr.kind)},
                          {"categories", attr.categories}});
    }
    json columns = json::array();
    for (const Encoder::Column& col : enc.columns()) {
        columns.push_back({{"attribute", col.attribute},
                           {"category", col.category},
                           {"min", col.min},
                           {"range", col.range}});
    }
    return {{"schema", schema}, {"columns", columns}};
}

Encoder encoder_from_json(const json& j) {
    std::vector<AttributeSchema> schema;
    for (const json& attr : j.at("schema")) {
        schema.push_back({attr.at("name").get<std::string>(),
                          kind_from(attr.at("kind").get<std::string>()),
                          attr.at("categories").get<std::vector<std::string>>()});
    }
    std::vector<Encoder::Column> columns;
    for (const json& col : j.at("columns")) {
        columns.push_back({col.at("attribute").get<int>(), col.at("category").get<int>(),
                           col.at("min").get<double>(), col.at("range").get<double>()});
    }
    return Encoder::from_parts(std::move(schema), std::move(columns));
}

json logistic_to_json(const LogisticModel& m) {
    return {{"weights", m.weights}, {"intercept", m.intercept}, {"ridge", m.ridge}};
}

LogisticModel logistic_from_json(const json& j) {
    LogisticModel m;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.intercept = j.at("intercept").get<double>();
    m.ridge = j.at("ridge").get<double>();
    return m;
}

}  // namespace

std::string save_model(const TrainedModel& model) {
    json j;
    j["format_version"] = 1;
    j["encoder"] = encoder_to_json(model.encoder);
    if (const auto* smo = std::get_if<SmoModel>(&model.model)) {
        j["type"] = "smo";
        j["model"] = {{"bias", smo->bias},
                      {"c", smo->c},
                      {"kernel",
                       {{"kind", smo->kernel.kind == KernelKind::Linear ? "linear" : "polynomial"},
                        {"degree", smo->kernel.degree},
                        {"coef", smo->kernel.coef}}},
                      {"support_vectors", smo->support_vectors},
                      {"support_coefficients", smo->support_coefficients}};
    } else if (const auto* logistic = std::get_if<LogisticModel>(&model.model)) {
        j["type"] = "logistic";
        j["model"] = logistic_to_json(*logistic);
    } else if (const auto* ovr = std::get_if<MulticlassModel>(&model.model)) {
        j["type"] = "multiclass";
        json members = json::array();
        for (const LogisticModel& member : ovr->members) members.push_back(logistic_to_json(member));
        j["model"] = {{"class_count", ovr->class_count}, {"members", members}};
    } else {
        const MlpModel& mlp = std::get<MlpModel>(model.model);
        j["type"] = "mlp";
        j["model"] = {{"inputs", mlp.inputs},
                      {"hidden", mlp.hidden},
                      {"hidden_weights", mlp.hidden_weights},
                      {"output_weights", mlp.output_weights}};
    }
    return j.dump(2) + "\n";
}

TrainedModel load_model(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("invalid model file: ") + e.what());
    }
    try {
        if (j.at("format_version").get<int>() != 1) {
            throw Error("unsupported model format version");
        }
        TrainedModel out;
        out.encoder = encoder_from_json(j.at("encoder"));
        const std::string type = j.at("type").get<std::string>();
        const json& body = j.at("model");
        if (type == "smo") {
            SmoModel m;
            m.bias = body.at("bias").get<double>();
            m.c = body.at("c").get<double>();
            const json& kernel = body.at("kernel");
            m.kernel.kind = kernel.at("kind").get<std::string>() == "linear"
                                ? KernelKind::Linear
                                : KernelKind::Polynomial;
            m.kernel.degree = kernel.at("degree").get<int>();
            m.kernel.coef = kernel.at("coef").get<double>();
            m.support_vectors = body.at("support_vectors").get<std::vector<std::vector<double>>>();
            m.support_coefficients = body.at("support_coefficients").get<std::vector<double>>();
            out.model = std::move(m);
        } else if (type == "logistic") {
            out.model = logistic_from_json(body);
        } else if (type == "multiclass") {
            MulticlassModel m;
            m.class_count = body.at("class_count").get<std::size_t>();
            for (const json& member : body.at("members")) {
                m.members.push_back(logistic_from_json(member));
            }
            out.model = std::move(m);
        } else if (type == "mlp") {
            MlpModel m;
            m.inputs = body.at("inputs").get<std::size_t>();
            m.hidden = body.at("hidden").get<std::size_t>();
            m.hidden_weights = body.at("hidden_weights").get<std::vector<double>>();
            m.output_weights = body.at("output_weights").get<std::vector<double>>();
            out.model = std::move(m);
        } else {
            throw Error("unknown model type '" + type + "'");
        }
        return out;
    } catch (const json::exception& e) {
        throw Error(std::string("invalid model file: ") + e.what());
    }
}

}  // namespace asd
