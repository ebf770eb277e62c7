/*
 * Copyright 2026 The complexity-lens Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "clens/classify.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "clens/error.h"
#include "json.hpp"

namespace clens {
namespace {

using ScaledVector = std::vector<std::pair<std::size_t, double>>;

// log(1 + exp(x)) without overflow.
double Softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double LogLoss(double margin, int label) {
  return label == 1 ? Softplus(-margin) : Softplus(margin);
}

void CheckFingerprint(std::uint64_t model, const FeatureSpace& space) {
  if (model != space.Fingerprint()) {
    throw ValidationError("vocabulary fingerprint mismatch: model " + FingerprintHex(model) +
                          ", feature space " + FingerprintHex(space.Fingerprint()));
  }
}

struct SelectionScore {
  double accuracy = 0;
  double loss = std::numeric_limits<double>::infinity();

  bool BetterThan(const SelectionScore& other) const {
    if (accuracy != other.accuracy) return accuracy > other.accuracy;
    return loss < other.loss;
  }
};

class ScaledData {
 public:
  ScaledData(std::span<const LabeledInstance> instances, const FeatureSpace& space,
             std::span<const double> scale) {
    rows_.reserve(instances.size());
    labels_.reserve(instances.size());
    for (const auto& inst : instances) {
      ScaledVector row;
      const auto features = space.Featurize(inst.tokens);
      for (const auto& [id, v] : features.entries()) {
        const auto j = static_cast<std::size_t>(id);
        row.emplace_back(j, v / scale[j]);
      }
      rows_.push_back(std::move(row));
      labels_.push_back(inst.label);
    }
  }

  std::size_t size() const { return rows_.size(); }
  const ScaledVector& row(std::size_t i) const { return rows_[i]; }
  int label(std::size_t i) const { return labels_[i]; }

 private:
  std::vector<ScaledVector> rows_;
  std::vector<int> labels_;
};

// Weights are represented as scale * v so that the L2 decay is O(1).
struct LazyWeights {
  std::vector<double> v;
  double s = 1.0;
  double bias = 0;

  double Margin(const ScaledVector& x) const {
    double dot = 0;
    for (const auto& [j, value] : x) dot += v[j] * value;
    return s * dot + bias;
  }

  void Decay(double factor) {
    s *= factor;
    if (s < 1e-9) {
      for (double& w : v) w *= s;
      s = 1.0;
    }
  }

  double SquaredNorm() const {
    double sum = 0;
    for (double w : v) sum += w * w;
    return s * s * sum;
  }
};

SelectionScore Score(const LazyWeights& w, const ScaledData& data) {
  SelectionScore score;
  if (data.size() == 0) return score;
  std::size_t correct = 0;
  double loss = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double m = w.Margin(data.row(i));
    const int predicted = m >= 0 ? 1 : 0;
    if (predicted == data.label(i)) ++correct;
    loss += LogLoss(m, data.label(i));
  }
  const auto n = static_cast<double>(data.size());
  score.accuracy = static_cast<double>(correct) / n;
  score.loss = loss / n;
  return score;
}

void Validate(const LogisticHyper& hyper) {
  if (!(hyper.learning_rate > 0)) throw ValidationError("learning_rate must be > 0");
  if (hyper.epochs < 1) throw ValidationError("epochs must be >= 1");
  if (!(hyper.l2 >= 0)) throw ValidationError("l2 must be >= 0");
  if (hyper.learning_rate * hyper.l2 >= 1) {
    throw ValidationError("learning_rate * l2 must be < 1");
  }
  if (hyper.batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (hyper.patience < 1) throw ValidationError("patience must be >= 1");
}

}  // namespace

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::string FingerprintHex(std::uint64_t fingerprint) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fingerprint));
  return buf;
}

NBModel TrainNaiveBayes(std::span<const LabeledInstance> instances, const FeatureSpace& space,
                        double alpha) {
  if (!(alpha > 0)) throw ValidationError("Naive Bayes smoothing alpha must be > 0");
  if (instances.empty()) throw ValidationError("cannot train Naive Bayes on no instances");
  const std::size_t v = space.vocab().size();
  std::array<std::vector<double>, 2> counts{std::vector<double>(v, 0.0),
                                            std::vector<double>(v, 0.0)};
  std::array<std::size_t, 2> docs{0, 0};
  for (const auto& inst : instances) {
    const auto c = static_cast<std::size_t>(inst.label);
    ++docs[c];
    const auto features = FeaturizeNgrams(inst.tokens, space.vocab());
    for (const auto& [id, x] : features.entries()) {
      counts[c][static_cast<std::size_t>(id)] += x;
    }
  }
  if (docs[0] == 0 || docs[1] == 0) {
    throw ValidationError("Naive Bayes needs both labels in the training set");
  }

  NBModel model;
  model.alpha = alpha;
  model.fingerprint = space.Fingerprint();
  model.train_size = instances.size();
  const auto total_docs = static_cast<double>(instances.size());
  for (std::size_t c = 0; c < 2; ++c) {
    model.log_prior[c] = std::log(static_cast<double>(docs[c]) / total_docs);
    const double total = std::accumulate(counts[c].begin(), counts[c].end(), 0.0);
    const double denom = total + alpha * static_cast<double>(v);
    model.log_likelihood[c].resize(v);
    for (std::size_t j = 0; j < v; ++j) {
      model.log_likelihood[c][j] = std::log((counts[c][j] + alpha) / denom);
    }
  }
  return model;
}

double LogisticObjective(std::span<const double> weights, double bias,
                         std::span<const SparseVector> xs, std::span<const int> ys, double l2,
                         std::vector<double>* grad_weights, double* grad_bias) {
  if (xs.size() != ys.size() || xs.empty()) {
    throw ValidationError("objective needs equally many (non-zero) features and labels");
  }
  const auto n = static_cast<double>(xs.size());
  if (grad_weights) grad_weights->assign(weights.size(), 0.0);
  double gb = 0;
  double loss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double m = xs[i].Dot(weights) + bias;
    loss += LogLoss(m, ys[i]);
    const double r = (Sigmoid(m) - ys[i]) / n;
    gb += r;
    if (grad_weights) {
      for (const auto& [id, v] : xs[i].entries()) (*grad_weights)[static_cast<std::size_t>(id)] += r * v;
    }
  }
  double sq = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    sq += weights[j] * weights[j];
    if (grad_weights) (*grad_weights)[j] += l2 * weights[j];
  }
  if (grad_bias) *grad_bias = gb;
  return loss / n + 0.5 * l2 * sq;
}

LinearModel TrainLogisticRegression(std::span<const LabeledInstance> train,
                                    std::span<const LabeledInstance> selection,
                                    const FeatureSpace& space, const LogisticHyper& hyper) {
  Validate(hyper);
  if (train.empty()) throw ValidationError("cannot train logistic regression on no instances");
  const std::size_t dim = space.dimension();

  std::vector<double> scale(dim, 0.0);
  for (const auto& inst : train) {
    const auto features = space.Featurize(inst.tokens);
    for (const auto& [id, v] : features.entries()) {
      auto& s = scale[static_cast<std::size_t>(id)];
      s = std::max(s, std::abs(v));
    }
  }
  for (double& s : scale) {
    if (s == 0) s = 1.0;
  }

  const ScaledData train_data(train, space, scale);
  const ScaledData selection_data(selection.empty() ? train : selection, space, scale);

  LazyWeights w;
  w.v.assign(dim, 0.0);
  std::vector<std::size_t> order(train_data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(hyper.seed);

  LinearModel best;
  best.fingerprint = space.Fingerprint();
  best.hyper = hyper;
  best.weights.assign(dim, 0.0);
  best.metadata.train_size = train.size();
  best.metadata.selection_size = selection_data.size();
  SelectionScore best_score;
  bool have_best = false;
  int stale = 0;

  const auto batch = static_cast<std::size_t>(hyper.batch_size);
  const double decay = 1.0 - hyper.learning_rate * hyper.l2;
  std::vector<double> residual;
  for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      const auto b = static_cast<double>(end - start);
      residual.clear();
      for (std::size_t k = start; k < end; ++k) {
        const auto i = order[k];
        residual.push_back((Sigmoid(w.Margin(train_data.row(i))) - train_data.label(i)) / b);
      }
      w.Decay(decay);
      const double step = hyper.learning_rate / w.s;
      double bias_grad = 0;
      for (std::size_t k = start; k < end; ++k) {
        const double r = residual[k - start];
        bias_grad += r;
        for (const auto& [j, x] : train_data.row(order[k])) w.v[j] -= step * r * x;
      }
      w.bias -= hyper.learning_rate * bias_grad;
    }

    const SelectionScore train_score = Score(w, train_data);
    const double objective = train_score.loss + 0.5 * hyper.l2 * w.SquaredNorm();
    if (!std::isfinite(objective) || !std::isfinite(w.bias)) {
      throw RuntimeError("logistic regression diverged at epoch " + std::to_string(epoch));
    }

    best.metadata.epochs_run = epoch;
    const SelectionScore score =
        selection.empty() ? train_score : Score(w, selection_data);
    if (!have_best || score.BetterThan(best_score)) {
      have_best = true;
      best_score = score;
      stale = 0;
      for (std::size_t j = 0; j < dim; ++j) best.weights[j] = w.s * w.v[j] / scale[j];
      best.bias = w.bias;
      best.metadata.best_epoch = epoch;
      best.metadata.best_selection_accuracy = score.accuracy;
      best.metadata.best_selection_loss = score.loss;
    } else if (++stale >= hyper.patience) {
      break;
    }
  }
  return best;
}

LinearModel TuneLogisticRegression(std::span<const LabeledInstance> train,
                                   std::span<const LabeledInstance> selection,
                                   const FeatureSpace& space, const LogisticHyper& base,
                                   const HyperGrid& grid) {
  if (grid.learning_rates.empty() || grid.l2s.empty()) {
    throw ValidationError("hyper-parameter grid is empty");
  }
  std::optional<LinearModel> best;
  for (double lr : grid.learning_rates) {
    for (double l2 : grid.l2s) {
      LogisticHyper hyper = base;
      hyper.learning_rate = lr;
      hyper.l2 = l2;
      LinearModel model = TrainLogisticRegression(train, selection, space, hyper);
      const SelectionScore score{model.metadata.best_selection_accuracy,
                                 model.metadata.best_selection_loss};
      if (!best || score.BetterThan({best->metadata.best_selection_accuracy,
                                     best->metadata.best_selection_loss})) {
        best = std::move(model);
      }
    }
  }
  return *best;
}

Prediction PredictFeatures(const LinearModel& model, const SparseVector& x) {
  const double margin = model.Margin(x);
  return {margin >= 0 ? 1 : 0, Sigmoid(margin)};
}

Prediction PredictFeatures(const NBModel& model, const SparseVector& x) {
  std::array<double, 2> joint = model.log_prior;
  const std::size_t v = model.log_likelihood[0].size();
  for (const auto& [id, count] : x.entries()) {
    const auto j = static_cast<std::size_t>(id);
    if (j >= v) continue;  // lexical block
    joint[0] += count * model.log_likelihood[0][j];
    joint[1] += count * model.log_likelihood[1][j];
  }
  const double score = Sigmoid(joint[1] - joint[0]);
  return {joint[1] > joint[0] ? 1 : 0, score};
}

Prediction Predict(const LinearModel& model, const FeatureSpace& space,
                   std::span<const Token> tokens) {
  CheckFingerprint(model.fingerprint, space);
  return PredictFeatures(model, space.Featurize(tokens));
}

Prediction Predict(const NBModel& model, const FeatureSpace& space,
                   std::span<const Token> tokens) {
  CheckFingerprint(model.fingerprint, space);
  return PredictFeatures(model, FeaturizeNgrams(tokens, space.vocab()));
}

Prediction Predict(const Model& model, const FeatureSpace& space, std::span<const Token> tokens) {
  return std::visit([&](const auto& m) { return Predict(m, space, tokens); }, model);
}

double AccuracyReport::PositiveF1() const {
  const double tp = static_cast<double>(confusion[1][1]);
  const double fp = static_cast<double>(confusion[0][1]);
  const double fn = static_cast<double>(confusion[1][0]);
  const double denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2 * tp / denom;
}

AccuracyReport EvaluateClassifier(const Model& model, const FeatureSpace& space,
                                  std::span<const LabeledInstance> instances) {
  if (instances.empty()) throw ValidationError("cannot evaluate accuracy on no instances");
  AccuracyReport report;
  report.n = instances.size();
  std::size_t correct = 0;
  for (const auto& inst : instances) {
    const int predicted = Predict(model, space, inst.tokens).label;
    ++report.confusion[static_cast<std::size_t>(inst.label)][static_cast<std::size_t>(predicted)];
    if (predicted == inst.label) ++correct;
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(report.n);
  return report;
}

double EvaluateAccuracy(const Model& model, const FeatureSpace& space,
                        std::span<const LabeledInstance> instances) {
  return EvaluateClassifier(model, space, instances).accuracy;
}

ZTestResult CompareAccuracyZTest(double acc_a, std::size_t n_a, double acc_b, std::size_t n_b) {
  if (n_a == 0 || n_b == 0) throw ValidationError("z-test needs non-zero sample sizes");
  if (!(acc_a >= 0 && acc_a <= 1 && acc_b >= 0 && acc_b <= 1)) {
    throw ValidationError("z-test accuracies must lie in [0, 1]");
  }
  const auto na = static_cast<double>(n_a);
  const auto nb = static_cast<double>(n_b);
  const double pooled = (acc_a * na + acc_b * nb) / (na + nb);
  if (pooled <= 0 || pooled >= 1) {
    if (acc_a == acc_b) return {0.0, 1.0};
    const double inf = std::numeric_limits<double>::infinity();
    return {acc_a > acc_b ? inf : -inf, 0.0};
  }
  const double se = std::sqrt(pooled * (1 - pooled) * (1 / na + 1 / nb));
  const double z = (acc_a - acc_b) / se;
  return {z, std::erfc(std::abs(z) / std::sqrt(2.0))};
}

std::string ModelToJson(const Model& model) {
  nlohmann::ordered_json j;
  if (const auto* lr = std::get_if<LinearModel>(&model)) {
    j["type"] = "lr";
    j["hyper"] = {{"learning_rate", lr->hyper.learning_rate},
                  {"l2", lr->hyper.l2},
                  {"epochs", lr->hyper.epochs},
                  {"seed", lr->hyper.seed},
                  {"patience", lr->hyper.patience},
                  {"batch_size", lr->hyper.batch_size}};
    j["fingerprint"] = FingerprintHex(lr->fingerprint);
    j["bias"] = lr->bias;
    j["weights"] = lr->weights;
    j["metadata"] = {{"epochs_run", lr->metadata.epochs_run},
                     {"best_epoch", lr->metadata.best_epoch},
                     {"best_selection_accuracy", lr->metadata.best_selection_accuracy},
                     {"best_selection_loss", lr->metadata.best_selection_loss},
                     {"train_size", lr->metadata.train_size},
                     {"selection_size", lr->metadata.selection_size}};
  } else {
    const auto& nb = std::get<NBModel>(model);
    j["type"] = "nb";
    j["hyper"] = {{"alpha", nb.alpha}};
    j["fingerprint"] = FingerprintHex(nb.fingerprint);
    j["log_prior"] = nb.log_prior;
    j["log_likelihood"] = nb.log_likelihood;
    j["metadata"] = {{"train_size", nb.train_size}};
  }
  return j.dump();
}

Model ModelFromJson(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto type = j.at("type").get<std::string>();
    const auto fingerprint = std::stoull(j.at("fingerprint").get<std::string>(), nullptr, 16);
    if (type == "lr") {
      LinearModel m;
      const auto& h = j.at("hyper");
      m.hyper.learning_rate = h.at("learning_rate").get<double>();
      m.hyper.l2 = h.at("l2").get<double>();
      m.hyper.epochs = h.at("epochs").get<int>();
      m.hyper.seed = h.at("seed").get<std::uint64_t>();
      m.hyper.patience = h.at("patience").get<int>();
      m.hyper.batch_size = h.at("batch_size").get<int>();
      m.fingerprint = fingerprint;
      m.bias = j.at("bias").get<double>();
      m.weights = j.at("weights").get<std::vector<double>>();
      const auto& md = j.at("metadata");
      m.metadata.epochs_run = md.at("epochs_run").get<int>();
      m.metadata.best_epoch = md.at("best_epoch").get<int>();
      m.metadata.best_selection_accuracy = md.at("best_selection_accuracy").get<double>();
      m.metadata.best_selection_loss = md.at("best_selection_loss").get<double>();
      m.metadata.train_size = md.at("train_size").get<std::size_t>();
      m.metadata.selection_size = md.at("selection_size").get<std::size_t>();
      for (double w : m.weights) {
        if (!std::isfinite(w)) throw ValidationError("model has non-finite weights");
      }
      return m;
    }
    if (type == "nb") {
      NBModel m;
      m.alpha = j.at("hyper").at("alpha").get<double>();
      m.fingerprint = fingerprint;
      m.log_prior = j.at("log_prior").get<std::array<double, 2>>();
      m.log_likelihood = j.at("log_likelihood").get<std::array<std::vector<double>, 2>>();
      m.train_size = j.at("metadata").at("train_size").get<std::size_t>();
      return m;
    }
    throw ValidationError("unknown model type: " + type);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad model file: ") + e.what());
  }
}

void SaveModel(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write " + path.string());
  out << ModelToJson(model) << '\n';
  if (!out) throw RuntimeError("write failure on " + path.string());
}

Model LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ModelFromJson(buf.str());
}

}  // namespace clens
