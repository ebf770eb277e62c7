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

#ifndef CLENS_CLASSIFY_H_
#define CLENS_CLASSIFY_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "clens/corpus.h"
#include "clens/features.h"

namespace clens {

struct LogisticHyper {
  double learning_rate = 0.1;
  double l2 = 1e-4;
  int epochs = 50;
  std::uint64_t seed = 42;
  int patience = 5;
  int batch_size = 32;
};

struct TrainingMetadata {
  int epochs_run = 0;
  int best_epoch = 0;
  double best_selection_accuracy = 0;
  double best_selection_loss = 0;
  std::size_t train_size = 0;
  std::size_t selection_size = 0;
};

// Binary logistic regression in the raw feature space of a FeatureSpace.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0;
  std::uint64_t fingerprint = 0;
  LogisticHyper hyper;
  TrainingMetadata metadata;

  double Margin(const SparseVector& x) const { return x.Dot(weights) + bias; }
};

// Multinomial Naive Bayes over the n-gram block (lexical features unused).
struct NBModel {
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> log_likelihood;
  double alpha = 1.0;
  std::uint64_t fingerprint = 0;
  std::size_t train_size = 0;
};

using Model = std::variant<LinearModel, NBModel>;

struct Prediction {
  int label = 0;
  double score = 0;  // P(label = 1)
};

double Sigmoid(double z);

NBModel TrainNaiveBayes(std::span<const LabeledInstance> instances, const FeatureSpace& space,
                        double alpha = 1.0);

// Mini-batch SGD on the L2-regularized mean log-loss. Features are rescaled
// by their training max-abs value internally; returned weights live in the
// raw space. Model selection keeps the epoch with the best accuracy on
// `selection` (falling back to `train` when empty), ties broken by lower
// log-loss, and stops after `patience` epochs without improvement.
LinearModel TrainLogisticRegression(std::span<const LabeledInstance> train,
                                    std::span<const LabeledInstance> selection,
                                    const FeatureSpace& space, const LogisticHyper& hyper);

struct HyperGrid {
  std::vector<double> learning_rates{0.01, 0.1};
  std::vector<double> l2s{1e-5, 1e-4, 1e-3};
};

// Trains one model per grid point and keeps the best on `selection`.
LinearModel TuneLogisticRegression(std::span<const LabeledInstance> train,
                                   std::span<const LabeledInstance> selection,
                                   const FeatureSpace& space, const LogisticHyper& base,
                                   const HyperGrid& grid = {});

// Mean log-loss plus (l2/2)||w||^2 over (xs, ys). When the gradient outputs
// are non-null they receive the analytic gradient.
double LogisticObjective(std::span<const double> weights, double bias,
                         std::span<const SparseVector> xs, std::span<const int> ys, double l2,
                         std::vector<double>* grad_weights = nullptr,
                         double* grad_bias = nullptr);

// Label 1 iff score >= 0.5, decided on the margin (w.x + b >= 0).
Prediction PredictFeatures(const LinearModel& model, const SparseVector& x);
// Label 1 iff the class-1 posterior is strictly greater; ties go to 0.
Prediction PredictFeatures(const NBModel& model, const SparseVector& x);

// Throws ValidationError when the model was trained on a different space.
Prediction Predict(const Model& model, const FeatureSpace& space, std::span<const Token> tokens);
Prediction Predict(const LinearModel& model, const FeatureSpace& space,
                   std::span<const Token> tokens);
Prediction Predict(const NBModel& model, const FeatureSpace& space,
                   std::span<const Token> tokens);

// confusion[gold][predicted]
struct AccuracyReport {
  double accuracy = 0;
  std::size_t n = 0;
  std::array<std::array<std::size_t, 2>, 2> confusion{};

  // F1 of the label-1 class; 0 when undefined.
  double PositiveF1() const;
};

AccuracyReport EvaluateClassifier(const Model& model, const FeatureSpace& space,
                                  std::span<const LabeledInstance> instances);
double EvaluateAccuracy(const Model& model, const FeatureSpace& space,
                        std::span<const LabeledInstance> instances);

struct ZTestResult {
  double z = 0;
  double p_two_tailed = 1;
};

// Two-proportion z-test with pooled variance.
ZTestResult CompareAccuracyZTest(double acc_a, std::size_t n_a, double acc_b, std::size_t n_b);

std::string ModelToJson(const Model& model);
Model ModelFromJson(std::string_view text);
void SaveModel(const Model& model, const std::filesystem::path& path);
Model LoadModel(const std::filesystem::path& path);

std::string FingerprintHex(std::uint64_t fingerprint);

}  // namespace clens

#endif  // CLENS_CLASSIFY_H_
