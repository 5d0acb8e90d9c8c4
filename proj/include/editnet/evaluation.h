// editnet/evaluation.h

// Copyright 2026  The editnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef EDITNET_EVALUATION_H_
#define EDITNET_EVALUATION_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "editnet/embedding_set.h"
#include "editnet/matrix.h"

namespace editnet {

struct Trial {
  std::string enroll;
  std::string test;
  bool same = false;
};

// Text form: one trial per line, "label<TAB>enroll_id<TAB>test_id" with
// label 1 for same speaker and 0 otherwise.
struct TrialList {
  std::vector<Trial> trials;

  std::size_t size() const { return trials.size(); }
  std::size_t CountSame() const;
  // Throws UsageError unless both labels occur.
  void RequireBothClasses() const;
};

TrialList ParseTrials(std::string_view text, std::string_view context);
std::string FormatTrials(const TrialList& trials);
TrialList LoadTrials(const std::string& path);
void SaveTrials(const TrialList& trials, const std::string& path);

// a.b / (|a| |b|).  Throws NumericalError for a zero-norm input.
double CosineScore(const Vector& a, const Vector& b);

// Mean cosine over the cross product of enrollment and test rows; each side
// holds the segment embeddings of one utterance.
double TrialScore(const Matrix& enroll, const Matrix& test);

// Scores every trial against the rows of `set`, grouping rows by utterance id.
// Throws FormatError naming the first unknown id.
std::vector<double> ScoreTrials(const EmbeddingSet& set, const TrialList& trials);

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

// Thresholds sweep the sorted unique scores (plus +inf).  At threshold t
//   FAR(t) = P(score >= t | different),  FRR(t) = P(score < t | same).
// The EER is read off the first sign change of FAR - FRR, linearly
// interpolating between the two neighbouring thresholds.
EerResult ComputeEer(const std::vector<double>& scores,
                     const std::vector<bool>& same);

struct EvalReport {
  EerResult eer;
  std::size_t n_trials = 0;
  std::size_t n_same = 0;
  std::size_t n_diff = 0;
  double mean_same = 0.0;
  double std_same = 0.0;
  double mean_diff = 0.0;
  double std_diff = 0.0;
  std::vector<double> scores;
};

EvalReport SummarizeScores(const TrialList& trials, std::vector<double> scores);

// key=value lines: eer, threshold, n_trials, n_same, n_diff and the score
// distribution summary.
std::string FormatReport(const EvalReport& report);
// "label<TAB>enroll<TAB>test<TAB>score" per trial.
std::string FormatScores(const TrialList& trials,
                         const std::vector<double>& scores);

}  // namespace editnet

#endif  // EDITNET_EVALUATION_H_
