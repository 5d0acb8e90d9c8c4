// evaluation.cc

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

#include "editnet/evaluation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "editnet/config_file.h"
#include "editnet/errors.h"

namespace editnet {

std::size_t TrialList::CountSame() const {
  return static_cast<std::size_t>(
      std::count_if(trials.begin(), trials.end(), [](const Trial& t) { return t.same; }));
}

void TrialList::RequireBothClasses() const {
  const std::size_t n_same = CountSame();
  if (n_same == 0 || n_same == trials.size()) {
    throw UsageError("trial list needs both same-speaker and different-speaker trials");
  }
}

TrialList ParseTrials(std::string_view text, std::string_view context) {
  TrialList out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos || line.find('\t', t2 + 1) != std::string_view::npos) {
      throw FormatError(std::string(context) + ":" + std::to_string(line_no) +
                        ": expected label<TAB>enroll<TAB>test");
    }
    const std::string_view label = line.substr(0, t1);
    Trial t;
    if (label == "1") t.same = true;
    else if (label == "0") t.same = false;
    else {
      throw FormatError(std::string(context) + ":" + std::to_string(line_no) +
                        ": label must be 1 or 0");
    }
    t.enroll = std::string(line.substr(t1 + 1, t2 - t1 - 1));
    t.test = std::string(line.substr(t2 + 1));
    if (t.enroll.empty() || t.test.empty()) {
      throw FormatError(std::string(context) + ":" + std::to_string(line_no) +
                        ": empty utterance id");
    }
    out.trials.push_back(std::move(t));
  }
  return out;
}

std::string FormatTrials(const TrialList& trials) {
  std::string out;
  for (const Trial& t : trials.trials) {
    out += t.same ? "1\t" : "0\t";
    out += t.enroll;
    out += '\t';
    out += t.test;
    out += '\n';
  }
  return out;
}

TrialList LoadTrials(const std::string& path) {
  return ParseTrials(ReadFile(path), path);
}

void SaveTrials(const TrialList& trials, const std::string& path) {
  WriteFile(path, FormatTrials(trials));
}

double CosineScore(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw FormatError("cosine score: length mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw NumericalError("cosine score: zero-norm embedding");
  }
  return a.dot(b) / (na * nb);
}

double TrialScore(const Matrix& enroll, const Matrix& test) {
  if (enroll.rows() == 0 || test.rows() == 0) {
    throw UsageError("trial score needs at least one embedding per side");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < enroll.rows(); ++i) {
    for (Eigen::Index j = 0; j < test.rows(); ++j) {
      sum += CosineScore(enroll.row(i), test.row(j));
    }
  }
  return sum / static_cast<double>(enroll.rows() * test.rows());
}

std::vector<double> ScoreTrials(const EmbeddingSet& set, const TrialList& trials) {
  set.Validate();
  std::unordered_map<std::string, std::vector<Eigen::Index>> rows_of;
  for (Eigen::Index i = 0; i < set.rows(); ++i) {
    rows_of[set.utt_ids[static_cast<std::size_t>(i)]].push_back(i);
  }
  auto gather = [&](const std::string& id) {
    const auto it = rows_of.find(id);
    if (it == rows_of.end()) {
      throw FormatError("trial references unknown utterance id '" + id + "'");
    }
    Matrix m(static_cast<Eigen::Index>(it->second.size()), set.dim());
    for (std::size_t k = 0; k < it->second.size(); ++k) {
      m.row(static_cast<Eigen::Index>(k)) = set.embeddings.row(it->second[k]);
    }
    return m;
  };
  std::vector<double> scores;
  scores.reserve(trials.size());
  for (const Trial& t : trials.trials) {
    scores.push_back(TrialScore(gather(t.enroll), gather(t.test)));
  }
  return scores;
}

EerResult ComputeEer(const std::vector<double>& scores,
                     const std::vector<bool>& same) {
  if (scores.size() != same.size()) {
    throw UsageError("EER: score and label counts differ");
  }
  const auto n_same = static_cast<std::size_t>(std::count(same.begin(), same.end(), true));
  const std::size_t n_diff = same.size() - n_same;
  if (n_same == 0 || n_diff == 0) {
    throw UsageError("EER needs both same-speaker and different-speaker scores");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) throw NumericalError("EER: non-finite score");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  const double ns = static_cast<double>(n_same);
  const double nd = static_cast<double>(n_diff);
  std::size_t same_below = 0;  // same-speaker scores strictly below threshold
  std::size_t diff_below = 0;
  double prev_far = 1.0, prev_frr = 0.0, prev_t = scores[order[0]];
  bool have_prev = false;
  std::size_t i = 0;
  while (true) {
    const bool at_end = i == order.size();
    const double t = at_end ? std::numeric_limits<double>::infinity() : scores[order[i]];
    const double far = static_cast<double>(n_diff - diff_below) / nd;
    const double frr = static_cast<double>(same_below) / ns;
    if (have_prev && far - frr <= 0.0) {
      const double d_prev = prev_far - prev_frr;
      const double d_cur = far - frr;
      const double lambda = d_prev / (d_prev - d_cur);
      EerResult r;
      r.eer = prev_far + lambda * (far - prev_far);
      r.threshold = at_end ? prev_t : prev_t + lambda * (t - prev_t);
      return r;
    }
    prev_far = far;
    prev_frr = frr;
    prev_t = t;
    have_prev = true;
    // Absorb every score equal to t.
    while (i < order.size() && scores[order[i]] == t) {
      if (same[order[i]]) ++same_below;
      else ++diff_below;
      ++i;
    }
  }
}

EvalReport SummarizeScores(const TrialList& trials, std::vector<double> scores) {
  if (scores.size() != trials.size()) {
    throw UsageError("score count does not match trial count");
  }
  trials.RequireBothClasses();
  EvalReport r;
  std::vector<bool> labels;
  labels.reserve(trials.size());
  double sum_s = 0, sum2_s = 0, sum_d = 0, sum2_d = 0;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const bool same = trials.trials[i].same;
    labels.push_back(same);
    if (same) {
      ++r.n_same;
      sum_s += scores[i];
      sum2_s += scores[i] * scores[i];
    } else {
      ++r.n_diff;
      sum_d += scores[i];
      sum2_d += scores[i] * scores[i];
    }
  }
  r.n_trials = trials.size();
  r.eer = ComputeEer(scores, labels);
  auto moments = [](double sum, double sum2, std::size_t n, double* mean, double* sd) {
    *mean = sum / static_cast<double>(n);
    *sd = std::sqrt(std::max(0.0, sum2 / static_cast<double>(n) - *mean * *mean));
  };
  moments(sum_s, sum2_s, r.n_same, &r.mean_same, &r.std_same);
  moments(sum_d, sum2_d, r.n_diff, &r.mean_diff, &r.std_diff);
  r.scores = std::move(scores);
  return r;
}

std::string FormatReport(const EvalReport& r) {
  std::ostringstream os;
  os << "eer=" << FormatDouble(r.eer.eer) << '\n'
     << "threshold=" << FormatDouble(r.eer.threshold) << '\n'
     << "n_trials=" << r.n_trials << '\n'
     << "n_same=" << r.n_same << '\n'
     << "n_diff=" << r.n_diff << '\n'
     << "mean_same=" << FormatDouble(r.mean_same) << '\n'
     << "std_same=" << FormatDouble(r.std_same) << '\n'
     << "mean_diff=" << FormatDouble(r.mean_diff) << '\n'
     << "std_diff=" << FormatDouble(r.std_diff) << '\n';
  return os.str();
}

std::string FormatScores(const TrialList& trials,
                         const std::vector<double>& scores) {
  std::string out;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const Trial& t = trials.trials[i];
    out += t.same ? "1\t" : "0\t";
    out += t.enroll + '\t' + t.test + '\t' + FormatDouble(scores[i]) + '\n';
  }
  return out;
}

}  // namespace editnet
