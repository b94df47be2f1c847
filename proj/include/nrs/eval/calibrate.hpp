// Copyright 2026 The NRS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef NRS_EVAL_CALIBRATE_HPP_
#define NRS_EVAL_CALIBRATE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nrs/pipeline/types.hpp"

namespace nrs {

struct LengthSample {
  std::size_t length = 0;
  double confidence = 0.0;
};

struct LengthBin {
  std::size_t lo = 0;  // inclusive
  std::size_t hi = 0;  // exclusive
  int count = 0;
  double mean = 0.0;
  // Fewer than the minimum sample count; ignored by knee detection.
  bool sparse = false;
};

struct WindowingCalibration {
  std::vector<LengthBin> bins;
  // Lower edge of the knee bin; nullopt keeps windowing disabled.
  std::optional<int> threshold;
};

struct WindowingOptions {
  std::size_t bin_width = 10;
  int min_samples = 10;
  // Knee: first bin whose mean falls below ratio x the first bin's mean.
  double ratio = 0.9;
};

// One full-formula sample per input; no windowing.
std::vector<LengthSample> selector_confidences(LeafSampler& sampler, const std::vector<Formula>& inputs,
                                               std::uint64_t seed);

WindowingCalibration calibrate_windowing_threshold(const std::vector<LengthSample>& samples,
                                                   const WindowingOptions& options = {});

std::string windowing_csv(const WindowingCalibration& c);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

struct SolverCalibration {
  double theta = 0.0;
  double minimum = 0.0;
  std::vector<HistogramBin> histogram;
};

struct SolverCalibrationOptions {
  double quantile = 0.001;
  int bins = 40;
  // Return the shipped constant for the domain instead of the proposal.
  bool use_shipped_theta = false;
};

std::vector<double> solver_log_confidences(Solver& solver, const std::vector<Formula>& leaves,
                                           std::size_t batch = 256);

// Proposes theta at the lower quantile of the log-confidences (nearest
// rank), so quantile 0 gives the minimum.
SolverCalibration calibrate_solver_threshold(const std::vector<double>& log_confidences, Domain domain,
                                             const SolverCalibrationOptions& options = {});

// Columns lo, hi, count, log10_count; empty bins have log10_count blank.
std::string solver_histogram_csv(const SolverCalibration& c);

}  // namespace nrs

#endif  // NRS_EVAL_CALIBRATE_HPP_
