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


#include "nrs/eval/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nrs/pipeline/fastnrs.hpp"
#include "nrs/util/manifest.hpp"
#include "nrs/util/random.hpp"

namespace nrs {

std::vector<LengthSample> selector_confidences(LeafSampler& sampler, const std::vector<Formula>& inputs,
                                               std::uint64_t seed) {
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < inputs.size(); ++i) seeds.push_back(Rng::derive(seed, i));
  std::vector<LengthSample> out;
  constexpr std::size_t kBatch = 64;
  for (std::size_t b = 0; b < inputs.size(); b += kBatch) {
    const std::size_t e = std::min(inputs.size(), b + kBatch);
    std::vector<Formula> chunk(inputs.begin() + static_cast<std::ptrdiff_t>(b),
                               inputs.begin() + static_cast<std::ptrdiff_t>(e));
    std::vector<std::uint64_t> chunk_seeds(seeds.begin() + static_cast<std::ptrdiff_t>(b),
                                           seeds.begin() + static_cast<std::ptrdiff_t>(e));
    auto samples = sampler.sample(chunk, chunk_seeds);
    for (std::size_t i = 0; i < samples.size(); ++i) out.push_back({chunk[i].size(), samples[i].confidence});
  }
  return out;
}

WindowingCalibration calibrate_windowing_threshold(const std::vector<LengthSample>& samples,
                                                   const WindowingOptions& options) {
  if (options.bin_width == 0) throw std::invalid_argument("bin width must be positive");
  WindowingCalibration out;
  if (samples.empty()) return out;
  std::size_t longest = 0;
  for (const auto& s : samples) longest = std::max(longest, s.length);
  const std::size_t n_bins = longest / options.bin_width + 1;
  std::vector<double> sums(n_bins, 0.0);
  std::vector<int> counts(n_bins, 0);
  for (const auto& s : samples) {
    sums[s.length / options.bin_width] += s.confidence;
    ++counts[s.length / options.bin_width];
  }
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (counts[b] == 0) continue;
    out.bins.push_back(LengthBin{b * options.bin_width, (b + 1) * options.bin_width, counts[b],
                                 sums[b] / counts[b], counts[b] < options.min_samples});
  }
  std::optional<double> reference;
  for (const auto& bin : out.bins) {
    if (bin.sparse) continue;
    if (!reference) {
      reference = bin.mean;
      continue;
    }
    if (bin.mean < options.ratio * *reference) {
      out.threshold = static_cast<int>(bin.lo);
      break;
    }
  }
  return out;
}

std::string windowing_csv(const WindowingCalibration& c) {
  std::ostringstream os;
  os << "length_lo,length_hi,count,mean_confidence,sparse\n";
  for (const auto& b : c.bins) {
    os << b.lo << ',' << b.hi << ',' << b.count << ',' << format_double(b.mean) << ',' << (b.sparse ? 1 : 0) << '\n';
  }
  return os.str();
}

std::vector<double> solver_log_confidences(Solver& solver, const std::vector<Formula>& leaves, std::size_t batch) {
  std::vector<double> out;
  for (std::size_t b = 0; b < leaves.size(); b += batch) {
    const std::size_t e = std::min(leaves.size(), b + batch);
    auto outputs = solver.solve(std::vector<Formula>(leaves.begin() + static_cast<std::ptrdiff_t>(b),
                                                     leaves.begin() + static_cast<std::ptrdiff_t>(e)));
    for (const auto& o : outputs) out.push_back(o.log_confidence);
  }
  return out;
}

SolverCalibration calibrate_solver_threshold(const std::vector<double>& log_confidences, Domain domain,
                                             const SolverCalibrationOptions& options) {
  if (options.quantile < 0.0 || options.quantile > 1.0) throw std::invalid_argument("quantile outside [0, 1]");
  SolverCalibration out;
  if (options.use_shipped_theta) out.theta = ReplacementPolicy::default_threshold(domain);
  if (log_confidences.empty()) return out;
  std::vector<double> sorted = log_confidences;
  std::sort(sorted.begin(), sorted.end());
  out.minimum = sorted.front();
  const auto rank = static_cast<std::size_t>(std::floor(options.quantile * static_cast<double>(sorted.size() - 1)));
  if (!options.use_shipped_theta) out.theta = sorted[rank];

  const double lo = sorted.front();
  const double hi = std::max(sorted.back(), lo + 1e-12);
  const double width = (hi - lo) / options.bins;
  for (int b = 0; b < options.bins; ++b) out.histogram.push_back({lo + b * width, lo + (b + 1) * width, 0});
  for (double v : sorted) {
    auto b = static_cast<int>((v - lo) / width);
    ++out.histogram[static_cast<std::size_t>(std::clamp(b, 0, options.bins - 1))].count;
  }
  return out;
}

std::string solver_histogram_csv(const SolverCalibration& c) {
  std::ostringstream os;
  os << "lo,hi,count,log10_count\n";
  for (const auto& b : c.histogram) {
    os << format_double(b.lo) << ',' << format_double(b.hi) << ',' << b.count << ',';
    if (b.count > 0) os << format_double(std::log10(static_cast<double>(b.count)));
    os << '\n';
  }
  return os.str();
}

}  // namespace nrs
