// Copyright 2026 The avcgate Authors. All Rights Reserved.
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

// Scoring a directory of predicted saliency maps against a manifest.
//
// Predictions live at <pred_dir>/<video id>/<frame index, 5 digits>.<ext>
// with ext one of pgm, pnm, ppm or fmat. Every manifest frame needs exactly
// one prediction and every prediction file must belong to a manifest frame.

#ifndef AVCGATE_EVALUATION_HPP_
#define AVCGATE_EVALUATION_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "avcgate/dataset.hpp"
#include "avcgate/metrics.hpp"

namespace avcgate {

struct ScoredFrame {
  std::string video;
  std::size_t frame = 0;
};

struct EvaluationRun {
  MetricReport report;
  std::vector<ScoredFrame> frames;  // parallel to report.per_frame
  std::size_t frames_without_fixations = 0;
};

std::filesystem::path prediction_path(const std::filesystem::path& pred_dir,
                                      const std::string& video, std::size_t frame,
                                      std::string_view extension);

// Throws PairingError listing unmatched frames and stray files, and
// ShapeMismatch when a prediction differs in size from its frame.
EvaluationRun evaluate_prediction_dir(const std::filesystem::path& pred_dir,
                                      const DatasetManifest& manifest,
                                      const EvaluationOptions& options = {});

// Per-frame rows followed by a `mean` row; skipped cells are empty.
std::string metric_report_csv(const MetricReport& report, std::span<const ScoredFrame> frames);
std::string format_metric_summary(const MetricReport& report);

}  // namespace avcgate

#endif  // AVCGATE_EVALUATION_HPP_
