#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "padkit/metrics.hpp"

namespace padkit {

/// CSV `tau,apcer,bpcer`, one line per sweep point; infinite taus print as inf/-inf.
void write_det_csv(const DetCurve& curve, std::ostream& out);
void write_det_csv(const DetCurve& curve, const std::filesystem::path& path);

enum class DetAxisScale { NormalDeviate, Linear };

struct DetSeries {
  std::string label;
  DetCurve curve;
};

struct DetPlotOptions {
  DetAxisScale scale = DetAxisScale::NormalDeviate;
  int width = 560;
  int height = 560;
  std::string title;
  /// Axis range for the normal-deviate scale, as error rates.
  double min_rate = 0.001;
  double max_rate = 0.5;
};

/// Standalone SVG with APCER on x and BPCER on y.
std::string render_det_svg(const std::vector<DetSeries>& series, const DetPlotOptions& options);

}  // namespace padkit
