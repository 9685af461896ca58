#include "padkit/det_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "padkit/error.hpp"

namespace padkit {
namespace {

std::string tau_text(double tau) {
  if (std::isinf(tau)) return tau > 0 ? "inf" : "-inf";
  return format_double(tau);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string percent_label(double rate) {
  char buf[32];
  const double pct = rate * 100.0;
  std::snprintf(buf, sizeof(buf), pct < 1.0 ? "%.1f" : "%.0f", pct);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

class Axis {
 public:
  Axis(DetAxisScale scale, double min_rate, double max_rate) : scale_(scale) {
    if (scale_ == DetAxisScale::Linear) {
      lo_ = 0.0;
      hi_ = 1.0;
      clamp_lo_ = 0.0;
      clamp_hi_ = 1.0;
    } else {
      clamp_lo_ = min_rate;
      clamp_hi_ = max_rate;
      lo_ = probit(min_rate);
      hi_ = probit(max_rate);
    }
  }

  /// Position in [0,1] along the axis.
  double position(double rate) const {
    const double r = std::clamp(rate, clamp_lo_, clamp_hi_);
    const double v = scale_ == DetAxisScale::Linear ? r : probit(r);
    return (v - lo_) / (hi_ - lo_);
  }

  std::vector<double> ticks() const {
    if (scale_ == DetAxisScale::Linear) return {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    static constexpr std::array<double, 11> kTicks{0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
    std::vector<double> out;
    for (double t : kTicks) {
      if (t >= clamp_lo_ && t <= clamp_hi_) out.push_back(t);
    }
    return out;
  }

 private:
  static double probit(double p) { return boost::math::quantile(boost::math::normal_distribution<double>(), p); }

  DetAxisScale scale_;
  double lo_ = 0.0;
  double hi_ = 1.0;
  double clamp_lo_ = 0.0;
  double clamp_hi_ = 1.0;
};

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#2ca02c", "#d62728", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

void write_det_csv(const DetCurve& curve, std::ostream& out) {
  out << "tau,apcer,bpcer\n";
  for (const auto& p : curve.points) {
    out << tau_text(p.tau) << ',' << format_double(p.apcer) << ',' << format_double(p.bpcer) << '\n';
  }
}

void write_det_csv(const DetCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write_det_csv(curve, out);
  if (!out) throw Error(ErrorCode::Io, "write failure on " + path.string());
}

std::string render_det_svg(const std::vector<DetSeries>& series, const DetPlotOptions& options) {
  if (options.scale == DetAxisScale::NormalDeviate &&
      !(options.min_rate > 0.0 && options.min_rate < options.max_rate && options.max_rate < 1.0)) {
    throw Error(ErrorCode::Usage, "normal-deviate axis range must satisfy 0 < min < max < 1");
  }
  const Axis axis(options.scale, options.min_rate, options.max_rate);
  const double left = 64, right = 16, top = options.title.empty() ? 16 : 36, bottom = 52;
  const double pw = options.width - left - right;
  const double ph = options.height - top - bottom;
  auto px = [&](double apcer) { return left + axis.position(apcer) * pw; };
  auto py = [&](double bpcer) { return top + (1.0 - axis.position(bpcer)) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    svg << "<text x=\"" << num(left + pw / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
        << escape(options.title) << "</text>\n";
  }
  for (double t : axis.ticks()) {
    const double x = px(t);
    const double y = py(t);
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(top) << "\" x2=\"" << num(x) << "\" y2=\"" << num(top + ph)
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left + pw) << "\" y2=\"" << num(y)
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << num(x) << "\" y=\"" << num(top + ph + 14) << "\" text-anchor=\"middle\">"
        << percent_label(t) << "</text>\n";
    svg << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << percent_label(t)
        << "</text>\n";
  }
  svg << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(top + ph + 36)
      << "\" text-anchor=\"middle\">APCER (%)</text>\n";
  svg << "<text transform=\"translate(16," << num(top + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">BPCER (%)</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % kPalette.size()];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : series[s].curve.points) svg << num(px(p.apcer)) << ',' << num(py(p.bpcer)) << ' ';
    svg << "\"/>\n";
    const double ly = top + 14 + 14 * static_cast<double>(s);
    svg << "<line x1=\"" << num(left + pw - 150) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(left + pw - 130)
        << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << num(left + pw - 125) << "\" y=\"" << num(ly) << "\">" << escape(series[s].label)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace padkit
