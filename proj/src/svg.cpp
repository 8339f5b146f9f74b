#include "mgen/svg.hpp"

#include <algorithm>
#include <sstream>

namespace mgen {

namespace {

constexpr int kW = 640, kH = 400;
constexpr int kMargin = 50;

struct SvgDoc {
  std::ostringstream os;
  SvgDoc(const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
       << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
       << "\">\n";
    os << "<rect width=\"" << kW << "\" height=\"" << kH
       << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"15\">"
       << title << "</text>\n";
  }
  void line(double x1, double y1, double x2, double y2, const char* color,
            double width = 1.0) {
    os << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2
       << "\" y2=\"" << y2 << "\" stroke=\"" << color << "\" stroke-width=\""
       << width << "\"/>\n";
  }
  void rect(double x, double y, double w, double h, const char* color) {
    os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w
       << "\" height=\"" << h << "\" fill=\"" << color << "\"/>\n";
  }
  void text(double x, double y, const std::string& s, const char* anchor,
            int size = 11) {
    os << "<text x=\"" << x << "\" y=\"" << y << "\" text-anchor=\"" << anchor
       << "\" font-family=\"sans-serif\" font-size=\"" << size << "\">" << s
       << "</text>\n";
  }
  std::string finish() {
    os << "</svg>\n";
    return os.str();
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

const char* kPalette[] = {"#4878cf", "#ee854a", "#6acc65", "#d65f5f",
                          "#956cb4", "#8c613c"};

}  // namespace

std::string svg_ir_curve(const IRCurve& curve, const std::string& title) {
  SvgDoc doc(title);
  const double x0 = kMargin, x1 = kW - kMargin;
  const double y0 = kH - kMargin, y1 = kMargin + 10;

  double tmin = curve.thetas.front(), tmax = curve.thetas.back();
  if (tmax <= tmin) tmax = tmin + 1.0;
  double irmax = 1e-9;
  for (double v : curve.ir_totals) irmax = std::max(irmax, v);

  auto px = [&](double theta) {
    return x0 + (theta - tmin) / (tmax - tmin) * (x1 - x0);
  };
  auto py = [&](double ir) { return y0 - ir / irmax * (y0 - y1); };

  doc.line(x0, y0, x1, y0, "#333");
  doc.line(x0, y0, x0, y1, "#333");
  doc.text((x0 + x1) / 2, kH - 14, "theta", "middle");
  doc.text(16, (y0 + y1) / 2, "IR", "middle");
  doc.text(x0, kH - 30, fmt(tmin), "middle");
  doc.text(x1, kH - 30, fmt(tmax), "middle");
  doc.text(x0 - 6, y1 + 4, fmt(irmax), "end");

  doc.os << "<polyline fill=\"none\" stroke=\"" << kPalette[0]
         << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < curve.thetas.size(); ++i)
    doc.os << px(curve.thetas[i]) << "," << py(curve.ir_totals[i]) << " ";
  doc.os << "\"/>\n";

  const double bx = px(curve.best_theta);
  doc.line(bx, y0, bx, y1, "#d62728", 1.5);
  doc.text(bx + 4, y1 + 14, "best theta = " + fmt(curve.best_theta), "start");
  return doc.finish();
}

std::string svg_patterns(const PatternSet& patterns, std::size_t total_frames,
                         const std::string& title) {
  SvgDoc doc(title);
  const double x0 = kMargin, x1 = kW - kMargin;
  const double y0 = kMargin + 20, y1 = kH - kMargin;
  const std::size_t rows = std::max<std::size_t>(patterns.motifs.size(), 1);
  const double row_h = (y1 - y0) / static_cast<double>(rows);
  const double frames =
      std::max<std::size_t>(total_frames, 1);

  doc.line(x0, y1, x1, y1, "#333");
  doc.text((x0 + x1) / 2, kH - 14, "time frames", "middle");
  doc.text(x1, y1 + 16, std::to_string(total_frames), "middle");

  for (std::size_t m = 0; m < patterns.motifs.size(); ++m) {
    const auto& motif = patterns.motifs[m];
    const double yc = y0 + row_h * m + row_h * 0.25;
    const char* color = kPalette[m % 6];
    doc.text(x0 - 6, yc + row_h * 0.3, "m" + std::to_string(m + 1), "end");
    for (int end : motif.occurrence_ends) {
      const double a = x0 + (end - motif.length) / frames * (x1 - x0);
      const double b = x0 + static_cast<double>(end) / frames * (x1 - x0);
      doc.rect(a, yc, std::max(1.0, b - a), row_h * 0.5, color);
    }
  }
  if (patterns.motifs.empty())
    doc.text((x0 + x1) / 2, (y0 + y1) / 2, "no motifs found", "middle");
  return doc.finish();
}

std::string svg_model_report(const ModelComparisonReport& report,
                             const std::string& title) {
  SvgDoc doc(title);
  const double x0 = kMargin, x1 = kW - kMargin;
  const double y0 = kH - kMargin, y1 = kMargin + 10;
  double vmax = 1e-9;
  for (const auto& g : report.groups) vmax = std::max(vmax, g.mean + g.mse);
  vmax *= 1.1;

  auto py = [&](double v) { return y0 - v / vmax * (y0 - y1); };
  doc.line(x0, y0, x1, y0, "#333");
  doc.line(x0, y0, x0, y1, "#333");
  doc.text(x0 - 6, y1 + 4, fmt(vmax), "end");

  const double slot = (x1 - x0) / static_cast<double>(report.groups.size());
  for (std::size_t i = 0; i < report.groups.size(); ++i) {
    const auto& g = report.groups[i];
    const double cx = x0 + slot * (i + 0.5);
    const double bw = slot * 0.5;
    doc.rect(cx - bw / 2, py(g.mean), bw, y0 - py(g.mean), kPalette[i % 6]);
    doc.line(cx, py(g.mean - g.mse), cx, py(g.mean + g.mse), "#333", 1.5);
    doc.line(cx - 6, py(g.mean - g.mse), cx + 6, py(g.mean - g.mse), "#333");
    doc.line(cx - 6, py(g.mean + g.mse), cx + 6, py(g.mean + g.mse), "#333");
    doc.text(cx, y0 + 16, g.name, "middle");
    doc.text(cx, py(g.mean) - 6, fmt(g.mean), "middle");
  }
  doc.text((x0 + x1) / 2, kH - 14,
           "ANOVA p = " + fmt(report.anova.p_value), "middle");
  return doc.finish();
}

}  // namespace mgen
