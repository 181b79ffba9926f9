#include "evrisk/svg.hpp"

#include <algorithm>
#include <cstdio>

#include "evrisk/errors.hpp"

namespace evrisk {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 56.0;
constexpr double kMarginRight = 16.0;
constexpr double kTitleBand = 28.0;
constexpr double kPanelGap = 34.0;
constexpr double kBottomBand = 26.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Scale {
  double lo = 0.0, hi = 1.0;
  double px0 = 0.0, px1 = 1.0;
  [[nodiscard]] double at(double v) const {
    return px0 + (v - lo) / (hi - lo) * (px1 - px0);
  }
};

void span_of(const std::vector<double>& v, double& lo, double& hi) {
  lo = *std::min_element(v.begin(), v.end());
  hi = *std::max_element(v.begin(), v.end());
  if (hi - lo < 1e-12) {  // flat series still needs a visible band
    lo -= 0.5;
    hi += 0.5;
  }
}

}  // namespace

std::string render_snapshot_svg(const PlotData& data) {
  if (data.moneyness.empty() || data.moneyness.size() != data.fitted_iv.size()) {
    throw IoError("plot data needs a nonempty fitted curve");
  }
  const bool has_density = !data.density_m.empty();

  const double top_y0 = kTitleBand;
  const double top_y1 = has_density ? kHeight * 0.52 : kHeight - kBottomBand;
  const double bot_y0 = top_y1 + kPanelGap;
  const double bot_y1 = kHeight - kBottomBand;

  double m_lo, m_hi;
  span_of(data.moneyness, m_lo, m_hi);
  double iv_lo, iv_hi;
  span_of(data.fitted_iv, iv_lo, iv_hi);
  for (size_t i = 0; i < data.observed_iv.size(); ++i) {
    iv_lo = std::min(iv_lo, data.observed_iv[i]);
    iv_hi = std::max(iv_hi, data.observed_iv[i]);
  }
  const double iv_pad = (iv_hi - iv_lo) * 0.08 + 1e-9;
  Scale mx{m_lo, m_hi, kMarginLeft, kWidth - kMarginRight};
  Scale ivy{iv_lo - iv_pad, iv_hi + iv_pad, top_y1, top_y0};

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"#ffffff\"/>\n";
  out += "<text x=\"" + num(kWidth / 2) + "\" y=\"18\" font-family=\"monospace\" "
         "font-size=\"13\" text-anchor=\"middle\" fill=\"#222222\">" +
         xml_escape(data.title) + "</text>\n";

  // ---- smile panel ----
  out += "<rect x=\"" + num(kMarginLeft) + "\" y=\"" + num(top_y0) +
         "\" width=\"" + num(kWidth - kMarginLeft - kMarginRight) +
         "\" height=\"" + num(top_y1 - top_y0) +
         "\" fill=\"none\" stroke=\"#999999\"/>\n";
  out += "<polyline fill=\"none\" stroke=\"#3a6ea5\" stroke-width=\"1.5\" points=\"";
  for (size_t i = 0; i < data.moneyness.size(); ++i) {
    if (i) out += ' ';
    out += num(mx.at(data.moneyness[i])) + ',' + num(ivy.at(data.fitted_iv[i]));
  }
  out += "\"/>\n";
  for (size_t i = 0; i < data.observed_m.size(); ++i) {
    out += "<circle cx=\"" + num(mx.at(data.observed_m[i])) + "\" cy=\"" +
           num(ivy.at(data.observed_iv[i])) +
           "\" r=\"3\" fill=\"#d9822b\" stroke=\"#222222\" stroke-width=\"0.5\"/>\n";
  }
  out += "<text x=\"" + num(kMarginLeft) + "\" y=\"" + num(top_y0 - 6) +
         "\" font-family=\"monospace\" font-size=\"10\" fill=\"#444444\">iv " +
         label(iv_lo) + " .. " + label(iv_hi) + "</text>\n";
  out += "<text x=\"" + num(kWidth - kMarginRight) + "\" y=\"" +
         num(top_y1 + 14) + "\" font-family=\"monospace\" font-size=\"10\" "
         "text-anchor=\"end\" fill=\"#444444\">moneyness " + label(m_lo) +
         " .. " + label(m_hi) + "</text>\n";

  // ---- density panel ----
  if (has_density) {
    double p_hi = *std::max_element(data.probability.begin(),
                                    data.probability.end());
    if (p_hi <= 0.0) p_hi = 1.0;
    Scale py{0.0, p_hi * 1.08, bot_y1, bot_y0};
    out += "<rect x=\"" + num(kMarginLeft) + "\" y=\"" + num(bot_y0) +
           "\" width=\"" + num(kWidth - kMarginLeft - kMarginRight) +
           "\" height=\"" + num(bot_y1 - bot_y0) +
           "\" fill=\"none\" stroke=\"#999999\"/>\n";
    const double slot = (kWidth - kMarginLeft - kMarginRight) /
                        static_cast<double>(data.density_m.size());
    const double bar = slot * 0.72;
    for (size_t i = 0; i < data.density_m.size(); ++i) {
      const double x = mx.at(data.density_m[i]) - bar / 2.0;
      const double p = std::max(data.probability[i], 0.0);
      const double y = py.at(p);
      const char* fill = data.is_mode[i] ? "#c0504d" : "#8cb4d2";
      out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
             num(bar) + "\" height=\"" + num(bot_y1 - y) + "\" fill=\"" + fill +
             "\"/>\n";
    }
    out += "<text x=\"" + num(kMarginLeft) + "\" y=\"" + num(bot_y0 - 6) +
           "\" font-family=\"monospace\" font-size=\"10\" fill=\"#444444\">"
           "probability, modes highlighted</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace evrisk
