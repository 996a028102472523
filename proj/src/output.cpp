#include "raisac/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "raisac/config.hpp"
#include "raisac/error.hpp"

namespace raisac {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string g12(double v) { return fmt("%.12g", v); }

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Ticks {
  double lo = 0.0;
  double hi = 1.0;
  double step = 1.0;
};

// Rounds [lo, hi] outward to a 1-2-5 step with roughly `target` intervals.
Ticks nice_ticks(double lo, double hi, int target) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  return {std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string scheme_csv(const SchemeResult& scheme) {
  std::string out = "gamma_th_db,gamma_th_linear,rate_bps_hz";
  for (const auto& c : scheme.extra_columns) out += "," + c;
  out += '\n';
  for (std::size_t i = 0; i < scheme.points.size(); ++i) {
    const auto& pt = scheme.points[i];
    out += g12(linear_to_db(pt.gamma_th)) + "," + g12(pt.gamma_th) + "," + g12(pt.rate);
    if (i < scheme.extras.size()) {
      for (double v : scheme.extras[i]) out += "," + g12(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<RegionPoint> parse_scheme_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("gamma_th_db,gamma_th_linear,rate_bps_hz", 0) != 0) {
    throw Error(ErrorKind::IoError, "missing CSV header");
  }
  std::vector<RegionPoint> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string db, lin, rate;
    if (!std::getline(row, db, ',') || !std::getline(row, lin, ',') ||
        !std::getline(row, rate, ',')) {
      throw Error(ErrorKind::IoError, "short CSV row: " + line);
    }
    try {
      out.push_back({std::stod(lin), std::stod(rate)});
    } catch (const std::exception&) {
      throw Error(ErrorKind::IoError, "bad CSV number: " + line);
    }
  }
  return out;
}

std::string render_svg(const std::vector<SchemeResult>& schemes, const std::string& title) {
  constexpr double kWidth = 800.0;
  constexpr double kHeight = 600.0;
  constexpr double kLeft = 80.0;
  constexpr double kRight = 30.0;
  constexpr double kTop = 50.0;
  constexpr double kBottom = 70.0;

  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const auto& s : schemes) {
    for (const auto& pt : s.points) {
      if (!(pt.gamma_th > 0.0)) continue;
      const double x = linear_to_db(pt.gamma_th);
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, pt.rate);
      y_hi = std::max(y_hi, pt.rate);
    }
  }
  if (!std::isfinite(x_lo)) {
    x_lo = 0.0;
    x_hi = 1.0;
    y_lo = 0.0;
    y_hi = 1.0;
  }
  const Ticks xt = nice_ticks(x_lo, x_hi, 8);
  const Ticks yt = nice_ticks(y_lo, y_hi, 8);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xt.lo) / (xt.hi - xt.lo) * pw; };
  auto sy = [&](double y) { return kTop + (yt.hi - y) / (yt.hi - yt.lo) * ph; };
  auto px = [](double v) { return fmt("%.2f", v); };

  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"600\" "
       "viewBox=\"0 0 800 600\">\n";
  o += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  o += "<text x=\"400\" y=\"30\" font-family=\"sans-serif\" font-size=\"16\" "
       "text-anchor=\"middle\">" + escape_xml(title) + "</text>\n";

  // Grid and ticks.
  o += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  const int nx = static_cast<int>(std::lround((xt.hi - xt.lo) / xt.step));
  for (int i = 0; i <= nx; ++i) {
    const double v = xt.lo + i * xt.step;
    const std::string x = px(sx(v));
    o += "<line x1=\"" + x + "\" y1=\"" + px(kTop) + "\" x2=\"" + x + "\" y2=\"" +
         px(kTop + ph) + "\" stroke=\"#dddddd\"/>\n";
    o += "<text x=\"" + x + "\" y=\"" + px(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
         fmt("%g", std::abs(v) < 1e-9 * xt.step ? 0.0 : v) + "</text>\n";
  }
  const int ny = static_cast<int>(std::lround((yt.hi - yt.lo) / yt.step));
  for (int i = 0; i <= ny; ++i) {
    const double v = yt.lo + i * yt.step;
    const std::string y = px(sy(v));
    o += "<line x1=\"" + px(kLeft) + "\" y1=\"" + y + "\" x2=\"" + px(kLeft + pw) + "\" y2=\"" +
         y + "\" stroke=\"#dddddd\"/>\n";
    o += "<text x=\"" + px(kLeft - 8) + "\" y=\"" + px(sy(v) + 4) + "\" text-anchor=\"end\">" +
         fmt("%g", std::abs(v) < 1e-9 * yt.step ? 0.0 : v) + "</text>\n";
  }
  o += "</g>\n";
  o += "<rect x=\"" + px(kLeft) + "\" y=\"" + px(kTop) + "\" width=\"" + px(pw) +
       "\" height=\"" + px(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  o += "<text x=\"" + px(kLeft + pw / 2) + "\" y=\"" + px(kHeight - 20) +
       "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">"
       "Sensing threshold (dB)</text>\n";
  o += "<text x=\"20\" y=\"" + px(kTop + ph / 2) + "\" font-family=\"sans-serif\" font-size=\"14\" "
       "text-anchor=\"middle\" transform=\"rotate(-90 20 " + px(kTop + ph / 2) +
       ")\">Rate (bits/s/Hz)</text>\n";

  for (std::size_t k = 0; k < schemes.size(); ++k) {
    const auto& s = schemes[k];
    const char* color = kPalette[k % std::size(kPalette)];
    std::string pts;
    for (const auto& pt : s.points) {
      if (!(pt.gamma_th > 0.0)) continue;
      if (!pts.empty()) pts += ' ';
      pts += px(sx(linear_to_db(pt.gamma_th))) + "," + px(sy(pt.rate));
    }
    const bool dashed = k >= std::size(kPalette);
    o += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\"" +
         (dashed ? " stroke-dasharray=\"6 3\"" : "") + " points=\"" + pts + "\"/>\n";
  }

  // Legend in the lower-left corner of the plot area, where the curves are sparse.
  const double lx = kLeft + 12;
  const double ly = kTop + ph - 12 - 18.0 * static_cast<double>(schemes.size());
  o += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect x=\"" + px(lx - 6) + "\" y=\"" + px(ly - 6) + "\" width=\"190\" height=\"" +
       px(18.0 * static_cast<double>(schemes.size()) + 8) +
       "\" fill=\"white\" fill-opacity=\"0.85\" stroke=\"#999999\"/>\n";
  for (std::size_t k = 0; k < schemes.size(); ++k) {
    const double y = ly + 18.0 * static_cast<double>(k) + 6;
    const char* color = kPalette[k % std::size(kPalette)];
    o += "<line x1=\"" + px(lx) + "\" y1=\"" + px(y) + "\" x2=\"" + px(lx + 28) + "\" y2=\"" +
         px(y) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + px(lx + 36) + "\" y=\"" + px(y + 4) + "\">" +
         escape_xml(schemes[k].label.empty() ? schemes[k].name : schemes[k].label) + "</text>\n";
  }
  o += "</g>\n</svg>\n";
  return o;
}

std::string report_csv(const std::vector<OracleReport>& reports) {
  std::string out = "claim_id,closed_form,brute_force,rel_error,tolerance,passed,seed\n";
  for (const auto& r : reports) {
    out += r.claim_id + "," + g12(r.closed_form) + "," + g12(r.brute_force) + "," +
           g12(r.rel_error) + "," + g12(r.tolerance) + "," + (r.passed ? "true" : "false") + "," +
           std::to_string(r.seed) + "\n";
  }
  return out;
}

std::string report_table(const std::vector<OracleReport>& reports) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-40s %-20s %-20s %-11s %-11s %s\n", "claim", "closed_form",
                "brute_force", "rel_error", "tolerance", "result");
  out += line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-40s %-20.12g %-20.12g %-11.3e %-11.3e %s\n",
                  r.claim_id.c_str(), r.closed_form, r.brute_force, r.rel_error, r.tolerance,
                  r.passed ? "PASS" : "FAIL");
    out += line;
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  f << text;
  f.close();
  if (!f) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

std::vector<std::filesystem::path> emit_outputs(const std::vector<SchemeResult>& schemes,
                                                const std::filesystem::path& dir,
                                                const std::string& figure,
                                                const std::string& title) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto& s : schemes) {
    const auto path = dir / (s.name + ".csv");
    write_text_file(path, scheme_csv(s));
    written.push_back(path);
  }
  const auto svg = dir / (figure + ".svg");
  write_text_file(svg, render_svg(schemes, title));
  written.push_back(svg);
  return written;
}

}  // namespace raisac
