#include "kslog/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kslog/errors.hpp"

namespace kslog {

std::string format_number(double x) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows) {
  if (rows.empty()) throw PreconditionError("diagnostics_csv: no rows");
  std::string out = kDiagnosticsHeader;
  out += '\n';
  for (const DiagnosticsRow& r : rows) {
    for (double x : {r.t, r.dt, r.mass_u, r.mass_v, r.max_u, r.min_u, r.F, r.dissipation_rhs}) {
      out += format_number(x);
      out += ',';
    }
    out += format_number(r.identity_residual);
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << content;
  os.close();
  if (!os) throw IoError("write to " + path + " failed");
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 30.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 70.0;

std::string escape(const std::string& s) {
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

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(4);
  ss << x;
  return ss.str();
}

std::string svg_open(const std::string& title) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" "
        "height=\"600\">\n";
  os << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  os << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"18\">"
     << escape(title) << "</text>\n";
  return os.str();
}

// Pads a degenerate range so flat series still map somewhere sensible.
std::pair<double, double> padded(double lo, double hi) {
  if (hi > lo) return {lo, hi};
  const double pad = std::abs(lo) > 0.0 ? 0.05 * std::abs(lo) : 1.0;
  return {lo - pad, hi + pad};
}

}  // namespace

std::string svg_line_chart(const LineChart& c) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < std::min(c.x.size(), c.y.size()); ++k) {
    if (!std::isfinite(c.x[k]) || !std::isfinite(c.y[k])) continue;
    if (c.log_y) {
      if (c.y[k] > 0.0) pts.emplace_back(c.x[k], std::log10(c.y[k]));
    } else {
      pts.emplace_back(c.x[k], c.y[k]);
    }
  }
  std::ostringstream os;
  os << svg_open(c.title);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kLeft + 0.5 * pw << "\" y=\"" << kHeight - 20
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
     << escape(c.x_label) << "</text>\n";
  os << "<text x=\"20\" y=\"" << kTop + 0.5 * ph
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
        "transform=\"rotate(-90 20 "
     << kTop + 0.5 * ph << ")\">" << escape(c.log_y ? "log10 " + c.y_label : c.y_label)
     << "</text>\n";

  if (!pts.empty()) {
    auto [xmin, xmax] = std::minmax_element(pts.begin(), pts.end(),
                                            [](auto& a, auto& b) { return a.first < b.first; });
    auto [ymin, ymax] = std::minmax_element(pts.begin(), pts.end(),
                                            [](auto& a, auto& b) { return a.second < b.second; });
    auto [x0, x1] = padded(xmin->first, xmax->first);
    auto [y0, y1] = padded(ymin->second, ymax->second);
    auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return kTop + ph - (y - y0) / (y1 - y0) * ph; };

    for (int k = 0; k <= 4; ++k) {
      const double xv = x0 + (x1 - x0) * k / 4.0;
      const double yv = y0 + (y1 - y0) * k / 4.0;
      os << "<text x=\"" << sx(xv) << "\" y=\"" << kTop + ph + 18
         << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(xv)
         << "</text>\n";
      os << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy(yv) + 4
         << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(yv)
         << "</text>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (k) os << ' ';
      os << fmt(sx(pts[k].first)) << ',' << fmt(sy(pts[k].second));
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_heat_map(const HeatMap& m) {
  const std::size_t nx = m.x_values.size();
  const std::size_t ny = m.y_values.size();
  if (nx == 0 || ny == 0 || m.labels.size() != nx * ny)
    throw PreconditionError("svg_heat_map: labels must cover the full axis product");
  auto color = [](const std::string& label) {
    if (label == "Global") return "#4caf50";
    if (label == "BlowUp") return "#e53935";
    if (label == "Inconclusive") return "#fbc02d";
    if (label == "NumericalFailure") return "#616161";
    return "#bdbdbd";
  };
  const double pw = kWidth - kLeft - kRight - 140.0;
  const double ph = kHeight - kTop - kBottom;
  const double cw = pw / nx;
  const double ch = ph / ny;
  std::ostringstream os;
  os << svg_open(m.title);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      // y grows upward
      const double x = kLeft + i * cw;
      const double y = kTop + (ny - 1 - j) * ch;
      const std::string& label = m.labels[j * nx + i];
      os << "<rect class=\"cell\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw
         << "\" height=\"" << ch << "\" fill=\"" << color(label)
         << "\" stroke=\"white\"><title>" << escape(m.x_name) << '=' << fmt(m.x_values[i]) << ' '
         << escape(m.y_name) << '=' << fmt(m.y_values[j]) << ": " << escape(label)
         << "</title></rect>\n";
    }
  }
  for (std::size_t i = 0; i < nx; ++i) {
    os << "<text x=\"" << kLeft + (i + 0.5) * cw << "\" y=\"" << kTop + ph + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
       << fmt(m.x_values[i]) << "</text>\n";
  }
  for (std::size_t j = 0; j < ny; ++j) {
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + (ny - 1 - j + 0.5) * ch + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
       << fmt(m.y_values[j]) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + 0.5 * pw << "\" y=\"" << kHeight - 20
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
     << escape(m.x_name) << "</text>\n";
  os << "<text x=\"20\" y=\"" << kTop + 0.5 * ph
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
        "transform=\"rotate(-90 20 "
     << kTop + 0.5 * ph << ")\">" << escape(m.y_name) << "</text>\n";
  double ly = kTop + 10;
  for (const char* label : {"Global", "BlowUp", "Inconclusive", "NumericalFailure"}) {
    os << "<rect x=\"" << kWidth - 150 << "\" y=\"" << ly << "\" width=\"14\" height=\"14\" fill=\""
       << color(label) << "\"/>\n";
    os << "<text x=\"" << kWidth - 130 << "\" y=\"" << ly + 12
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n";
    ly += 22;
  }
  os << "</svg>\n";
  return os.str();
}

std::string state_csv(const State& s, const Grid& g) {
  require_on_grid(s.u, g);
  require_on_grid(s.v, g);
  std::string out = g.radial() ? "r,u,v\n" : "x,u,v\n";
  auto xc = g.centers();
  for (int i = 0; i < g.cells(); ++i) {
    out += format_number(xc[i]);
    out += ',';
    out += format_number(s.u.values[i]);
    out += ',';
    out += format_number(s.v.values[i]);
    out += '\n';
  }
  return out;
}

}  // namespace kslog
