#include "aprox/harness/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aprox::harness {

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const SweepResult& result) {
  SweepResult sorted = result;
  sorted.sort();
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : sorted.rows) {
    out << r.problem << ',' << r.noise << ',' << format_double(r.cond) << ',' << r.method << ','
        << (r.accelerated ? "true" : "false") << ',' << r.m << ',' << format_double(r.alpha0) << ',' << r.seed << ','
        << (r.k_to_eps ? std::to_string(*r.k_to_eps) : "") << ','
        << (r.samples_to_eps ? std::to_string(*r.samples_to_eps) : "") << ',' << format_double(r.final_gap) << ','
        << to_string(r.status) << '\n';
  }
  return out.str();
}

void write_csv(const SweepResult& result, const std::string& path) { write_text(path, to_csv(result)); }

SweepResult parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("csv: unexpected header '" + line + "'");
  SweepResult result;
  Index lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line, ',');
    if (f.size() != 12) throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected 12 fields");
    try {
      CellResult r;
      r.problem = f[0];
      r.noise = f[1];
      r.cond = std::stod(f[2]);
      r.method = f[3];
      r.accelerated = f[4] == "true";
      r.m = std::stoll(f[5]);
      r.alpha0 = std::stod(f[6]);
      r.seed = std::stoll(f[7]);
      if (!f[8].empty()) r.k_to_eps = std::stoll(f[8]);
      if (!f[9].empty()) r.samples_to_eps = std::stoll(f[9]);
      r.final_gap = std::stod(f[10]);
      r.status = run_status_from_string(f[11]);
      result.rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error("csv line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return result;
}

SweepResult read_csv(const std::string& path) { return parse_csv(read_text(path)); }

void write_profile_csv(const ProfileResult& profile, const std::string& path) {
  std::ostringstream out;
  out << "method,r,fraction\n";
  for (const auto& c : profile.curves) {
    for (std::size_t j = 0; j < c.ratios.size(); ++j) {
      out << c.method << ',' << format_double(c.ratios[j]) << ',' << format_double(c.fractions[j]) << '\n';
    }
  }
  write_text(path, out.str());
}

void write_speedup_csv(const std::map<std::string, std::map<Index, double>>& table, const std::string& path) {
  std::ostringstream out;
  out << "method,m,speedup\n";
  for (const auto& [method, row] : table) {
    for (const auto& [m, s] : row) out << method << ',' << m << ',' << format_double(s) << '\n';
  }
  write_text(path, out.str());
}

std::string render_svg(const std::vector<Series>& series, PlotKind kind, const std::string& title) {
  if (series.empty()) throw std::invalid_argument("render_svg: no series");
  const bool logx = kind == PlotKind::Speedup || kind == PlotKind::TimeVsStep || kind == PlotKind::Trace;
  const bool logy = kind != PlotKind::Profile;
  const double W = 720, H = 460, left = 70, right = 170, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;

  auto tx = [&](double v) { return logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return logy ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!logx || x > 0) && (!logy || y > 0);
  };

  double x0 = infinity(), x1 = -infinity(), y0 = infinity(), y1 = -infinity();
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      if (!usable(s.xs[i], s.ys[i])) continue;
      x0 = std::min(x0, tx(s.xs[i]));
      x1 = std::max(x1, tx(s.xs[i]));
      y0 = std::min(y0, ty(s.ys[i]));
      y1 = std::max(y1, ty(s.ys[i]));
    }
  }
  if (!std::isfinite(x0)) {
    x0 = 0;
    x1 = 1;
    y0 = 0;
    y1 = 1;
  }
  if (kind == PlotKind::Profile) {
    y0 = 0.0;
    y1 = 1.0;
  }
  if (kind == PlotKind::Speedup) {
    y0 = std::min(y0, x0);
    y1 = std::max(y1, x1);
  }
  if (x1 - x0 < 1e-12) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (y1 - y0 < 1e-12) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return top + ph - (v - y0) / (y1 - y0) * ph; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                  "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};
  std::ostringstream svg;
  svg.setf(std::ios::fixed);
  svg.precision(2);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title)
      << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  auto ticks = [](double lo, double hi, bool log) {
    std::vector<double> t;
    if (log) {
      for (double d = std::ceil(lo); d <= std::floor(hi) + 1e-9; d += 1.0) t.push_back(d);
      if (t.size() < 2) t = {lo, hi};
    } else {
      for (int i = 0; i <= 5; ++i) t.push_back(lo + (hi - lo) * i / 5.0);
    }
    return t;
  };
  auto label = [](double v, bool log) {
    char buf[32];
    if (log) {
      std::snprintf(buf, sizeof buf, "1e%g", std::round(v * 100) / 100);
    } else {
      std::snprintf(buf, sizeof buf, "%g", std::round(v * 1000) / 1000);
    }
    return std::string(buf);
  };
  for (double t : ticks(x0, x1, logx)) {
    svg << "<line x1=\"" << px(t) << "\" y1=\"" << top + ph << "\" x2=\"" << px(t) << "\" y2=\"" << top + ph + 5
        << "\" stroke=\"black\"/>\n<text x=\"" << px(t) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
        << label(t, logx) << "</text>\n";
  }
  for (double t : ticks(y0, y1, logy)) {
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << py(t) << "\" x2=\"" << left << "\" y2=\"" << py(t)
        << "\" stroke=\"black\"/>\n<text x=\"" << left - 8 << "\" y=\"" << py(t) + 4 << "\" text-anchor=\"end\">"
        << label(t, logy) << "</text>\n";
  }

  if (kind == PlotKind::Speedup) {
    const double lo = std::max(x0, y0), hi = std::min(x1, y1);
    svg << "<polyline fill=\"none\" stroke=\"#999\" stroke-dasharray=\"5,4\" points=\"" << px(lo) << ',' << py(lo)
        << ' ' << px(hi) << ',' << py(hi) << "\"/>\n";
  }

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    const char* color = palette[s % (sizeof palette / sizeof *palette)];
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < ser.xs.size() && i < ser.ys.size(); ++i) {
      if (usable(ser.xs[i], ser.ys[i])) pts.emplace_back(tx(ser.xs[i]), ty(ser.ys[i]));
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (kind == PlotKind::Profile && i > 0) svg << px(pts[i].first) << ',' << py(pts[i - 1].second) << ' ';
      svg << px(pts[i].first) << ',' << py(pts[i].second) << ' ';
    }
    if (kind == PlotKind::Profile && !pts.empty()) svg << px(x1) << ',' << py(pts.back().second);
    svg << "\"/>\n";
    const double ly = top + 14 + 18.0 * static_cast<double>(s);
    svg << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4
        << "\">" << xml_escape(ser.name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_svg(const std::vector<Series>& series, const std::string& path, PlotKind kind, const std::string& title) {
  write_text(path, render_svg(series, kind, title));
}

}  // namespace aprox::harness
