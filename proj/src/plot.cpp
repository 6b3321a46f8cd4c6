#include "sweeprl/plot.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "sweeprl/error.hpp"

namespace sweeprl {

namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#e377c2", "#2ca02c", "#ff7f0e",
                                              "#7f7f7f", "#d62728", "#9467bd", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  const double a = std::abs(v);
  if (a != 0.0 && (a >= 1e6 || a < 1e-3))
    std::snprintf(buf, sizeof buf, "%.2g", v);
  else
    std::snprintf(buf, sizeof buf, "%g", std::round(v * 1000.0) / 1000.0);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
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

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw Error(ErrorCode::MalformedCsv, "not a number: '" + s + "'");
  return v;
}

// "Nice" tick step covering span with about `target` ticks.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double nice = norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

struct Frame {
  double left = 70, right = 160, top = 40, bottom = 50;
  double w, h;
  Frame(const ChartOptions& o) : w(o.width - left - right), h(o.height - top - bottom) {}
};

void open_svg(std::string& out, const ChartOptions& opts) {
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(opts.width) + "\" height=\"" + std::to_string(opts.height) +
         "\" viewBox=\"0 0 " + std::to_string(opts.width) + " " + std::to_string(opts.height) +
         "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(opts.width) + "\" height=\"" +
         std::to_string(opts.height) + "\" fill=\"white\"/>\n";
  if (!opts.title.empty())
    out += "<text x=\"" + fmt(opts.width / 2.0) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           escape(opts.title) + "</text>\n";
}

void axes(std::string& out, const Frame& f, const ChartOptions& opts) {
  out += "<g stroke=\"black\" stroke-width=\"1\">\n";
  out += "<line x1=\"" + fmt(f.left) + "\" y1=\"" + fmt(f.top + f.h) + "\" x2=\"" +
         fmt(f.left + f.w) + "\" y2=\"" + fmt(f.top + f.h) + "\"/>\n";
  out += "<line x1=\"" + fmt(f.left) + "\" y1=\"" + fmt(f.top) + "\" x2=\"" + fmt(f.left) +
         "\" y2=\"" + fmt(f.top + f.h) + "\"/>\n";
  out += "</g>\n";
  if (!opts.x_label.empty())
    out += "<text x=\"" + fmt(f.left + f.w / 2) + "\" y=\"" + fmt(opts.height - 10.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           escape(opts.x_label) + "</text>\n";
  if (!opts.y_label.empty())
    out += "<text x=\"16\" y=\"" + fmt(f.top + f.h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 16 " +
           fmt(f.top + f.h / 2) + ")\">" + escape(opts.y_label) + "</text>\n";
}

void legend(std::string& out, const Frame& f, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double y = f.top + 10 + 18.0 * static_cast<double>(i);
    const double x = f.left + f.w + 12;
    out += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y - 8) + "\" width=\"12\" height=\"12\" fill=\"" +
           kPalette[i % kPalette.size()] + "\"/>\n";
    out += "<text x=\"" + fmt(x + 18) + "\" y=\"" + fmt(y + 2) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(names[i]) + "</text>\n";
  }
}

void y_ticks(std::string& out, const Frame& f, double lo, double hi, bool log_y) {
  out += "<g font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">\n";
  auto emit = [&](double value, double frac) {
    const double y = f.top + f.h * (1.0 - frac);
    out += "<line x1=\"" + fmt(f.left - 4) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(f.left) +
           "\" y2=\"" + fmt(y) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt(f.left - 6) + "\" y=\"" + fmt(y + 3) + "\">" + tick_label(value) +
           "</text>\n";
  };
  if (log_y) {
    for (double e = std::ceil(lo); e <= hi + 1e-9; e += 1.0) emit(std::pow(10.0, e), (e - lo) / (hi - lo));
  } else {
    const double step = nice_step(hi - lo, 5);
    for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step)
      emit(v, (v - lo) / (hi - lo));
  }
  out += "</g>\n";
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorCode::MalformedCsv, "no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> CsvTable::numeric_column(std::size_t index) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(parse_number(row.at(index)));
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    if (line.empty()) continue;
    auto fields = split(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
    } else {
      if (fields.size() != table.header.size())
        throw Error(ErrorCode::MalformedCsv, "row has " + std::to_string(fields.size()) +
                                                 " fields, header has " +
                                                 std::to_string(table.header.size()));
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.header.empty()) throw Error(ErrorCode::MalformedCsv, "empty CSV");
  if (table.rows.empty()) throw Error(ErrorCode::MalformedCsv, "CSV has a header but no rows");
  return table;
}

std::vector<double> moving_average(const std::vector<double>& y, std::size_t window) {
  if (window <= 1) return y;
  std::vector<double> out(y.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sum += y[i];
    if (i >= window) sum -= y[i - window];
    out[i] = sum / static_cast<double>(std::min(i + 1, window));
  }
  return out;
}

std::string line_chart_svg(const std::vector<Series>& series, const ChartOptions& opts) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = opts.log_y ? std::log10(std::max(s.y[i], 1e-12)) : s.y[i];
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  if (!std::isfinite(xlo)) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  if (xhi == xlo) xhi = xlo + 1;
  if (yhi == ylo) yhi = ylo + 1, ylo -= 1;

  const Frame f(opts);
  std::string out;
  open_svg(out, opts);
  axes(out, f, opts);
  y_ticks(out, f, ylo, yhi, opts.log_y);

  out += "<g font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">\n";
  const double xstep = nice_step(xhi - xlo, 6);
  for (double v = std::ceil(xlo / xstep) * xstep; v <= xhi + xstep * 1e-9; v += xstep) {
    const double x = f.left + f.w * (v - xlo) / (xhi - xlo);
    out += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(f.top + f.h) + "\" x2=\"" + fmt(x) +
           "\" y2=\"" + fmt(f.top + f.h + 4) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(f.top + f.h + 16) + "\">" + tick_label(v) +
           "</text>\n";
  }
  out += "</g>\n";

  std::vector<std::string> names;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    names.push_back(s.name);
    out += "<polyline fill=\"none\" stroke=\"" + std::string(kPalette[k % kPalette.size()]) +
           "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = opts.log_y ? std::log10(std::max(s.y[i], 1e-12)) : s.y[i];
      if (i) out += ' ';
      out += fmt(f.left + f.w * (s.x[i] - xlo) / (xhi - xlo)) + "," +
             fmt(f.top + f.h * (1.0 - (y - ylo) / (yhi - ylo)));
    }
    out += "\"/>\n";
  }
  legend(out, f, names);
  out += "</svg>\n";
  return out;
}

std::string bar_chart_svg(const std::vector<std::string>& categories,
                          const std::vector<BarGroup>& groups, const ChartOptions& opts) {
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& g : groups) {
    for (const double v : g.values) {
      const double y = opts.log_y ? std::log10(std::max(v, 1e-12)) : v;
      if (first) lo = hi = y, first = false;
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
  }
  if (opts.log_y) {
    lo = std::floor(lo);
    hi = std::ceil(hi);
  } else {
    lo = std::min(lo, 0.0);
  }
  if (hi == lo) hi = lo + 1;

  const Frame f(opts);
  std::string out;
  open_svg(out, opts);
  axes(out, f, opts);
  y_ticks(out, f, lo, hi, opts.log_y);

  const double slot = f.w / static_cast<double>(std::max<std::size_t>(categories.size(), 1));
  const double bar = slot * 0.8 / static_cast<double>(std::max<std::size_t>(groups.size(), 1));
  out += "<g font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">\n";
  for (std::size_t c = 0; c < categories.size(); ++c)
    out += "<text x=\"" + fmt(f.left + slot * (static_cast<double>(c) + 0.5)) + "\" y=\"" +
           fmt(f.top + f.h + 16) + "\">" + escape(categories[c]) + "</text>\n";
  out += "</g>\n";
  std::vector<std::string> names;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    names.push_back(groups[g].name);
    for (std::size_t c = 0; c < groups[g].values.size() && c < categories.size(); ++c) {
      const double v = groups[g].values[c];
      const double y = opts.log_y ? std::log10(std::max(v, 1e-12)) : v;
      const double frac = std::clamp((y - lo) / (hi - lo), 0.0, 1.0);
      const double base = opts.log_y ? 0.0 : std::clamp((0.0 - lo) / (hi - lo), 0.0, 1.0);
      const double top = f.top + f.h * (1.0 - std::max(frac, base));
      const double height = f.h * std::abs(frac - base);
      const double x = f.left + slot * static_cast<double>(c) + slot * 0.1 + bar * static_cast<double>(g);
      out += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(bar) +
             "\" height=\"" + fmt(height) + "\" fill=\"" + kPalette[g % kPalette.size()] + "\"/>\n";
    }
  }
  legend(out, f, names);
  out += "</svg>\n";
  return out;
}

std::vector<Series> series_from_csv(const CsvTable& table) {
  const auto x = table.numeric_column(0);
  std::vector<Series> out;
  for (std::size_t c = 1; c < table.header.size(); ++c)
    out.push_back({table.header[c], x, table.numeric_column(c)});
  return out;
}

std::string emit_plot(const PlotRequest& request) {
  if (request.csv_texts.empty()) throw Error(ErrorCode::MalformedCsv, "no CSV input");
  std::vector<Series> series;
  for (std::size_t i = 0; i < request.csv_texts.size(); ++i) {
    const CsvTable table = parse_csv(request.csv_texts[i]);
    const std::size_t xcol = request.x_column.empty() ? 0 : table.column(request.x_column);
    const auto x = table.numeric_column(xcol);
    if (!request.y_column.empty()) {
      const std::string name = i < request.names.size() ? request.names[i]
                                                        : "series " + std::to_string(i + 1);
      series.push_back(
          {name, x, moving_average(table.numeric_column(table.column(request.y_column)), request.smooth)});
      continue;
    }
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (c == xcol) continue;
      series.push_back({table.header[c], x, moving_average(table.numeric_column(c), request.smooth)});
    }
  }
  return line_chart_svg(series, request.chart);
}

std::string trajectory_svg(const GridMap& map, const std::vector<Cell>& trajectory,
                           const AgentState& final_state, int cell_px) {
  const int w = map.width() * cell_px;
  const int h = map.height() * cell_px;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(w) +
         "\" height=\"" + std::to_string(h) + "\">\n";
  const double r = cell_px * 0.25;
  for (int row = 0; row < map.height(); ++row) {
    for (int col = 0; col < map.width(); ++col) {
      const Cell c{row, col};
      const int x = col * cell_px, y = row * cell_px;
      const char* bg = map.is_free(c) ? "white" : "black";
      out += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" +
             std::to_string(cell_px) + "\" height=\"" + std::to_string(cell_px) + "\" fill=\"" +
             bg + "\" stroke=\"#cccccc\"/>\n";
      if (map.is_free(c)) {
        const char* dot = final_state.is_cleaned(map, c) ? "#3060ff" : "#ffd000";
        out += "<circle cx=\"" + fmt(x + cell_px / 2.0) + "\" cy=\"" + fmt(y + cell_px / 2.0) +
               "\" r=\"" + fmt(r) + "\" fill=\"" + dot + "\"/>\n";
      }
    }
  }
  if (!trajectory.empty()) {
    out += "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
      if (i) out += ' ';
      out += fmt((trajectory[i].col + 0.5) * cell_px) + "," + fmt((trajectory[i].row + 0.5) * cell_px);
    }
    out += "\"/>\n";
    const Cell last = trajectory.back();
    out += "<rect x=\"" + fmt(last.col * cell_px + cell_px * 0.15) + "\" y=\"" +
           fmt(last.row * cell_px + cell_px * 0.15) + "\" width=\"" + fmt(cell_px * 0.7) +
           "\" height=\"" + fmt(cell_px * 0.7) + "\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace sweeprl
