#include "lorentz/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lorentz/version.hpp"

namespace lorentz {

std::string format_g15(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string format_exponent(double x) {
  return std::isinf(x) ? "inf" : format_g15(x);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path);
  std::ostringstream oss;
  oss << in.rdbuf();
  if (in.bad()) throw io_error("read failed: " + path);
  return oss.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open for writing: " + path);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  out.flush();
  if (!out) throw io_error("write failed: " + path);
}

namespace {

bool needs_quoting(const std::string& cell) {
  return cell.find_first_of(",\"\r\n") != std::string::npos;
}

std::string quoted(const std::string& cell) {
  if (!needs_quoting(cell)) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

Csv::Csv(const std::string& config) {
  text_ = "# lorentz ";
  text_ += kVersion;
  text_ += " | ";
  text_ += config;
  text_ += "\r\n";
}

void Csv::row(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += quoted(cells[i]);
  }
  text_ += "\r\n";
}

std::string bernstein_config(double p, double q, double r, int n_max,
                             const OptimConfig& cfg) {
  std::ostringstream conf;
  conf << "bernstein p=" << format_g15(p) << " q=" << format_exponent(q)
       << " r=" << format_exponent(r) << " n_max=" << n_max << " seed=" << cfg.seed
       << " restarts=" << cfg.restarts;
  return conf.str();
}

std::string growth_config(double p, double q, double r) {
  std::ostringstream conf;
  conf << "demo-growth p=" << format_g15(p) << " q=" << format_exponent(q)
       << " r=" << format_exponent(r);
  return conf.str();
}

std::string bernstein_csv(const BernsteinCurve& curve, double p, double q, double r,
                          const OptimConfig& cfg) {
  Csv csv(bernstein_config(p, q, r, static_cast<int>(curve.reports.size()), cfg));
  csv.row({"n", "value", "alpha_bound", "seed", "restarts"});
  for (const WidthReport& w : curve.reports)
    csv.row({std::to_string(w.n), format_g15(w.value), format_g15(w.alpha_bound),
             std::to_string(w.seed), std::to_string(w.restarts)});
  return csv.str();
}

std::string growth_csv(const GrowthCurve& curve, double p, double q) {
  Csv csv(growth_config(p, q, curve.r));
  csv.row({"count", "norm_pq", "norm_pr"});
  for (const GrowthRow& row : curve.rows)
    csv.row({std::to_string(row.count), format_g15(row.norm_pq), format_g15(row.norm_pr)});
  return csv.str();
}

using nlohmann::ordered_json;

ordered_json to_json_obj(const QuasiConstant& c) {
  ordered_json j;
  j["value"] = c.value;
  j["analytic"] = c.analytic;
  if (!c.analytic) {
    j["seed"] = c.seed;
    j["trials"] = c.trials;
  }
  return j;
}

ordered_json to_json_obj(const TransferReport& r) {
  ordered_json j;
  j["seq_norm"] = r.seq_norm;
  j["scaled_fn_norm"] = r.scaled_fn_norm;
  j["lower_const"] = r.lower_const;
  j["upper_const"] = r.upper_const;
  j["lower_ok"] = r.lower_ok;
  j["upper_ok"] = r.upper_ok;
  j["lower_slack"] = r.lower_slack;
  j["upper_slack"] = r.upper_slack;
  return j;
}

ordered_json to_json_obj(const KhintchineEstimate& est) {
  ordered_json j;
  j["p"] = est.p;
  j["q"] = format_exponent(est.q);
  j["dim"] = est.dim;
  j["c_low_witness"] = est.c_low_witness;
  j["c_up_witness"] = est.c_up_witness;
  j["method"] = est.method == KhMethod::exhaustive_signs ? "exhaustive_signs" : "seeded_search";
  j["seed"] = est.seed;
  j["budget"] = est.budget;
  return j;
}

ordered_json to_json_obj(const WidthReport& w) {
  ordered_json j;
  j["n"] = w.n;
  j["value"] = w.value;
  if (std::isfinite(w.alpha_bound)) j["alpha_bound"] = w.alpha_bound;
  j["argmin"] = std::vector<double>(w.argmin.data(), w.argmin.data() + w.argmin.size());
  j["seed"] = w.seed;
  j["restarts"] = w.restarts;
  j["evals"] = w.evals;
  return j;
}

ordered_json to_json_obj(const BernsteinCurve& curve) {
  ordered_json j;
  j["alpha"] = curve.alpha;
  j["kh_q"] = to_json_obj(curve.kh_q);
  j["kh_r"] = to_json_obj(curve.kh_r);
  ordered_json rows = ordered_json::array();
  for (const WidthReport& w : curve.reports) rows.push_back(to_json_obj(w));
  j["widths"] = std::move(rows);
  return j;
}

ordered_json to_json_obj(const GrowthCurve& curve) {
  ordered_json j;
  j["r"] = curve.r;
  ordered_json rows = ordered_json::array();
  for (const GrowthRow& row : curve.rows) {
    ordered_json e;
    e["count"] = row.count;
    e["norm_pq"] = row.norm_pq;
    e["norm_pr"] = row.norm_pr;
    rows.push_back(std::move(e));
  }
  j["rows"] = std::move(rows);
  if (curve.fit.points >= 2) {
    j["fit"] = {{"a", curve.fit.a},
                {"b", curve.fit.b},
                {"r2", curve.fit.r2},
                {"points", curve.fit.points}};
  }
  return j;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<SvgSeries>& series, bool log_x) {
  if (series.empty()) throw std::invalid_argument("svg_line_chart: no series");
  constexpr double kW = 860, kH = 520, kL = 70, kR = 200, kT = 50, kB = 60;
  const double pw = kW - kL - kR, ph = kH - kT - kB;

  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool seen = false;
  for (const SvgSeries& s : series) {
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("svg_line_chart: x/y size mismatch");
    for (size_t i = 0; i < s.x.size(); ++i) {
      double x = s.x[i];
      if (log_x) {
        if (!(x > 0)) throw std::domain_error("svg_line_chart: log axis needs x > 0");
        x = std::log10(x);
      }
      if (!std::isfinite(x) || !std::isfinite(s.y[i])) continue;
      if (!seen) {
        xmin = xmax = x;
        ymin = ymax = s.y[i];
        seen = true;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!seen) throw std::invalid_argument("svg_line_chart: no finite points");
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    double pad = std::max(0.5, std::abs(ymax) * 0.1);
    ymin -= pad;
    ymax += pad;
  }
  auto px = [&](double x) { return kL + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kT + (ymax - y) / (ymax - ymin) * ph; };

  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
      << kH << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
  svg << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kW / 2 << "\" y=\"28\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(title)
      << "</text>\n";

  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (int i = 0; i <= 4; ++i) {
    double xv = xmin + (xmax - xmin) * i / 4.0;
    double yv = ymin + (ymax - ymin) * i / 4.0;
    double gx = px(xv), gy = py(yv);
    svg << "<line x1=\"" << gx << "\" y1=\"" << kT << "\" x2=\"" << gx << "\" y2=\""
        << kT + ph << "\" stroke=\"#ddd\"/>\n";
    svg << "<line x1=\"" << kL << "\" y1=\"" << gy << "\" x2=\"" << kL + pw
        << "\" y2=\"" << gy << "\" stroke=\"#ddd\"/>\n";
    double xlab = log_x ? std::pow(10.0, xv) : xv;
    svg << "<text x=\"" << gx << "\" y=\"" << kT + ph + 16
        << "\" text-anchor=\"middle\">" << tick_label(xlab) << "</text>\n";
    svg << "<text x=\"" << kL - 6 << "\" y=\"" << gy + 4
        << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
  }
  svg << "</g>\n";
  svg << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << pw << "\" height=\""
      << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";
  svg << "<text x=\"" << kL + pw / 2 << "\" y=\"" << kH - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << xml_escape(x_label) << (log_x ? " (log scale)" : "") << "</text>\n";
  svg << "<text x=\"18\" y=\"" << kT + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << kT + ph / 2 << ")\">" << xml_escape(y_label)
      << "</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const SvgSeries& s = series[si];
    const char* color = kPalette[si % 6];
    std::ostringstream pts;
    for (size_t i = 0; i < s.x.size(); ++i) {
      double x = log_x ? std::log10(s.x[i]) : s.x[i];
      if (!std::isfinite(x) || !std::isfinite(s.y[i])) continue;
      pts << px(x) << "," << py(s.y[i]) << " ";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.6\" points=\"" << pts.str() << "\"/>\n";
    double ly = kT + 16 + 18 * static_cast<double>(si);
    svg << "<line x1=\"" << kL + pw + 12 << "\" y1=\"" << ly << "\" x2=\""
        << kL + pw + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kL + pw + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(s.label)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace lorentz
