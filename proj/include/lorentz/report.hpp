#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lorentz/construction.hpp"
#include "lorentz/norms.hpp"
#include "lorentz/rademacher.hpp"
#include "lorentz/stepfun.hpp"
#include "lorentz/widths.hpp"

namespace lorentz {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest fixed-precision rendering used across CSV cells: printf %.15g.
std::string format_g15(double x);
// "inf" for the q = infinity slot, %.15g otherwise.
std::string format_exponent(double x);

std::string read_file(const std::string& path);               // throws io_error
void write_file(const std::string& path, const std::string& body);

// CSV with one leading comment line "# lorentz <version> | <config>" and an
// RFC 4180 body (CRLF line ends, quoting only where required).
class Csv {
 public:
  explicit Csv(const std::string& config);
  void row(const std::vector<std::string>& cells);
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

// Effective-config strings embedded in every rendered output of a command.
std::string bernstein_config(double p, double q, double r, int n_max,
                             const OptimConfig& cfg);
std::string growth_config(double p, double q, double r);

// Rendered result tables; shared by the CLI and the determinism checks, so
// reruns with equal inputs must produce byte-identical strings.
std::string bernstein_csv(const BernsteinCurve& curve, double p, double q, double r,
                          const OptimConfig& cfg);
std::string growth_csv(const GrowthCurve& curve, double p, double q);

nlohmann::ordered_json to_json_obj(const QuasiConstant& c);
nlohmann::ordered_json to_json_obj(const TransferReport& r);
nlohmann::ordered_json to_json_obj(const KhintchineEstimate& est);
nlohmann::ordered_json to_json_obj(const WidthReport& w);
nlohmann::ordered_json to_json_obj(const BernsteinCurve& curve);
nlohmann::ordered_json to_json_obj(const GrowthCurve& curve);

// Minimal line chart (polyline per series, ticks, legend).  log_x plots
// against log10 of x and requires positive abscissae.
struct SvgSeries {
  std::string label;
  std::vector<double> x, y;
};
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<SvgSeries>& series, bool log_x = false);

}  // namespace lorentz
