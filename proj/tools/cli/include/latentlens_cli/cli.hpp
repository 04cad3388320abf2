#pragma once

#include <string>
#include <vector>

namespace latentlens::cli {

/// Runs one command line. Returns 0 on success, 1 on a domain error (a JSON
/// object {"error":..,"message":..} is printed to stderr) and 2 on a usage
/// error.
int dispatch(int argc, const char* const* argv);
inline int dispatch(int argc, char** argv) { return dispatch(argc, const_cast<const char* const*>(argv)); }

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
  std::string label;  // colour group
};

/// Static SVG scatter plot, one circle per point, coloured by label with a
/// legend. Output depends only on the arguments. Throws InvalidArgument on a
/// non-finite coordinate.
std::string emit_scatter_svg(const std::vector<ScatterPoint>& points, const std::string& x_label,
                             const std::string& y_label);

}  // namespace latentlens::cli
