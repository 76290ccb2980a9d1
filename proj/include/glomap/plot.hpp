#pragma once

#include "glomap/types.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace glomap {

struct ColorColumn {
  enum class Kind { kCategorical, kContinuous };
  Kind kind = Kind::kCategorical;
  std::vector<double> values;
};

struct PlotPanel {
  Matrix z;  ///< n x 2
  std::optional<ColorColumn> color;
  std::string title;
};

struct PlotOptions {
  double panel_size = 360.0;  ///< pixels per square panel
  double point_radius = 1.6;
  Index columns = 4;          ///< panels per row
  std::string title;
};

/// Standalone SVG document with one scatter panel per entry. Output depends
/// only on the inputs. Throws Error unless every panel is two-dimensional.
std::string render_svg(std::span<const PlotPanel> panels, const PlotOptions& opts = {});

void write_svg(const std::filesystem::path& path, std::span<const PlotPanel> panels,
               const PlotOptions& opts = {});

/// "#rrggbb" for category index k (cycles through a 20-color palette).
std::string categorical_color(Index k);

/// "#rrggbb" on a perceptually ordered ramp for t in [0, 1].
std::string continuous_color(double t);

}  // namespace glomap
