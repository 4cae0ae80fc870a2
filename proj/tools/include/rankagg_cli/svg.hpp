#pragma once

// Minimal self-contained SVG line and scatter charts.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace rankagg::cli {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
    bool lines = true;  // false draws markers only
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
};

std::string render_svg(const ChartSpec& spec, const std::vector<Series>& series);
void write_svg(const std::filesystem::path& path, const ChartSpec& spec, const std::vector<Series>& series);

}  // namespace rankagg::cli
