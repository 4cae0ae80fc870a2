#include "rankagg_cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rankagg/error.hpp"
#include "rankagg_cli/csv.hpp"

namespace rankagg::cli {

namespace {

constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 160, kTop = 40, kBottom = 50;
constexpr std::array<const char*, 8> kColors{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                             "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed(double v) {
    std::ostringstream s;
    s.precision(2);
    s << std::fixed << v;
    return s.str();
}

std::string tick(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

}  // namespace

std::string render_svg(const ChartSpec& spec, const std::vector<Series>& series) {
    auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (!std::isfinite(tx(x)) || !std::isfinite(ty(y))) continue;
            x0 = std::min(x0, tx(x)), x1 = std::max(x1, tx(x));
            y0 = std::min(y0, ty(y)), y1 = std::max(y1, ty(y));
        }
    if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x0 == x1) x0 -= 0.5, x1 += 0.5;
    if (y0 == y1) y0 -= 0.5, y1 += 0.5;
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (tx(v) - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return kTop + ph - (ty(v) - y0) / (y1 - y0) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(spec.title)
      << "</text>\n";
    o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = x0 + (x1 - x0) * t / 4, fy = y0 + (y1 - y0) * t / 4;
        const double gx = kLeft + pw * t / 4, gy = kTop + ph - ph * t / 4;
        o << "<text x=\"" << fixed(gx) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
          << tick(spec.log_x ? std::pow(10.0, fx) : fx) << "</text>\n";
        o << "<text x=\"" << kLeft - 6 << "\" y=\"" << fixed(gy + 4) << "\" text-anchor=\"end\">"
          << tick(spec.log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
    }
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
      << escape(spec.x_label) << "</text>\n";
    o << "<text transform=\"translate(16," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(spec.y_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kColors[s % kColors.size()];
        std::vector<std::pair<double, double>> pts;
        for (auto [x, y] : series[s].points)
            if (std::isfinite(tx(x)) && std::isfinite(ty(y))) pts.emplace_back(px(x), py(y));
        if (series[s].lines && pts.size() > 1) {
            o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (auto [x, y] : pts) o << fixed(x) << ',' << fixed(y) << ' ';
            o << "\"/>\n";
        }
        for (auto [x, y] : pts)
            o << "<circle cx=\"" << fixed(x) << "\" cy=\"" << fixed(y) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        const double ly = kTop + 14 + 18 * static_cast<double>(s);
        o << "<rect x=\"" << kWidth - kRight + 12 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\""
          << color << "\"/>\n";
        o << "<text x=\"" << kWidth - kRight + 28 << "\" y=\"" << ly << "\">" << escape(series[s].name)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write_svg(const std::filesystem::path& path, const ChartSpec& spec, const std::vector<Series>& series) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << render_svg(spec, series);
}

}  // namespace rankagg::cli
