#include "pnact/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

#include "pnact/errors.hpp"

namespace pnact {

namespace {

const char* kPalette[] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d68910",
                          "#16a085", "#7f8c8d", "#2c3e50", "#a04000", "#5d6d7e"};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
    return buf;
}

std::ofstream open_svg(const std::string& path, int w, int h) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << ' ' << h << "\" font-family=\"sans-serif\">\n";
    return out;
}

} // namespace

void svg_timeuse_bars(const TimeUseTable& table, const std::string& path) {
    const int row_h = 22, left = 150, bar_w = 420, top = 30;
    const int n = static_cast<int>(table.cells.size());
    const int h = top + row_h * std::max(n, 1) + 20;
    std::ofstream out = open_svg(path, left + bar_w + 120, h);
    out << "<text x=\"10\" y=\"18\" font-size=\"13\">log(1 + time proportion) per entity</text>\n";

    double max_v = 0.0;
    for (const auto& [id, cell] : table.cells)
        max_v = std::max(max_v, std::log1p(cell.prop));
    if (max_v <= 0.0) max_v = 1.0;

    int row = 0;
    for (const auto& [id, cell] : table.cells) {
        const double v = std::log1p(cell.prop);
        const double w = bar_w * v / max_v;
        const int y = top + row * row_h;
        const char* color = cell.kind == Kind::polygon ? kPalette[0] : kPalette[1];
        out << "<text x=\"" << left - 8 << "\" y=\"" << y + 14
            << "\" font-size=\"11\" text-anchor=\"end\">" << id << "</text>\n";
        out << "<rect x=\"" << left << "\" y=\"" << y + 3 << "\" width=\"" << fmt("%.2f", w)
            << "\" height=\"" << row_h - 7 << "\" fill=\"" << color << "\"/>\n";
        out << "<text x=\"" << fmt("%.2f", left + w + 6) << "\" y=\"" << y + 14
            << "\" font-size=\"10\">" << fmt("%.4f", v) << "</text>\n";
        ++row;
    }
    out << "</svg>\n";
}

void svg_dendrogram(const Linkage& linkage, const std::string& path) {
    const std::size_t n = linkage.n;
    if (n == 0) throw ValidationError("dendrogram needs at least one leaf");

    // leaf order that keeps every merge contiguous
    std::vector<std::vector<int>> children(n + linkage.merges.size());
    for (std::size_t s = 0; s < linkage.merges.size(); ++s) {
        children[n + s] = {linkage.merges[s].left, linkage.merges[s].right};
    }
    std::vector<int> order;
    std::function<void(int)> walk = [&](int id) {
        if (id < static_cast<int>(n)) {
            order.push_back(id);
            return;
        }
        for (int c : children[static_cast<std::size_t>(id)]) walk(c);
    };
    const int root = static_cast<int>(n + linkage.merges.size()) - 1;
    if (linkage.merges.empty())
        for (std::size_t i = 0; i < n; ++i) order.push_back(static_cast<int>(i));
    else
        walk(root);

    const int w = 900, h = 460, top = 30, bottom = 60, left = 50, right = 20;
    const double plot_w = w - left - right, plot_h = h - top - bottom;
    double max_h = 1e-12;
    for (const auto& m : linkage.merges) max_h = std::max(max_h, m.height);

    std::vector<double> x(n + linkage.merges.size()), y(n + linkage.merges.size());
    const double stride = plot_w / std::max<std::size_t>(n, 1);
    for (std::size_t i = 0; i < order.size(); ++i) {
        x[static_cast<std::size_t>(order[i])] = left + stride * (static_cast<double>(i) + 0.5);
        y[static_cast<std::size_t>(order[i])] = top + plot_h;
    }

    std::ofstream out = open_svg(path, w, h);
    out << "<text x=\"10\" y=\"18\" font-size=\"13\">single-linkage dendrogram</text>\n";
    for (std::size_t i = 0; i < order.size(); ++i)
        out << "<text x=\"" << fmt("%.2f", x[static_cast<std::size_t>(order[i])]) << "\" y=\""
            << h - bottom + 16 << "\" font-size=\"9\" text-anchor=\"middle\">" << order[i] + 1
            << "</text>\n";

    for (std::size_t s = 0; s < linkage.merges.size(); ++s) {
        const auto& m = linkage.merges[s];
        const std::size_t id = n + s;
        const double hy = top + plot_h * (1.0 - m.height / max_h);
        const double lx = x[static_cast<std::size_t>(m.left)];
        const double rx = x[static_cast<std::size_t>(m.right)];
        const double ly = y[static_cast<std::size_t>(m.left)];
        const double ry = y[static_cast<std::size_t>(m.right)];
        out << "<path fill=\"none\" stroke=\"#2c3e50\" d=\""
            << fmt("M %.2f %.2f ", lx, ly) << fmt("L %.2f %.2f ", lx, hy)
            << fmt("L %.2f %.2f ", rx, hy) << fmt("L %.2f %.2f", rx, ry) << "\"/>\n";
        x[id] = (lx + rx) / 2.0;
        y[id] = hy;
    }
    out << "<text x=\"10\" y=\"" << h - 10 << "\" font-size=\"10\">height max: "
        << fmt("%.4f", max_h) << "</text>\n";
    out << "</svg>\n";
}

void svg_lct_curves(const std::vector<StabilitySeries>& series, const std::string& path) {
    const int w = 760, h = 420, top = 30, bottom = 50, left = 60, right = 170;
    const double plot_w = w - left - right, plot_h = h - top - bottom;

    std::size_t max_d = 1;
    double max_r = 1e-12;
    for (const auto& s : series) {
        max_d = std::max(max_d, s.ratios.size());
        for (double r : s.ratios) max_r = std::max(max_r, r);
    }

    std::ofstream out = open_svg(path, w, h);
    out << "<text x=\"10\" y=\"18\" font-size=\"13\">activity-space symmetric-difference ratio by day</text>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top + static_cast<int>(plot_h) << "\" x2=\""
        << left + static_cast<int>(plot_w) << "\" y2=\"" << top + static_cast<int>(plot_h)
        << "\" stroke=\"#999\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + static_cast<int>(plot_h) << "\" stroke=\"#999\"/>\n";
    out << "<text x=\"" << left + static_cast<int>(plot_w) / 2 << "\" y=\"" << h - 12
        << "\" font-size=\"11\" text-anchor=\"middle\">D (days)</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = kPalette[i % (sizeof kPalette / sizeof kPalette[0])];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t d = 0; d < s.ratios.size(); ++d) {
            const double px =
                left + plot_w * (max_d > 1 ? static_cast<double>(d) / (static_cast<double>(max_d) - 1.0) : 0.5);
            const double py = top + plot_h * (1.0 - s.ratios[d] / max_r);
            out << fmt("%.2f,%.2f ", px, py);
        }
        out << "\"/>\n";
        out << "<text x=\"" << w - right + 10 << "\" y=\"" << top + 14 * (static_cast<int>(i) + 1)
            << "\" font-size=\"10\" fill=\"" << color << "\">" << s.cls << " c="
            << fmt("%.3g", s.c) << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace pnact
