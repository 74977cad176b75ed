#include "qnbm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace qnbm::svg {
namespace {

const char* const kPalette[] = {"#444444", "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string fixed(double x, int digits) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

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

std::string header(double w, double h, const std::string& title) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
           "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\" font-family=\"sans-serif\" font-size=\"11\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + "<text x=\"" + num(w / 2) +
           "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) + "</text>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle", const char* extra = "") {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\"" + extra + ">" +
           escape(s) + "</text>\n";
}

std::string line(double x1, double y1, double x2, double y2, const char* stroke = "#000") {
    return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
           "\" stroke=\"" + stroke + "\"/>\n";
}

std::string legend(const std::vector<Series>& series, double x, double y) {
    std::string out;
    for (std::size_t s = 0; s < series.size(); ++s) {
        const double yy = y + 16.0 * static_cast<double>(s);
        out += "<rect x=\"" + num(x) + "\" y=\"" + num(yy - 9) + "\" width=\"10\" height=\"10\" fill=\"" +
               kPalette[s % 6] + "\"/>\n";
        out += text(x + 14, yy, series[s].name, "start");
    }
    return out;
}

}  // namespace

std::string histogram(const std::string& title, const std::vector<std::string>& categories,
                      const std::vector<Series>& series) {
    const double left = 55, right = 170, top = 35, bottom = 70, plot_h = 260;
    const double group_w = std::max(18.0, 6.0 * static_cast<double>(series.size()) + 8.0);
    const double plot_w = group_w * static_cast<double>(categories.size());
    const double w = left + plot_w + right, h = top + plot_h + bottom;
    double ymax = 0.0;
    for (const auto& s : series) {
        for (double v : s.values) ymax = std::max(ymax, v);
    }
    ymax = ymax > 0 ? ymax * 1.05 : 1.0;
    std::string out = header(w, h, title);
    const double y0 = top + plot_h;
    out += line(left, y0, left + plot_w, y0);
    out += line(left, top, left, y0);
    for (int t = 0; t <= 4; ++t) {
        const double v = ymax * t / 4.0;
        const double y = y0 - plot_h * t / 4.0;
        out += line(left - 4, y, left, y);
        out += text(left - 6, y + 4, fixed(v, 3), "end");
    }
    const double bar_w = (group_w - 6.0) / static_cast<double>(std::max<std::size_t>(1, series.size()));
    for (std::size_t c = 0; c < categories.size(); ++c) {
        const double gx = left + group_w * static_cast<double>(c) + 3.0;
        for (std::size_t s = 0; s < series.size(); ++s) {
            const double v = c < series[s].values.size() ? series[s].values[c] : 0.0;
            const double bh = plot_h * v / ymax;
            out += "<rect x=\"" + num(gx + bar_w * static_cast<double>(s)) + "\" y=\"" + num(y0 - bh) +
                   "\" width=\"" + num(bar_w) + "\" height=\"" + num(bh) + "\" fill=\"" + kPalette[s % 6] + "\"/>\n";
        }
        const double cx = gx + (group_w - 6.0) / 2;
        out += "<text x=\"" + num(cx) + "\" y=\"" + num(y0 + 8) + "\" text-anchor=\"end\" transform=\"rotate(-90 " +
               num(cx) + " " + num(y0 + 8) + ")\" font-family=\"monospace\" font-size=\"9\">" +
               escape(categories[c]) + "</text>\n";
    }
    out += text(18, top + plot_h / 2, "probability", "middle",
                (" transform=\"rotate(-90 18 " + num(top + plot_h / 2) + ")\"").c_str());
    out += legend(series, left + plot_w + 15, top + 10);
    out += "</svg>\n";
    return out;
}

std::string loss_curves(const std::string& title, const std::vector<Series>& series) {
    const double left = 60, right = 200, top = 35, bottom = 45, plot_w = 520, plot_h = 300;
    const double w = left + plot_w + right, h = top + plot_h + bottom;
    const double floor_v = 1e-6;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    std::size_t n_max = 1;
    for (const auto& s : series) {
        n_max = std::max(n_max, s.values.size());
        for (double v : s.values) {
            const double l = std::log10(std::max(v, floor_v));
            lo = std::min(lo, l);
            hi = std::max(hi, l);
        }
    }
    if (!std::isfinite(lo)) lo = -1, hi = 0;
    lo = std::floor(lo);
    hi = std::ceil(hi);
    if (hi <= lo) hi = lo + 1;
    std::string out = header(w, h, title);
    const double y0 = top + plot_h;
    out += line(left, y0, left + plot_w, y0);
    out += line(left, top, left, y0);
    for (int d = static_cast<int>(lo); d <= static_cast<int>(hi); ++d) {
        const double y = y0 - plot_h * (d - lo) / (hi - lo);
        out += line(left - 4, y, left, y);
        out += text(left - 6, y + 4, "1e" + std::to_string(d), "end");
    }
    const double xden = static_cast<double>(std::max<std::size_t>(1, n_max - 1));
    for (int t = 0; t <= 4; ++t) {
        const double x = left + plot_w * t / 4.0;
        out += line(x, y0, x, y0 + 4);
        out += text(x, y0 + 16, std::to_string(static_cast<long>(std::lround(xden * t / 4.0))));
    }
    out += text(left + plot_w / 2, y0 + 34, "iteration");
    out += text(18, top + plot_h / 2, "KL divergence", "middle",
                (" transform=\"rotate(-90 18 " + num(top + plot_h / 2) + ")\"").c_str());
    for (std::size_t s = 0; s < series.size(); ++s) {
        std::string pts;
        for (std::size_t i = 0; i < series[s].values.size(); ++i) {
            const double l = std::log10(std::max(series[s].values[i], floor_v));
            if (i) pts += ' ';
            pts += num(left + plot_w * static_cast<double>(i) / xden) + "," + num(y0 - plot_h * (l - lo) / (hi - lo));
        }
        out += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" + std::string(kPalette[s % 6]) +
               "\" points=\"" + pts + "\"/>\n";
    }
    out += legend(series, left + plot_w + 15, top + 10);
    out += "</svg>\n";
    return out;
}

std::string heatmap(const std::string& title, const std::string& row_axis, const std::vector<std::string>& rows,
                    const std::string& col_axis, const std::vector<std::string>& cols,
                    const std::vector<HeatCell>& cells) {
    const double left = 70, top = 40, cell = 70, right = 120, bottom = 50;
    const double w = left + cell * static_cast<double>(cols.size()) + right;
    const double h = top + cell * static_cast<double>(rows.size()) + bottom;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& c : cells) {
        if (c.value) lo = std::min(lo, *c.value), hi = std::max(hi, *c.value);
    }
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi <= lo) hi = lo + 1;
    auto colour = [&](double v) {
        // Dark blue (low) to pale yellow (high).
        const double t = (v - lo) / (hi - lo);
        const int r = static_cast<int>(std::lround(30 + t * (250 - 30)));
        const int g = static_cast<int>(std::lround(40 + t * (230 - 40)));
        const int b = static_cast<int>(std::lround(110 + t * (140 - 110)));
        char buf[16];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
        return std::string(buf);
    };
    std::string out = header(w, h, title);
    for (const auto& c : cells) {
        const double x = left + cell * static_cast<double>(c.col);
        const double y = top + cell * static_cast<double>(c.row);
        const std::string fill = c.value ? colour(*c.value) : "#dddddd";
        out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cell) + "\" height=\"" + num(cell) +
               "\" fill=\"" + fill + "\" stroke=\"white\"/>\n";
        const bool dark = c.value && (*c.value - lo) / (hi - lo) < 0.5;
        const char* ink = dark ? " fill=\"white\"" : "";
        if (c.value) out += text(x + cell / 2, y + cell / 2 - 2, fixed(*c.value, 4), "middle", ink);
        if (!c.annotation.empty()) out += text(x + cell / 2, y + cell / 2 + 14, c.annotation, "middle", ink);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out += text(left - 8, top + cell * (static_cast<double>(r) + 0.5) + 4, rows[r], "end");
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
        out += text(left + cell * (static_cast<double>(c) + 0.5), top + cell * static_cast<double>(rows.size()) + 16,
                    cols[c]);
    }
    out += text(left + cell * static_cast<double>(cols.size()) / 2, h - 10, col_axis);
    out += text(16, top + cell * static_cast<double>(rows.size()) / 2, row_axis, "middle",
                (" transform=\"rotate(-90 16 " + num(top + cell * static_cast<double>(rows.size()) / 2) + ")\"").c_str());
    const double lx = left + cell * static_cast<double>(cols.size()) + 20;
    for (int i = 0; i <= 4; ++i) {
        const double v = lo + (hi - lo) * i / 4.0;
        const double y = top + 20.0 * i;
        out += "<rect x=\"" + num(lx) + "\" y=\"" + num(y) + "\" width=\"14\" height=\"14\" fill=\"" + colour(v) +
               "\"/>\n";
        out += text(lx + 20, y + 11, fixed(v, 3), "start");
    }
    out += "</svg>\n";
    return out;
}

}  // namespace qnbm::svg
