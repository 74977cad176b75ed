#pragma once

#include <optional>
#include <string>
#include <vector>

/// Self-contained SVG charts. Output depends only on the inputs.
namespace qnbm::svg {

struct Series {
    std::string name;
    std::vector<double> values;
};

/// Grouped bars: one group per category, one bar per series.
std::string histogram(const std::string& title, const std::vector<std::string>& categories,
                      const std::vector<Series>& series);

/// Lines over iteration index on a log10 y axis (values floored at 1e-6).
std::string loss_curves(const std::string& title, const std::vector<Series>& series);

struct HeatCell {
    std::size_t row;
    std::size_t col;
    std::optional<double> value;  // empty cells are drawn grey
    std::string annotation;
};

/// Colour-mapped grid; low values are dark.
std::string heatmap(const std::string& title, const std::string& row_axis, const std::vector<std::string>& rows,
                    const std::string& col_axis, const std::vector<std::string>& cols,
                    const std::vector<HeatCell>& cells);

}  // namespace qnbm::svg
