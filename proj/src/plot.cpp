// Copyright 2026 The qpe-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qpelab/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "qpelab/angle.hpp"
#include "qpelab/baselines.hpp"
#include "qpelab/errors.hpp"

namespace qpelab {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

struct Point {
    double n = 0.0;
    double y = 0.0;
    std::optional<double> lo;
    std::optional<double> hi;
};

struct Curve {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string px(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

bool is_squared_column(std::string_view name) {
    return name.find("mse") != std::string_view::npos || name.find("sq_") != std::string_view::npos;
}

std::optional<double> cell_value(const csv::Table& t, std::size_t row, std::size_t col) {
    const double v = csv::parse_double(t.rows[row][col]);
    if (!std::isfinite(v) || v <= 0.0) return std::nullopt;
    return v;
}

class LogAxes {
  public:
    LogAxes(double x0, double x1, double y0, double y1)
        : x0_(std::floor(std::log10(x0))), x1_(std::ceil(std::log10(x1))), y0_(std::floor(std::log10(y0))),
          y1_(std::ceil(std::log10(y1))) {
        if (x1_ <= x0_) x1_ = x0_ + 1;
        if (y1_ <= y0_) y1_ = y0_ + 1;
    }
    double x(double v) const { return kLeft + (std::log10(v) - x0_) / (x1_ - x0_) * plot_width(); }
    double y(double v) const { return kTop + (y1_ - std::log10(v)) / (y1_ - y0_) * plot_height(); }
    int x_lo() const { return static_cast<int>(x0_); }
    int x_hi() const { return static_cast<int>(x1_); }
    int y_lo() const { return static_cast<int>(y0_); }
    int y_hi() const { return static_cast<int>(y1_); }
    static double plot_width() { return kWidth - kLeft - kRight; }
    static double plot_height() { return kHeight - kTop - kBottom; }

  private:
    double x0_, x1_, y0_, y1_;
};

std::vector<Curve> reference_curves(const PlotSpec& spec, const std::vector<double>& ladder, bool squared) {
    std::vector<Curve> curves;
    const double rescale = std::sqrt(kPi / 2.0);  // limit_curves reports sqrt(2/pi) * sigma
    for (ReferenceCurve ref : spec.references) {
        Curve c{std::string(to_string(ref)), {}};
        for (double n : ladder) {
            std::optional<double> v;
            const LimitCurves lc = limit_curves(n, spec.noise);
            switch (ref) {
                case ReferenceCurve::kSql:
                    v = squared ? std::pow(lc.sql * rescale, 2) : lc.sql;
                    break;
                case ReferenceCurve::kHl:
                    v = squared ? std::pow(lc.hl * rescale, 2) : lc.hl;
                    break;
                case ReferenceCurve::kNoisyFloor:
                    if (lc.noisy_floor) v = squared ? std::pow(*lc.noisy_floor * rescale, 2) : *lc.noisy_floor;
                    break;
                case ReferenceCurve::kAppendixBound: {
                    BoundParams params = spec.bound;
                    params.total_resources = static_cast<std::int64_t>(std::llround(n));
                    params.noise = spec.noise;
                    try {
                        v = appendix_loss_bound(params, squared ? LossKind::kSquared : LossKind::kAbsolute);
                    } catch (const InfeasibleChain&) {
                    }
                    break;
                }
            }
            if (v && *v > 0.0) c.points.emplace_back(n, *v);
        }
        if (!c.points.empty()) curves.push_back(std::move(c));
    }
    return curves;
}

}  // namespace

std::string_view to_string(ReferenceCurve curve) {
    switch (curve) {
        case ReferenceCurve::kSql:
            return "sql";
        case ReferenceCurve::kHl:
            return "hl";
        case ReferenceCurve::kNoisyFloor:
            return "noisy_floor";
        case ReferenceCurve::kAppendixBound:
            return "appendix_bound";
    }
    return "unknown";
}

ReferenceCurve parse_reference_curve(std::string_view name) {
    for (ReferenceCurve c :
         {ReferenceCurve::kSql, ReferenceCurve::kHl, ReferenceCurve::kNoisyFloor, ReferenceCurve::kAppendixBound}) {
        if (name == to_string(c)) return c;
    }
    throw InvalidArgument("unknown reference curve '" + std::string(name) + "'");
}

std::string render_svg(const csv::Table& table, const PlotSpec& spec) {
    const auto n_col = table.column("n_tot");
    const auto s_col = table.column(spec.series_column);
    const auto y_col = table.column(spec.y_column);
    for (const auto& [col, name] : {std::pair{n_col, std::string("n_tot")}, std::pair{s_col, spec.series_column},
                                    std::pair{y_col, spec.y_column}}) {
        if (!col) throw InvalidArgument("input has no column '" + name + "'");
    }
    std::optional<std::size_t> lo_col, hi_col;
    if (spec.y_column.size() > 5 && spec.y_column.ends_with("_mean")) {
        const std::string prefix = spec.y_column.substr(0, spec.y_column.size() - 5);
        lo_col = table.column(prefix + "_min");
        hi_col = table.column(prefix + "_max");
        if (!lo_col || !hi_col) lo_col = hi_col = std::nullopt;
    }

    // series -> n_tot -> row indices; std::map keeps series and ladder order stable.
    std::map<std::string, std::map<double, std::vector<std::size_t>>> groups;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        groups[table.rows[r][*s_col]][csv::parse_double(table.rows[r][*n_col])].push_back(r);
    }

    std::map<std::string, std::vector<Point>> series;
    std::set<double> ladder;
    for (const auto& [name, by_n] : groups) {
        for (const auto& [n, rows] : by_n) {
            if (!(n > 0.0)) continue;
            std::vector<double> ys;
            Point p;
            p.n = n;
            for (std::size_t r : rows) {
                if (auto v = cell_value(table, r, *y_col)) ys.push_back(*v);
                if (lo_col) {
                    if (auto v = cell_value(table, r, *lo_col)) p.lo = p.lo ? std::min(*p.lo, *v) : *v;
                    if (auto v = cell_value(table, r, *hi_col)) p.hi = p.hi ? std::max(*p.hi, *v) : *v;
                }
            }
            if (ys.empty()) continue;
            double total = 0.0;
            for (double v : ys) total += v;
            p.y = total / static_cast<double>(ys.size());
            if (!lo_col && ys.size() > 1) {
                p.lo = *std::min_element(ys.begin(), ys.end());
                p.hi = *std::max_element(ys.begin(), ys.end());
            }
            series[name].push_back(p);
            ladder.insert(n);
        }
    }
    if (series.empty()) throw InvalidArgument("input has no plottable rows");

    const std::vector<double> xs(ladder.begin(), ladder.end());
    const std::vector<Curve> refs = reference_curves(spec, xs, is_squared_column(spec.y_column));

    double ymin = std::numeric_limits<double>::infinity();
    double ymax = 0.0;
    auto extend = [&](double v) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
    };
    for (const auto& [name, pts] : series) {
        for (const auto& p : pts) {
            extend(p.y);
            if (p.lo) extend(*p.lo);
            if (p.hi) extend(*p.hi);
        }
    }
    for (const auto& c : refs) {
        for (const auto& [n, v] : c.points) extend(v);
    }
    const LogAxes axes(xs.front(), xs.back(), ymin, ymax);

    std::ostringstream svg;
    svg << R"(<?xml version="1.0" encoding="UTF-8"?>)" << '\n'
        << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << kWidth << R"(" height=")" << kHeight
        << R"(" viewBox="0 0 )" << kWidth << ' ' << kHeight << R"(" font-family="sans-serif" font-size="12">)"
        << '\n';
    svg << R"(<rect x="0" y="0" width=")" << kWidth << R"(" height=")" << kHeight << R"(" fill="white"/>)" << '\n';
    if (!spec.title.empty()) {
        svg << R"(<text x=")" << px(kLeft + LogAxes::plot_width() / 2) << R"(" y="22" text-anchor="middle">)"
            << xml_escape(spec.title) << "</text>\n";
    }

    // Decade grid and tick labels.
    svg << R"(<g class="axes" stroke="#cccccc" stroke-width="1">)" << '\n';
    for (int e = axes.x_lo(); e <= axes.x_hi(); ++e) {
        const double x = axes.x(std::pow(10.0, e));
        svg << R"(<line x1=")" << px(x) << R"(" y1=")" << px(kTop) << R"(" x2=")" << px(x) << R"(" y2=")"
            << px(kHeight - kBottom) << R"("/>)" << '\n';
    }
    for (int e = axes.y_lo(); e <= axes.y_hi(); ++e) {
        const double y = axes.y(std::pow(10.0, e));
        svg << R"(<line x1=")" << px(kLeft) << R"(" y1=")" << px(y) << R"(" x2=")" << px(kWidth - kRight)
            << R"(" y2=")" << px(y) << R"("/>)" << '\n';
    }
    svg << "</g>\n";
    svg << R"(<rect x=")" << px(kLeft) << R"(" y=")" << px(kTop) << R"(" width=")" << px(LogAxes::plot_width())
        << R"(" height=")" << px(LogAxes::plot_height()) << R"(" fill="none" stroke="black"/>)" << '\n';
    for (int e = axes.x_lo(); e <= axes.x_hi(); ++e) {
        svg << R"(<text x=")" << px(axes.x(std::pow(10.0, e))) << R"(" y=")" << px(kHeight - kBottom + 18)
            << R"(" text-anchor="middle">1e)" << e << "</text>\n";
    }
    for (int e = axes.y_lo(); e <= axes.y_hi(); ++e) {
        svg << R"(<text x=")" << px(kLeft - 8) << R"(" y=")" << px(axes.y(std::pow(10.0, e)) + 4)
            << R"(" text-anchor="end">1e)" << e << "</text>\n";
    }
    svg << R"(<text x=")" << px(kLeft + LogAxes::plot_width() / 2) << R"(" y=")" << px(kHeight - 15)
        << R"(" text-anchor="middle">N_tot</text>)" << '\n';
    svg << R"(<text x="18" y=")" << px(kTop + LogAxes::plot_height() / 2) << R"(" text-anchor="middle" transform="rotate(-90 18 )"
        << px(kTop + LogAxes::plot_height() / 2) << ")\">" << xml_escape(spec.y_column) << "</text>\n";

    auto points_attr = [&](const std::vector<std::pair<double, double>>& pts, bool data) {
        std::string out;
        for (const auto& [n, v] : pts) {
            if (!out.empty()) out += ' ';
            out += data ? num(n) + ',' + num(v) : px(axes.x(n)) + ',' + px(axes.y(v));
        }
        return out;
    };

    double legend_y = kTop + 10;
    auto legend = [&](const std::string& label, const std::string& color, bool dashed) {
        const double x = kWidth - kRight + 15;
        svg << R"(<line x1=")" << px(x) << R"(" y1=")" << px(legend_y) << R"(" x2=")" << px(x + 24) << R"(" y2=")"
            << px(legend_y) << R"(" stroke=")" << color << R"(" stroke-width="2")"
            << (dashed ? R"( stroke-dasharray="6 4")" : "") << "/>\n";
        svg << R"(<text x=")" << px(x + 30) << R"(" y=")" << px(legend_y + 4) << R"(">)" << xml_escape(label)
            << "</text>\n";
        legend_y += 18;
    };

    std::size_t color_index = 0;
    for (const auto& [name, pts] : series) {
        const std::string color = kPalette[color_index++ % kPalette.size()];
        std::vector<std::pair<double, double>> line;
        for (const auto& p : pts) line.emplace_back(p.n, p.y);
        svg << R"(<polyline class="series" data-strategy=")" << xml_escape(name) << R"(" data-points=")"
            << points_attr(line, true) << R"(" points=")" << points_attr(line, false) << R"(" fill="none" stroke=")"
            << color << R"(" stroke-width="2"/>)" << '\n';
        for (const auto& p : pts) {
            if (p.lo && p.hi) {
                const double x = axes.x(p.n);
                svg << R"(<line class="errorbar" data-strategy=")" << xml_escape(name) << R"(" data-n=")" << num(p.n)
                    << R"(" x1=")" << px(x) << R"(" y1=")" << px(axes.y(*p.lo)) << R"(" x2=")" << px(x)
                    << R"(" y2=")" << px(axes.y(*p.hi)) << R"(" stroke=")" << color << R"(" stroke-width="1.5"/>)"
                    << '\n';
            }
            svg << R"(<circle class="marker" cx=")" << px(axes.x(p.n)) << R"(" cy=")" << px(axes.y(p.y))
                << R"(" r="3" fill=")" << color << R"("/>)" << '\n';
        }
        legend(name, color, false);
    }
    for (const auto& c : refs) {
        const std::string color = c.name == "sql" ? "#555555" : c.name == "hl" ? "#000000" : "#888888";
        svg << R"(<polyline class="reference" data-curve=")" << c.name << R"(" data-points=")"
            << points_attr(c.points, true) << R"(" points=")" << points_attr(c.points, false)
            << R"(" fill="none" stroke=")" << color << R"(" stroke-width="1.5" stroke-dasharray="6 4"/>)" << '\n';
        legend(c.name, color, true);
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace qpelab
