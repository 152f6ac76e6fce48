/*
 * Copyright 2026 The gaitdyn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gaitdyn/svg.hpp"

#include "gaitdyn/error.hpp"
#include "gaitdyn/textio.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>

namespace gaitdyn::svg {

namespace {

const char* const kQualitative[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
                                    "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896",
                                    "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5"};

std::string hex(double r, double g, double b) {
    const auto c = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
    return fmt::format("#{:02x}{:02x}{:02x}", c(r), c(g), c(b));
}

// HSV with s, v fixed; h in [0, 1).
std::string hue(double h, double s, double v) {
    const double x = h * 6.0;
    const int i = static_cast<int>(std::floor(x)) % 6;
    const double f = x - std::floor(x);
    const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
    switch (i) {
        case 0: return hex(v, t, p);
        case 1: return hex(q, v, p);
        case 2: return hex(p, v, t);
        case 3: return hex(p, q, v);
        case 4: return hex(t, p, v);
        default: return hex(v, p, q);
    }
}

bool is_colour(const std::string& s) {
    return s.size() == 7 && s[0] == '#' && std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

Palette default_palette(std::size_t n) {
    Palette p;
    for (std::size_t i = 0; i < n; ++i) {
        if (i < std::size(kQualitative)) {
            p.emplace_back(kQualitative[i]);
        } else {
            // golden-ratio hue walk, alternating two brightness levels
            const double h = std::fmod(0.61803398875 * static_cast<double>(i), 1.0);
            p.push_back(hue(h, 0.55, i % 2 ? 0.75 : 0.95));
        }
    }
    return p;
}

Palette parse_palette(const std::string& text) {
    Palette p;
    for (auto& part : split(text, ',')) {
        auto c = std::string(trim(part));
        if (!is_colour(c)) throw ConfigError(fmt::format("palette entry '{}' is not a #rrggbb colour", c));
        p.push_back(c);
    }
    return p;
}

void require_palette(const Palette& palette, std::span<const std::uint32_t> codes) {
    if (codes.empty()) return;
    const auto top = *std::max_element(codes.begin(), codes.end());
    if (top >= palette.size()) {
        throw PreconditionError(fmt::format("palette has {} colours but code {} occurs", palette.size(), top));
    }
}

std::string ramp_colour(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return hex(1.0 - 0.92 * v, 1.0 - 0.75 * v, 1.0 - 0.45 * v);
}

std::string num(double v) {
    auto s = fmt::format("{:.3f}", v);
    return s == "-0.000" ? "0.000" : s;
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

Writer::Writer(double width, double height) {
    out_ = fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
        "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"#ffffff\"/>\n",
        num(width), num(height));
}

void Writer::rect(double x, double y, double w, double h, const std::string& fill) {
    out_ += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n", num(x), num(y), num(w), num(h), fill);
}

void Writer::path(const std::string& d, const std::string& fill, const std::string& stroke) {
    out_ += fmt::format("<path d=\"{}\" fill=\"{}\" stroke=\"{}\"/>\n", d, fill, stroke);
}

void Writer::polygon(std::span<const double> xy, const std::string& fill) {
    std::string pts;
    for (std::size_t i = 0; i + 1 < xy.size(); i += 2) {
        if (i) pts += ' ';
        pts += num(xy[i]) + ',' + num(xy[i + 1]);
    }
    out_ += fmt::format("<polygon points=\"{}\" fill=\"{}\"/>\n", pts, fill);
}

void Writer::line(double x1, double y1, double x2, double y2, const std::string& stroke, double width) {
    out_ += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>\n", num(x1), num(y1),
                        num(x2), num(y2), stroke, num(width));
}

void Writer::text(double x, double y, const std::string& s, double size, const std::string& anchor) {
    out_ += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"{}\" text-anchor=\"{}\">{}</text>\n", num(x),
                        num(y), num(size), anchor, escape(s));
}

void Writer::open_group(const std::string& attributes) { out_ += fmt::format("<g {}>\n", attributes); }

void Writer::close_group() { out_ += "</g>\n"; }

std::string Writer::finish() {
    out_ += "</svg>\n";
    return std::move(out_);
}

std::string heatmap(const std::vector<std::vector<double>>& values, std::span<const std::size_t> row_order,
                    std::span<const std::size_t> column_order, const std::vector<std::string>& row_labels,
                    const std::vector<std::string>& column_labels, const std::string& title) {
    const std::size_t m = row_order.size(), n = column_order.size();
    if (m == 0 || n == 0) throw PreconditionError("empty heat map");
    double top = 0.0;
    for (const auto& r : values)
        for (double v : r) top = std::max(top, v);
    const double scale = top > 0.0 ? 1.0 / top : 1.0;

    const double cw = std::clamp(800.0 / static_cast<double>(n), 1.0, 16.0);
    const double ch = std::clamp(800.0 / static_cast<double>(m), 1.0, 16.0);
    const bool row_text = m <= 80, col_text = n <= 80;
    const double left = row_text ? 90.0 : 20.0, head = 30.0, foot = col_text ? 70.0 : 20.0;
    Writer w(left + cw * static_cast<double>(n) + 20.0, head + ch * static_cast<double>(m) + foot);
    w.text(left, 18.0, title, 12.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto r = row_order[i];
        for (std::size_t j = 0; j < n; ++j) {
            w.rect(left + cw * static_cast<double>(j), head + ch * static_cast<double>(i), cw, ch,
                   ramp_colour(values.at(r).at(column_order[j]) * scale));
        }
        if (row_text) w.text(left - 4.0, head + ch * (static_cast<double>(i) + 0.8), row_labels.at(r), std::min(ch, 9.0), "end");
    }
    if (col_text) {
        for (std::size_t j = 0; j < n; ++j) {
            const double x = left + cw * (static_cast<double>(j) + 0.7);
            const double y = head + ch * static_cast<double>(m) + 4.0;
            w.open_group(fmt::format("transform=\"rotate(90 {} {})\"", num(x), num(y)));
            w.text(x, y, column_labels.at(column_order[j]), std::min(cw, 9.0));
            w.close_group();
        }
    }
    return w.finish();
}

std::string code_strips(const std::vector<std::vector<std::uint32_t>>& sequences, const std::vector<std::string>& labels,
                        const Palette& palette, const std::string& title) {
    if (sequences.empty()) throw PreconditionError("no sequences to draw");
    std::size_t longest = 0;
    for (const auto& s : sequences) {
        require_palette(palette, s);
        longest = std::max(longest, s.size());
    }
    const double left = 150.0, width = 900.0, strip = 24.0, gap = 10.0, head = 30.0;
    const double cw = width / static_cast<double>(std::max<std::size_t>(longest, 1));
    Writer w(left + width + 20.0, head + static_cast<double>(sequences.size()) * (strip + gap) + 10.0);
    w.text(left, 18.0, title, 12.0);
    for (std::size_t k = 0; k < sequences.size(); ++k) {
        const double y = head + static_cast<double>(k) * (strip + gap);
        w.text(left - 6.0, y + strip * 0.65, labels.at(k), 10.0, "end");
        const auto& s = sequences[k];
        for (std::size_t t = 0; t < s.size();) {
            // merge runs into one rectangle
            std::size_t e = t + 1;
            while (e < s.size() && s[e] == s[t]) ++e;
            w.rect(left + cw * static_cast<double>(t), y, cw * static_cast<double>(e - t), strip, palette[s[t]]);
            t = e;
        }
    }
    return w.finish();
}

}  // namespace gaitdyn::svg
