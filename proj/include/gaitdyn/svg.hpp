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

#pragma once

// Minimal SVG 1.1 writer. Coordinates are printed with three decimals so the
// same input always gives the same bytes.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gaitdyn::svg {

/// Fill colours as "#rrggbb", indexed by code.
using Palette = std::vector<std::string>;

/// `n` distinct colours: a fixed qualitative list first, then evenly spaced hues.
Palette default_palette(std::size_t n);

/// Parses a comma-separated "#rrggbb" list.
Palette parse_palette(const std::string& text);

/// Throws PreconditionError unless every code in `codes` has a colour.
void require_palette(const Palette& palette, std::span<const std::uint32_t> codes);

/// Sequential white-to-dark-blue ramp for values in [0, 1].
std::string ramp_colour(double v);

class Writer {
public:
    Writer(double width, double height);

    void rect(double x, double y, double w, double h, const std::string& fill);
    void path(const std::string& d, const std::string& fill, const std::string& stroke = "none");
    void polygon(std::span<const double> xy, const std::string& fill);
    void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0);
    void text(double x, double y, const std::string& s, double size = 10.0, const std::string& anchor = "start");
    void open_group(const std::string& attributes);
    void close_group();

    /// Closes the document and returns it.
    std::string finish();

private:
    std::string out_;
};

std::string num(double v);
std::string escape(const std::string& s);

/// Rows x columns heat map (values in [0, 1]) drawn in the given orders,
/// with row and column labels.
std::string heatmap(const std::vector<std::vector<double>>& values, std::span<const std::size_t> row_order,
                    std::span<const std::size_t> column_order, const std::vector<std::string>& row_labels,
                    const std::vector<std::string>& column_labels, const std::string& title);

/// One horizontal strip per sequence, one cell per symbol.
std::string code_strips(const std::vector<std::vector<std::uint32_t>>& sequences, const std::vector<std::string>& labels,
                        const Palette& palette, const std::string& title);

}  // namespace gaitdyn::svg
