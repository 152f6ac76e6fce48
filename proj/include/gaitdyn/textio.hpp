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

// Small text helpers shared by the file formats.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gaitdyn {

std::string trim(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

/// Whole-string parse; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Line-oriented reader for the versioned text formats.
class LineReader {
public:
    LineReader(std::string text, std::string source);

    bool done() const noexcept { return pos_ >= lines_.size(); }
    /// Next line split on whitespace; throws DataError at end of input.
    std::vector<std::string> next_fields();
    /// Next line whose first field must equal `key`; returns the remaining fields.
    std::vector<std::string> expect(std::string_view key);
    std::size_t line_number() const noexcept { return pos_; }
    [[noreturn]] void fail(const std::string& what) const;

private:
    std::vector<std::string> lines_;
    std::string source_;
    std::size_t pos_ = 0;
};

double to_double(const std::string& field, const LineReader& where);
long long to_int(const std::string& field, const LineReader& where);

}  // namespace gaitdyn
