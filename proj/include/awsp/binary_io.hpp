// SPDX-License-Identifier: Apache-2.0
//
// Little-endian primitives shared by the dataset, feature and weights files.

#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>

namespace awsp {

void write_u32(std::ostream& out, std::uint32_t v);
std::uint32_t read_u32(std::istream& in);
void write_f32(std::ostream& out, std::span<const float> v);
void read_f32(std::istream& in, std::span<float> v);
void write_f64(std::ostream& out, std::span<const double> v);
void read_f64(std::istream& in, std::span<double> v);

// Pretty-printed with sorted keys and a trailing newline so reruns are byte-identical.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace awsp
