// SPDX-License-Identifier: Apache-2.0

#include "awsp/binary_io.hpp"
#include "awsp/common.hpp"

#include <bit>
#include <fstream>
#include <vector>

namespace awsp {

namespace {

template <class U> U to_little(U v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    else {
        U out = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) out = static_cast<U>((out << 8) | ((v >> (8 * i)) & 0xFF));
        return out;
    }
}

template <class T, class U> void write_words(std::ostream& out, std::span<const T> v) {
    std::vector<U> buf(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) buf[i] = to_little(std::bit_cast<U>(v[i]));
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(U)));
}

template <class T, class U> void read_words(std::istream& in, std::span<T> v) {
    std::vector<U> buf(v.size());
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(U)));
    if (!in) throw IoError("unexpected end of binary data");
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::bit_cast<T>(to_little(buf[i]));
}

} // namespace

void write_u32(std::ostream& out, std::uint32_t v) {
    const std::uint32_t le = to_little(v);
    out.write(reinterpret_cast<const char*>(&le), sizeof le);
}

std::uint32_t read_u32(std::istream& in) {
    std::uint32_t le = 0;
    in.read(reinterpret_cast<char*>(&le), sizeof le);
    if (!in) throw IoError("unexpected end of binary data");
    return to_little(le);
}

void write_f32(std::ostream& out, std::span<const float> v) { write_words<float, std::uint32_t>(out, v); }
void read_f32(std::istream& in, std::span<float> v) { read_words<float, std::uint32_t>(in, v); }
void write_f64(std::ostream& out, std::span<const double> v) { write_words<double, std::uint64_t>(out, v); }
void read_f64(std::istream& in, std::span<double> v) { read_words<double, std::uint64_t>(in, v); }

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace awsp
