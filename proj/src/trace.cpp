/*
 *    Copyright 2026 The hmmu Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hmmu/trace.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include <fmt/format.h>

#include "hmmu/error.hpp"

namespace hmmu {

namespace {

constexpr Addr kNoAddress = ~Addr{0};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

Addr parse_hex_field(std::string_view token, std::string_view key, std::size_t line_no) {
    if (token.substr(0, key.size()) != key)
        throw ParseError(line_no, fmt::format("expected '{}' but found '{}'", key, token));
    auto digits = token.substr(key.size());
    if (digits.size() >= 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X'))
        digits.remove_prefix(2);
    if (digits.empty()) throw ParseError(line_no, fmt::format("empty value in '{}'", token));

    Addr value = 0;
    const auto* first = digits.data();
    const auto* last = first + digits.size();
    auto [ptr, ec] = std::from_chars(first, last, value, 16);
    if (ec == std::errc::result_out_of_range || (ec == std::errc{} && ptr == last && value >= kVaLimit))
        throw ParseError(line_no, fmt::format("address '{}' exceeds 48 bits", token));
    if (ec != std::errc{} || ptr != last)
        throw ParseError(line_no, fmt::format("malformed hex value '{}'", token));
    return value;
}

void check_canonical(const InstructionRecord& r) {
    if (r.pc >= kVaLimit || (r.data_vaddr && *r.data_vaddr >= kVaLimit))
        throw DataError(fmt::format("record pc={:#x} has an address beyond 48 bits", r.pc));
}

}  // namespace

std::size_t Trace::memory_refs() const {
    std::size_t n = 0;
    for (const auto& r : records) n += r.data_vaddr.has_value();
    return n;
}

Trace parse_trace(std::istream& in, std::string name) {
    Trace trace;
    trace.name = std::move(name);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto view = trim(line);
        if (view.empty() || view.front() == '#') continue;

        std::array<std::string_view, 3> tokens{};
        std::size_t count = 0;
        while (!view.empty()) {
            const auto split = view.find_first_of(" \t");
            if (count == tokens.size())
                throw ParseError(line_no, "too many fields");
            tokens[count++] = view.substr(0, split);
            view = split == std::string_view::npos ? std::string_view{} : trim(view.substr(split));
        }
        if (count > 2) throw ParseError(line_no, "too many fields");

        InstructionRecord record;
        record.pc = parse_hex_field(tokens[0], "pc=", line_no);
        if (count == 2) record.data_vaddr = parse_hex_field(tokens[1], "va=", line_no);
        trace.records.push_back(record);
    }
    return trace;
}

Trace parse_trace_string(const std::string& text, std::string name) {
    std::istringstream in(text);
    return parse_trace(in, std::move(name));
}

Trace read_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open trace '" + path + "'");
    auto name = path.substr(path.find_last_of('/') + 1);
    if (path.size() > 4 && path.ends_with(".bin")) return read_trace_binary(in, std::move(name));
    return parse_trace(in, std::move(name));
}

void write_trace(std::ostream& out, const Trace& trace) {
    out << "# " << trace.name << ": " << trace.records.size() << " records\n";
    fmt::memory_buffer buf;
    for (const auto& r : trace.records) {
        check_canonical(r);
        if (r.data_vaddr)
            fmt::format_to(std::back_inserter(buf), "pc={:#x} va={:#x}\n", r.pc, *r.data_vaddr);
        else
            fmt::format_to(std::back_inserter(buf), "pc={:#x}\n", r.pc);
        if (buf.size() > (1 << 16)) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::string format_trace(const Trace& trace) {
    std::ostringstream out;
    write_trace(out, trace);
    return out.str();
}

namespace {

void put_le64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> bytes{};
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(bytes.data(), bytes.size());
}

std::uint64_t get_le64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

}  // namespace

void write_trace_binary(std::ostream& out, const Trace& trace) {
    for (const auto& r : trace.records) {
        check_canonical(r);
        put_le64(out, r.pc);
        put_le64(out, r.data_vaddr.value_or(kNoAddress));
    }
}

Trace read_trace_binary(std::istream& in, std::string name) {
    Trace trace;
    trace.name = std::move(name);
    std::array<unsigned char, 16> rec{};
    std::size_t index = 0;
    while (in.read(reinterpret_cast<char*>(rec.data()), rec.size())) {
        ++index;
        InstructionRecord r;
        r.pc = get_le64(rec.data());
        const auto va = get_le64(rec.data() + 8);
        if (va != kNoAddress) r.data_vaddr = va;
        if (r.pc >= kVaLimit || (r.data_vaddr && *r.data_vaddr >= kVaLimit))
            throw ParseError(index, "address exceeds 48 bits");
        trace.records.push_back(r);
    }
    if (in.gcount() != 0) throw ParseError(index + 1, "truncated binary record");
    return trace;
}

}  // namespace hmmu
