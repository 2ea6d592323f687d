// SPDX-License-Identifier: Apache-2.0
//
// beamsim: location- and orientation-aware beam selection for multi-panel mmWave devices
// Copyright (C) 2026 The beamsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BEAMSIM_BINARY_IO_HPP
#define BEAMSIM_BINARY_IO_HPP

// Little-endian primitives shared by the binary file formats

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace beamsim::io
{

template <typename T>
T to_little(T v)
{
    if constexpr (std::endian::native == std::endian::big)
    {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
            std::swap(b[i], b[sizeof(T) - 1 - i]);
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}

template <typename T>
void put(std::ostream &out, T v)
{
    v = to_little(v);
    out.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T>
T get(std::istream &in)
{
    T v{};
    in.read(reinterpret_cast<char *>(&v), sizeof(T));
    if (in.gcount() != std::streamsize(sizeof(T)))
        throw std::runtime_error("Unexpected end of binary file.");
    return to_little(v);
}

inline void put_string(std::ostream &out, const std::string &s)
{
    put<std::uint32_t>(out, std::uint32_t(s.size()));
    out.write(s.data(), std::streamsize(s.size()));
}

inline std::string get_string(std::istream &in)
{
    const auto n = get<std::uint32_t>(in);
    if (n > (1u << 20))
        throw std::runtime_error("Corrupt string length in binary file.");
    std::string s(n, '\0');
    in.read(s.data(), n);
    if (in.gcount() != std::streamsize(n))
        throw std::runtime_error("Unexpected end of binary file.");
    return s;
}

inline void expect_magic(std::istream &in, std::string_view magic)
{
    std::string got(magic.size(), '\0');
    in.read(got.data(), std::streamsize(magic.size()));
    if (in.gcount() != std::streamsize(magic.size()) || got != magic)
        throw std::runtime_error("Bad magic: expected '" + std::string(magic) + "'.");
}

// Shortest decimal form that parses back to the same double
inline std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view text, double &out)
{
    if (text.empty())
        return false;
    auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

template <typename Int>
bool parse_int(std::string_view text, Int &out)
{
    if (text.empty())
        return false;
    auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

} // namespace beamsim::io

#endif
