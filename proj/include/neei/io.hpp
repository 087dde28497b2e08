#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "neei/channel.hpp"
#include "neei/errors.hpp"

namespace neei {

// scientific notation, 12 significant digits; the one float format every
// emitted file uses so that checksums are stable
inline std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.11e", v);
    return buf;
}

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open for writing: " + path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out)
        throw Error("short write: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Heatmap text format: line 1 "# x0 y0 dx dy nx ny", then ny rows of nx
// space-separated dB values (-999.0 stands for -inf).
inline std::string heatmap_to_string(const Heatmap& hm) {
    std::string out = "# " + fmt_num(hm.x0) + " " + fmt_num(hm.y0) + " " + fmt_num(hm.dx) + " " +
                      fmt_num(hm.dy) + " " + std::to_string(hm.nx) + " " + std::to_string(hm.ny) + "\n";
    for (int iy = 0; iy < hm.ny; ++iy) {
        for (int ix = 0; ix < hm.nx; ++ix) {
            if (ix > 0)
                out += ' ';
            out += fmt_num(hm.at(ix, iy));
        }
        out += '\n';
    }
    return out;
}

inline Heatmap heatmap_from_string(const std::string& text) {
    std::istringstream in(text);
    std::string hash;
    Heatmap hm;
    if (!(in >> hash) || hash != "#")
        throw ParseError("heatmap header must start with '#'");
    if (!(in >> hm.x0 >> hm.y0 >> hm.dx >> hm.dy >> hm.nx >> hm.ny))
        throw ParseError("heatmap header needs x0 y0 dx dy nx ny");
    if (hm.nx < 1 || hm.ny < 1)
        throw ParseError("heatmap dimensions must be positive");
    hm.values_db.resize(static_cast<std::size_t>(hm.nx) * hm.ny);
    for (auto& v : hm.values_db)
        if (!(in >> v))
            throw ParseError("heatmap has fewer values than nx*ny");
    return hm;
}

} // namespace neei
