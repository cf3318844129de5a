#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "navsim/errors.hpp"
#include "navsim/occupancy_grid.hpp"

namespace navsim {

namespace fs = std::filesystem;

namespace {

std::string format_double(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, end);
    // Keep YAML readers from typing integral values as ints.
    if (s.find_first_of(".eE") == std::string::npos && s.find_first_of("ni") == std::string::npos)
        s += ".0";
    return s;
}

std::uint8_t pixel_for(CellState s)
{
    switch (s) {
    case CellState::Free: return kPixelFree;
    case CellState::Occupied: return kPixelOccupied;
    case CellState::Unknown: break;
    }
    return kPixelUnknown;
}

// Next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in, const std::string& path)
{
    std::string tok;
    char ch = 0;
    while (in.get(ch)) {
        if (ch == '#') {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!tok.empty())
                return tok;
            continue;
        }
        tok.push_back(ch);
    }
    if (tok.empty())
        throw ParseError(0, path + ": truncated PGM header");
    return tok;
}

int pgm_int(std::istream& in, const std::string& path)
{
    const std::string tok = pgm_token(in, path);
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError(0, path + ": malformed PGM header value '" + tok + "'");
    return v;
}

template <typename T>
T yaml_get(const YAML::Node& root, const char* key)
{
    const YAML::Node n = root[key];
    if (!n)
        throw ConfigError(key, "missing key in map metadata");
    try {
        return n.as<T>();
    } catch (const YAML::Exception& e) {
        throw ConfigError(key, std::string("bad value in map metadata: ") + e.what());
    }
}

}  // namespace

void MapMetadata::validate() const
{
    if (!(resolution > 0.0))
        throw ValidationError("map metadata: resolution must be positive");
    if (negate != 0 && negate != 1)
        throw ValidationError("map metadata: negate must be 0 or 1");
    if (!(0.0 <= free_thresh && free_thresh < occupied_thresh && occupied_thresh <= 1.0))
        throw ValidationError("map metadata: require 0 <= free_thresh < occupied_thresh <= 1");
}

void save_map(const OccupancyGrid& grid, const std::string& directory, const std::string& basename,
              double occupied_thresh, double free_thresh)
{
    const GridGeometry& g = grid.geometry();
    MapMetadata meta{basename + ".pgm", g.resolution, g.origin, 0, occupied_thresh, free_thresh};
    meta.validate();

    const fs::path dir(directory);
    const fs::path pgm_path = dir / (basename + ".pgm");
    const fs::path yaml_path = dir / (basename + ".yaml");

    std::ofstream pgm(pgm_path, std::ios::binary);
    if (!pgm)
        throw IoError(pgm_path.string(), "cannot open for writing");
    pgm << "P5\n" << g.width << ' ' << g.height << "\n255\n";
    std::vector<char> row(static_cast<std::size_t>(g.width));
    for (int r = g.height - 1; r >= 0; --r) {
        for (int c = 0; c < g.width; ++c)
            row[static_cast<std::size_t>(c)] =
                static_cast<char>(pixel_for(grid.classify({c, r}, occupied_thresh, free_thresh)));
        pgm.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
    if (!pgm)
        throw IoError(pgm_path.string(), "write failed");

    std::ofstream yaml(yaml_path);
    if (!yaml)
        throw IoError(yaml_path.string(), "cannot open for writing");
    yaml << "image: " << meta.image_name << '\n'
         << "resolution: " << format_double(meta.resolution) << '\n'
         << "origin: [" << format_double(meta.origin.x) << ", " << format_double(meta.origin.y) << ", "
         << format_double(meta.origin.theta) << "]\n"
         << "negate: " << meta.negate << '\n'
         << "occupied_thresh: " << format_double(meta.occupied_thresh) << '\n'
         << "free_thresh: " << format_double(meta.free_thresh) << '\n';
    if (!yaml)
        throw IoError(yaml_path.string(), "write failed");
}

LoadedMap load_map(const std::string& directory, const std::string& basename)
{
    const fs::path yaml_path = fs::path(directory) / (basename + ".yaml");
    if (!fs::exists(yaml_path))
        throw IoError(yaml_path.string(), "no such file");

    YAML::Node root;
    try {
        root = YAML::LoadFile(yaml_path.string());
    } catch (const YAML::Exception& e) {
        throw ParseError(0, yaml_path.string() + ": " + e.what());
    }

    MapMetadata meta;
    meta.image_name = yaml_get<std::string>(root, "image");
    meta.resolution = yaml_get<double>(root, "resolution");
    const auto origin = yaml_get<std::vector<double>>(root, "origin");
    if (origin.size() != 3)
        throw ConfigError("origin", "expected [x, y, yaw]");
    meta.origin = {origin[0], origin[1], origin[2]};
    meta.negate = yaml_get<int>(root, "negate");
    meta.occupied_thresh = yaml_get<double>(root, "occupied_thresh");
    meta.free_thresh = yaml_get<double>(root, "free_thresh");
    meta.validate();

    fs::path pgm_path(meta.image_name);
    if (pgm_path.is_relative())
        pgm_path = yaml_path.parent_path() / pgm_path;
    std::ifstream pgm(pgm_path, std::ios::binary);
    if (!pgm)
        throw IoError(pgm_path.string(), "no such file");

    const std::string path = pgm_path.string();
    if (pgm_token(pgm, path) != "P5")
        throw ParseError(0, path + ": not a binary PGM (P5)");
    const int width = pgm_int(pgm, path);
    const int height = pgm_int(pgm, path);
    const int maxval = pgm_int(pgm, path);
    if (width <= 0 || height <= 0)
        throw ParseError(0, path + ": non-positive image size");
    if (maxval != 255)
        throw ParseError(0, path + ": only maxval 255 is supported");

    std::vector<unsigned char> pixels(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    pgm.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (pgm.gcount() != static_cast<std::streamsize>(pixels.size()))
        throw ParseError(0, path + ": truncated pixel data");

    OccupancyGrid grid(GridGeometry{width, height, meta.resolution, meta.origin});
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const unsigned char px =
                pixels[static_cast<std::size_t>(height - 1 - r) * static_cast<std::size_t>(width) +
                       static_cast<std::size_t>(c)];
            const double occ = meta.negate ? px / 255.0 : (255.0 - px) / 255.0;
            CellState s = CellState::Unknown;
            if (occ > meta.occupied_thresh)
                s = CellState::Occupied;
            else if (occ < meta.free_thresh)
                s = CellState::Free;
            grid.set_state({c, r}, s);
        }
    }
    return {std::move(grid), std::move(meta)};
}

}  // namespace navsim
