#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "aspt/grid_map.hpp"

namespace aspt {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MapLoadError("cannot open map file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Header tokenizer shared by P2 and P5; skips whitespace and '#' comments.
class PgmReader {
 public:
  explicit PgmReader(std::string_view data) : data_(data) {}

  std::string token(const char* field) {
    skip_space_and_comments();
    const std::size_t begin = pos_;
    while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_])) && data_[pos_] != '#') {
      ++pos_;
    }
    if (begin == pos_) throw MapLoadError(std::string("malformed PGM header: missing ") + field);
    return std::string(data_.substr(begin, pos_ - begin));
  }

  long integer(const char* field) {
    const std::string tok = token(field);
    std::size_t used = 0;
    long value = 0;
    try {
      value = std::stol(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw MapLoadError(std::string("malformed PGM header: bad ") + field + " '" + tok + "'");
    return value;
  }

  /// After maxval a single whitespace byte separates header and raster.
  std::string_view binary_payload() {
    if (pos_ < data_.size()) ++pos_;
    return data_.substr(pos_);
  }

  bool at_end() {
    skip_space_and_comments();
    return pos_ >= data_.size();
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      if (std::isspace(static_cast<unsigned char>(data_[pos_]))) {
        ++pos_;
      } else if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

template <typename T>
T require_key(const YAML::Node& meta, const char* key) {
  const YAML::Node node = meta[key];
  if (!node) throw MapLoadError(std::string("missing metadata key '") + key + "'");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw MapLoadError(std::string("invalid value for metadata key '") + key + "'");
  }
}

template <typename T>
T optional_key(const YAML::Node& meta, const char* key, T fallback) {
  const YAML::Node node = meta[key];
  if (!node) return fallback;
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw MapLoadError(std::string("invalid value for metadata key '") + key + "'");
  }
}

YAML::Node parse_yaml(std::string_view text) {
  try {
    return YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw MapLoadError(std::string("malformed map metadata: ") + e.what());
  }
}

bool read_negate(const YAML::Node& meta) {
  const YAML::Node node = meta["negate"];
  if (!node) return false;
  try {
    return node.as<int>() != 0;
  } catch (const YAML::Exception&) {
  }
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    throw MapLoadError("invalid value for metadata key 'negate'");
  }
}

}  // namespace

GridMap load_pgm_yaml(std::string_view pgm_bytes, std::string_view yaml_meta) {
  const YAML::Node meta = parse_yaml(yaml_meta);
  if (!meta.IsMap()) throw MapLoadError("malformed map metadata: expected a mapping");

  const double resolution = require_key<double>(meta, "resolution");
  if (!(resolution > 0.0)) throw MapLoadError("invalid value for metadata key 'resolution'");
  const auto origin = require_key<std::vector<double>>(meta, "origin");
  if (origin.size() < 2) throw MapLoadError("invalid value for metadata key 'origin'");

  PgmThresholds thresholds;
  thresholds.occupied = optional_key<double>(meta, "occupied_thresh", thresholds.occupied);
  thresholds.free = optional_key<double>(meta, "free_thresh", thresholds.free);
  thresholds.negate = read_negate(meta);

  PgmReader reader(pgm_bytes);
  const std::string magic = reader.token("magic number");
  if (magic != "P5" && magic != "P2") throw MapLoadError("malformed PGM header: unsupported magic '" + magic + "'");
  const long width = reader.integer("width");
  const long height = reader.integer("height");
  const long maxval = reader.integer("maxval");
  if (width <= 0 || height <= 0) throw MapLoadError("malformed PGM header: non-positive width/height");
  if (maxval <= 0 || maxval > 65535) throw MapLoadError("malformed PGM header: maxval out of range");

  const std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<long> pixels;
  pixels.reserve(expected);
  if (magic == "P5") {
    const std::string_view raster = reader.binary_payload();
    const std::size_t bytes_per_pixel = maxval > 255 ? 2 : 1;
    if (raster.size() != expected * bytes_per_pixel) {
      throw MapLoadError("pixel count mismatch: expected " + std::to_string(expected) + " pixels, got " +
                         std::to_string(raster.size() / bytes_per_pixel));
    }
    for (std::size_t i = 0; i < expected; ++i) {
      if (bytes_per_pixel == 1) {
        pixels.push_back(static_cast<unsigned char>(raster[i]));
      } else {
        pixels.push_back(static_cast<unsigned char>(raster[2 * i]) * 256L + static_cast<unsigned char>(raster[2 * i + 1]));
      }
    }
  } else {
    while (!reader.at_end()) pixels.push_back(reader.integer("pixel value"));
    if (pixels.size() != expected) {
      throw MapLoadError("pixel count mismatch: expected " + std::to_string(expected) + " pixels, got " +
                         std::to_string(pixels.size()));
    }
  }

  std::vector<CellState> cells;
  cells.reserve(expected);
  const double scale = static_cast<double>(maxval);
  for (long v : pixels) {
    if (v < 0 || v > maxval) throw MapLoadError("pixel value " + std::to_string(v) + " exceeds maxval");
    const double occupancy = thresholds.negate ? v / scale : (scale - v) / scale;
    if (occupancy >= thresholds.occupied) {
      cells.push_back(CellState::Occupied);
    } else if (occupancy <= thresholds.free) {
      cells.push_back(CellState::Free);
    } else {
      cells.push_back(CellState::Unknown);
    }
  }
  return GridMap(static_cast<int>(width), static_cast<int>(height), resolution, {origin[0], origin[1]},
                 std::move(cells));
}

GridMap load_map_yaml_file(const std::string& yaml_path) {
  const std::string text = read_file(yaml_path);
  const YAML::Node meta = parse_yaml(text);
  const auto image = require_key<std::string>(meta, "image");
  std::filesystem::path image_path(image);
  if (image_path.is_relative()) image_path = std::filesystem::path(yaml_path).parent_path() / image_path;
  return load_pgm_yaml(read_file(image_path.string()), text);
}

GridMap load_ascii(std::string_view text) {
  double resolution = 1.0;
  std::vector<std::string> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first && line.rfind("resolution", 0) == 0) {
      first = false;
      std::istringstream header(line.substr(10));
      if (!(header >> resolution) || !(resolution > 0.0)) {
        throw MapLoadError("bad resolution header at line " + std::to_string(line_no));
      }
      continue;
    }
    first = false;
    if (line.empty()) {
      // trailing blank lines are tolerated
      continue;
    }
    if (!rows.empty() && line.size() != rows.front().size()) {
      throw MapLoadError("ragged row at line " + std::to_string(line_no));
    }
    rows.push_back(line);
  }
  if (rows.empty()) throw MapLoadError("empty map");

  const int width = static_cast<int>(rows.front().size());
  const int height = static_cast<int>(rows.size());
  std::vector<CellState> cells;
  cells.reserve(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      switch (rows[y][x]) {
        case '.':
          cells.push_back(CellState::Free);
          break;
        case '#':
          cells.push_back(CellState::Occupied);
          break;
        case '?':
          cells.push_back(CellState::Unknown);
          break;
        default:
          throw MapLoadError("unknown character '" + std::string(1, rows[y][x]) + "' at row " + std::to_string(y) +
                             ", column " + std::to_string(x));
      }
    }
  }
  return GridMap(width, height, resolution, {}, std::move(cells));
}

std::string to_ascii(const GridMap& map) {
  std::ostringstream os;
  if (map.resolution() != 1.0) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), map.resolution());
    os << "resolution " << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
  }
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      switch (map.at({x, y})) {
        case CellState::Free:
          os << '.';
          break;
        case CellState::Occupied:
          os << '#';
          break;
        case CellState::Unknown:
          os << '?';
          break;
      }
    }
    os << '\n';
  }
  return os.str();
}

GridMap load_map_file(const std::string& path) {
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".yaml" || ext == ".yml") return load_map_yaml_file(path);
  return load_ascii(read_file(path));
}

}  // namespace aspt
