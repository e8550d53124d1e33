// Copyright 2026 The ptot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ptot/io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace ptot {
namespace {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> tokens;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string Where(const std::filesystem::path& path, size_t line_number) {
  return path.string() + ":" + std::to_string(line_number);
}

Point3 ParseTriple(const std::vector<std::string_view>& tokens, size_t offset,
                   const std::filesystem::path& path, size_t line_number) {
  Point3 p;
  for (int k = 0; k < 3; ++k) {
    double value;
    if (!ParseDouble(tokens[offset + k], &value) || !std::isfinite(value)) {
      throw ParseError(Where(path, line_number) + ": invalid coordinate '" +
                       std::string(tokens[offset + k]) + "' on line " +
                       std::to_string(line_number));
    }
    p[k] = value;
  }
  return p;
}

// Reads a "<MAGIC> W H" header followed by W*H reals.
std::vector<double> LoadGrid(const std::filesystem::path& path,
                             std::string_view magic, int* width, int* height) {
  const std::string text = ReadFile(path);
  const std::vector<std::string_view> tokens = SplitWhitespace(text);
  if (tokens.size() < 3 || tokens[0] != magic) {
    throw ParseError(path.string() + ": expected header '" +
                     std::string(magic) + " W H'");
  }
  auto parse_dim = [&](std::string_view token) {
    int value = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || value <= 0) {
      throw ParseError(path.string() + ": invalid grid dimension '" +
                       std::string(token) + "'");
    }
    return value;
  };
  *width = parse_dim(tokens[1]);
  *height = parse_dim(tokens[2]);
  const size_t expected = static_cast<size_t>(*width) * *height;
  if (tokens.size() - 3 != expected) {
    throw ParseError(path.string() + ": expected " + std::to_string(expected) +
                     " values, found " + std::to_string(tokens.size() - 3));
  }
  std::vector<double> values(expected);
  for (size_t i = 0; i < expected; ++i) {
    if (!ParseDouble(tokens[3 + i], &values[i]) || !std::isfinite(values[i])) {
      throw ParseError(path.string() + ": invalid value '" +
                       std::string(tokens[3 + i]) + "' at index " +
                       std::to_string(i));
    }
  }
  return values;
}

void SaveGrid(const std::filesystem::path& path, std::string_view magic,
              int width, int height, const std::vector<double>& values) {
  std::string text = std::string(magic) + " " + std::to_string(width) + " " +
                     std::to_string(height) + "\n";
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      if (u > 0) text += ' ';
      text += FormatDouble(values[static_cast<size_t>(v) * width + u]);
    }
    text += '\n';
  }
  WriteFile(path, text);
}

bool IsPlyScalarType(std::string_view type) {
  static const std::set<std::string_view> kTypes = {
      "char",  "uchar",  "short",  "ushort",  "int",     "uint",
      "float", "double", "int8",   "uint8",   "int16",   "uint16",
      "int32", "uint32", "float32", "float64"};
  return kTypes.contains(type);
}

}  // namespace

std::string FormatDouble(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                        std::chars_format::general, 17);
  return std::string(buffer, ptr);
}

bool ParseDouble(std::string_view token, double* value) {
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), *value);
  return ec == std::errc() && ptr == token.data() + token.size();
}

PointCloud LoadXyz(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  const auto lines = SplitLines(text);
  std::vector<Point3> points;
  for (size_t i = 0; i < lines.size(); ++i) {
    const auto tokens = SplitWhitespace(lines[i]);
    if (tokens.empty()) continue;
    if (tokens.size() != 3) {
      throw ParseError(Where(path, i + 1) + ": expected 3 values on line " +
                       std::to_string(i + 1) + ", found " +
                       std::to_string(tokens.size()));
    }
    points.push_back(ParseTriple(tokens, 0, path, i + 1));
  }
  if (points.empty()) throw ParseError(path.string() + ": file holds no points");
  return PointCloud(std::move(points));
}

void SaveXyz(const PointCloud& cloud, const std::filesystem::path& path) {
  std::string text;
  for (const Point3& p : cloud) {
    text += FormatDouble(p.x()) + " " + FormatDouble(p.y()) + " " +
            FormatDouble(p.z()) + "\n";
  }
  WriteFile(path, text);
}

PointCloud LoadPly(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  const auto lines = SplitLines(text);
  auto fail = [&](size_t line_number, const std::string& what) -> ParseError {
    return ParseError(Where(path, line_number) + ": " + what);
  };
  if (lines.empty() || lines[0] != "ply") throw fail(1, "missing 'ply' magic");
  if (lines.size() < 2 || SplitWhitespace(lines[1]) !=
                              std::vector<std::string_view>{"format", "ascii",
                                                            "1.0"}) {
    throw fail(2, "expected 'format ascii 1.0'");
  }
  long long vertex_count = -1;
  std::vector<std::string> properties;
  size_t i = 2;
  bool header_done = false;
  for (; i < lines.size(); ++i) {
    const auto tokens = SplitWhitespace(lines[i]);
    if (tokens.empty()) throw fail(i + 1, "blank line inside header");
    if (tokens[0] == "comment" || tokens[0] == "obj_info") continue;
    if (tokens[0] == "end_header") {
      header_done = true;
      ++i;
      break;
    }
    if (tokens[0] == "element") {
      if (tokens.size() != 3 || tokens[1] != "vertex") {
        throw fail(i + 1, "only a single 'element vertex N' is supported");
      }
      if (vertex_count >= 0) throw fail(i + 1, "duplicate vertex element");
      const auto [ptr, ec] = std::from_chars(
          tokens[2].data(), tokens[2].data() + tokens[2].size(), vertex_count);
      if (ec != std::errc() || ptr != tokens[2].data() + tokens[2].size() ||
          vertex_count < 0) {
        throw fail(i + 1, "invalid vertex count");
      }
      continue;
    }
    if (tokens[0] == "property") {
      if (vertex_count < 0) throw fail(i + 1, "property before element");
      if (tokens.size() != 3 || !IsPlyScalarType(tokens[1])) {
        throw fail(i + 1, "unsupported property declaration");
      }
      const std::string name(tokens[2]);
      for (const auto& existing : properties) {
        if (existing == name) throw fail(i + 1, "duplicate property " + name);
      }
      properties.push_back(name);
      continue;
    }
    throw fail(i + 1, "unexpected header line");
  }
  if (!header_done) throw fail(lines.size(), "missing end_header");
  if (vertex_count < 0) throw fail(i, "missing 'element vertex N'");
  int index[3] = {-1, -1, -1};
  const char* names[3] = {"x", "y", "z"};
  for (int k = 0; k < 3; ++k) {
    for (size_t p = 0; p < properties.size(); ++p) {
      if (properties[p] == names[k]) index[k] = static_cast<int>(p);
    }
    if (index[k] < 0) {
      throw fail(i, std::string("vertex element lacks property ") + names[k]);
    }
  }
  if (vertex_count == 0) throw fail(i, "file holds no points");

  std::vector<Point3> points;
  points.reserve(static_cast<size_t>(vertex_count));
  for (; i < lines.size() && points.size() < size_t(vertex_count); ++i) {
    const auto tokens = SplitWhitespace(lines[i]);
    if (tokens.size() != properties.size()) {
      throw fail(i + 1, "expected " + std::to_string(properties.size()) +
                            " values, found " + std::to_string(tokens.size()));
    }
    Point3 p;
    for (int k = 0; k < 3; ++k) {
      double value;
      if (!ParseDouble(tokens[index[k]], &value) || !std::isfinite(value)) {
        throw fail(i + 1, "invalid coordinate '" +
                              std::string(tokens[index[k]]) + "'");
      }
      p[k] = value;
    }
    points.push_back(p);
  }
  if (points.size() != size_t(vertex_count)) {
    throw fail(i, "file ends after " + std::to_string(points.size()) + " of " +
                      std::to_string(vertex_count) + " vertices");
  }
  for (; i < lines.size(); ++i) {
    if (!SplitWhitespace(lines[i]).empty()) {
      throw fail(i + 1, "trailing data after vertex list");
    }
  }
  return PointCloud(std::move(points));
}

void SavePly(const PointCloud& cloud, const std::filesystem::path& path) {
  std::string text =
      "ply\nformat ascii 1.0\nelement vertex " + std::to_string(cloud.size()) +
      "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
  for (const Point3& p : cloud) {
    text += FormatDouble(p.x()) + " " + FormatDouble(p.y()) + " " +
            FormatDouble(p.z()) + "\n";
  }
  WriteFile(path, text);
}

PointCloud LoadCloud(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".ply") return LoadPly(path);
  if (ext == ".xyz") return LoadXyz(path);
  throw ParseError(path.string() + ": unknown point cloud extension '" + ext +
                   "' (expected .xyz or .ply)");
}

void SaveCloud(const PointCloud& cloud, const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".ply") return SavePly(cloud, path);
  if (ext == ".xyz") return SaveXyz(cloud, path);
  throw IoError(path.string() + ": unknown point cloud extension '" + ext +
                "' (expected .xyz or .ply)");
}

DepthMap LoadDepth(const std::filesystem::path& path) {
  int width, height;
  std::vector<double> values = LoadGrid(path, "DEPTH", &width, &height);
  for (double d : values) {
    if (d < 0.0) throw ParseError(path.string() + ": negative depth value");
  }
  return DepthMap(width, height, std::move(values));
}

void SaveDepth(const DepthMap& depth, const std::filesystem::path& path) {
  SaveGrid(path, "DEPTH", depth.width(), depth.height(), depth.values());
}

GrayImage LoadImage(const std::filesystem::path& path) {
  int width, height;
  std::vector<double> values = LoadGrid(path, "IMG", &width, &height);
  return GrayImage(width, height, std::move(values));
}

void SaveImage(const GrayImage& image, const std::filesystem::path& path) {
  SaveGrid(path, "IMG", image.width, image.height, image.values);
}

}  // namespace ptot
