#include "xplain/core/image.hpp"

#include <algorithm>
#include <charconv>

#include "xplain/core/error.hpp"

namespace xplain {

SegmentMap segment_grid(int height, int width, int rows, int cols) {
  require(height >= 1 && width >= 1, ErrorCode::invalid_argument,
          "image dimensions must be positive");
  require(rows >= 1 && rows <= height, ErrorCode::invalid_argument,
          "grid rows must be in [1, height], got " + std::to_string(rows));
  require(cols >= 1 && cols <= width, ErrorCode::invalid_argument,
          "grid cols must be in [1, width], got " + std::to_string(cols));

  const int cell_h = height / rows;
  const int cell_w = width / cols;
  SegmentMap map;
  map.rows = rows;
  map.cols = cols;
  map.height = height;
  map.width = width;
  map.assignment.resize(static_cast<std::size_t>(height) * width);
  for (int r = 0; r < height; ++r) {
    const int cell_row = std::min(r / cell_h, rows - 1);
    for (int c = 0; c < width; ++c) {
      const int cell_col = std::min(c / cell_w, cols - 1);
      map.assignment[static_cast<std::size_t>(r) * width + c] = cell_row * cols + cell_col;
    }
  }
  return map;
}

SegmentMap segment_grid(const ImageSample& image, int rows, int cols) {
  return segment_grid(image.height(), image.width(), rows, cols);
}

std::string segment_unit_id(int segment) { return "seg" + std::to_string(segment); }

int parse_segment_unit_id(const std::string& unit) {
  int value = -1;
  if (unit.size() > 3 && unit.compare(0, 3, "seg") == 0) {
    auto [ptr, ec] = std::from_chars(unit.data() + 3, unit.data() + unit.size(), value);
    if (ec == std::errc() && ptr == unit.data() + unit.size() && value >= 0) return value;
  }
  fail(ErrorCode::invalid_argument, "not a segment unit id: '" + unit + "'");
}

}  // namespace xplain
