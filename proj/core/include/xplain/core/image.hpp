#pragma once

#include <string>

#include "xplain/core/types.hpp"

namespace xplain {

// Rectangular rows x cols partition. Cell edges sit at multiples of
// height/rows and width/cols; the last row/column of cells takes the
// remainder. Segment id = cell_row * cols + cell_col.
SegmentMap segment_grid(const ImageSample& image, int rows, int cols);
SegmentMap segment_grid(int height, int width, int rows, int cols);

std::string segment_unit_id(int segment);
int parse_segment_unit_id(const std::string& unit);

}  // namespace xplain
