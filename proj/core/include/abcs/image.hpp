#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace abcs {

/// Raised for malformed or unsupported image/container files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grayscale raster. Values are kept at full precision internally; they
/// are rounded and clamped to 8 bits only at the file boundary.
struct PixelImage {
  int height = 0;
  int width = 0;
  std::vector<double> data;  // row-major, height*width entries

  PixelImage() = default;
  PixelImage(int h, int w, double fill = 0.0)
      : height(h), width(w), data(static_cast<size_t>(h) * w, fill) {}

  double& at(int r, int c) { return data[static_cast<size_t>(r) * width + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * width + c]; }
  size_t size() const { return data.size(); }
};

/// Partitioning of an image into block_size x block_size tiles. Trailing
/// rows/columns that do not fill a whole tile are cropped away.
struct BlockGrid {
  int block = 0;
  int rows = 0;
  int cols = 0;

  int count() const { return rows * cols; }
  int cropped_height() const { return rows * block; }
  int cropped_width() const { return cols * block; }
  long long pixel_count() const {
    return static_cast<long long>(count()) * block * block;
  }
};

PixelImage load_pgm(const std::filesystem::path& path);
void save_pgm(const PixelImage& img, const std::filesystem::path& path);

BlockGrid make_grid(int height, int width, int block);

/// Splits the image into row-major block order; block (r,c) holds pixels
/// [rB, rB+B) x [cB, cB+B).
std::pair<BlockGrid, std::vector<std::vector<double>>> partition(
    const PixelImage& img, int block);

PixelImage reassemble(const BlockGrid& grid,
                      const std::vector<std::vector<double>>& blocks);

/// The image restricted to the grid's coverage (bottom/right trailing
/// pixels dropped).
PixelImage crop_to_grid(const PixelImage& img, const BlockGrid& grid);

}  // namespace abcs
