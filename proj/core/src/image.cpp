#include "abcs/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>

namespace abcs {

namespace {

// Reads one PGM header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) continue;
    tok.push_back(static_cast<char>(c));
    while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#') {
      tok.push_back(static_cast<char>(in.get()));
    }
    return tok;
  }
  return tok;
}

int parse_dim(const std::string& tok, const char* what) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(),
                                  [](unsigned char ch) { return std::isdigit(ch); })) {
    throw FormatError(std::string("PGM header: bad ") + what);
  }
  long v = std::strtol(tok.c_str(), nullptr, 10);
  if (v <= 0 || v > (1 << 20)) {
    throw FormatError(std::string("PGM header: ") + what + " out of range");
  }
  return static_cast<int>(v);
}

}  // namespace

PixelImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open image file: " + path.string());

  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (m0 == char(0x89) && m1 == 'P') {
    throw FormatError("PNG input is not supported, convert to binary PGM (P5): " +
                      path.string());
  }
  if (m0 != 'P' || m1 != '5') {
    if (m0 == 'P' && (m1 == '2' || m1 == '6')) {
      throw FormatError("unsupported PNM variant P" + std::string(1, m1) +
                        ", need binary grayscale P5: " + path.string());
    }
    throw FormatError("not a binary PGM (P5) file: " + path.string());
  }

  int width = parse_dim(next_token(in), "width");
  int height = parse_dim(next_token(in), "height");
  int maxval = parse_dim(next_token(in), "maxval");
  if (maxval != 255) {
    throw FormatError("unsupported PGM bit depth (maxval " + std::to_string(maxval) +
                      ", need 255): " + path.string());
  }
  // Exactly one whitespace byte separates the header from the payload.
  int sep = in.get();
  if (sep == EOF || !std::isspace(sep)) {
    throw FormatError("PGM header not terminated: " + path.string());
  }

  PixelImage img(height, width);
  std::vector<uint8_t> raw(img.size());
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<size_t>(in.gcount()) != raw.size()) {
    throw FormatError("truncated PGM payload: " + path.string());
  }
  std::copy(raw.begin(), raw.end(), img.data.begin());
  return img;
}

void save_pgm(const PixelImage& img, const std::filesystem::path& path) {
  if (img.height <= 0 || img.width <= 0 || img.data.size() != img.size()) {
    throw std::invalid_argument("save_pgm: malformed image");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot create image file: " + path.string());
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<uint8_t> raw(img.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    double v = std::lround(img.data[i]);
    raw[i] = static_cast<uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw FormatError("write failed: " + path.string());
}

BlockGrid make_grid(int height, int width, int block) {
  if (block < 2) throw std::invalid_argument("block size must be >= 2");
  if (block > height || block > width) {
    throw std::invalid_argument("block size exceeds image dimensions");
  }
  BlockGrid grid;
  grid.block = block;
  grid.rows = height / block;
  grid.cols = width / block;
  return grid;
}

std::pair<BlockGrid, std::vector<std::vector<double>>> partition(const PixelImage& img,
                                                                 int block) {
  BlockGrid grid = make_grid(img.height, img.width, block);
  std::vector<std::vector<double>> blocks;
  blocks.reserve(grid.count());
  for (int br = 0; br < grid.rows; ++br) {
    for (int bc = 0; bc < grid.cols; ++bc) {
      std::vector<double> blk(static_cast<size_t>(block) * block);
      for (int r = 0; r < block; ++r) {
        const double* src = &img.data[static_cast<size_t>(br * block + r) * img.width +
                                      static_cast<size_t>(bc) * block];
        std::copy(src, src + block, blk.begin() + static_cast<size_t>(r) * block);
      }
      blocks.push_back(std::move(blk));
    }
  }
  return {grid, std::move(blocks)};
}

PixelImage reassemble(const BlockGrid& grid, const std::vector<std::vector<double>>& blocks) {
  if (static_cast<int>(blocks.size()) != grid.count()) {
    throw std::invalid_argument("reassemble: block count mismatch, expected " +
                                std::to_string(grid.count()) + " got " +
                                std::to_string(blocks.size()));
  }
  const int B = grid.block;
  PixelImage img(grid.cropped_height(), grid.cropped_width());
  for (int br = 0; br < grid.rows; ++br) {
    for (int bc = 0; bc < grid.cols; ++bc) {
      const auto& blk = blocks[static_cast<size_t>(br) * grid.cols + bc];
      if (blk.size() != static_cast<size_t>(B) * B) {
        throw std::invalid_argument("reassemble: block has wrong size");
      }
      for (int r = 0; r < B; ++r) {
        std::copy(blk.begin() + static_cast<size_t>(r) * B,
                  blk.begin() + static_cast<size_t>(r + 1) * B,
                  &img.data[static_cast<size_t>(br * B + r) * img.width +
                            static_cast<size_t>(bc) * B]);
      }
    }
  }
  return img;
}

PixelImage crop_to_grid(const PixelImage& img, const BlockGrid& grid) {
  PixelImage out(grid.cropped_height(), grid.cropped_width());
  for (int r = 0; r < out.height; ++r) {
    const double* src = &img.data[static_cast<size_t>(r) * img.width];
    std::copy(src, src + out.width, &out.data[static_cast<size_t>(r) * out.width]);
  }
  return out;
}

}  // namespace abcs
