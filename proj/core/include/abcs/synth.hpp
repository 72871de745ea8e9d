#pragma once

#include <string>
#include <vector>

#include "abcs/image.hpp"

namespace abcs {

/// Catalog of seeded synthetic grayscale test scenes. Generation is fully
/// deterministic for a given (name, size), and output values are 8-bit
/// integers, as if the image had been loaded from a PGM file.
std::vector<std::string> test_image_names();

PixelImage make_test_image(const std::string& name, int size);

}  // namespace abcs
