#pragma once

#include <filesystem>

#include "abcs/sensing.hpp"

namespace abcs {

/// Measurement container file, all fields little-endian:
///   magic "ABCS" | version u16 | H u32 | W u32 | B u16 | algorithm u8 |
///   C_R numerator u32 | C_R denominator u32 | threshold f64 | n_B u32 |
///   per-block counts u16[n_B] | coefficients f32[sum counts] |
///   side count u32 | side data f32[side count]
///
/// Coefficients are stored block by block in zigzag order. Write/read round
/// trips are bit-exact.
void write_measurement_set(const MeasurementSet& ms, const std::filesystem::path& path);
MeasurementSet read_measurement_set(const std::filesystem::path& path);

}  // namespace abcs
