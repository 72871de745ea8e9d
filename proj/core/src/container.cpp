#include "abcs/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

namespace abcs {

namespace {

constexpr char kMagic[4] = {'A', 'B', 'C', 'S'};
constexpr uint16_t kVersion = 1;

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <typename T>
void put(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(std::begin(bytes), std::end(bytes));
  }
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

class Reader {
 public:
  Reader(const char* data, size_t size) : data_(data), size_(size) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > size_) throw FormatError("container truncated");
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, data_ + pos_, sizeof(T));
    pos_ += sizeof(T);
    if constexpr (std::endian::native == std::endian::big) {
      std::reverse(std::begin(bytes), std::end(bytes));
    }
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
  }

  bool exhausted() const { return pos_ == size_; }

 private:
  const char* data_;
  size_t size_;
  size_t pos_ = 0;
};

}  // namespace

void write_measurement_set(const MeasurementSet& ms, const std::filesystem::path& path) {
  if (ms.block < 2 || static_cast<long long>(ms.block) * ms.block > 65535) {
    throw std::invalid_argument("container: block size must fit u16 counts");
  }
  const BlockGrid grid = ms.grid();
  if (static_cast<int>(ms.counts.size()) != grid.count()) {
    throw std::invalid_argument("container: count table does not match grid");
  }
  if (ms.total_coeffs() != static_cast<long long>(ms.coeffs.size())) {
    throw std::invalid_argument("container: payload length does not match counts");
  }

  std::string out;
  out.reserve(64 + ms.coeffs.size() * 4 + ms.side.size() * 4);
  out.append(kMagic, 4);
  put<uint16_t>(out, kVersion);
  put<uint32_t>(out, static_cast<uint32_t>(ms.height));
  put<uint32_t>(out, static_cast<uint32_t>(ms.width));
  put<uint16_t>(out, static_cast<uint16_t>(ms.block));
  put<uint8_t>(out, static_cast<uint8_t>(ms.algorithm));
  put<uint32_t>(out, ms.cr_num);
  put<uint32_t>(out, ms.cr_den);
  put<double>(out, ms.threshold);
  put<uint32_t>(out, static_cast<uint32_t>(ms.counts.size()));
  for (uint16_t c : ms.counts) put<uint16_t>(out, c);
  for (double v : ms.coeffs) put<float>(out, static_cast<float>(v));
  put<uint32_t>(out, static_cast<uint32_t>(ms.side.size()));
  for (double v : ms.side) put<float>(out, static_cast<float>(v));

  std::ofstream file(path, std::ios::binary);
  if (!file) throw FormatError("cannot create container: " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw FormatError("write failed: " + path.string());
}

MeasurementSet read_measurement_set(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw FormatError("cannot open container: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  Reader in(bytes.data(), bytes.size());

  char magic[4];
  for (char& c : magic) c = static_cast<char>(in.get<uint8_t>());
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError("not an ABCS container: " + path.string());
  }
  const uint16_t version = in.get<uint16_t>();
  if (version != kVersion) {
    throw FormatError("unsupported container version " + std::to_string(version));
  }

  MeasurementSet ms;
  ms.height = static_cast<int>(in.get<uint32_t>());
  ms.width = static_cast<int>(in.get<uint32_t>());
  ms.block = in.get<uint16_t>();
  const uint8_t algo = in.get<uint8_t>();
  if (algo > 2) throw FormatError("container: unknown algorithm id");
  ms.algorithm = static_cast<Algorithm>(algo);
  ms.cr_num = in.get<uint32_t>();
  ms.cr_den = in.get<uint32_t>();
  ms.threshold = in.get<double>();

  if (ms.height <= 0 || ms.width <= 0 || ms.height > (1 << 20) || ms.width > (1 << 20) ||
      ms.block < 2 || ms.block > ms.height || ms.block > ms.width || ms.cr_num == 0 ||
      ms.cr_den == 0 || ms.cr_num > ms.cr_den) {
    throw FormatError("container: invalid header");
  }

  const uint32_t n_blocks = in.get<uint32_t>();
  const BlockGrid grid = ms.grid();
  if (n_blocks != static_cast<uint32_t>(grid.count())) {
    throw FormatError("container: block count does not match dimensions");
  }
  ms.counts.resize(n_blocks);
  long long total = 0;
  const long long block_area = static_cast<long long>(ms.block) * ms.block;
  for (uint32_t i = 0; i < n_blocks; ++i) {
    ms.counts[i] = in.get<uint16_t>();
    if (ms.counts[i] > block_area) throw FormatError("container: per-block count exceeds B^2");
    total += ms.counts[i];
  }
  ms.coeffs.resize(total);
  for (long long i = 0; i < total; ++i) ms.coeffs[i] = in.get<float>();
  const uint32_t side_count = in.get<uint32_t>();
  if (static_cast<size_t>(side_count) * 4 > bytes.size()) {
    throw FormatError("container: side data count exceeds file size");
  }
  ms.side.resize(side_count);
  for (uint32_t i = 0; i < side_count; ++i) ms.side[i] = in.get<float>();
  if (!in.exhausted()) throw FormatError("container: trailing bytes");
  return ms;
}

}  // namespace abcs
