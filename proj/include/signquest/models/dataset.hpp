#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "signquest/models/toy_model.hpp"

namespace signquest {

/// Dense labelled feature matrix (row-major).
struct Dataset {
  std::size_t dim = 0;
  std::size_t num_classes = 0;
  std::vector<double> features;
  std::vector<int> labels;
  InputRange range{};

  std::size_t size() const noexcept { return labels.size(); }
  bool empty() const noexcept { return labels.empty(); }
  std::span<const double> row(std::size_t i) const { return {features.data() + i * dim, dim}; }

  /// Rows [first, first + count) as a new dataset.
  Dataset slice(std::size_t first, std::size_t count) const;
};

struct BlobConfig {
  std::size_t samples = 600;
  std::size_t dim = 16;
  std::size_t classes = 3;
  double spread = 0.1;
  std::uint64_t seed = 1;
};

/// Seeded Gaussian clusters in [0, 1]^dim, classes interleaved so every
/// prefix is close to balanced.
Dataset make_blobs(const BlobConfig& config);

class IdxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads an IDX image file (magic 0x00000803) and label file (0x00000801).
/// Pixels are scaled to [0, 1]. `limit` caps the number of records (0 = all).
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                 std::size_t limit = 0);

/// Writes the IDX pair for a dataset whose features lie in [0, 1]; pixels are
/// quantised to bytes. Used to build fixtures.
void write_idx(const Dataset& data, std::size_t rows, std::size_t cols,
               const std::filesystem::path& images, const std::filesystem::path& labels);

}  // namespace signquest
