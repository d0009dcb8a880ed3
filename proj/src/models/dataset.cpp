#include "signquest/models/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "signquest/util/rng.hpp"

namespace signquest {

Dataset Dataset::slice(std::size_t first, std::size_t count) const {
  if (first + count > size()) throw std::out_of_range("dataset slice out of range");
  Dataset out{dim, num_classes, {}, {}, range};
  out.features.assign(features.begin() + static_cast<std::ptrdiff_t>(first * dim),
                      features.begin() + static_cast<std::ptrdiff_t>((first + count) * dim));
  out.labels.assign(labels.begin() + static_cast<std::ptrdiff_t>(first),
                    labels.begin() + static_cast<std::ptrdiff_t>(first + count));
  return out;
}

Dataset make_blobs(const BlobConfig& config) {
  if (config.samples == 0 || config.dim == 0 || config.classes < 2) {
    throw std::invalid_argument("blobs need samples > 0, dim > 0 and at least two classes");
  }
  Rng rng(config.seed);
  std::uniform_real_distribution<double> centre_dist(0.25, 0.75);
  std::normal_distribution<double> noise(0.0, config.spread);

  std::vector<double> centres(config.classes * config.dim);
  for (double& c : centres) c = centre_dist(rng);

  Dataset data{config.dim, config.classes, {}, {}, InputRange{0.0, 1.0}};
  data.features.resize(config.samples * config.dim);
  data.labels.resize(config.samples);
  for (std::size_t i = 0; i < config.samples; ++i) {
    const auto label = static_cast<int>(i % config.classes);
    data.labels[i] = label;
    for (std::size_t d = 0; d < config.dim; ++d) {
      const double v = centres[static_cast<std::size_t>(label) * config.dim + d] + noise(rng);
      data.features[i * config.dim + d] = std::clamp(v, 0.0, 1.0);
    }
  }
  return data;
}

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IdxError("cannot open IDX file: " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& buf, std::size_t offset,
                        const std::filesystem::path& path) {
  if (offset + 4 > buf.size()) throw IdxError("truncated IDX header: " + path.string());
  return (std::uint32_t{buf[offset]} << 24) | (std::uint32_t{buf[offset + 1]} << 16) |
         (std::uint32_t{buf[offset + 2]} << 8) | std::uint32_t{buf[offset + 3]};
}

void put_be32(std::ofstream& out, std::uint32_t v) {
  const std::array<char, 4> bytes{static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                                  static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(bytes.data(), bytes.size());
}

}  // namespace

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                 std::size_t limit) {
  const auto img = read_all(images);
  const auto lab = read_all(labels);

  if (read_be32(img, 0, images) != kImageMagic) throw IdxError("bad image magic: " + images.string());
  if (read_be32(lab, 0, labels) != kLabelMagic) throw IdxError("bad label magic: " + labels.string());

  const std::size_t count = read_be32(img, 4, images);
  const std::size_t rows = read_be32(img, 8, images);
  const std::size_t cols = read_be32(img, 12, images);
  const std::size_t label_count = read_be32(lab, 4, labels);
  if (count != label_count) {
    throw IdxError("image/label count mismatch: " + std::to_string(count) + " vs " +
                   std::to_string(label_count));
  }
  const std::size_t dim = rows * cols;
  if (img.size() < 16 + count * dim) throw IdxError("truncated image data: " + images.string());
  if (lab.size() < 8 + count) throw IdxError("truncated label data: " + labels.string());

  const std::size_t n = limit == 0 ? count : std::min(limit, count);
  Dataset data{dim, 0, {}, {}, InputRange{0.0, 1.0}};
  data.features.resize(n * dim);
  data.labels.resize(n);
  int max_label = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d) data.features[i * dim + d] = img[16 + i * dim + d] / 255.0;
    data.labels[i] = lab[8 + i];
    max_label = std::max(max_label, data.labels[i]);
  }
  data.num_classes = static_cast<std::size_t>(max_label) + 1;
  return data;
}

void write_idx(const Dataset& data, std::size_t rows, std::size_t cols,
               const std::filesystem::path& images, const std::filesystem::path& labels) {
  if (rows * cols != data.dim) throw std::invalid_argument("rows * cols must equal dataset dim");
  std::ofstream img(images, std::ios::binary);
  std::ofstream lab(labels, std::ios::binary);
  if (!img || !lab) throw IdxError("cannot create IDX files");
  put_be32(img, kImageMagic);
  put_be32(img, static_cast<std::uint32_t>(data.size()));
  put_be32(img, static_cast<std::uint32_t>(rows));
  put_be32(img, static_cast<std::uint32_t>(cols));
  for (double v : data.features) {
    img.put(static_cast<char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
  }
  put_be32(lab, kLabelMagic);
  put_be32(lab, static_cast<std::uint32_t>(data.size()));
  for (int l : data.labels) lab.put(static_cast<char>(l));
}

}  // namespace signquest
