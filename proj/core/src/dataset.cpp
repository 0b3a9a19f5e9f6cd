#include "gwin/dataset.hpp"

#include <fstream>
#include <random>
#include <vector>

namespace gwin {
namespace {

uint32_t read_be32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw MalformedIdx("truncated IDX header");
  return (uint32_t(b[0]) << 24) | (uint32_t(b[1]) << 16) |
         (uint32_t(b[2]) << 8) | uint32_t(b[3]);
}

void write_be32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<char*>(b), 4);
}

torch::Tensor read_image_payload(const std::filesystem::path& images_path) {
  std::ifstream img_in(images_path, std::ios::binary);
  if (!img_in) throw MalformedIdx("cannot open " + images_path.string());
  if (read_be32(img_in) != kIdxImageMagic)
    throw MalformedIdx("bad image magic in " + images_path.string());
  const int64_t n = read_be32(img_in);
  const int64_t rows = read_be32(img_in);
  const int64_t cols = read_be32(img_in);
  if (rows <= 0 || cols <= 0)
    throw MalformedIdx("bad image dimensions in " + images_path.string());
  std::vector<unsigned char> pixels(static_cast<size_t>(n) * rows * cols);
  img_in.read(reinterpret_cast<char*>(pixels.data()),
              static_cast<std::streamsize>(pixels.size()));
  if (static_cast<size_t>(img_in.gcount()) != pixels.size())
    throw MalformedIdx("truncated image payload in " + images_path.string());

  auto images = torch::empty({n, 1, rows, cols}, torch::kFloat32);
  float* dst = images.data_ptr<float>();
  for (size_t i = 0; i < pixels.size(); ++i) dst[i] = float(pixels[i]);
  return images;
}

}  // namespace

LabeledImageSet load_idx(const std::filesystem::path& images_path,
                         const std::filesystem::path& labels_path,
                         const std::string& name) {
  auto images = read_image_payload(images_path);
  const int64_t n = images.size(0);

  std::ifstream lbl_in(labels_path, std::ios::binary);
  if (!lbl_in) throw MalformedIdx("cannot open " + labels_path.string());
  if (read_be32(lbl_in) != kIdxLabelMagic)
    throw MalformedIdx("bad label magic in " + labels_path.string());
  const int64_t n_labels = read_be32(lbl_in);
  if (n_labels != n)
    throw CountMismatch("image count " + std::to_string(n) +
                        " != label count " + std::to_string(n_labels));
  std::vector<unsigned char> raw_labels(static_cast<size_t>(n_labels));
  lbl_in.read(reinterpret_cast<char*>(raw_labels.data()),
              static_cast<std::streamsize>(raw_labels.size()));
  if (static_cast<size_t>(lbl_in.gcount()) != raw_labels.size())
    throw MalformedIdx("truncated label payload in " + labels_path.string());

  auto labels = torch::empty({n}, torch::kInt64);
  int64_t* ldst = labels.data_ptr<int64_t>();
  for (int64_t i = 0; i < n; ++i) ldst[i] = int64_t(raw_labels[i]);

  return {std::move(images), std::move(labels),
          name.empty() ? images_path.stem().string() : name};
}

LabeledImageSet load_idx_images(const std::filesystem::path& images_path,
                                const std::string& name) {
  auto images = read_image_payload(images_path);
  auto labels = torch::zeros({images.size(0)}, torch::kInt64);
  return {std::move(images), std::move(labels),
          name.empty() ? images_path.stem().string() : name};
}

void save_idx(const LabeledImageSet& set,
              const std::filesystem::path& images_path,
              const std::filesystem::path& labels_path) {
  auto imgs = set.images.contiguous();
  const bool normalized = imgs.max().item<float>() <= 1.0f;
  if (normalized) imgs = (imgs * 255.0f).round();

  const int64_t n = imgs.size(0), rows = imgs.size(2), cols = imgs.size(3);
  std::ofstream img_out(images_path, std::ios::binary);
  write_be32(img_out, kIdxImageMagic);
  write_be32(img_out, uint32_t(n));
  write_be32(img_out, uint32_t(rows));
  write_be32(img_out, uint32_t(cols));
  const float* src = imgs.data_ptr<float>();
  std::vector<unsigned char> bytes(static_cast<size_t>(n) * rows * cols);
  for (size_t i = 0; i < bytes.size(); ++i)
    bytes[i] = static_cast<unsigned char>(src[i]);
  img_out.write(reinterpret_cast<char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));

  std::ofstream lbl_out(labels_path, std::ios::binary);
  write_be32(lbl_out, kIdxLabelMagic);
  write_be32(lbl_out, uint32_t(n));
  auto labels = set.labels.contiguous();
  const int64_t* lsrc = labels.data_ptr<int64_t>();
  std::vector<unsigned char> lbytes(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i)
    lbytes[i] = static_cast<unsigned char>(lsrc[i]);
  lbl_out.write(reinterpret_cast<char*>(lbytes.data()),
                static_cast<std::streamsize>(lbytes.size()));
}

LabeledImageSet normalize(const LabeledImageSet& raw) {
  if (raw.images.max().item<float>() <= 1.0f)
    throw AlreadyNormalized("pixel max <= 1: set looks already normalized");
  return {raw.images / 255.0f, raw.labels.clone(), raw.name};
}

DatasetSplit split_train_val(const LabeledImageSet& full, uint64_t seed) {
  if (full.size() != 60000)
    throw WrongSize("expected 60,000 examples, got " +
                    std::to_string(full.size()));
  std::vector<int64_t> idx(60000);
  for (int64_t i = 0; i < 60000; ++i) idx[i] = i;
  // Own Fisher-Yates so the split is identical across standard libraries.
  std::mt19937_64 rng(seed);
  for (int64_t i = 59999; i > 0; --i) {
    const auto j = static_cast<int64_t>(rng() % uint64_t(i + 1));
    std::swap(idx[i], idx[j]);
  }
  auto all = torch::from_blob(idx.data(), {60000}, torch::kInt64).clone();
  DatasetSplit out;
  out.train = take(full, all.slice(0, 0, 50000));
  out.train.name = full.name + "/train";
  out.validation = take(full, all.slice(0, 50000, 60000));
  out.validation.name = full.name + "/val";
  out.split_seed = seed;
  return out;
}

LabeledImageSet take(const LabeledImageSet& set, const torch::Tensor& indices) {
  return {set.images.index_select(0, indices).contiguous(),
          set.labels.index_select(0, indices).contiguous(), set.name};
}

}  // namespace gwin
