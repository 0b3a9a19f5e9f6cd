#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "gwin/gwin.hpp"

using namespace gwin;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  auto dir = fs::temp_directory_path() / "gwin_dataset_test";
  fs::create_directories(dir);
  return dir;
}

// Hand-written 2-image IDX pair with known bytes; the test owns the
// byte layout so load_idx is checked against an independent oracle.
void write_tiny_idx(const fs::path& img, const fs::path& lbl) {
  const unsigned char img_bytes[] = {
      0x00, 0x00, 0x08, 0x03,  // magic
      0x00, 0x00, 0x00, 0x02,  // n=2
      0x00, 0x00, 0x00, 0x02,  // rows=2
      0x00, 0x00, 0x00, 0x02,  // cols=2
      0,    255,  128,  7,     // image 0
      42,   1,    0,    200,   // image 1
  };
  const unsigned char lbl_bytes[] = {
      0x00, 0x00, 0x08, 0x01, 0x00, 0x00, 0x00, 0x02, 3, 9,
  };
  std::ofstream(img, std::ios::binary)
      .write(reinterpret_cast<const char*>(img_bytes), sizeof(img_bytes));
  std::ofstream(lbl, std::ios::binary)
      .write(reinterpret_cast<const char*>(lbl_bytes), sizeof(lbl_bytes));
}

LabeledImageSet random_raw_set(int64_t n, uint64_t seed) {
  torch::manual_seed(seed);
  auto images = torch::randint(0, 256, {n, 1, 28, 28}).to(torch::kFloat32);
  auto labels = torch::randint(0, 10, {n}).to(torch::kInt64);
  return {images, labels, "random"};
}

}  // namespace

TEST_CASE("load_idx recovers hand-crafted bytes exactly") {
  auto dir = tmp_dir();
  write_tiny_idx(dir / "tiny-images", dir / "tiny-labels");
  auto set = load_idx(dir / "tiny-images", dir / "tiny-labels");
  REQUIRE(set.size() == 2);
  CHECK(set.images.sizes() == torch::IntArrayRef({2, 1, 2, 2}));
  auto a = set.images.accessor<float, 4>();
  CHECK(a[0][0][0][0] == 0.0f);
  CHECK(a[0][0][0][1] == 255.0f);
  CHECK(a[0][0][1][0] == 128.0f);
  CHECK(a[0][0][1][1] == 7.0f);
  CHECK(a[1][0][0][0] == 42.0f);
  CHECK(set.labels[0].item<int64_t>() == 3);
  CHECK(set.labels[1].item<int64_t>() == 9);
}

TEST_CASE("load_idx rejects malformed files") {
  auto dir = tmp_dir();
  SUBCASE("wrong magic") {
    const unsigned char bad[] = {0, 0, 0, 0, 0, 0, 0, 1};
    std::ofstream(dir / "bad", std::ios::binary)
        .write(reinterpret_cast<const char*>(bad), sizeof(bad));
    write_tiny_idx(dir / "ok-img", dir / "ok-lbl");
    CHECK_THROWS_AS(load_idx(dir / "bad", dir / "ok-lbl"), MalformedIdx);
  }
  SUBCASE("truncated payload") {
    write_tiny_idx(dir / "img", dir / "lbl");
    fs::resize_file(dir / "img", 18);  // chop the pixel payload
    CHECK_THROWS_AS(load_idx(dir / "img", dir / "lbl"), MalformedIdx);
  }
  SUBCASE("count mismatch") {
    write_tiny_idx(dir / "img", dir / "lbl");
    const unsigned char one_label[] = {0x00, 0x00, 0x08, 0x01,
                                       0x00, 0x00, 0x00, 0x01, 5};
    std::ofstream(dir / "lbl1", std::ios::binary)
        .write(reinterpret_cast<const char*>(one_label), sizeof(one_label));
    CHECK_THROWS_AS(load_idx(dir / "img", dir / "lbl1"), CountMismatch);
  }
}

TEST_CASE("IDX round trip is bit exact") {
  auto dir = tmp_dir();
  auto raw = random_raw_set(64, 11);
  save_idx(raw, dir / "rt-img", dir / "rt-lbl");
  auto back = load_idx(dir / "rt-img", dir / "rt-lbl");
  CHECK(back.images.equal(raw.images));
  CHECK(back.labels.equal(raw.labels));

  // Normalized sets round trip too: pixels sit on the 8-bit grid.
  auto norm = normalize(raw);
  save_idx(norm, dir / "rt2-img", dir / "rt2-lbl");
  auto back2 = load_idx(dir / "rt2-img", dir / "rt2-lbl");
  CHECK(back2.images.equal(raw.images));
}

TEST_CASE("normalize") {
  auto raw = random_raw_set(8, 3);
  raw.images[0][0][0][0] = 0.0f;
  raw.images[0][0][0][1] = 255.0f;
  raw.images[0][0][0][2] = 128.0f;
  auto norm = normalize(raw);
  auto a = norm.images.accessor<float, 4>();
  CHECK(a[0][0][0][0] == 0.0f);
  CHECK(a[0][0][0][1] == 1.0f);
  CHECK(a[0][0][0][2] == doctest::Approx(128.0 / 255.0).epsilon(1e-6));
  CHECK(norm.images.min().item<float>() >= 0.0f);
  CHECK(norm.images.max().item<float>() <= 1.0f);

  CHECK_THROWS_AS(normalize(norm), AlreadyNormalized);
}

TEST_CASE("split_train_val partitions deterministically") {
  auto full = random_raw_set(60000, 5);
  auto s1 = split_train_val(full, 7);
  auto s2 = split_train_val(full, 7);
  CHECK(s1.train.size() == 50000);
  CHECK(s1.validation.size() == 10000);
  CHECK(s1.train.images.equal(s2.train.images));
  CHECK(s1.validation.labels.equal(s2.validation.labels));

  // Exact partition: recover each example's identity from two id pixels.
  for (int64_t i = 0; i < 60000; ++i) {
    full.images[i][0][0][0] = float(i / 256);
    full.images[i][0][0][1] = float(i % 256);
  }
  auto s1b = split_train_val(full, 7);
  std::vector<bool> seen(60000, false);
  auto collect = [&seen](const LabeledImageSet& part) {
    auto a = part.images.accessor<float, 4>();
    for (int64_t i = 0; i < part.size(); ++i) {
      const int64_t id = int64_t(a[i][0][0][0]) * 256 + int64_t(a[i][0][0][1]);
      REQUIRE(!seen[id]);
      seen[id] = true;
    }
  };
  collect(s1b.train);
  collect(s1b.validation);
  CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));

  auto s3 = split_train_val(full, 8);
  CHECK_FALSE(s3.train.labels.equal(s1.train.labels));

  auto short_set = random_raw_set(59999, 5);
  CHECK_THROWS_AS(split_train_val(short_set, 1), WrongSize);
}
