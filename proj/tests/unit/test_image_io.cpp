#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "generators.hpp"
#include "qkdimg/errors.hpp"
#include "qkdimg/image_io.hpp"

namespace qkdimg {
namespace {

namespace fs = std::filesystem;

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qkdimg_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write(const fs::path& rel, const std::vector<std::uint8_t>& data) {
    fs::create_directories((dir_ / rel).parent_path());
    std::ofstream f(dir_ / rel, std::ios::binary);
    f.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  }

  fs::path dir_;
};

TEST(ReadPgm, DecodesMinimalFile) {
  const auto img = read_pgm(bytes_of(std::string("P5\n2 2\n255\n") + "\x01\x02\x03\x04"));
  EXPECT_EQ(img.width(), 2u);
  EXPECT_EQ(img.height(), 2u);
  EXPECT_EQ(img.at(0, 0), 1);
  EXPECT_EQ(img.at(1, 0), 2);
  EXPECT_EQ(img.at(0, 1), 3);
  EXPECT_EQ(img.at(1, 1), 4);
}

TEST(ReadPgm, CommentsAndWhitespaceInHeader) {
  const auto img = read_pgm(bytes_of(std::string("P5 # made by hand\n 3\t1 # w h\n200\n") + "abc"));
  EXPECT_EQ(img.width(), 3u);
  EXPECT_EQ(img.at(2, 0), 'c');
  // Exactly one whitespace byte follows maxval; a CR there leaves LF as data.
  const auto crlf = read_pgm(bytes_of("P5\n1 1\n255\r\n"));
  EXPECT_EQ(crlf.at(0, 0), '\n');
}

TEST(ReadPgm, ErrorsCarryOffsets) {
  auto expect_format = [](const std::string& s) {
    try {
      read_pgm(bytes_of(s));
      ADD_FAILURE() << "accepted: " << s;
    } catch (const FormatError& e) {
      EXPECT_LE(e.offset(), s.size());
      EXPECT_NE(std::string(e.what()).find("at byte"), std::string::npos);
    }
  };
  expect_format("P6\n1 1\n255\nabc");
  expect_format("P5\n2 2\n256\n");
  expect_format("P5\n2 2\n255\n\x01\x02");
  expect_format("P5\n70000 1\n255\n");
  expect_format("P5\n0 4\n255\n");
  expect_format("P5\n");
  expect_format("P5\n1 1\n15\n\x20");  // pixel above maxval
}

TEST(WritePgm, CanonicalHeader) {
  // "P5\n1 1\n255\n" is 11 bytes; with the single pixel the file is 12.
  const auto bytes = write_pgm(GrayImage(1, 1, 0));
  ASSERT_EQ(bytes.size(), 12u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 11), "P5\n1 1\n255\n");
  EXPECT_EQ(bytes.back(), 0);
}

TEST(WritePgm, RoundTripsAndIsDeterministic) {
  std::mt19937_64 gen(301);
  for (int trial = 0; trial < 50; ++trial) {
    const GrayImage img = testing::random_shaped_image(gen, 200);
    const auto bytes = write_pgm(img);
    EXPECT_EQ(read_pgm(bytes), img);
    EXPECT_EQ(write_pgm(read_pgm(bytes)), bytes);
    EXPECT_EQ(write_pgm(img), bytes);
  }
}

TEST(Ingest, LumaConversion) {
  Raster r;
  r.width = 3;
  r.height = 1;
  r.channels = 3;
  r.samples = {255, 255, 255, 0, 0, 0, 255, 0, 0};
  const GrayImage g = ingest_to_gray(r);
  EXPECT_EQ(g.at(0, 0), 255);
  EXPECT_EQ(g.at(1, 0), 0);
  EXPECT_EQ(g.at(2, 0), 76);
}

TEST(Ingest, RoundHalfUpAgainstOracle) {
  for (int rr = 0; rr < 256; rr += 5) {
    for (int gg = 0; gg < 256; gg += 7) {
      for (int bb = 0; bb < 256; bb += 11) {
        Raster r;
        r.width = 1;
        r.height = 1;
        r.channels = 3;
        r.samples = {static_cast<std::uint8_t>(rr), static_cast<std::uint8_t>(gg), static_cast<std::uint8_t>(bb)};
        // Exact rational: Y * 1000 = 299 R + 587 G + 114 B, halves rounded up.
        const int y1000 = 299 * rr + 587 * gg + 114 * bb;
        const int expected = y1000 / 1000 + (y1000 % 1000 >= 500 ? 1 : 0);
        ASSERT_EQ(ingest_to_gray(r).at(0, 0), expected) << rr << "," << gg << "," << bb;
      }
    }
  }
}

TEST(Ingest, GrayPassesThroughAndDeepRastersAreRejected) {
  Raster r;
  r.width = 2;
  r.height = 1;
  r.samples = {9, 200};
  EXPECT_EQ(ingest_to_gray(r), GrayImage(2, 1, std::vector<std::uint8_t>{9, 200}));
  r.bit_depth = 16;
  r.samples = {0, 9, 0, 200};
  EXPECT_THROW(ingest_to_gray(r), FormatError);
}

TEST(ReadPnmRaster, DecodesP6) {
  auto bytes = bytes_of("P6\n1 1\n255\n");
  bytes.insert(bytes.end(), {0xff, 0x00, 0x00});
  const auto r = read_pnm_raster(bytes);
  EXPECT_EQ(r.channels, 3);
  EXPECT_EQ(ingest_to_gray(r).at(0, 0), 76);
}

TEST_F(TempDir, ScanDatasetSortsAndReportsCorruptFiles) {
  write("b.pgm", write_pgm(GrayImage(2, 3, 1)));
  write("a.pgm", write_pgm(GrayImage(4, 1, 1)));
  write("c.pgm", bytes_of("not an image"));
  write("notes.txt", bytes_of("ignored"));
  const DatasetScan scan = scan_dataset(dir_);
  ASSERT_EQ(scan.records.size(), 2u);
  EXPECT_EQ(scan.records[0].path.filename(), "a.pgm");
  EXPECT_EQ(scan.records[0].width, 4u);
  EXPECT_EQ(scan.records[1].path.filename(), "b.pgm");
  EXPECT_EQ(scan.records[1].height, 3u);
  EXPECT_EQ(scan.warnings.size(), 1u);
}

TEST_F(TempDir, ScanDatasetRecursesAndMarksConvertedFiles) {
  write("sub/x.ppm", bytes_of(std::string("P6\n1 1\n255\n") + "\x01\x02\x03"));
  write("y.PGM", write_pgm(GrayImage(1, 1, 5)));
  const DatasetScan scan = scan_dataset(dir_);
  ASSERT_EQ(scan.records.size(), 2u);
  EXPECT_EQ(scan.records[0].source_format, SourceFormat::converted);
  EXPECT_EQ(scan.records[1].source_format, SourceFormat::pgm);
}

TEST_F(TempDir, ScanDatasetEmptyAndMissing) {
  EXPECT_TRUE(scan_dataset(dir_).records.empty());
  EXPECT_THROW(scan_dataset(dir_ / "missing"), PathError);
}

TEST_F(TempDir, LoadGrayImage) {
  write("img.pgm", write_pgm(GrayImage(3, 2, 77)));
  const LoadedImage li = load_gray_image(dir_ / "img.pgm");
  EXPECT_EQ(li.image, GrayImage(3, 2, 77));
  EXPECT_EQ(li.source_format, SourceFormat::pgm);
  EXPECT_THROW(load_gray_image(dir_ / "absent.pgm"), IoError);
}

}  // namespace
}  // namespace qkdimg
