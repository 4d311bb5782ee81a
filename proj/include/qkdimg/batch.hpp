#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qkdimg/chaos.hpp"
#include "qkdimg/metrics.hpp"
#include "qkdimg/qkd.hpp"

namespace qkdimg {

struct BatchConfig {
  ChaosParams params;
  ChannelConfig channel;
  std::uint64_t seed = 0;
  std::size_t key_bits = 256;
  /// Worker threads. Rows are seeded per image, so results do not depend on it.
  unsigned jobs = 1;
};

struct BatchRow {
  std::string path;
  std::size_t width = 0;
  std::size_t height = 0;
  MetricsReport metrics;
  SessionStats session;
  std::size_t flip_index = 0;
  double encrypt_seconds = 0.0;
  double decrypt_seconds = 0.0;
};

struct BatchSummary {
  std::size_t image_count = 0;
  std::size_t eavesdrop_detected_count = 0;
  double psnr_min = 0.0;
  double ssim_mean = 0.0;
  double ncc_mean = 0.0;
  double ber_mean = 0.0;
  double key_sensitivity_mean = 0.0;
  double entropy_original_mean = 0.0;
  double entropy_encrypted_mean = 0.0;
  double entropy_decrypted_mean = 0.0;
  double pearson_od_mean = 0.0;
  double encrypt_seconds_total = 0.0;
  double decrypt_seconds_total = 0.0;
};

struct BatchReport {
  std::vector<BatchRow> rows;
  BatchSummary summary;
  std::vector<std::string> warnings;
};

/// Per-image pipeline: E91 session -> key -> encrypt -> decrypt -> metrics.
/// Throws DatasetError when no image could be processed.
BatchReport batch_report(const std::filesystem::path& dataset_dir, const BatchConfig& config);

/// Structured form. With include_timings = false the timing columns are
/// null, which makes the document byte-reproducible for a fixed seed.
std::string batch_report_to_text(const BatchReport& report, bool include_timings);

/// Human-readable table, one line per image plus a summary line.
std::string batch_report_table(const BatchReport& report);

/// Independent per-image seed derived from the run seed.
std::uint64_t derive_item_seed(std::uint64_t run_seed, std::uint64_t index);

}  // namespace qkdimg
