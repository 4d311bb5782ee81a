#include "qkdimg/batch.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include "json.hpp"
#include "qkdimg/cipher.hpp"
#include "qkdimg/errors.hpp"
#include "qkdimg/image_io.hpp"

namespace qkdimg {

namespace fs = std::filesystem;

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

BatchRow process_image(const ImageFileRecord& record, const fs::path& root, std::size_t index,
                       const BatchConfig& config) {
  Rng rng(derive_item_seed(config.seed, index));
  const QkdSession session =
      run_e91_session(pairs_for_key_bits(config.key_bits, config.channel.test_fraction), config.channel, rng);
  const BitKey material = key_material(session);
  if (material.size() < config.key_bits) {
    throw SessionError("session yielded " + std::to_string(material.size()) + " key bits, need " +
                       std::to_string(config.key_bits));
  }
  const BitKey key = material.slice(0, config.key_bits);
  const GrayImage original = load_gray_image(record.path).image;

  BatchRow row;
  row.path = record.path.lexically_relative(root).generic_string();
  row.width = original.width();
  row.height = original.height();

  auto start = Clock::now();
  const GrayImage encrypted = encrypt_image(original, key, config.params);
  row.encrypt_seconds = seconds_since(start);
  start = Clock::now();
  const GrayImage decrypted = decrypt_image(encrypted, key, config.params);
  row.decrypt_seconds = seconds_since(start);

  row.flip_index = static_cast<std::size_t>(rng.uniform_index(config.key_bits));
  const double sensitivity = key_sensitivity(original, key, config.params, row.flip_index);
  row.metrics = build_report(original, encrypted, decrypted, session, sensitivity);
  row.session = summarize(session, config.channel);
  return row;
}

BatchSummary summarize_rows(const std::vector<BatchRow>& rows) {
  BatchSummary s;
  s.image_count = rows.size();
  s.psnr_min = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    s.eavesdrop_detected_count += m.eavesdrop_detected;
    s.psnr_min = std::min(s.psnr_min, m.psnr);
    s.ssim_mean += m.ssim;
    s.ncc_mean += m.ncc;
    s.ber_mean += m.ber;
    s.key_sensitivity_mean += m.key_sensitivity_ssim;
    s.entropy_original_mean += m.entropy_original;
    s.entropy_encrypted_mean += m.entropy_encrypted;
    s.entropy_decrypted_mean += m.entropy_decrypted;
    s.pearson_od_mean += m.pearson_od;
    s.encrypt_seconds_total += r.encrypt_seconds;
    s.decrypt_seconds_total += r.decrypt_seconds;
  }
  if (!rows.empty()) {
    const double n = static_cast<double>(rows.size());
    for (double* v : {&s.ssim_mean, &s.ncc_mean, &s.ber_mean, &s.key_sensitivity_mean,
                      &s.entropy_original_mean, &s.entropy_encrypted_mean,
                      &s.entropy_decrypted_mean, &s.pearson_od_mean}) {
      *v /= n;
    }
  }
  return s;
}

json number_or_inf(double v) { return std::isinf(v) ? json("inf") : json(v); }

std::string format_psnr(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::uint64_t derive_item_seed(std::uint64_t run_seed, std::uint64_t index) {
  // splitmix64 finaliser over the run seed offset by the item index.
  std::uint64_t z = run_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

BatchReport batch_report(const fs::path& dataset_dir, const BatchConfig& config) {
  config.params.validate();
  config.channel.validate();
  if (config.key_bits < 128) throw KeyLengthError("batch key length must be at least 128 bits");

  const DatasetScan scan = scan_dataset(dataset_dir);
  BatchReport report;
  report.warnings = scan.warnings;

  const std::size_t n = scan.records.size();
  std::vector<std::optional<BatchRow>> slots(n);
  std::vector<std::string> failures(n);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i] = process_image(scan.records[i], dataset_dir, i, config);
      } catch (const Error& e) {
        failures[i] = scan.records[i].path.generic_string() + ": " + e.what();
      }
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i]) {
      report.rows.push_back(std::move(*slots[i]));
    } else if (!failures[i].empty()) {
      report.warnings.push_back(failures[i]);
    }
  }
  if (report.rows.empty()) {
    throw DatasetError("dataset '" + dataset_dir.string() + "' contains no image that could be processed");
  }
  report.summary = summarize_rows(report.rows);
  return report;
}

std::string batch_report_to_text(const BatchReport& report, bool include_timings) {
  auto timing = [&](double v) { return include_timings ? json(v) : json(nullptr); };
  json rows = json::array();
  for (const auto& r : report.rows) {
    const auto& m = r.metrics;
    json row;
    row["path"] = r.path;
    row["width"] = r.width;
    row["height"] = r.height;
    row["psnr"] = number_or_inf(m.psnr);
    row["ssim"] = m.ssim;
    row["ncc"] = m.ncc;
    row["ber"] = m.ber;
    row["key_sensitivity"] = m.key_sensitivity_ssim;
    row["entropy_original"] = m.entropy_original;
    row["entropy_encrypted"] = m.entropy_encrypted;
    row["entropy_decrypted"] = m.entropy_decrypted;
    row["pearson_od"] = m.pearson_od;
    row["eavesdrop_detected"] = m.eavesdrop_detected;
    row["agreement"] = r.session.agreement;
    row["chsh_s"] = r.session.chsh_s;
    row["flip_index"] = r.flip_index;
    row["encrypt_seconds"] = timing(r.encrypt_seconds);
    row["decrypt_seconds"] = timing(r.decrypt_seconds);
    rows.push_back(std::move(row));
  }
  const auto& s = report.summary;
  json summary;
  summary["image_count"] = s.image_count;
  summary["eavesdrop_detected_count"] = s.eavesdrop_detected_count;
  summary["psnr_min"] = number_or_inf(s.psnr_min);
  summary["ssim_mean"] = s.ssim_mean;
  summary["ncc_mean"] = s.ncc_mean;
  summary["ber_mean"] = s.ber_mean;
  summary["key_sensitivity_mean"] = s.key_sensitivity_mean;
  summary["entropy_original_mean"] = s.entropy_original_mean;
  summary["entropy_encrypted_mean"] = s.entropy_encrypted_mean;
  summary["entropy_decrypted_mean"] = s.entropy_decrypted_mean;
  summary["pearson_od_mean"] = s.pearson_od_mean;
  summary["encrypt_seconds_total"] = timing(s.encrypt_seconds_total);
  summary["decrypt_seconds_total"] = timing(s.decrypt_seconds_total);

  json doc;
  doc["version"] = 1;
  doc["rows"] = std::move(rows);
  doc["summary"] = std::move(summary);
  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

std::string batch_report_table(const BatchReport& report) {
  std::string out;
  char line[512];
  std::snprintf(line, sizeof line, "%-32s %9s %7s %7s %7s %8s %7s %7s %7s %7s %4s %8s %8s\n", "Image",
                "PSNR", "SSIM", "NCC", "BER", "KeySens", "OE", "EE", "DE", "O&D", "ED", "Enc(s)",
                "Dec(s)");
  out += line;
  for (const auto& r : report.rows) {
    const auto& m = r.metrics;
    std::snprintf(line, sizeof line,
                  "%-32s %9s %7.4f %7.4f %7.4f %8.4f %7.4f %7.4f %7.4f %7.4f %4s %8.4f %8.4f\n",
                  r.path.c_str(), format_psnr(m.psnr).c_str(), m.ssim, m.ncc, m.ber,
                  m.key_sensitivity_ssim, m.entropy_original, m.entropy_encrypted,
                  m.entropy_decrypted, m.pearson_od, m.eavesdrop_detected ? "Yes" : "No",
                  r.encrypt_seconds, r.decrypt_seconds);
    out += line;
  }
  const auto& s = report.summary;
  std::snprintf(line, sizeof line,
                "%-32s %9s %7.4f %7.4f %7.4f %8.4f %7.4f %7.4f %7.4f %7.4f %4zu %8.4f %8.4f\n",
                ("summary (" + std::to_string(s.image_count) + " images)").c_str(),
                format_psnr(s.psnr_min).c_str(), s.ssim_mean, s.ncc_mean, s.ber_mean,
                s.key_sensitivity_mean, s.entropy_original_mean, s.entropy_encrypted_mean,
                s.entropy_decrypted_mean, s.pearson_od_mean, s.eavesdrop_detected_count,
                s.encrypt_seconds_total, s.decrypt_seconds_total);
  out += line;
  for (const auto& w : report.warnings) out += "warning: " + w + "\n";
  return out;
}

}  // namespace qkdimg
