#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "qkdimg/atomic_file.hpp"
#include "qkdimg/batch.hpp"
#include "qkdimg/cipher.hpp"
#include "qkdimg/cli.hpp"
#include "qkdimg/digest.hpp"
#include "qkdimg/errors.hpp"
#include "qkdimg/image_io.hpp"
#include "qkdimg/metrics.hpp"
#include "qkdimg/qkd.hpp"
#include "qkdimg/serialize.hpp"

namespace qkdimg::cli {

namespace {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path) {
  const auto bytes = read_file_bytes(path);
  return {bytes.begin(), bytes.end()};
}

KeyFile load_key_file(const fs::path& path) { return parse_key_file(read_text(path)); }

ChaosParams load_params(const std::optional<std::string>& path) {
  return path ? parse_params(read_text(*path)) : ChaosParams{};
}

fs::path envelope_path(const fs::path& image_path) {
  return fs::path(image_path.string() + ".envelope.json");
}

std::string fixed4(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// Bit strings for short keys, hex for long ones.
std::string render_key(const BitKey& key) {
  return key.size() <= 64 ? key.to_string() : "0x" + key.to_hex() + " (" + std::to_string(key.size()) + " bits)";
}

std::string render_bytes(const std::vector<std::uint8_t>& bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  std::string printable;
  for (auto b : bytes) {
    hex.push_back(kHex[b >> 4]);
    hex.push_back(kHex[b & 0xf]);
    printable.push_back(std::isprint(b) ? static_cast<char>(b) : '.');
  }
  return "0x" + hex + " \"" + printable + "\"";
}

struct SeedOption {
  std::optional<std::uint64_t> value;

  Rng make_rng() const { return value ? Rng(*value) : Rng::from_entropy(); }
  std::string policy() const { return value ? "fixed" : "entropy"; }
};

// ---- subcommands -----------------------------------------------------------

struct KeygenArgs {
  std::size_t bits = 256;
  SeedOption seed;
  std::optional<std::string> literal;
  std::string out;
};

int run_keygen(const KeygenArgs& a, std::ostream& out) {
  std::optional<KeyFile> file;
  if (a.literal) {
    file.emplace(KeyFile{BitKey::from_string(*a.literal), "literal", "none", std::nullopt, std::nullopt});
  } else {
    Rng rng = a.seed.make_rng();
    file.emplace(KeyFile{generate_key(a.bits, rng), "keygen", a.seed.policy(), a.seed.value, std::nullopt});
  }
  write_file_atomic(a.out, key_file_to_text(*file));
  out << "wrote " << file->key.size() << "-bit key to " << a.out << " (" << key_identifier(file->key) << ")\n";
  return kExitOk;
}

struct QkdArgs {
  std::size_t pairs = 0;
  double noise = 0.0;
  std::string eavesdrop = "none";
  double threshold = 0.80;
  double test_fraction = 0.25;
  std::size_t bits = 256;
  SeedOption seed;
  std::optional<std::string> classical;
  std::string out;
};

int run_qkd(const QkdArgs& a, std::ostream& out) {
  ChannelConfig channel;
  channel.p_noise = a.noise;
  channel.eavesdropper = parse_eavesdropper(a.eavesdrop);
  channel.detection_threshold = a.threshold;
  channel.test_fraction = a.test_fraction;

  Rng rng = a.seed.make_rng();
  const QkdSession session = run_e91_session(a.pairs, channel, rng);
  const BitKey material = key_material(session);

  std::optional<KeyFile> classical;
  if (a.classical) classical = load_key_file(*a.classical);
  const std::size_t wanted = classical ? classical->key.size() : (a.bits == 0 ? material.size() : a.bits);
  if (material.size() < wanted) {
    throw SessionError("session produced " + std::to_string(material.size()) + " key bits but " +
                       std::to_string(wanted) + " are needed; rerun with --pairs " +
                       std::to_string(pairs_for_key_bits(wanted, std::min(channel.test_fraction, 0.99))) +
                       " or more");
  }
  const BitKey quantum = material.slice(0, wanted);
  const BitKey key = classical ? combine_keys(classical->key, quantum) : quantum;

  KeyFile file{key, classical ? "qkd+classical" : "qkd", a.seed.policy(), a.seed.value,
               summarize(session, channel)};
  write_file_atomic(a.out, key_file_to_text(file));

  out << "pairs:                  " << session.pair_count << "\n"
      << "sifted bits:            " << session.sifted_length() << "\n"
      << "test bits:              " << session.test_positions.size() << "\n"
      << "agreement:              " << fixed4(session.agreement) << "\n"
      << "CHSH S:                 " << fixed4(session.chsh_s) << "\n"
      << "eavesdropping detected: " << (session.eavesdrop_detected ? "yes" : "no") << "\n"
      << "wrote " << key.size() << "-bit key to " << a.out << "\n";
  return session.eavesdrop_detected ? kExitEavesdropDetected : kExitOk;
}

struct TransformArgs {
  std::string in;
  std::string key;
  std::optional<std::string> params;
  std::string out;
  bool force = false;
};

int run_encrypt(const TransformArgs& a, std::ostream& out, std::ostream& err) {
  const KeyFile key = load_key_file(a.key);
  const ChaosParams params = load_params(a.params);
  const LoadedImage loaded = load_gray_image(a.in);
  if (loaded.source_format == SourceFormat::converted) {
    err << "warning: " << a.in << " converted to grayscale before encryption\n";
  }
  const CipherOutput result = xor_transform_checked(loaded.image, key.key, params);
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";

  const EnvelopeMeta meta{result.image.width(), result.image.height(), params_fingerprint(params),
                          key_identifier(key.key), kLayerOrder};
  write_file_atomic(a.out, write_pgm(result.image));
  write_file_atomic(envelope_path(a.out), envelope_to_text(meta));
  out << "encrypted " << result.image.width() << "x" << result.image.height() << " image to " << a.out << "\n";
  return kExitOk;
}

int run_decrypt(const TransformArgs& a, std::ostream& out, std::ostream& err) {
  const KeyFile key = load_key_file(a.key);
  const ChaosParams params = load_params(a.params);
  const GrayImage cipher = read_pgm(read_file_bytes(a.in));

  const fs::path sidecar = envelope_path(a.in);
  if (fs::exists(sidecar) && !a.force) {
    const EnvelopeMeta meta = parse_envelope(read_text(sidecar));
    if (meta.width != cipher.width() || meta.height != cipher.height()) {
      throw MismatchError("ciphertext dimensions differ from its envelope " + sidecar.string() +
                          "; use --force to decrypt anyway");
    }
    if (meta.key_id != key_identifier(key.key)) {
      throw MismatchError("key " + a.key + " is not the key this image was encrypted with (envelope has " +
                          meta.key_id + "); use --force to decrypt anyway");
    }
    if (meta.params_fingerprint != params_fingerprint(params)) {
      throw MismatchError("chaos parameters differ from those used for encryption; pass the same --params "
                          "file or use --force");
    }
  }
  const CipherOutput result = xor_transform_checked(cipher, key.key, params);
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";
  write_file_atomic(a.out, write_pgm(result.image));
  out << "decrypted " << result.image.width() << "x" << result.image.height() << " image to " << a.out << "\n";
  return kExitOk;
}

struct AnalyzeArgs {
  std::string original;
  std::string encrypted;
  std::string decrypted;
  std::string key;
  std::optional<std::string> params;
  std::optional<std::size_t> flip_index;
  std::string out;
};

int run_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const KeyFile key = load_key_file(a.key);
  const ChaosParams params = load_params(a.params);
  const GrayImage original = load_gray_image(a.original).image;
  const GrayImage encrypted = read_pgm(read_file_bytes(a.encrypted));
  const GrayImage decrypted = read_pgm(read_file_bytes(a.decrypted));

  const std::size_t flip = a.flip_index.value_or(key.key.size() / 2);
  const double sensitivity = key_sensitivity(original, key.key, params, flip);
  const bool detected = key.session_stats && key.session_stats->eavesdrop_detected;
  const MetricsReport report = build_report(original, encrypted, decrypted, detected, sensitivity);
  write_file_atomic(a.out, metrics_report_to_text(report));

  const Verdict verdict = roundtrip_verify(original, decrypted);
  out << "PSNR:                 " << fixed4(report.psnr) << "\n"
      << "SSIM:                 " << fixed4(report.ssim) << "\n"
      << "NCC:                  " << fixed4(report.ncc) << "\n"
      << "BER:                  " << fixed4(report.ber) << "\n"
      << "Key sensitivity SSIM: " << fixed4(report.key_sensitivity_ssim) << " (bit " << flip << " flipped)\n"
      << "Entropy original:     " << fixed4(report.entropy_original) << "\n"
      << "Entropy encrypted:    " << fixed4(report.entropy_encrypted) << "\n"
      << "Entropy decrypted:    " << fixed4(report.entropy_decrypted) << "\n"
      << "Correlation (O & D):  " << fixed4(report.pearson_od) << "\n"
      << "Eavesdrop detected:   " << (report.eavesdrop_detected ? "Yes" : "No") << "\n"
      << to_string(verdict) << "\n";
  return verdict == Verdict::success ? kExitOk : kExitDecryptionFailed;
}

struct BatchArgs {
  std::string dataset;
  std::string out;
  SeedOption seed;
  std::optional<std::string> params;
  double noise = 0.0;
  std::string eavesdrop = "none";
  double threshold = 0.80;
  double test_fraction = 0.25;
  std::size_t key_bits = 256;
  unsigned jobs = 1;
  bool no_timings = false;
};

int run_batch(const BatchArgs& a, std::ostream& out, std::ostream& err) {
  BatchConfig config;
  config.params = load_params(a.params);
  config.channel.p_noise = a.noise;
  config.channel.eavesdropper = parse_eavesdropper(a.eavesdrop);
  config.channel.detection_threshold = a.threshold;
  config.channel.test_fraction = a.test_fraction;
  config.key_bits = a.key_bits;
  config.jobs = a.jobs;
  if (a.seed.value) {
    config.seed = *a.seed.value;
  } else {
    config.seed = Rng::from_entropy().next_u64();
    err << "note: no --seed given, using " << config.seed << "\n";
  }
  const BatchReport report = batch_report(a.dataset, config);
  write_file_atomic(a.out, batch_report_to_text(report, !a.no_timings));
  out << batch_report_table(report);
  return kExitOk;
}

struct DemoArgs {
  std::string text;
  std::string key;
  std::optional<std::string> quantum_key;
  SeedOption seed;
};

int run_demo_message(const DemoArgs& a, std::ostream& out) {
  const BitKey classical = load_key_file(a.key).key;
  BitKey quantum = [&] {
    if (a.quantum_key) return load_key_file(*a.quantum_key).key;
    Rng rng = a.seed.make_rng();
    return generate_key(classical.size(), rng);
  }();
  const BitKey combined = combine_keys(classical, quantum);

  const std::vector<std::uint8_t> message(a.text.begin(), a.text.end());
  const auto ciphertext = encrypt_message(message, combined);
  const auto recovered = decrypt_message(ciphertext, combined);
  const Verdict verdict = roundtrip_verify(message, recovered);

  out << "Plaintext (M): \"" << a.text << "\"\n"
      << "Classical Key (K): " << render_key(classical) << "\n"
      << "Quantum Key (K1): " << render_key(quantum) << "\n"
      << "Combined Key (K'): " << render_key(combined) << "\n"
      << "Ciphertext (C): " << render_bytes(ciphertext) << "\n"
      << "Decrypted Message (M'): \"" << std::string(recovered.begin(), recovered.end()) << "\"\n"
      << (verdict == Verdict::success ? "Decryption Successful" : "Error: Decryption Failed") << "\n";
  return verdict == Verdict::success ? kExitOk : kExitDecryptionFailed;
}

void add_seed(CLI::App* cmd, SeedOption& seed) {
  cmd->add_option("--seed", seed.value, "64-bit seed; makes the run bit-reproducible");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chaotic image encryption keyed by simulated E91 quantum key distribution", "qkdimg"};
  app.require_subcommand(1);

  KeygenArgs keygen;
  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a random classical key file");
  keygen_cmd->add_option("--bits", keygen.bits, "Key length in bits")->check(CLI::PositiveNumber);
  add_seed(keygen_cmd, keygen.seed);
  keygen_cmd->add_option("--literal", keygen.literal, "Use this exact bit string, e.g. 101011");
  keygen_cmd->add_option("--out", keygen.out, "Key file to write")->required();

  QkdArgs qkd;
  auto* qkd_cmd = app.add_subcommand("qkd", "Run an E91 session and write the resulting key");
  qkd_cmd->add_option("--pairs", qkd.pairs, "Entangled pairs to simulate")->required();
  qkd_cmd->add_option("--noise", qkd.noise, "Channel bit-flip probability");
  qkd_cmd->add_option("--eavesdrop", qkd.eavesdrop, "none | intercept-resend");
  qkd_cmd->add_option("--threshold", qkd.threshold, "Agreement below this flags an eavesdropper");
  qkd_cmd->add_option("--test-fraction", qkd.test_fraction, "Share of sifted bits disclosed for testing");
  qkd_cmd->add_option("--bits", qkd.bits, "Key bits to keep (0 = all key material)");
  qkd_cmd->add_option("--classical", qkd.classical, "Classical key file to XOR with the quantum key");
  add_seed(qkd_cmd, qkd.seed);
  qkd_cmd->add_option("--out", qkd.out, "Key file to write")->required();

  TransformArgs enc;
  auto* enc_cmd = app.add_subcommand("encrypt", "Encrypt a grayscale image");
  enc_cmd->add_option("--in", enc.in, "Input PGM (or PPM, converted to gray)")->required();
  enc_cmd->add_option("--key", enc.key, "Key file")->required();
  enc_cmd->add_option("--params", enc.params, "Chaos parameter overrides (JSON)");
  enc_cmd->add_option("--out", enc.out, "Output PGM")->required();

  TransformArgs dec;
  auto* dec_cmd = app.add_subcommand("decrypt", "Decrypt a grayscale image");
  dec_cmd->add_option("--in", dec.in, "Encrypted PGM")->required();
  dec_cmd->add_option("--key", dec.key, "Key file")->required();
  dec_cmd->add_option("--params", dec.params, "Chaos parameter overrides (JSON)");
  dec_cmd->add_option("--out", dec.out, "Output PGM")->required();
  dec_cmd->add_flag("--force", dec.force, "Skip the envelope key/parameter check");

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Compute the metric report for one image");
  analyze_cmd->add_option("--original", analyze.original, "Original image")->required();
  analyze_cmd->add_option("--encrypted", analyze.encrypted, "Encrypted PGM")->required();
  analyze_cmd->add_option("--decrypted", analyze.decrypted, "Decrypted PGM")->required();
  analyze_cmd->add_option("--key", analyze.key, "Key file used for encryption")->required();
  analyze_cmd->add_option("--params", analyze.params, "Chaos parameter overrides (JSON)");
  analyze_cmd->add_option("--flip-index", analyze.flip_index, "Key bit flipped for the sensitivity test");
  analyze_cmd->add_option("--out", analyze.out, "Report file (JSON)")->required();

  BatchArgs batch;
  auto* batch_cmd = app.add_subcommand("batch", "Run the full pipeline over a directory of images");
  batch_cmd->add_option("--dataset", batch.dataset, "Directory of .pgm/.ppm images")->required();
  batch_cmd->add_option("--out", batch.out, "Report file (JSON)")->required();
  add_seed(batch_cmd, batch.seed);
  batch_cmd->add_option("--params", batch.params, "Chaos parameter overrides (JSON)");
  batch_cmd->add_option("--noise", batch.noise, "Channel bit-flip probability");
  batch_cmd->add_option("--eavesdrop", batch.eavesdrop, "none | intercept-resend");
  batch_cmd->add_option("--threshold", batch.threshold, "Eavesdropping detection threshold");
  batch_cmd->add_option("--test-fraction", batch.test_fraction, "Share of sifted bits disclosed for testing");
  batch_cmd->add_option("--key-bits", batch.key_bits, "Image key length in bits");
  batch_cmd->add_option("--jobs", batch.jobs, "Worker threads")->check(CLI::PositiveNumber);
  batch_cmd->add_flag("--no-timings", batch.no_timings, "Write null timings so the report is reproducible");

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand("demo-message", "Classical + quantum key text encryption walk-through");
  demo_cmd->add_option("--text", demo.text, "Plaintext message")->required();
  demo_cmd->add_option("--key", demo.key, "Classical key file (K)")->required();
  demo_cmd->add_option("--quantum-key", demo.quantum_key, "Quantum key file (K1); generated if omitted");
  add_seed(demo_cmd, demo.seed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << " (run with --help for usage)\n";
    return kExitUsage;
  }

  try {
    if (*keygen_cmd) return run_keygen(keygen, out);
    if (*qkd_cmd) return run_qkd(qkd, out);
    if (*enc_cmd) return run_encrypt(enc, out, err);
    if (*dec_cmd) return run_decrypt(dec, out, err);
    if (*analyze_cmd) return run_analyze(analyze, out);
    if (*batch_cmd) return run_batch(batch, out, err);
    if (*demo_cmd) return run_demo_message(demo, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.category()) << ": " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kExitFailure;
  }
  err << "error: usage: no subcommand given\n";
  return kExitUsage;
}

}  // namespace qkdimg::cli
