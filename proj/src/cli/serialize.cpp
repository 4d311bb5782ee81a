#include "qkdimg/serialize.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"
#include "qkdimg/errors.hpp"

namespace qkdimg {

namespace {

using json = nlohmann::ordered_json;

json parse_document(std::string_view text, const char* what) {
  try {
    json doc = json::parse(text.begin(), text.end());
    if (!doc.is_object()) throw FormatError(std::string(what) + " must be a JSON object", 0);
    return doc;
  } catch (const json::parse_error& e) {
    throw FormatError(std::string(what) + " is not valid JSON: " + e.what(), e.byte);
  }
}

template <typename T>
T field(const json& doc, const char* name, const char* what) {
  const auto it = doc.find(name);
  if (it == doc.end()) throw FormatError(std::string(what) + ": missing field '" + name + "'", 0);
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + ": field '" + name + "' has the wrong type", 0);
  }
}

template <typename T>
void maybe_field(const json& doc, const char* name, const char* what, T& out) {
  if (doc.contains(name)) out = field<T>(doc, name, what);
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json stats_to_json(const SessionStats& s) {
  json j;
  j["pair_count"] = s.pair_count;
  j["sifted_bits"] = s.sifted_bits;
  j["test_bits"] = s.test_bits;
  j["agreement"] = s.agreement;
  j["chsh_s"] = s.chsh_s;
  j["eavesdrop_detected"] = s.eavesdrop_detected;
  j["p_noise"] = s.p_noise;
  j["eavesdropper"] = std::string(to_string(s.eavesdropper));
  j["detection_threshold"] = s.detection_threshold;
  return j;
}

SessionStats stats_from_json(const json& j) {
  constexpr const char* what = "session_stats";
  if (!j.is_object()) throw FormatError("session_stats must be an object", 0);
  SessionStats s;
  s.pair_count = field<std::size_t>(j, "pair_count", what);
  s.sifted_bits = field<std::size_t>(j, "sifted_bits", what);
  s.test_bits = field<std::size_t>(j, "test_bits", what);
  s.agreement = field<double>(j, "agreement", what);
  s.chsh_s = field<double>(j, "chsh_s", what);
  s.eavesdrop_detected = field<bool>(j, "eavesdrop_detected", what);
  s.p_noise = field<double>(j, "p_noise", what);
  s.eavesdropper = parse_eavesdropper(field<std::string>(j, "eavesdropper", what));
  s.detection_threshold = field<double>(j, "detection_threshold", what);
  return s;
}

}  // namespace

std::string key_file_to_text(const KeyFile& file) {
  json j;
  j["version"] = kKeyFileVersion;
  j["bits_hex"] = file.key.to_hex();
  j["length"] = file.key.size();
  j["seed_policy"] = file.seed_policy;
  if (file.created_with_seed) j["created_with_seed"] = *file.created_with_seed;
  j["source"] = file.source;
  if (file.session_stats) j["session_stats"] = stats_to_json(*file.session_stats);
  return dump(j);
}

KeyFile parse_key_file(std::string_view text) {
  constexpr const char* what = "key file";
  const json j = parse_document(text, what);
  const int version = field<int>(j, "version", what);
  if (version != kKeyFileVersion) {
    throw FormatError("unsupported key file version " + std::to_string(version), 0);
  }
  KeyFile file{BitKey::from_hex(field<std::string>(j, "bits_hex", what),
                                field<std::size_t>(j, "length", what))};
  maybe_field(j, "source", what, file.source);
  maybe_field(j, "seed_policy", what, file.seed_policy);
  if (j.contains("created_with_seed")) {
    file.created_with_seed = field<std::uint64_t>(j, "created_with_seed", what);
  }
  if (j.contains("session_stats")) file.session_stats = stats_from_json(j.at("session_stats"));
  return file;
}

std::string params_to_text(const ChaosParams& p) {
  json j;
  j["logistic_r"] = p.logistic_r;
  j["henon_a"] = p.henon_a;
  j["henon_b"] = p.henon_b;
  j["tent_r"] = p.tent_r;
  j["arnold_a"] = p.arnold_a;
  j["arnold_b"] = p.arnold_b;
  j["burn_in"] = p.burn_in;
  return dump(j);
}

ChaosParams parse_params(std::string_view text) {
  constexpr const char* what = "params file";
  const json j = parse_document(text, what);
  ChaosParams p;
  maybe_field(j, "logistic_r", what, p.logistic_r);
  maybe_field(j, "henon_a", what, p.henon_a);
  maybe_field(j, "henon_b", what, p.henon_b);
  maybe_field(j, "tent_r", what, p.tent_r);
  maybe_field(j, "arnold_a", what, p.arnold_a);
  maybe_field(j, "arnold_b", what, p.arnold_b);
  maybe_field(j, "burn_in", what, p.burn_in);
  p.validate();
  return p;
}

std::string metrics_report_to_text(const MetricsReport& r) {
  json j;
  j["entropy_original"] = r.entropy_original;
  j["entropy_encrypted"] = r.entropy_encrypted;
  j["entropy_decrypted"] = r.entropy_decrypted;
  if (std::isinf(r.psnr)) {
    j["psnr"] = "inf";
  } else {
    j["psnr"] = r.psnr;
  }
  j["ssim"] = r.ssim;
  j["ncc"] = r.ncc;
  j["ber"] = r.ber;
  j["pearson_od"] = r.pearson_od;
  j["key_sensitivity_ssim"] = r.key_sensitivity_ssim;
  j["eavesdrop_detected"] = r.eavesdrop_detected;
  return dump(j);
}

MetricsReport parse_metrics_report(std::string_view text) {
  constexpr const char* what = "metrics report";
  const json j = parse_document(text, what);
  MetricsReport r;
  r.entropy_original = field<double>(j, "entropy_original", what);
  r.entropy_encrypted = field<double>(j, "entropy_encrypted", what);
  r.entropy_decrypted = field<double>(j, "entropy_decrypted", what);
  const auto psnr = j.find("psnr");
  if (psnr != j.end() && psnr->is_string()) {
    if (psnr->get<std::string>() != "inf") {
      throw FormatError("metrics report: psnr must be a number or \"inf\"", 0);
    }
    r.psnr = std::numeric_limits<double>::infinity();
  } else {
    r.psnr = field<double>(j, "psnr", what);
  }
  r.ssim = field<double>(j, "ssim", what);
  r.ncc = field<double>(j, "ncc", what);
  r.ber = field<double>(j, "ber", what);
  r.pearson_od = field<double>(j, "pearson_od", what);
  r.key_sensitivity_ssim = field<double>(j, "key_sensitivity_ssim", what);
  r.eavesdrop_detected = field<bool>(j, "eavesdrop_detected", what);
  return r;
}

std::string envelope_to_text(const EnvelopeMeta& meta) {
  json j;
  j["version"] = 1;
  j["width"] = meta.width;
  j["height"] = meta.height;
  j["params_fingerprint"] = meta.params_fingerprint;
  j["key_id"] = meta.key_id;
  json order = json::array();
  for (auto kind : meta.layer_order) order.push_back(std::string(to_string(kind)));
  j["layer_order"] = order;
  return dump(j);
}

EnvelopeMeta parse_envelope(std::string_view text) {
  constexpr const char* what = "envelope";
  const json j = parse_document(text, what);
  EnvelopeMeta meta;
  meta.width = field<std::size_t>(j, "width", what);
  meta.height = field<std::size_t>(j, "height", what);
  meta.params_fingerprint = field<std::string>(j, "params_fingerprint", what);
  meta.key_id = field<std::string>(j, "key_id", what);
  const auto order = field<std::vector<std::string>>(j, "layer_order", what);
  if (order.size() != kLayerOrder.size()) throw FormatError("envelope: layer_order must list four maps", 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] != to_string(kLayerOrder[i])) {
      throw FormatError("envelope: layer_order must be logistic, henon, tent, arnold", 0);
    }
  }
  return meta;
}

}  // namespace qkdimg
