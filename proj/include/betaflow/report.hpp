#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace betaflow {

/// Floating-point text with 17 significant digits: lossless round trip and
/// byte-stable across runs.
inline std::string format_g17(double value) {
  std::array<char, 64> buffer{};
  const int written = std::snprintf(buffer.data(), buffer.size(), "%.17g", value);
  return std::string(buffer.data(), static_cast<std::size_t>(written));
}

inline std::string to_hex(std::uint64_t value) {
  std::array<char, 32> buffer{};
  const int written = std::snprintf(buffer.data(), buffer.size(), "%016llx",
                                    static_cast<unsigned long long>(value));
  return std::string(buffer.data(), static_cast<std::size_t>(written));
}

/// Deterministic plain-text document: insertion-ordered keys, %.17g floats,
/// no timestamps. Identical inputs produce identical bytes.
class ReportDocument {
 public:
  void section(std::string_view name) {
    if (!text_.empty()) text_ += '\n';
    text_ += '[';
    text_ += name;
    text_ += "]\n";
  }

  void kv(std::string_view key, std::string_view value) {
    text_ += key;
    text_ += " = ";
    text_ += value;
    text_ += '\n';
  }

  void kv(std::string_view key, const char* value) { kv(key, std::string_view(value)); }
  void kv(std::string_view key, const std::string& value) { kv(key, std::string_view(value)); }
  void kv(std::string_view key, double value) { kv(key, format_g17(value)); }
  void kv(std::string_view key, int value) { kv(key, std::to_string(value)); }
  void kv(std::string_view key, std::size_t value) { kv(key, std::to_string(value)); }
  void kv(std::string_view key, bool value) { kv(key, value ? "true" : "false"); }

  void line(std::string_view text) {
    text_ += text;
    text_ += '\n';
  }

  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

}  // namespace betaflow
