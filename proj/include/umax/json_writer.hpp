#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace umax {

// Deterministic JSON builder for report files: keys keep insertion order and
// every float is emitted with 17 significant digits, so identical runs
// produce byte-identical files.
class JsonValue {
 public:
  enum class Type { Null, Bool, Int, Double, String, Array, Object };

  JsonValue() : type_(Type::Null) {}
  JsonValue(bool b) : type_(Type::Bool), bool_(b) {}
  JsonValue(int v) : type_(Type::Int), int_(v) {}
  JsonValue(std::int64_t v) : type_(Type::Int), int_(v) {}
  JsonValue(std::uint64_t v) : type_(Type::Int), int_(static_cast<std::int64_t>(v)) {
    uint_ = v;
    is_unsigned_ = true;
  }
  JsonValue(double v) : type_(Type::Double), double_(v) {}
  JsonValue(const char* s) : type_(Type::String), string_(s) {}
  JsonValue(std::string s) : type_(Type::String), string_(std::move(s)) {}

  static JsonValue array() {
    JsonValue v;
    v.type_ = Type::Array;
    return v;
  }
  static JsonValue object() {
    JsonValue v;
    v.type_ = Type::Object;
    return v;
  }

  JsonValue& push(JsonValue v) {
    items_.push_back(std::move(v));
    return *this;
  }

  JsonValue& set(const std::string& key, JsonValue v) {
    members_.emplace_back(key, std::move(v));
    return *this;
  }

  std::string dump(int indent = 2) const {
    std::string out;
    write(out, indent, 0);
    out.push_back('\n');
    return out;
  }

  static std::string format_double(double v) {
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

 private:
  void write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string closing_pad(static_cast<std::size_t>(indent) * depth, ' ');
    switch (type_) {
      case Type::Null:
        out += "null";
        break;
      case Type::Bool:
        out += bool_ ? "true" : "false";
        break;
      case Type::Int:
        out += is_unsigned_ ? std::to_string(uint_) : std::to_string(int_);
        break;
      case Type::Double:
        out += format_double(double_);
        break;
      case Type::String:
        out += quote(string_);
        break;
      case Type::Array:
        if (items_.empty()) {
          out += "[]";
          break;
        }
        out += "[\n";
        for (std::size_t i = 0; i < items_.size(); ++i) {
          out += pad;
          items_[i].write(out, indent, depth + 1);
          if (i + 1 < items_.size()) out += ",";
          out += "\n";
        }
        out += closing_pad + "]";
        break;
      case Type::Object:
        if (members_.empty()) {
          out += "{}";
          break;
        }
        out += "{\n";
        for (std::size_t i = 0; i < members_.size(); ++i) {
          out += pad + quote(members_[i].first) + ": ";
          members_[i].second.write(out, indent, depth + 1);
          if (i + 1 < members_.size()) out += ",";
          out += "\n";
        }
        out += closing_pad + "}";
        break;
    }
  }

  static std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
      switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (static_cast<unsigned char>(ch) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", ch);
            out += buf;
          } else {
            out.push_back(ch);
          }
      }
    }
    out.push_back('"');
    return out;
  }

  Type type_;
  bool bool_ = false;
  std::int64_t int_ = 0;
  std::uint64_t uint_ = 0;
  bool is_unsigned_ = false;
  double double_ = 0.0;
  std::string string_;
  std::vector<JsonValue> items_;
  std::vector<std::pair<std::string, JsonValue>> members_;
};

}  // namespace umax
