#ifndef PHICONV_JSON_WRITER_HPP
#define PHICONV_JSON_WRITER_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "phiconv/errors.hpp"

namespace phiconv {

/// Order-preserving JSON tree with deterministic serialization: object keys
/// stay in insertion order and floats are written with 17 significant digits,
/// so identical inputs produce byte-identical output.
class JsonValue {
public:
    JsonValue() : data_(nullptr) {}

    static JsonValue object() {
        JsonValue v;
        v.data_ = ObjectData{};
        return v;
    }
    static JsonValue array() {
        JsonValue v;
        v.data_ = ArrayData{};
        return v;
    }
    static JsonValue of(double x) {
        if (!std::isfinite(x)) {
            throw PhiError(ErrorKind::InvalidArgument,
                           "non-finite numbers cannot be serialized");
        }
        JsonValue v;
        v.data_ = x;
        return v;
    }
    static JsonValue of(std::int64_t x) {
        JsonValue v;
        v.data_ = x;
        return v;
    }
    static JsonValue of(int x) { return of(static_cast<std::int64_t>(x)); }
    static JsonValue of(std::uint64_t x) {
        JsonValue v;
        v.data_ = x;
        return v;
    }
    static JsonValue of(bool b) {
        JsonValue v;
        v.data_ = b;
        return v;
    }
    static JsonValue of(std::string s) {
        JsonValue v;
        v.data_ = std::move(s);
        return v;
    }
    static JsonValue of(const char* s) { return of(std::string(s)); }

    JsonValue& set(const std::string& key, JsonValue value) {
        std::get<ObjectData>(data_).emplace_back(key, std::move(value));
        return *this;
    }
    JsonValue& push(JsonValue value) {
        std::get<ArrayData>(data_).push_back(std::move(value));
        return *this;
    }

    std::string dump() const {
        std::string out;
        write(out);
        return out;
    }

    static std::string format_double(double x) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return buf;
    }

private:
    struct ObjectData;
    struct ArrayData;
    using Data = std::variant<std::nullptr_t, bool, std::int64_t, std::uint64_t, double,
                              std::string, ObjectData, ArrayData>;
    struct ObjectData : std::vector<std::pair<std::string, JsonValue>> {};
    struct ArrayData : std::vector<JsonValue> {};

    static void write_string(const std::string& s, std::string& out) {
        out += '"';
        for (char ch : s) {
            switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
            }
        }
        out += '"';
    }

    void write(std::string& out) const {
        if (std::holds_alternative<std::nullptr_t>(data_)) {
            out += "null";
        } else if (const auto* b = std::get_if<bool>(&data_)) {
            out += *b ? "true" : "false";
        } else if (const auto* i = std::get_if<std::int64_t>(&data_)) {
            out += std::to_string(*i);
        } else if (const auto* u = std::get_if<std::uint64_t>(&data_)) {
            out += std::to_string(*u);
        } else if (const auto* d = std::get_if<double>(&data_)) {
            out += format_double(*d);
        } else if (const auto* s = std::get_if<std::string>(&data_)) {
            write_string(*s, out);
        } else if (const auto* arr = std::get_if<ArrayData>(&data_)) {
            out += '[';
            for (size_t k = 0; k < arr->size(); ++k) {
                if (k) out += ',';
                (*arr)[k].write(out);
            }
            out += ']';
        } else if (const auto* obj = std::get_if<ObjectData>(&data_)) {
            out += '{';
            for (size_t k = 0; k < obj->size(); ++k) {
                if (k) out += ',';
                write_string((*obj)[k].first, out);
                out += ':';
                (*obj)[k].second.write(out);
            }
            out += '}';
        }
    }

    Data data_;
};

} // namespace phiconv

#endif // PHICONV_JSON_WRITER_HPP
